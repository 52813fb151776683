use std::io::Write;
use std::process::{Command, Output};

fn qgram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgram")).args(args).output().expect("run qgram")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn derive_prints_canonical_expansion() {
    let o = qgram(&["derive", "--catalog", "G_tan", "-n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(1+q)*x[1] + x[1]^2*x[0] + q*x[2]*x[1]^2\n");
}

#[test]
fn count_matches_motzkin_prefix() {
    let o = qgram(&["count", "--catalog", "G_AndI", "-n", "6"]);
    assert_eq!(stdout(&o), "1 2 4 9 21 51\n");
}

#[test]
fn verify_q_eulerian_passes() {
    let o = qgram(&["verify", "q-eulerian", "-N", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));
}

#[test]
fn eval_matches_oracle() {
    let from_grammar = qgram(&["eval", "--catalog", "G_maj", "-n", "4"]);
    let from_oracle = qgram(&["oracle", "eulerian-maj", "-n", "4"]);
    assert_eq!(stdout(&from_grammar), stdout(&from_oracle));
}

#[test]
fn grammar_file_and_seed_flag() {
    let dir = std::env::temp_dir().join(format!("qgram-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("inv.qg");
    let shown = stdout(&qgram(&["catalog", "show", "G_inv"]));
    std::fs::File::create(&path).unwrap().write_all(shown.as_bytes()).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&qgram(&["count", "--file", p, "-n", "5"])), "1 2 4 8 16\n");
    let o = qgram(&["derive", "--file", p, "--seed", "y[0]", "-n", "1"]);
    assert_eq!(stdout(&o), "y[0]*x[1]\n");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn json_output_is_parseable() {
    let o = qgram(&["derive", "--catalog", "G_tan", "-n", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["terms"].is_array());
}

#[test]
fn exit_codes() {
    assert_eq!(qgram(&["derive", "--catalog", "G_missing"]).status.code(), Some(2));
    assert_eq!(qgram(&["count"]).status.code(), Some(2));
    assert_eq!(qgram(&["derive", "--file", "/nonexistent/g.qg"]).status.code(), Some(2));
    let help = qgram(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("verify"));
}
