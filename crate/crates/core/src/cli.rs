//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::catalog;
use crate::evalmap::EvalMap;
use crate::freealg::Expr;
use crate::grammar::Grammar;
use crate::json::{to_json, Wire};
use crate::oracle::andre::{andre_perm_poly, andre_tree_poly, AndreKind};
use crate::oracle::perm::{eulerian_poly, roselle_poly, MahonianStat};
use crate::oracle::sequences::{euler, fibonacci, motzkin};
use crate::qpoly::QPoly;
use crate::qseries::{gen, std_series, ESeries, StdSeries};
use crate::text::{check_masters, parse_expr, parse_grammar, GrammarFile};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qgram", version, about = "q-grammars: derivations, evaluations, series and self-checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print D^n(seed).
    Derive {
        #[command(flatten)]
        src: Source,
        #[arg(short = 'n', long = "steps", default_value_t = 1)]
        steps: usize,
        /// Print every step D^0..D^n, one per line.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the number of terms of D^1(seed)..D^n(seed).
    Count {
        #[command(flatten)]
        src: Source,
        #[arg(short = 'n', long = "steps", default_value_t = 6)]
        steps: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the evaluation of D^n(seed).
    Eval {
        #[command(flatten)]
        src: Source,
        #[arg(short = 'n', long = "steps", default_value_t = 1)]
        steps: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the coefficients of the generating function of seed, or of a standard series.
    Series {
        #[command(flatten)]
        src: Source,
        /// Standard series such as tan_q, sec_q, e_q.
        #[arg(long, conflicts_with_all = ["catalog", "file", "seed"])]
        name: Option<String>,
        #[arg(short = 'N', long = "order", default_value_t = 8)]
        order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print an enumerative reference value.
    Oracle {
        family: Family,
        #[arg(short = 'n', long = "steps")]
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run a named self-check suite, or all of them.
    Verify {
        suite: String,
        /// Size bound; each suite clamps it to its own maximum.
        #[arg(short = 'N', long = "order", default_value_t = 6)]
        size: usize,
        #[arg(long)]
        json: bool,
    },
    /// List or show the built-in grammars.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// List ids and descriptions.
    List,
    /// Print a grammar in file form.
    Show {
        id: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Built-in grammar id, e.g. G_tan.
    #[arg(long, conflicts_with = "file")]
    catalog: Option<String>,
    /// Grammar file path.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Seed expression; overrides the grammar's own seed.
    #[arg(long)]
    seed: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    #[value(name = "eulerian-maj")]
    EulerianMaj,
    #[value(name = "eulerian-inv")]
    EulerianInv,
    Roselle,
    #[value(name = "andre-I-trees")]
    AndreITrees,
    #[value(name = "andre-II-trees")]
    AndreIITrees,
    #[value(name = "andre-I-perms")]
    AndreIPerms,
    #[value(name = "andre-II-perms")]
    AndreIIPerms,
    Euler,
    Motzkin,
    Fibonacci,
}

/// Failure carrying its exit status.
struct Fail(i32, String);

fn usage(msg: impl ToString) -> Fail {
    Fail(EXIT_USAGE, msg.to_string())
}

struct Loaded {
    grammar: Grammar,
    eval: Option<EvalMap>,
    seed: Expr,
}

fn load(src: &Source) -> Result<Loaded, Fail> {
    let file: GrammarFile = match (&src.catalog, &src.file) {
        (Some(id), _) => catalog::get(id).map_err(usage)?.file(),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            parse_grammar(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        (None, None) => return Err(usage("one of --catalog or --file is required")),
    };
    let seed = match &src.seed {
        Some(s) => parse_expr(s).map_err(|e| usage(format!("seed: {e}")))?,
        None => file.seed.ok_or_else(|| usage("the grammar has no seed; pass --seed"))?,
    };
    check_masters(&file.grammar, &seed).map_err(|e| usage(format!("seed: {e}")))?;
    Ok(Loaded { grammar: file.grammar, eval: file.eval, seed })
}

fn eval_map(l: &Loaded) -> Result<&EvalMap, Fail> {
    l.eval.as_ref().ok_or_else(|| usage("the grammar has no eval clauses"))
}

fn show<T: Wire + std::fmt::Display>(v: &T, json: bool) -> String {
    if json {
        to_json(v)
    } else {
        v.to_string()
    }
}

fn series_text(s: &ESeries, json: bool) -> String {
    if json {
        return to_json(s);
    }
    s.coeffs().iter().enumerate().map(|(n, c)| format!("{n}: {c}")).collect::<Vec<_>>().join("\n")
}

fn dispatch(cmd: Command) -> Result<(String, i32), Fail> {
    let text = match cmd {
        Command::Derive { src, steps, all, json } => {
            let l = load(&src)?;
            if all {
                let ds = l.grammar.derive_iter(&l.seed, steps);
                ds.iter().map(|d| show(d, json)).collect::<Vec<_>>().join("\n")
            } else {
                show(&l.grammar.derive_n(&l.seed, steps), json)
            }
        }
        Command::Count { src, steps, json } => {
            let l = load(&src)?;
            let counts: Vec<usize> = l.grammar.derive_iter(&l.seed, steps)[1..].iter().map(Expr::omega).collect();
            if json {
                serde_json::to_string(&counts).expect("plain integers")
            } else {
                counts.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
            }
        }
        Command::Eval { src, steps, json } => {
            let l = load(&src)?;
            let v = eval_map(&l)?.evaluate(&l.grammar.derive_n(&l.seed, steps)).map_err(usage)?;
            show(&v, json)
        }
        Command::Series { src, name, order, json } => {
            let s = match name {
                Some(name) => std_series(StdSeries::from_name(&name).map_err(usage)?, order, None),
                None => {
                    let l = load(&src)?;
                    gen(&l.grammar, eval_map(&l)?, &l.seed, order).map_err(usage)?
                }
            };
            series_text(&s, json)
        }
        Command::Oracle { family, n, json } => oracle(family, n, json)?,
        Command::Verify { suite, size, json } => {
            let checks = verify::run(&suite, size).ok_or_else(|| {
                let names: Vec<&str> = verify::SUITES.iter().map(|s| s.name).collect();
                usage(format!("unknown suite {suite:?}; expected all or one of {}", names.join(", ")))
            })?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            let status = if failed == 0 { EXIT_OK } else { EXIT_FAILED };
            let body = if json {
                let rows: Vec<_> = checks
                    .iter()
                    .map(|c| serde_json::json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                    .collect();
                serde_json::to_string(&rows).expect("plain values")
            } else {
                let mut lines: Vec<String> = checks.iter().map(|c| c.to_string()).collect();
                lines.push(format!("{} of {} checks passed", checks.len() - failed, checks.len()));
                lines.join("\n")
            };
            return Ok((body, status));
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => catalog::entries()
                .iter()
                .map(|e| format!("{:<12} {}", e.id, e.description))
                .collect::<Vec<_>>()
                .join("\n"),
            CatalogAction::Show { id, json } => {
                let ent = catalog::get(&id).map_err(usage)?;
                if json {
                    to_json(&ent.grammar)
                } else {
                    ent.file().to_string().trim_end().to_string()
                }
            }
        },
    };
    Ok((text, EXIT_OK))
}

fn oracle(family: Family, n: u32, json: bool) -> Result<String, Fail> {
    let poly = |p: QPoly| show(&p, json);
    let int = |v: BigInt| if json { format!("\"{v}\"") } else { v.to_string() };
    let need_positive = |what: &str| if n == 0 { Err(usage(format!("{what} needs n >= 1"))) } else { Ok(()) };
    Ok(match family {
        Family::EulerianMaj => {
            need_positive("eulerian-maj")?;
            poly(eulerian_poly(n, MahonianStat::Maj))
        }
        Family::EulerianInv => {
            need_positive("eulerian-inv")?;
            poly(eulerian_poly(n, MahonianStat::Inv))
        }
        Family::Roselle => {
            need_positive("roselle")?;
            poly(roselle_poly(n))
        }
        Family::AndreITrees => poly(andre_tree_poly(n, AndreKind::I)),
        Family::AndreIITrees => poly(andre_tree_poly(n, AndreKind::II)),
        Family::AndreIPerms => poly(andre_perm_poly(n, AndreKind::I)),
        Family::AndreIIPerms => poly(andre_perm_poly(n, AndreKind::II)),
        Family::Euler => int(BigInt::from(euler(n))),
        Family::Motzkin => int(BigInt::from(motzkin(u64::from(n)))),
        Family::Fibonacci => int(BigInt::from(fibonacci(u64::from(n)))),
    })
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok((text, status)) => {
            let _ = writeln!(out, "{text}");
            status
        }
        Err(Fail(status, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            status
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("qgram").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn count_andre() {
        assert_eq!(call(&["count", "--catalog", "G_AndI", "-n", "6"]), (0, "1 2 4 9 21 51\n".into(), String::new()));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["derive"]).0, EXIT_USAGE);
        assert_eq!(call(&["derive", "--catalog", "G_nope"]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "nope"]).0, EXIT_USAGE);
        assert_eq!(call(&["derive", "--catalog", "G_tan", "--seed", "x[0"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, err) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("derive") && err.is_empty());
    }
}
