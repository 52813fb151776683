//! Built-in grammars, their evaluations and seeds, and term-count data.
//!
//! Each entry is stored as grammar-file text and parsed on first use, so the
//! catalog doubles as a corpus for the DSL parser and printer.

use once_cell::sync::Lazy;
use thiserror::Error;

use crate::evalmap::EvalMap;
use crate::freealg::{Expr, Word};
use crate::grammar::Grammar;
use crate::oracle::sequences;
use crate::text::{parse_grammar, GrammarFile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("no term-count law recorded for `{id}` beyond n = {known}")]
    NoLawRecorded { id: String, known: usize },
    #[error("term counts are defined for n >= 1")]
    BadStep,
}

/// A closed form or named sequence for `Omega(D^n(seed))`.
#[derive(Clone, Copy)]
pub struct CountLaw {
    pub description: &'static str,
    pub eval: fn(u64) -> u64,
}

impl std::fmt::Debug for CountLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.description)
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub grammar: Grammar,
    pub eval: EvalMap,
    pub seed: Expr,
    /// `Omega(D^n(seed))` for `n = 1, 2, ...`.
    pub golden: Vec<u64>,
    pub law: Option<CountLaw>,
    pub source: &'static str,
}

impl CatalogEntry {
    pub fn file(&self) -> GrammarFile {
        GrammarFile { grammar: self.grammar.clone(), eval: Some(self.eval.clone()), seed: Some(self.seed.clone()) }
    }

    /// Predicted number of terms of `D^n(seed)`.
    pub fn term_count(&self, n: usize) -> Result<u64, CatalogError> {
        if n == 0 {
            return Err(CatalogError::BadStep);
        }
        if let Some(law) = self.law {
            return Ok((law.eval)(n as u64));
        }
        self.golden
            .get(n - 1)
            .copied()
            .ok_or_else(|| CatalogError::NoLawRecorded { id: self.id.into(), known: self.golden.len() })
    }
}

const TAN_RULE: &str = "rule x[j] -> q^j*(1 + x[j]*x[j+1]);";

struct RawEntry {
    id: &'static str,
    description: &'static str,
    source: String,
    golden: &'static [u64],
    law: Option<CountLaw>,
}

fn tan_law(n: u64) -> u64 {
    let k = n / 2;
    if n % 2 == 1 {
        2 * k * k * k + 5 * k * k + 2
    } else {
        (k + 2) * (2 * k * k - 2 * k + 1)
    }
}

fn sec_law(n: u64) -> u64 {
    let k = n / 2;
    match n {
        1 => 1,
        _ if n % 2 == 1 => 2 * k * k * k + 5 * k * k - k + 2,
        _ => 2 * k * k * k + 2 * k * k + 3 - 4 * k,
    }
}

fn big_sec_law(n: u64) -> u64 {
    let k = n / 2;
    match n {
        1 => 1,
        2 => 3,
        _ if n % 2 == 1 => (20 * k * k * k + 33 * k * k + k - 6) / 6,
        _ => (20 * k - 17) * (k + 1) * k / 6,
    }
}

fn cyc_law(n: u64) -> u64 {
    (0..=n.div_ceil(2)).map(|k| sequences::binomial(n + k, 3 * k)).sum()
}

fn fib_shift1(n: u64) -> u64 {
    sequences::fibonacci(n + 1)
}

fn fib_shift2(n: u64) -> u64 {
    sequences::fibonacci(n + 2)
}

fn pow2(n: u64) -> u64 {
    1 << (n - 1)
}

fn motzkin(n: u64) -> u64 {
    sequences::motzkin(n)
}

fn one(_: u64) -> u64 {
    1
}

fn tan_family(id: &str, order: &str, y_rule: Option<&str>, seed: &str) -> String {
    let mut s = format!("grammar \"{id}\";\n");
    s.push_str(if y_rule.is_some() { "masters x, y;\n" } else { "masters x;\n" });
    s.push_str(&format!("order {order};\n{TAN_RULE}\n"));
    if let Some(r) = y_rule {
        s.push_str(&format!("rule y[j] -> {r};\n"));
    }
    s.push_str("eval x[j] -> x;\n");
    if y_rule.is_some() {
        s.push_str("eval y[j] -> y;\n");
    }
    s.push_str(&format!("seed {seed};\n"));
    s
}

const TAN_GOLDEN: &[u64] = &[2, 3, 9, 20, 38, 65, 101, 150, 210, 287, 377];

fn raw_entries() -> Vec<RawEntry> {
    let law = |description, eval| Some(CountLaw { description, eval });
    vec![
        RawEntry {
            id: "G_tan",
            description: "q-tangent grammar, descending index order",
            source: tan_family("G_tan", "DIO", None, "x[0]"),
            golden: TAN_GOLDEN,
            law: law("2k^3+5k^2+2 for n=2k+1; (k+2)(2k^2-2k+1) for n=2k", tan_law),
        },
        RawEntry {
            id: "G_tan'",
            description: "q-tangent grammar, leading priority order",
            source: tan_family("G_tan'", "LPO", None, "x[0]"),
            golden: &[2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233],
            law: law("Fibonacci F(n+2)", fib_shift2),
        },
        RawEntry {
            id: "G_sec",
            description: "q-secant grammar (sec_q), descending index order",
            source: tan_family("G_sec", "DIO", Some("q^j*x[j]*y[j+1]"), "y[0]"),
            golden: &[1, 3, 8, 19, 36, 63, 98, 147, 206, 283, 372],
            law: law("1 for n=1; 2k^3+5k^2-k+2 for n=2k+1; 2k^3+2k^2-4k+3 for n=2k", sec_law),
        },
        RawEntry {
            id: "G_sec'",
            description: "q-secant grammar (sec_q), leading priority order",
            source: tan_family("G_sec'", "LPO", Some("q^j*x[j]*y[j+1]"), "y[0]"),
            golden: &[1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144],
            law: law("Fibonacci F(n+1)", fib_shift1),
        },
        RawEntry {
            id: "G_Sec",
            description: "q-secant grammar (Sec_q), descending index order",
            source: tan_family("G_Sec", "DIO", Some("q^j*y[j]*x[j+1]"), "y[0]"),
            golden: &[1, 3, 8, 23, 48, 86, 139, 210, 301, 415, 554],
            law: law(
                "1, 3 for n=1,2; (20k^3+33k^2+k-6)/6 for n=2k+1; (20k-17)(k+1)k/6 for n=2k",
                big_sec_law,
            ),
        },
        RawEntry {
            id: "G_Sec'",
            description: "q-secant grammar (Sec_q), leading priority order",
            source: tan_family("G_Sec'", "LPO", Some("q^j*y[j]*x[j+1]"), "y[0]"),
            golden: &[1, 3, 8, 21, 53, 132, 325, 795, 1936, 4701, 11393],
            law: None,
        },
        RawEntry {
            id: "G_tan∪sec",
            description: "joint tangent and secant grammar",
            source: tan_family("G_tan∪sec", "DIO", Some("q^j*x[j]*y[j+1]"), "x[0]"),
            golden: TAN_GOLDEN,
            law: law("same as G_tan", tan_law),
        },
        RawEntry {
            id: "G_maj",
            description: "(des, maj) Eulerian polynomials",
            source: "grammar G_maj;\nmasters x, y;\norder LPO;\n\
                     rule x[j] -> q^j*x[0]*y[0];\nrule y[j] -> q^j*x[0]*y[0];\n\
                     eval x[j] -> x*q^j;\neval y[j] -> y*q^j;\nseed x[0];\n"
                .into(),
            golden: &[1, 2, 6, 20, 73, 283, 1147, 4814, 20774],
            law: None,
        },
        RawEntry {
            id: "G_inv",
            description: "(des, inv) Eulerian polynomials",
            source: "grammar G_inv;\nmasters x, y;\norder AIO;\n\
                     rule x[j] -> q^j*y[j]*x[j+1];\nrule y[j] -> q^j*y[j]*x[j+1];\n\
                     eval x[j] -> x;\neval y[j] -> y;\nseed x[0];\n"
                .into(),
            golden: &[1, 2, 4, 8, 16, 32, 64, 128, 256, 512],
            law: law("2^(n-1)", pow2),
        },
        RawEntry {
            id: "G_cyc",
            description: "cycle q-Roselle polynomials",
            source: "grammar G_cyc;\nmasters x, y, z, e;\norder KSO;\n\
                     rule x[j] -> q^j*y[j]*x[j+1];\nrule y[j] -> q^j*y[j]*x[j+1];\n\
                     rule z[j] -> q^j*y[j]*x[j+1];\nrule e[j] -> beta*q^j*e[j]*z[j+1];\n\
                     eval x[j] -> x;\neval y[j] -> y;\neval z[j] -> z;\neval e[j] -> e;\nseed e[0];\n"
                .into(),
            golden: &[1, 2, 5, 12, 28, 65, 151, 351, 816, 1897],
            law: law("sum over k of C(n+k, 3k)", cyc_law),
        },
        RawEntry {
            id: "G_binv",
            description: "q-binomial inversion",
            source: "grammar G_binv;\nmasters x, y;\norder KSO;\n\
                     rule x[j] -> q^j*x[j+1];\nrule y[j] -> q^j*y[j];\n\
                     eval x[j] -> x;\neval y[j] -> y;\nseed x[0];\n"
                .into(),
            golden: &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
            law: law("1", one),
        },
        RawEntry {
            id: "G_AndI",
            description: "(des, inv) on Andre I permutations",
            source: "grammar G_AndI;\nmasters x, y;\norder AIO;\n\
                     rule x[j] -> q^j*x[j]*y[j+1];\nrule y[j] -> q^j*x[j];\n\
                     eval x[j] -> x;\neval y[j] -> y;\nseed x[0];\n"
                .into(),
            golden: &[1, 2, 4, 9, 21, 51, 127, 323, 835, 2188, 5798],
            law: law("Motzkin M(n)", motzkin),
        },
        RawEntry {
            id: "G_AndII",
            description: "(des, inv) on Andre II permutations",
            source: "grammar G_AndII;\nmasters x, y;\norder AIO;\n\
                     rule x[j] -> q^j*x[j]*y[j+1];\nrule y[j] -> q^(j+1)*x[j+1];\n\
                     eval x[j] -> x;\neval y[j] -> y;\nseed x[0];\n"
                .into(),
            golden: &[1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144],
            law: law("Fibonacci F(n+1)", fib_shift1),
        },
    ]
}

static CATALOG: Lazy<Vec<CatalogEntry>> = Lazy::new(|| {
    raw_entries()
        .into_iter()
        .map(|r| {
            let file = parse_grammar(&r.source).unwrap_or_else(|e| panic!("catalog entry {}: {e}", r.id));
            CatalogEntry {
                id: r.id,
                description: r.description,
                grammar: file.grammar,
                eval: file.eval.expect("catalog entries define an evaluation"),
                seed: file.seed.expect("catalog entries define a seed"),
                golden: r.golden.to_vec(),
                law: r.law,
                source: Box::leak(r.source.into_boxed_str()),
            }
        })
        .collect()
});

/// All entries in catalog order.
pub fn entries() -> &'static [CatalogEntry] {
    &CATALOG
}

pub fn ids() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.id).collect()
}

/// Maps ASCII spellings (`G_tan_prime`, `G_tan_sec`, `tan`) to catalog ids.
pub fn resolve_id(s: &str) -> Option<&'static str> {
    let mut key = s.trim().to_string();
    if !key.starts_with("G_") {
        key = format!("G_{key}");
    }
    if let Some(stem) = key.strip_suffix("_prime") {
        key = format!("{stem}'");
    }
    for alias in ["G_tan_sec", "G_tanUsec", "G_tanusec", "G_tan_cup_sec"] {
        if key == alias {
            key = "G_tan∪sec".into();
        }
    }
    CATALOG.iter().find(|e| e.id == key).map(|e| e.id)
}

pub fn get(id: &str) -> Result<&'static CatalogEntry, CatalogError> {
    let id = resolve_id(id).ok_or_else(|| CatalogError::UnknownId(id.into()))?;
    Ok(CATALOG.iter().find(|e| e.id == id).unwrap())
}

/// Predicted `Omega(D^n(seed))` for entry `id`.
pub fn term_count(id: &str, n: usize) -> Result<u64, CatalogError> {
    get(id)?.term_count(n)
}

/// Shape classes of the words of `D^n(x[0])` under the tangent grammar.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TanShape {
    /// `x[n] x[n-1]^n`.
    pub top: bool,
    /// `x[1]^n x[0]`.
    pub bottom: bool,
    /// Each `j` with the word equal to `x[j+1]^a x[j]^b`, `1 <= j <= n-2`,
    /// `a, b <= n`, `a + b <= n + 1`, `a + b + n + 1` even.
    pub middle: Vec<u32>,
}

impl TanShape {
    /// Number of the three shape classes that match.
    pub fn classes(&self) -> usize {
        self.top as usize + self.bottom as usize + (!self.middle.is_empty()) as usize
    }
}

/// Classifies `w` against the three term shapes of `D^n(x[0])`.
pub fn tan_term_shape(w: &Word, n: u32) -> TanShape {
    let letters = w.letters();
    let positive = letters.iter().all(|l| l.sign == crate::freealg::Sign::Pos);
    let mut shape = TanShape::default();
    if !positive {
        return shape;
    }
    let idx: Vec<u32> = letters.iter().map(|l| l.index).collect();
    let run = |k: u32, from: usize, len: usize| idx[from..from + len].iter().all(|&i| i == k);
    let len = idx.len();
    // x[n] x[n-1]^n
    if n >= 1 && len == n as usize + 1 && idx[0] == n && run(n - 1, 1, n as usize) {
        shape.top = true;
    }
    // x[1]^n x[0]
    if len == n as usize + 1 && run(1, 0, n as usize) && idx[len - 1] == 0 {
        shape.bottom = true;
    }
    for j in 1..=n.saturating_sub(2) {
        let a = idx.iter().take_while(|&&i| i == j + 1).count();
        let b = idx[a..].iter().take_while(|&&i| i == j).count();
        if a + b != len {
            continue;
        }
        let (a, b) = (a as u32, b as u32);
        if a <= n && b <= n && a + b <= n + 1 && (a + b + n + 1).is_multiple_of(2) {
            shape.middle.push(j);
        }
    }
    shape
}
