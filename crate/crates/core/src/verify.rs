//! Named self-check suites, each comparing grammar computations with an
//! independent route to the same numbers.

use std::fmt;

use crate::catalog;
use crate::freealg::Expr;
use crate::grammar::Order;
use crate::oracle::andre::{andre_perm_poly, andre_perms, andre_tree_poly, perm_to_tree, tree_inv, AndreKind};
use crate::oracle::perm::{cycle_count, eulerian_poly, perm_stats, permutations, psi, roselle_poly, MahonianStat};
use crate::oracle::sequences::euler;
use crate::qpoly::QPoly;
use crate::qseries::{choose2, gen, qbinom, std_series, ESeries, StdSeries};
use crate::symbol::Symbol;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    fn eq<T: PartialEq + fmt::Display>(name: impl Into<String>, got: &T, want: &T) -> Check {
        if got == want {
            Check::new(name, true, "")
        } else {
            Check::new(name, false, format!("got {got}, want {want}"))
        }
    }

    fn series(name: impl Into<String>, got: &ESeries, want: &ESeries) -> Check {
        let n = got.order().min(want.order());
        let (g, w) = (got.truncate(n), want.truncate(n));
        if g == w {
            Check::new(name, true, format!("through order {n}"))
        } else {
            Check::new(name, false, format!("got {g:?}, want {w:?}"))
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{tag} {}", self.name)
        } else {
            write!(f, "{tag} {}: {}", self.name, self.detail)
        }
    }
}

/// A named group of checks, parametrized by a size bound.
pub struct Suite {
    pub name: &'static str,
    pub description: &'static str,
    /// Largest size the suite accepts; larger requests are clamped.
    pub max_size: usize,
    run: fn(usize) -> Vec<Check>,
}

impl Suite {
    pub fn run(&self, size: usize) -> Vec<Check> {
        (self.run)(size.min(self.max_size))
    }
}

pub static SUITES: &[Suite] = &[
    Suite { name: "golden", description: "printed expansions and the order example", max_size: 3, run: golden },
    Suite { name: "counts", description: "term counts against recorded values", max_size: 12, run: counts },
    Suite { name: "shapes", description: "tangent term shapes", max_size: 12, run: shapes },
    Suite { name: "eulerian", description: "G_maj and G_inv against S_n", max_size: 8, run: eulerian },
    Suite { name: "q-eulerian", description: "q-Eulerian generating function", max_size: 12, run: q_eulerian },
    Suite { name: "roselle", description: "G_cyc against S_n and its functional equation", max_size: 8, run: roselle },
    Suite { name: "andre", description: "André grammars against trees and recurrences", max_size: 8, run: andre },
    Suite { name: "q-hoffman", description: "tangent and secant generating functions", max_size: 12, run: q_hoffman },
    Suite { name: "binomial-inversion", description: "q-binomial inversion pair", max_size: 12, run: inversion },
    Suite { name: "q-trig", description: "q-derivatives of tan, sec and Sec", max_size: 12, run: q_trig },
    Suite { name: "product", description: "product theorem on sample expressions", max_size: 6, run: product },
    Suite { name: "bijections", description: "cycle and tree bijections", max_size: 8, run: bijections },
];

pub fn suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

/// Runs one suite, or every suite for `"all"`.
pub fn run(name: &str, size: usize) -> Option<Vec<Check>> {
    if name == "all" {
        return Some(SUITES.iter().flat_map(|s| prefixed(s, size)).collect());
    }
    suite(name).map(|s| s.run(size))
}

fn prefixed(s: &Suite, size: usize) -> Vec<Check> {
    s.run(size).into_iter().map(|c| Check { name: format!("{}/{}", s.name, c.name), ..c }).collect()
}

fn e(s: &str) -> Expr {
    s.parse().expect("built-in expression")
}

fn p(s: &str) -> QPoly {
    s.parse().expect("built-in polynomial")
}

fn entry(id: &str) -> &'static catalog::CatalogEntry {
    catalog::get(id).expect("built-in catalog id")
}

fn golden(_: usize) -> Vec<Check> {
    let tan = entry("G_tan");
    let tan2 = entry("G_tan'");
    let ts = entry("G_tan∪sec");
    let mut out = vec![
        Check::eq("G_tan D^2", &tan.grammar.derive_n(&tan.seed, 2), &e("(1+q)*x[1] + x[1]^2*x[0] + q*x[2]*x[1]^2")),
        Check::eq("G_tan' D^2", &tan2.grammar.derive_n(&tan2.seed, 2), &e("q*x[0] + x[2] + (1+q)*x[0]*x[1]*x[2]")),
        Check::eq(
            "G_tan∪sec D^3(y0)",
            &ts.grammar.derive_n(&e("y[0]"), 3),
            &e("q^3*y[3]*x[2]^3 + q^2*x[2]*y[2] + q^2*x[2]^2*y[2]*x[1] + (q^2+2*q)*y[2]*x[1] \
                + (q^2+q)*x[2]*y[2]*x[1]^2 + q*y[2]*x[1]^3 + x[1]*y[1] + x[1]^2*y[1]*x[0]"),
        ),
    ];
    let pr = crate::grammar::Priority::new(&[Symbol::new("x"), Symbol::new("y")]);
    let big = e("x[2]*y[2]^-1*x[1]*x[3]^2*y[3] + (1+q)*y[1]^2*x[1]^-1*x[2]");
    out.push(Check::eq(
        "DIO example",
        &Order::Dio.apply(&pr, &big),
        &e("x[3]^2*y[3]*x[2]*y[2]^-1*x[1] + (1+q)*x[2]*x[1]^-1*y[1]^2"),
    ));
    out
}

fn counts(size: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for ent in catalog::entries() {
        let reach = size.min(ent.golden.len().max(if ent.law.is_some() { size } else { 0 }));
        let ds = ent.grammar.derive_iter(&ent.seed, reach);
        let got: Vec<u64> = ds[1..].iter().map(|d| d.omega() as u64).collect();
        let want: Result<Vec<u64>, _> = (1..=reach).map(|n| ent.term_count(n)).collect();
        let c = match want {
            Ok(w) if w == got => Check::new(ent.id, true, format!("n <= {reach}")),
            Ok(w) => Check::new(ent.id, false, format!("got {got:?}, want {w:?}")),
            Err(err) => Check::new(ent.id, false, err.to_string()),
        };
        out.push(c);
    }
    out
}

fn shapes(size: usize) -> Vec<Check> {
    let g = &entry("G_tan").grammar;
    let ds = g.derive_iter(&e("x[0]"), size);
    (3..=size as u32)
        .map(|n| {
            let bad: Vec<String> = ds[n as usize]
                .words()
                .filter(|w| catalog::tan_term_shape(w, n).classes() != 1)
                .map(|w| w.to_string())
                .collect();
            Check::new(format!("n={n}"), bad.is_empty(), bad.join(", "))
        })
        .collect()
}

fn eulerian(size: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for (id, stat) in [("G_maj", MahonianStat::Maj), ("G_inv", MahonianStat::Inv)] {
        let ent = entry(id);
        let ds = ent.grammar.derive_iter(&ent.seed, size);
        for n in 1..=size {
            out.push(match ent.eval.evaluate(&ds[n]) {
                Ok(got) => Check::eq(format!("{id} n={n}"), &got, &eulerian_poly(n as u32, stat)),
                Err(err) => Check::new(format!("{id} n={n}"), false, err.to_string()),
            });
        }
    }
    out
}

fn q_eulerian(size: usize) -> Vec<Check> {
    let inv = entry("G_inv");
    let (xmy, xm1y) = (p("x - y"), p("x^-1*y"));
    let b = ESeries::from_fn(size, |n| {
        let t = -&(&xm1y * &xmy.pow(n as i64).expect("nonnegative power"));
        if n == 0 {
            &QPoly::one() + &t
        } else {
            t
        }
    });
    match gen(&inv.grammar, &inv.eval, &inv.seed, size) {
        Ok(a) => vec![Check::series("cleared denominator", &a.mul(&b), &ESeries::constant(xmy, size))],
        Err(err) => vec![Check::new("cleared denominator", false, err.to_string())],
    }
}

fn roselle(size: usize) -> Vec<Check> {
    let ent = entry("G_cyc");
    let ds = ent.grammar.derive_iter(&ent.seed, size);
    let mut out = Vec::new();
    for n in 1..=size {
        out.push(match ent.eval.evaluate(&ds[n]) {
            Ok(got) => Check::eq(format!("n={n}"), &got, &(&p("e") * &roselle_poly(n as u32))),
            Err(err) => Check::new(format!("n={n}"), false, err.to_string()),
        });
    }
    let series = gen(&ent.grammar, &ent.eval, &e("e[0]"), size)
        .and_then(|ge| Ok((ge.clone(), gen(&ent.grammar, &ent.eval, &e("z[1]"), size)?)));
    out.push(match series {
        Ok((ge, gz)) if size >= 1 => {
            Check::series("functional equation", &ge.dq().expect("order >= 1"), &ge.mul(&gz).scale(&p("beta")))
        }
        Ok(_) => Check::new("functional equation", true, "nothing to compare at order 0"),
        Err(err) => Check::new("functional equation", false, err.to_string()),
    });
    out
}

fn andre(size: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let all_one = [Symbol::new("q"), Symbol::new("x"), Symbol::new("y")];
    for (id, kind, step) in [("G_AndI", AndreKind::I, 1), ("G_AndII", AndreKind::II, 2)] {
        let ent = entry(id);
        let ds = ent.grammar.derive_iter(&ent.seed, size);
        let mut big_e = vec![p("x")];
        for (n, d) in ds.iter().enumerate() {
            let m = n as u32 + 1;
            let got = match ent.eval.evaluate(d) {
                Ok(v) => v,
                Err(err) => {
                    out.push(Check::new(format!("{id} n={n}"), false, err.to_string()));
                    return out;
                }
            };
            out.push(Check::eq(format!("{id} trees n={n}"), &got, &andre_tree_poly(m, kind)));
            let f = got.set_to_one(&[Symbol::new("y")]).substitute(Symbol::new("x"), &p("t")).expect("polynomial");
            out.push(Check::eq(format!("{id} permutations n={n}"), &f, &andre_perm_poly(m, kind)));
            let count = got.set_to_one(&all_one);
            out.push(Check::eq(format!("{id} Euler n={n}"), &count, &QPoly::from(num_bigint::BigInt::from(euler(m)))));
            big_e.push(got);
        }
        for n in 1..size {
            let mut rhs = &p("y") * &big_e[n];
            for k in 0..n - 1 {
                let c = &QPoly::q_pow(step * (n - k - 1) as i32) * &qbinom(n - 1, k);
                rhs += &(&c * &(&big_e[k + 1] * &big_e[n - k - 1]));
            }
            out.push(Check::eq(format!("{id} recurrence n={n}"), &big_e[n + 1], &rhs));
        }
    }
    out
}

fn q_hoffman(size: usize) -> Vec<Check> {
    let ts = entry("G_tan∪sec");
    let cos = std_series(StdSeries::CosSmall, size, None);
    let sin = std_series(StdSeries::SinSmall, size, None);
    let denom = cos.sub(&sin.scale(&p("x")));
    let g = |a: &str| gen(&ts.grammar, &ts.eval, &e(a), size);
    match (g("y[0]"), g("x[0]")) {
        (Ok(gy), Ok(gx)) => vec![
            Check::series("secant side", &gy.mul(&denom), &ESeries::constant(p("y"), size)),
            Check::series("tangent side", &gx.mul(&denom), &cos.scale(&p("x")).add(&sin)),
        ],
        (Err(err), _) | (_, Err(err)) => vec![Check::new("series", false, err.to_string())],
    }
}

fn inversion(size: usize) -> Vec<Check> {
    let g = &entry("G_binv").grammar;
    let dxy = g.derive_iter(&e("x[0]*y[0]"), size);
    let xy = |k: usize| e(&format!("x[{k}]*y[{k}]"));
    let mut out = Vec::new();
    for n in 0..=size {
        let mut a_n = Expr::zero();
        let mut b_n = Expr::zero();
        for k in 0..=n {
            a_n += &xy(k).scale(&(&qbinom(n, k) * &QPoly::q_pow(choose2(k as i64) as i32)));
            let s = QPoly::constant(if (n - k) % 2 == 0 { 1 } else { -1 });
            b_n += &dxy[k].scale(&(&(&s * &qbinom(n, k)) * &QPoly::q_pow(choose2((n - k) as i64) as i32)));
        }
        out.push(Check::eq(format!("forward n={n}"), &dxy[n], &a_n));
        out.push(Check::eq(format!("backward n={n}"), &b_n, &xy(n).scale(&QPoly::q_pow(choose2(n as i64) as i32))));
    }
    out
}

fn q_trig(size: usize) -> Vec<Check> {
    if size == 0 {
        return vec![Check::new("q-derivatives", true, "nothing to compare at order 0")];
    }
    let tan = std_series(StdSeries::Tan, size, None);
    let sec = std_series(StdSeries::SecSmall, size, None);
    let big = std_series(StdSeries::SecBig, size, None);
    let d = |s: &ESeries| s.dq().expect("order >= 1");
    vec![
        Check::series("tan", &d(&tan), &ESeries::one(size).add(&tan.mul(&tan.subst_q(1)))),
        Check::series("sec", &d(&sec), &sec.subst_q(1).mul(&tan)),
        Check::series("Sec", &d(&big), &big.mul(&tan.subst_q(1))),
    ]
}

fn product(size: usize) -> Vec<Check> {
    let samples = [("x[0]", "y[1]"), ("x[1]^-1", "x[0]*y[0]"), ("y[0]*x[2]^-1", "x[1] - y[0]")];
    let mut out = Vec::new();
    for ent in catalog::entries().iter().filter(|e| e.grammar.satisfies_shift_condition() && e.eval.is_master_linear()) {
        let masters: Vec<&str> = ent.grammar.masters().iter().map(|m| m.as_str()).collect();
        if !masters.contains(&"x") || !masters.contains(&"y") {
            continue;
        }
        let mut ok = true;
        let mut detail = String::new();
        for (f, h) in samples {
            let (f, h) = (e(f), e(h));
            let lhs = gen(&ent.grammar, &ent.eval, &(&f * &h), size);
            let rhs = gen(&ent.grammar, &ent.eval, &f, size).and_then(|a| Ok(a.mul(&gen(&ent.grammar, &ent.eval, &h, size)?)));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => {}
                (Ok(_), Ok(_)) => {
                    ok = false;
                    detail = format!("fails for {f} times {h}");
                }
                (Err(err), _) | (_, Err(err)) => {
                    ok = false;
                    detail = err.to_string();
                }
            }
        }
        out.push(Check::new(ent.id, ok, detail));
    }
    out
}

fn bijections(size: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=size.min(7) as u32 {
        let bad = permutations(n).find(|s| {
            let (a, b) = (perm_stats(s), perm_stats(&psi(s)));
            a.drop + 1 != b.des || a.exc != b.iasc || a.fix != b.isol || cycle_count(s) != b.rlmin
        });
        out.push(Check::new(format!("cycle map n={n}"), bad.is_none(), bad.map(|s| format!("{s:?}")).unwrap_or_default()));
    }
    for kind in [AndreKind::I, AndreKind::II] {
        for n in 1..=size as u32 {
            let bad = andre_perms(n, kind).into_iter().find(|w| {
                let t = perm_to_tree(w);
                let st = perm_stats(w);
                t.leaves() != st.des || tree_inv(&t) != st.inv
            });
            out.push(Check::new(
                format!("tree map {kind:?} n={n}"),
                bad.is_none(),
                bad.map(|s| format!("{s:?}")).unwrap_or_default(),
            ));
        }
    }
    out
}
