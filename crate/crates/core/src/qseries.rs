//! Truncated Eulerian generating functions.
//!
//! An [`ESeries`] of order `N` stores `a_0, ..., a_N` and stands for
//! `sum_n a_n u^n / (q;q)_n`. In this basis the product is the q-binomial
//! convolution and the q-derivative `D_q` is a plain shift of coefficients.
//! Binary operations truncate to the smaller of the two orders.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::evalmap::{EvalError, EvalMap};
use crate::freealg::Expr;
use crate::grammar::Grammar;
use crate::qpoly::QPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term is not invertible (expected a monomial with coefficient +1 or -1)")]
    NotInvertible,
    #[error("series of order 0 has no q-derivative")]
    OrderTooLow,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("unknown standard series `{0}`")]
    UnknownSeries(String),
}

/// `[n choose k]_q` for all `0 <= k <= n <= max`.
pub fn qbinom_table(max: usize) -> Vec<Vec<QPoly>> {
    let mut rows: Vec<Vec<QPoly>> = vec![vec![QPoly::one()]];
    for n in 1..=max {
        let prev = &rows[n - 1];
        let mut row = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let left = if k >= 1 { prev[k - 1].clone() } else { QPoly::zero() };
            let right = if k < n { &prev[k] * &QPoly::q_pow(k as i32) } else { QPoly::zero() };
            row.push(left + right);
        }
        rows.push(row);
    }
    rows
}

/// Gaussian binomial `[n choose k]_q`; zero when `k > n`.
pub fn qbinom(n: usize, k: usize) -> QPoly {
    if k > n {
        return QPoly::zero();
    }
    qbinom_table(n).swap_remove(n).swap_remove(k)
}

/// `(a; q)_n = (1 - a)(1 - a q)...(1 - a q^(n-1))`.
pub fn qpoch(a: &QPoly, n: usize) -> QPoly {
    let mut out = QPoly::one();
    for k in 0..n {
        out = &out * &(QPoly::one() - a * &QPoly::q_pow(k as i32));
    }
    out
}

/// `n(n-1)/2`.
pub fn choose2(n: i64) -> i64 {
    n * (n - 1) / 2
}

#[derive(Clone, PartialEq, Eq)]
pub struct ESeries {
    coeffs: Vec<QPoly>,
}

impl ESeries {
    /// A series from its Eulerian coefficients; at least one is required.
    pub fn new(coeffs: Vec<QPoly>) -> ESeries {
        assert!(!coeffs.is_empty(), "series needs at least a constant term");
        ESeries { coeffs }
    }

    pub fn from_fn<F: FnMut(usize) -> QPoly>(order: usize, f: F) -> ESeries {
        ESeries::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> ESeries {
        ESeries::from_fn(order, |_| QPoly::zero())
    }

    /// The constant `c` (as a series of the given order).
    pub fn constant(c: QPoly, order: usize) -> ESeries {
        ESeries::from_fn(order, |n| if n == 0 { c.clone() } else { QPoly::zero() })
    }

    pub fn one(order: usize) -> ESeries {
        ESeries::constant(QPoly::one(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &QPoly {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> ESeries {
        ESeries::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn add(&self, other: &ESeries) -> ESeries {
        let n = self.order().min(other.order());
        ESeries::from_fn(n, |i| &self.coeffs[i] + &other.coeffs[i])
    }

    pub fn sub(&self, other: &ESeries) -> ESeries {
        let n = self.order().min(other.order());
        ESeries::from_fn(n, |i| &self.coeffs[i] - &other.coeffs[i])
    }

    pub fn neg(&self) -> ESeries {
        ESeries::from_fn(self.order(), |i| -&self.coeffs[i])
    }

    /// Multiplies every coefficient by the constant `c`.
    pub fn scale(&self, c: &QPoly) -> ESeries {
        ESeries::from_fn(self.order(), |i| &self.coeffs[i] * c)
    }

    /// Product: `c_n = sum_k [n,k]_q a_k b_(n-k)`.
    pub fn mul(&self, other: &ESeries) -> ESeries {
        let n = self.order().min(other.order());
        let table = qbinom_table(n);
        ESeries::from_fn(n, |m| {
            let mut c = QPoly::zero();
            for k in 0..=m {
                let ab = &self.coeffs[k] * &other.coeffs[m - k];
                c.add_scaled(&ab, &table[m][k]);
            }
            c
        })
    }

    /// Quotient `self / other`; `other` needs a `+-1` monomial constant term.
    pub fn div(&self, other: &ESeries) -> Result<ESeries, SeriesError> {
        let n = self.order().min(other.order());
        let inv0 = other.coeffs[0].invert_monomial().map_err(|_| SeriesError::NotInvertible)?;
        let table = qbinom_table(n);
        let mut h: Vec<QPoly> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mut r = self.coeffs[m].clone();
            for k in 1..=m {
                let gh = &other.coeffs[k] * &h[m - k];
                r -= &(&gh * &table[m][k]);
            }
            h.push(&r * &inv0);
        }
        Ok(ESeries::new(h))
    }

    /// `f(u q^m)`: coefficient `a_n` becomes `a_n q^(m n)`.
    pub fn subst_q(&self, m: i32) -> ESeries {
        ESeries::from_fn(self.order(), |n| &self.coeffs[n] * &QPoly::q_pow(m * n as i32))
    }

    /// `f(c u)` for a constant `c`: coefficient `a_n` becomes `c^n a_n`.
    pub fn subst_scale(&self, c: &QPoly) -> ESeries {
        let mut p = QPoly::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &p);
            p = &p * c;
        }
        ESeries::new(out)
    }

    /// `D_q f(u) = (f(u) - f(qu)) / ((1 - q) u)`, of order `N - 1`.
    pub fn dq(&self) -> Result<ESeries, SeriesError> {
        if self.order() == 0 {
            return Err(SeriesError::OrderTooLow);
        }
        Ok(ESeries::new(self.coeffs[1..].to_vec()))
    }
}

impl fmt::Display for ESeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, a) in self.coeffs.iter().enumerate() {
            writeln!(f, "a[{n}] = {a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ESeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "ESeries[{}]", parts.join(", "))
    }
}

/// The q-exponential and q-trigonometric functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StdSeries {
    /// `e_q(u) = sum u^n / (q;q)_n`.
    ExpSmall,
    /// `E_q(u) = sum q^C(n,2) u^n / (q;q)_n`.
    ExpBig,
    SinSmall,
    CosSmall,
    SinBig,
    CosBig,
    /// `sin_q / cos_q`.
    Tan,
    /// `1 / cos_q`.
    SecSmall,
    /// `1 / Cos_q`.
    SecBig,
}

impl StdSeries {
    pub const ALL: [StdSeries; 9] = [
        StdSeries::ExpSmall,
        StdSeries::ExpBig,
        StdSeries::SinSmall,
        StdSeries::CosSmall,
        StdSeries::SinBig,
        StdSeries::CosBig,
        StdSeries::Tan,
        StdSeries::SecSmall,
        StdSeries::SecBig,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StdSeries::ExpSmall => "e_q",
            StdSeries::ExpBig => "E_q",
            StdSeries::SinSmall => "sin_q",
            StdSeries::CosSmall => "cos_q",
            StdSeries::SinBig => "Sin_q",
            StdSeries::CosBig => "Cos_q",
            StdSeries::Tan => "tan_q",
            StdSeries::SecSmall => "sec_q",
            StdSeries::SecBig => "Sec_q",
        }
    }

    pub fn from_name(s: &str) -> Result<StdSeries, SeriesError> {
        StdSeries::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| SeriesError::UnknownSeries(s.into()))
    }
}

fn alternating(order: usize, big: bool, odd: bool) -> ESeries {
    ESeries::from_fn(order, |n| {
        if (n % 2 == 1) != odd {
            return QPoly::zero();
        }
        let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
        let c = QPoly::constant(BigInt::from(sign));
        if big {
            &c * &QPoly::q_pow(choose2(n as i64) as i32)
        } else {
            c
        }
    })
}

/// The standard series of the given order, optionally at argument `c u`.
pub fn std_series(kind: StdSeries, order: usize, scale: Option<&QPoly>) -> ESeries {
    let base = match kind {
        StdSeries::ExpSmall => ESeries::from_fn(order, |_| QPoly::one()),
        StdSeries::ExpBig => ESeries::from_fn(order, |n| QPoly::q_pow(choose2(n as i64) as i32)),
        StdSeries::SinSmall => alternating(order, false, true),
        StdSeries::CosSmall => alternating(order, false, false),
        StdSeries::SinBig => alternating(order, true, true),
        StdSeries::CosBig => alternating(order, true, false),
        StdSeries::Tan => alternating(order, false, true).div(&alternating(order, false, false)).expect("cos_q(0) = 1"),
        StdSeries::SecSmall => ESeries::one(order).div(&alternating(order, false, false)).expect("cos_q(0) = 1"),
        StdSeries::SecBig => ESeries::one(order).div(&alternating(order, true, false)).expect("Cos_q(0) = 1"),
    };
    match scale {
        Some(c) => base.subst_scale(c),
        None => base,
    }
}

/// The generating function `sum phi(D^n a) u^n / (q;q)_n` up to `order`.
pub fn gen(g: &Grammar, phi: &EvalMap, a: &Expr, order: usize) -> Result<ESeries, SeriesError> {
    let mut coeffs = Vec::with_capacity(order + 1);
    for d in g.derive_iter(a, order) {
        coeffs.push(phi.evaluate(&d)?);
    }
    Ok(ESeries::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(qbinom(4, 2), p("1 + q + 2*q^2 + q^3 + q^4"));
        assert_eq!(qbinom(5, 0), QPoly::one());
        assert_eq!(qbinom(2, 3), QPoly::zero());
        // (q;q)_n / ((q;q)_k (q;q)_(n-k)) cleared of denominators
        let q = p("q");
        for n in 0..7 {
            for k in 0..=n {
                assert_eq!(&qbinom(n, k) * &(&qpoch(&q, k) * &qpoch(&q, n - k)), qpoch(&q, n));
            }
        }
    }

    #[test]
    fn exponentials_are_inverse() {
        // e_q(u) E_q(-u) = 1
        let n = 8;
        let e = std_series(StdSeries::ExpSmall, n, None);
        let big = std_series(StdSeries::ExpBig, n, Some(&p("-1")));
        assert_eq!(e.mul(&big), ESeries::one(n));
    }

    #[test]
    fn division_inverts_multiplication() {
        let n = 6;
        let f = ESeries::from_fn(n, |k| p("1 + x").pow(k as i64).unwrap());
        let g = std_series(StdSeries::CosBig, n, Some(&p("y")));
        let h = f.div(&g).unwrap();
        assert_eq!(h.mul(&g), f);
        let bad = ESeries::from_fn(n, |_| p("2"));
        assert_eq!(f.div(&bad), Err(SeriesError::NotInvertible));
    }

    #[test]
    fn derivative_of_exponential() {
        let e = std_series(StdSeries::ExpSmall, 5, None);
        assert_eq!(e.dq().unwrap(), e.truncate(4));
        assert_eq!(ESeries::one(0).dq(), Err(SeriesError::OrderTooLow));
    }

    #[test]
    fn sine_and_cosine_start() {
        let s = std_series(StdSeries::SinSmall, 5, None);
        let c = std_series(StdSeries::CosBig, 5, None);
        let sv: Vec<String> = s.coeffs().iter().map(|a| a.to_string()).collect();
        let cv: Vec<String> = c.coeffs().iter().map(|a| a.to_string()).collect();
        assert_eq!(sv, ["0", "1", "0", "-1", "0", "1"]);
        assert_eq!(cv, ["1", "0", "-q", "0", "q^6", "0"]);
    }
}
