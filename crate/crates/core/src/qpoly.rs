//! Multivariate Laurent polynomials with arbitrary-precision integer
//! coefficients.
//!
//! Coefficient rings in this crate are all of the form `Z[q, x, y, ...]` with
//! negative exponents allowed. A [`QPoly`] is a sorted map from [`Monomial`] to
//! a nonzero [`BigInt`]; the map order is the canonical display order
//! (total degree first, then variable name, then exponent).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QPolyError {
    #[error("negative power of a polynomial that is not a single monomial")]
    NegativePowerOfNonMonomial,
    #[error("polynomial is not invertible (expected a monomial with coefficient +1 or -1)")]
    NotInvertible,
}

/// A product of variables raised to nonzero integer powers.
///
/// Factors are kept sorted by variable name with no zero exponents, so equal
/// monomials have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Symbol, i32)>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial { factors: Vec::new() }
    }

    pub fn var(s: Symbol) -> Monomial {
        Monomial::var_pow(s, 1)
    }

    pub fn var_pow(s: Symbol, e: i32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { factors: vec![(s, e)] }
        }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs, merging
    /// repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Symbol, i32)>>(pairs: I) -> Monomial {
        let mut map: BTreeMap<Symbol, i32> = BTreeMap::new();
        for (s, e) in pairs {
            *map.entry(s).or_insert(0) += e;
        }
        Monomial { factors: map.into_iter().filter(|&(_, e)| e != 0).collect() }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Symbol, i32)] {
        &self.factors
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn exponent(&self, s: Symbol) -> i32 {
        self.factors.iter().find(|f| f.0 == s).map_or(0, |f| f.1)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial { factors: self.factors.iter().map(|&(s, e)| (s, -e)).collect() }
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial { factors: self.factors.iter().map(|&(s, e)| (s, e * k)).collect() }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    /// Splits off the factor of `s`, returning its exponent and the rest.
    pub fn split_var(&self, s: Symbol) -> (i32, Monomial) {
        let e = self.exponent(s);
        let rest = Monomial { factors: self.factors.iter().copied().filter(|f| f.0 != s).collect() };
        (e, rest)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (k, &(s, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A Laurent polynomial: finite sum of integer multiples of monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly::default()
    }

    pub fn one() -> QPoly {
        QPoly::constant(1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> QPoly {
        QPoly::term(c.into(), Monomial::one())
    }

    pub fn term(c: BigInt, m: Monomial) -> QPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        QPoly { terms }
    }

    pub fn monomial(m: Monomial) -> QPoly {
        QPoly::term(BigInt::one(), m)
    }

    /// The variable `name` to the first power.
    pub fn var(name: &str) -> QPoly {
        QPoly::monomial(Monomial::var(Symbol::new(name)))
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> QPoly {
        QPoly::monomial(Monomial::var_pow(q_symbol(), e))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `factor * other` in place.
    pub fn add_scaled(&mut self, other: &QPoly, factor: &QPoly) {
        for (m1, c1) in &factor.terms {
            for (m2, c2) in &other.terms {
                self.add_term(m1.mul(m2), c1 * c2);
            }
        }
    }

    /// The single `(coefficient, monomial)` pair if there is exactly one term.
    pub fn as_single_term(&self) -> Option<(&BigInt, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    /// `Some((sign, m))` when the polynomial is `+m` or `-m`.
    pub fn as_unit_monomial(&self) -> Option<(i8, &Monomial)> {
        let (c, m) = self.as_single_term()?;
        if c.is_one() {
            Some((1, m))
        } else if (-c).is_one() {
            Some((-1, m))
        } else {
            None
        }
    }

    /// The integer value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        match self.as_single_term() {
            Some((c, m)) if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> QPoly {
        QPoly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Inverse of a `+-1` monomial.
    pub fn invert_monomial(&self) -> Result<QPoly, QPolyError> {
        let (sign, m) = self.as_unit_monomial().ok_or(QPolyError::NotInvertible)?;
        Ok(QPoly::term(BigInt::from(sign), m.inverse()))
    }

    /// Integer power. Negative exponents are only defined for `+-1` monomials.
    pub fn pow(&self, k: i64) -> Result<QPoly, QPolyError> {
        if k < 0 {
            if self.as_single_term().is_none() {
                return Err(QPolyError::NegativePowerOfNonMonomial);
            }
            return self.invert_monomial()?.pow(-k);
        }
        if let Some((c, m)) = self.as_single_term() {
            let e = i32::try_from(k).expect("exponent out of range");
            return Ok(QPoly::term(num_traits::pow(c.clone(), k as usize), m.pow(e)));
        }
        let mut result = QPoly::one();
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Substitutes `value` for the variable `s`. Negative powers of `s`
    /// require `value` to be invertible.
    pub fn substitute(&self, s: Symbol, value: &QPoly) -> Result<QPoly, QPolyError> {
        let mut out = QPoly::zero();
        let mut cache: BTreeMap<i32, QPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(s);
            if e == 0 {
                out.add_term(rest, c.clone());
                continue;
            }
            if let std::collections::btree_map::Entry::Vacant(slot) = cache.entry(e) {
                slot.insert(value.pow(e as i64)?);
            }
            let p = &cache[&e];
            for (m2, c2) in &p.terms {
                out.add_term(rest.mul(m2), c * c2);
            }
        }
        Ok(out)
    }

    /// Substitutes `1` for every variable in `vars`.
    pub fn set_to_one(&self, vars: &[Symbol]) -> QPoly {
        let mut out = QPoly::zero();
        for (m, c) in &self.terms {
            let rest = Monomial::from_pairs(m.factors().iter().copied().filter(|f| !vars.contains(&f.0)));
            out.add_term(rest, c.clone());
        }
        out
    }

    /// Sum of all coefficients (every variable set to 1).
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Variables occurring in the polynomial, in name order.
    pub fn variables(&self) -> Vec<Symbol> {
        let mut vs: Vec<Symbol> = self.terms.keys().flat_map(|m| m.factors().iter().map(|f| f.0)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// True when the text form needs parentheses to act as a factor.
    pub fn needs_parens(&self) -> bool {
        self.terms.len() > 1
    }

    /// Parses the text form, e.g. `(1+q)*x^-1*y`.
    pub fn parse(text: &str) -> Result<QPoly, crate::text::ParseError> {
        crate::text::parse_qpoly(text)
    }
}

pub(crate) fn q_symbol() -> Symbol {
    static Q: once_cell::sync::Lazy<Symbol> = once_cell::sync::Lazy::new(|| Symbol::new("q"));
    *Q
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if c.is_negative() {
                f.write_str("-")?;
            } else if k > 0 {
                f.write_str("+")?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for QPoly {
    type Err = crate::text::ParseError;
    fn from_str(s: &str) -> Result<QPoly, Self::Err> {
        QPoly::parse(s)
    }
}

impl From<i64> for QPoly {
    fn from(c: i64) -> QPoly {
        QPoly::constant(c)
    }
}

impl From<BigInt> for QPoly {
    fn from(c: BigInt) -> QPoly {
        QPoly::constant(c)
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&QPoly> for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&QPoly> for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&QPoly> for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        out.add_scaled(rhs, self);
        out
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<QPoly> for QPoly {
            type Output = QPoly;
            fn $f(self, rhs: QPoly) -> QPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&QPoly> for QPoly {
            type Output = QPoly;
            fn $f(self, rhs: &QPoly) -> QPoly {
                (&self).$f(rhs)
            }
        }
        impl $tr<QPoly> for &QPoly {
            type Output = QPoly;
            fn $f(self, rhs: QPoly) -> QPoly {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

impl std::iter::Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        let mut out = QPoly::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    #[test]
    fn zero_and_one() {
        assert!(QPoly::zero().is_zero());
        assert!(QPoly::one().is_one());
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!((QPoly::one() - QPoly::one()), QPoly::zero());
    }

    #[test]
    fn binomial_square() {
        let xy = p("x") - p("y");
        assert_eq!(xy.pow(2).unwrap(), p("x^2 - 2*x*y + y^2"));
    }

    #[test]
    fn monomial_inverse() {
        let m = p("q^2*x^-1");
        assert_eq!(m.invert_monomial().unwrap(), p("q^-2*x"));
        assert_eq!(p("-x").invert_monomial().unwrap(), p("-x^-1"));
        assert_eq!(p("2*x").invert_monomial(), Err(QPolyError::NotInvertible));
        assert_eq!(p("1+q").pow(-1), Err(QPolyError::NegativePowerOfNonMonomial));
        assert_eq!(p("x*y").pow(-2).unwrap(), p("x^-2*y^-2"));
    }

    #[test]
    fn display_order_is_graded() {
        assert_eq!(p("q^2 + 1 + q").to_string(), "1+q+q^2");
        assert_eq!(p("x^-1*y*(1+q)").to_string(), "x^-1*y+q*x^-1*y");
        assert_eq!(p("-3*q + 2").to_string(), "2-3*q");
    }

    #[test]
    fn display_round_trips() {
        for s in ["1+q+q^2", "x^-1*y+q*x^-1*y", "-q^3*x", "12345678901234567890*beta*z^-4", "0"] {
            assert_eq!(p(s).to_string(), s);
            assert_eq!(p(&p(s).to_string()), p(s));
        }
    }

    #[test]
    fn substitution() {
        let f = p("q*x^-1 + y^2");
        let q = Symbol::new("q");
        assert_eq!(f.substitute(q, &QPoly::one()).unwrap(), p("x^-1 + y^2"));
        let x = Symbol::new("x");
        assert_eq!(f.substitute(x, &p("t")).unwrap(), p("q*t^-1 + y^2"));
        assert!(f.substitute(x, &p("1+t")).is_err());
        assert_eq!(f.set_to_one(&[Symbol::new("y"), x]), p("q + 1"));
    }

    #[test]
    fn big_coefficients() {
        let two = p("2");
        let big = two.pow(100).unwrap();
        assert_eq!(big.to_string(), "1267650600228229401496703205376");
    }
}
