//! Evaluation maps from words to the coefficient ring.
//!
//! Each master `m` is sent to `m[j] -> s * M * q^(c*j)` where `s` is `+1` or
//! `-1` and `M` is a Laurent monomial. The map extends multiplicatively to
//! words (inverse letters go to inverse monomials) and linearly to [`Expr`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::freealg::{Expr, Letter, Sign, Word};
use crate::qpoly::{q_symbol, Monomial, QPoly};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("evaluation map has no image for master `{0}`")]
    UnmappedMaster(String),
    #[error("image of `{0}` is not a monomial with coefficient +1 or -1")]
    NotMonomial(String),
}

/// Image of one master: `sign * monomial * q^(q_step * j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalImage {
    pub sign: i8,
    pub monomial: Monomial,
    pub q_step: i64,
}

impl EvalImage {
    pub fn new(sign: i8, monomial: Monomial, q_step: i64) -> EvalImage {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        EvalImage { sign, monomial, q_step }
    }

    /// Builds an image from a polynomial that must be `+-` a monomial.
    pub fn from_poly(master: Symbol, p: &QPoly, q_step: i64) -> Result<EvalImage, EvalError> {
        let (sign, m) = p.as_unit_monomial().ok_or_else(|| EvalError::NotMonomial(master.to_string()))?;
        Ok(EvalImage::new(sign, m.clone(), q_step))
    }

    /// The constant part `sign * monomial` as a polynomial.
    pub fn constant_part(&self) -> QPoly {
        QPoly::term(BigInt::from(self.sign), self.monomial.clone())
    }

    fn at(&self, j: u32) -> Monomial {
        if self.q_step == 0 {
            return self.monomial.clone();
        }
        let e = i32::try_from(self.q_step * j as i64).expect("q exponent overflow");
        self.monomial.mul(&Monomial::var_pow(q_symbol(), e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvalMap {
    images: BTreeMap<Symbol, EvalImage>,
}

impl EvalMap {
    pub fn new() -> EvalMap {
        EvalMap::default()
    }

    pub fn with(mut self, master: &str, image: EvalImage) -> EvalMap {
        self.insert(Symbol::new(master), image);
        self
    }

    pub fn insert(&mut self, master: Symbol, image: EvalImage) {
        self.images.insert(master, image);
    }

    pub fn get(&self, master: Symbol) -> Option<&EvalImage> {
        self.images.get(&master)
    }

    pub fn images(&self) -> impl Iterator<Item = (&Symbol, &EvalImage)> {
        self.images.iter()
    }

    /// True when no image depends on the letter index.
    pub fn is_master_linear(&self) -> bool {
        self.images.values().all(|im| im.q_step == 0)
    }

    pub fn evaluate_letter(&self, l: Letter) -> Result<(i8, Monomial), EvalError> {
        let im = self.images.get(&l.master).ok_or_else(|| EvalError::UnmappedMaster(l.master.to_string()))?;
        let m = im.at(l.index);
        Ok(match l.sign {
            Sign::Pos => (im.sign, m),
            Sign::Inv => (im.sign, m.inverse()),
        })
    }

    pub fn evaluate_word(&self, w: &Word) -> Result<(i8, Monomial), EvalError> {
        let mut sign = 1i8;
        let mut pairs: Vec<(Symbol, i32)> = Vec::new();
        for &l in w.letters() {
            let (s, m) = self.evaluate_letter(l)?;
            sign *= s;
            pairs.extend_from_slice(m.factors());
        }
        Ok((sign, Monomial::from_pairs(pairs)))
    }

    /// `phi(a)`.
    pub fn evaluate(&self, a: &Expr) -> Result<QPoly, EvalError> {
        let mut out = QPoly::zero();
        for (w, c) in a.terms() {
            let (s, m) = self.evaluate_word(w)?;
            for (cm, cc) in c.terms() {
                let v = if s < 0 { -cc } else { cc.clone() };
                out.add_term(cm.mul(&m), v);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maj_map() -> EvalMap {
        EvalMap::new()
            .with("x", EvalImage::new(1, Monomial::var(Symbol::new("x")), 1))
            .with("y", EvalImage::new(1, Monomial::var(Symbol::new("y")), 1))
    }

    #[test]
    fn indexed_images_carry_q_powers() {
        let a: Expr = "x[1]*x[0]*y[2]^-1 + 3*y[0]".parse().unwrap();
        let v = maj_map().evaluate(&a).unwrap();
        assert_eq!(v, "q^-1*x^2*y^-1 + 3*y".parse().unwrap());
        assert!(!maj_map().is_master_linear());
    }

    #[test]
    fn signs_multiply() {
        let m = EvalMap::new().with("x", EvalImage::new(-1, Monomial::var(Symbol::new("t")), 0));
        assert!(m.is_master_linear());
        let a: Expr = "x[0]*x[5] + x[2]^-1".parse().unwrap();
        assert_eq!(m.evaluate(&a).unwrap(), "t^2 - t^-1".parse().unwrap());
    }

    #[test]
    fn unmapped_master_is_an_error() {
        let a: Expr = "z[0]".parse().unwrap();
        assert_eq!(maj_map().evaluate(&a), Err(EvalError::UnmappedMaster("z".into())));
        let p: QPoly = "1+x".parse().unwrap();
        assert!(EvalImage::from_poly(Symbol::new("x"), &p, 0).is_err());
    }
}
