//! The group algebra of the free group on indexed letters.
//!
//! Generators are letters `m[i]` for a master symbol `m` and an index `i >= 0`.
//! A [`Word`] is a reduced product of letters and their inverses; an [`Expr`]
//! is a finite sum of words with [`QPoly`] coefficients. Words are kept
//! reduced at all times, so structural equality is equality in the group.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed};

use crate::qpoly::QPoly;
use crate::symbol::Symbol;

/// Exponent sign of a letter. `Inv` sorts before `Pos`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Inv,
    Pos,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Inv => Sign::Pos,
            Sign::Pos => Sign::Inv,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Inv => -1,
            Sign::Pos => 1,
        }
    }

    pub fn from_i64(s: i64) -> Option<Sign> {
        match s {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Inv),
            _ => None,
        }
    }
}

/// A generator `m[i]` or its inverse. Ordered by (master, index, sign).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub master: Symbol,
    pub index: u32,
    pub sign: Sign,
}

impl Letter {
    pub fn new(master: Symbol, index: u32, sign: Sign) -> Letter {
        Letter { master, index, sign }
    }

    pub fn pos(master: &str, index: u32) -> Letter {
        Letter::new(Symbol::new(master), index, Sign::Pos)
    }

    pub fn inv(master: &str, index: u32) -> Letter {
        Letter::new(Symbol::new(master), index, Sign::Inv)
    }

    pub fn inverse(self) -> Letter {
        Letter { sign: self.sign.flip(), ..self }
    }

    pub fn shifted(self, k: u32) -> Letter {
        Letter { index: self.index + k, ..self }
    }

    pub fn is_inverse_of(&self, other: &Letter) -> bool {
        self.master == other.master && self.index == other.index && self.sign != other.sign
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.master, self.index)?;
        if self.sign == Sign::Inv {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A reduced word. Ordered by length, then lexicographically by letter.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Free reduction: cancels every adjacent `a a^-1` or `a^-1 a` pair.
pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut stack: Vec<Letter> = Vec::new();
    for l in letters {
        push_reduced(&mut stack, l);
    }
    Word { letters: stack }
}

fn push_reduced(stack: &mut Vec<Letter>, l: Letter) {
    if stack.last().is_some_and(|top| top.is_inverse_of(&l)) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

impl Word {
    /// The empty word.
    pub fn empty() -> Word {
        Word::default()
    }

    pub fn letter(l: Letter) -> Word {
        Word { letters: vec![l] }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        reduce(letters)
    }

    /// True if no adjacent pair cancels.
    pub fn is_reduced_sequence(letters: &[Letter]) -> bool {
        letters.windows(2).all(|w| !w[0].is_inverse_of(&w[1]))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Group inverse: reversed letters with flipped signs.
    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Adds `k` to every index.
    pub fn up(&self, k: u32) -> Word {
        Word { letters: self.letters.iter().map(|l| l.shifted(k)).collect() }
    }

    /// Group product, reducing across the seam.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word { letters }
    }

    /// Reduced product of the three pieces `a b c`.
    pub fn concat3(a: &[Letter], b: &[Letter], c: &[Letter]) -> Word {
        let mut letters = Vec::with_capacity(a.len() + b.len() + c.len());
        letters.extend_from_slice(a);
        for &l in b.iter().chain(c) {
            push_reduced(&mut letters, l);
        }
        Word { letters }
    }

    /// Number of positive letters minus number of inverse letters.
    pub fn degree(&self) -> i64 {
        self.letters.iter().map(|l| l.sign.as_i8() as i64).sum()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters.len().cmp(&other.letters.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{}[{}]", l.master, l.index)?;
            let e = run as i64 * l.sign.as_i8() as i64;
            if e != 1 {
                write!(f, "^{e}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite linear combination of reduced words.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Expr {
    terms: BTreeMap<Word, QPoly>,
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::default()
    }

    pub fn one() -> Expr {
        Expr::term(QPoly::one(), Word::empty())
    }

    pub fn word(w: Word) -> Expr {
        Expr::term(QPoly::one(), w)
    }

    pub fn letter(l: Letter) -> Expr {
        Expr::word(Word::letter(l))
    }

    pub fn constant(c: QPoly) -> Expr {
        Expr::term(c, Word::empty())
    }

    pub fn term(c: QPoly, w: Word) -> Expr {
        let mut e = Expr::zero();
        e.add_term(w, c);
        e
    }

    /// Parses the text form, e.g. `(1+q)*x[1] + x[1]^2*x[0]`.
    pub fn parse(text: &str) -> Result<Expr, crate::text::ParseError> {
        crate::text::parse_expr(text)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct words with nonzero coefficient.
    pub fn omega(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QPoly)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coefficient(&self, w: &Word) -> QPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: Word, c: QPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c1 * c2` to the coefficient of `w`.
    pub fn add_product_term(&mut self, w: Word, c1: &QPoly, c2: &QPoly) {
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                let p = c1 * c2;
                if !p.is_zero() {
                    v.insert(p);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_scaled(c1, c2);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &QPoly) -> Expr {
        let mut out = Expr::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    /// Adds `k` to every letter index.
    pub fn up(&self, k: u32) -> Expr {
        Expr { terms: self.terms.iter().map(|(w, c)| (w.up(k), c.clone())).collect() }
    }

    /// Applies `f` to each coefficient, dropping zeros.
    pub fn map_coefficients<F: FnMut(&QPoly) -> QPoly>(&self, mut f: F) -> Expr {
        let mut out = Expr::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Applies `f` to each word and re-collects.
    pub fn map_words<F: FnMut(&Word) -> Word>(&self, mut f: F) -> Expr {
        let mut out = Expr::zero();
        for (w, c) in &self.terms {
            out.add_term(f(w), c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Expr {
        let mut out = Expr::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let single = c.as_single_term();
            let negative = single.is_some_and(|(a, _)| a.is_negative());
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let c = if negative { -c } else { c.clone() };
            if w.is_empty() {
                if c.needs_parens() && k > 0 {
                    write!(f, "({c})")?;
                } else {
                    write!(f, "{c}")?;
                }
            } else if c.is_one() {
                write!(f, "{w}")?;
            } else if c.needs_parens() {
                write!(f, "({c})*{w}")?;
            } else if let Some((a, m)) = c.as_single_term() {
                if m.is_one() || !a.is_one() {
                    write!(f, "{c}*{w}")?;
                } else {
                    write!(f, "{m}*{w}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Expr {
    type Err = crate::text::ParseError;
    fn from_str(s: &str) -> Result<Expr, Self::Err> {
        Expr::parse(s)
    }
}

impl From<QPoly> for Expr {
    fn from(c: QPoly) -> Expr {
        Expr::constant(c)
    }
}

impl From<Word> for Expr {
    fn from(w: Word) -> Expr {
        Expr::word(w)
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl SubAssign<&Expr> for Expr {
    fn sub_assign(&mut self, rhs: &Expr) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c);
        }
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                (&self).$f(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let mut out = Expr::zero();
        for e in iter {
            out += &e;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Expr {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_cancels_adjacent_inverses() {
        let x1 = Letter::pos("x", 1);
        let y2 = Letter::pos("y", 2);
        let w = reduce([x1, y2, y2.inverse(), x1.inverse(), y2]);
        assert_eq!(w, Word::letter(y2));
        assert!(reduce([x1, x1.inverse()]).is_empty());
    }

    #[test]
    fn inverse_is_group_inverse() {
        let w = Word::from_letters([Letter::pos("x", 0), Letter::inv("y", 1), Letter::pos("z", 2)]);
        assert!(w.concat(&w.inverse()).is_empty());
        assert!(w.inverse().concat(&w).is_empty());
    }

    #[test]
    fn up_arrow_shifts_indices() {
        let w = e("y[2]^-1*x[0]^2*y[1]");
        assert_eq!(w.up(1), e("y[3]^-1*x[1]^2*y[2]"));
        assert_eq!(w.up(3), e("y[5]^-1*x[3]^2*y[4]"));
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let a = Word::from_letters([Letter::pos("x", 1)]);
        let b = Word::from_letters([Letter::pos("x", 1), Letter::pos("x", 1), Letter::pos("x", 0)]);
        let c = Word::from_letters([Letter::pos("x", 2), Letter::pos("x", 1), Letter::pos("x", 1)]);
        assert!(a < b && b < c);
        assert!(Letter::inv("x", 1) < Letter::pos("x", 1));
    }

    #[test]
    fn display_compresses_runs() {
        let x = e("(1+q)*x[1] + x[1]*x[1]*x[0] + q*x[2]*x[1]^2");
        assert_eq!(x.to_string(), "(1+q)*x[1] + x[1]^2*x[0] + q*x[2]*x[1]^2");
        assert_eq!(e("x[1]^-1*x[1]^-1").to_string(), "x[1]^-2");
        assert_eq!(e("1 - x[0]").to_string(), "1 - x[0]");
        assert_eq!(e("-2*q*x[0] + 3").to_string(), "3 - 2*q*x[0]");
        assert_eq!(Expr::zero().to_string(), "0");
    }

    #[test]
    fn products_are_noncommutative() {
        let a = e("x[0]");
        let b = e("y[0]");
        assert_ne!(&a * &b, &b * &a);
        assert_eq!(&a * &e("x[0]^-1"), Expr::one());
    }

    #[test]
    fn omega_counts_distinct_words() {
        let x = e("x[0] + q*x[0] + y[1] - y[1]");
        assert_eq!(x.omega(), 1);
        assert_eq!(x.coefficient(&Word::letter(Letter::pos("x", 0))), "1+q".parse().unwrap());
    }
}
