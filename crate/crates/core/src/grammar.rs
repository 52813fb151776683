//! Formal derivatives defined by substitution rules.
//!
//! A [`Grammar`] assigns to every master symbol `m` a rule template
//! `R(m[j]) = q^(a*j) * sum_k c_k * w_k(j)`, where the `c_k` are constant
//! Laurent polynomials and the letters of `w_k` carry indices either relative
//! to `j` or absolute. The derivative of a word is
//!
//! ```text
//! D(w_1 ... w_n) = sum_i  rho( w_1..w_{i-1} * R(w_i) * up(w_{i+1}..w_n) )
//! ```
//!
//! with inverse letters handled by `R(m[j]^-1) = -m[j]^-1 R(m[j]) m[j+1]^-1`
//! and `rho` one of the normal orders in [`Order`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::freealg::{reduce, Expr, Letter, Sign, Word};
use crate::qpoly::QPoly;
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("no rule for master `{0}`")]
    MissingRule(String),
    #[error("unknown master `{0}`")]
    UnknownMaster(String),
    #[error("master `{0}` declared twice")]
    DuplicateMaster(String),
    #[error("more than one rule for master `{0}`")]
    DuplicateRule(String),
    #[error("malformed index: {0}")]
    MalformedIndex(String),
    #[error("unknown order `{0}` (expected KSO, LPO, AIO or DIO)")]
    UnknownOrder(String),
}

/// Normal orders on words.
///
/// `Kso` keeps the letter order produced by the substitution. The others
/// stably sort letters (ignoring the sign) by a key built from the master's
/// declared priority and the letter index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    /// Keep substitution order.
    Kso,
    /// Leading (master) priority, then index.
    Lpo,
    /// Ascending index, then master priority.
    Aio,
    /// Descending index, then master priority.
    Dio,
}

impl Order {
    pub fn name(self) -> &'static str {
        match self {
            Order::Kso => "KSO",
            Order::Lpo => "LPO",
            Order::Aio => "AIO",
            Order::Dio => "DIO",
        }
    }

    pub const ALL: [Order; 4] = [Order::Kso, Order::Lpo, Order::Aio, Order::Dio];

    /// Reorders and re-reduces `w`. Returns the new word and the number of
    /// letters removed by cancellation after sorting.
    pub fn normalize(self, priority: &Priority, w: Word) -> (Word, usize) {
        if self == Order::Kso || w.len() < 2 {
            return (w, 0);
        }
        let mut letters = w.letters().to_vec();
        match self {
            Order::Kso => unreachable!(),
            Order::Lpo => letters.sort_by_key(|l| (priority.of(l.master), l.index)),
            Order::Aio => letters.sort_by_key(|l| (l.index, priority.of(l.master))),
            Order::Dio => letters.sort_by_key(|l| (std::cmp::Reverse(l.index), priority.of(l.master))),
        }
        if Word::is_reduced_sequence(&letters) {
            return (Word::from_letters(letters), 0);
        }
        let before = letters.len();
        let out = reduce(letters);
        let removed = before - out.len();
        (out, removed)
    }

    /// Applies the order to every word of `a`.
    pub fn apply(self, priority: &Priority, a: &Expr) -> Expr {
        self.apply_traced(priority, a).0
    }

    /// Like [`Order::apply`], also returning how many letters cancelled.
    pub fn apply_traced(self, priority: &Priority, a: &Expr) -> (Expr, usize) {
        let mut out = Expr::zero();
        let mut removed = 0;
        for (w, c) in a.terms() {
            let (w2, r) = self.normalize(priority, w.clone());
            removed += r;
            out.add_term(w2, c.clone());
        }
        (out, removed)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Order {
    type Err = GrammarError;
    fn from_str(s: &str) -> Result<Order, GrammarError> {
        match s.to_ascii_uppercase().as_str() {
            "KSO" => Ok(Order::Kso),
            "LPO" => Ok(Order::Lpo),
            "AIO" => Ok(Order::Aio),
            "DIO" => Ok(Order::Dio),
            _ => Err(GrammarError::UnknownOrder(s.to_string())),
        }
    }
}

/// Master priorities: position in the declared master list. Unlisted
/// masters rank after all listed ones.
#[derive(Debug, Clone)]
pub struct Priority {
    ranks: HashMap<Symbol, usize>,
}

impl Priority {
    pub fn new(masters: &[Symbol]) -> Priority {
        Priority { ranks: masters.iter().enumerate().map(|(i, &m)| (m, i)).collect() }
    }

    pub fn of(&self, m: Symbol) -> usize {
        self.ranks.get(&m).copied().unwrap_or(self.ranks.len())
    }
}

/// Letter index in a rule template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexSpec {
    /// `j + c`.
    Rel(i64),
    /// A fixed index.
    Abs(i64),
}

impl IndexSpec {
    pub fn at(self, j: u32) -> i64 {
        match self {
            IndexSpec::Rel(c) => j as i64 + c,
            IndexSpec::Abs(c) => c,
        }
    }
}

impl fmt::Display for IndexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IndexSpec::Rel(0) => f.write_str("j"),
            IndexSpec::Rel(c) if c > 0 => write!(f, "j+{c}"),
            IndexSpec::Rel(c) => write!(f, "j-{}", -c),
            IndexSpec::Abs(c) => write!(f, "{c}"),
        }
    }
}

/// A letter of a rule template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemplateLetter {
    pub master: Symbol,
    pub index: IndexSpec,
    pub sign: Sign,
}

impl TemplateLetter {
    pub fn inverse(self) -> TemplateLetter {
        TemplateLetter { sign: self.sign.flip(), ..self }
    }

    fn cancels(&self, other: &TemplateLetter) -> bool {
        self.master == other.master && self.index == other.index && self.sign != other.sign
    }

    fn at(self, j: u32) -> Letter {
        let i = self.index.at(j);
        Letter::new(self.master, u32::try_from(i).expect("validated nonnegative index"), self.sign)
    }
}

/// Free reduction of a template word.
pub fn reduce_template(letters: impl IntoIterator<Item = TemplateLetter>) -> Vec<TemplateLetter> {
    let mut out: Vec<TemplateLetter> = Vec::new();
    for l in letters {
        if out.last().is_some_and(|t| t.cancels(&l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// `R(m[j]) = q^(j_power * j) * sum(coefficient * word)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleTemplate {
    pub master: Symbol,
    pub j_power: i64,
    pub terms: BTreeMap<Vec<TemplateLetter>, QPoly>,
}

impl RuleTemplate {
    pub fn new(master: Symbol, j_power: i64) -> RuleTemplate {
        RuleTemplate { master, j_power, terms: BTreeMap::new() }
    }

    /// Adds `c * word`, reducing the word and merging repeats.
    pub fn add_term(&mut self, c: QPoly, word: Vec<TemplateLetter>) {
        let w = reduce_template(word);
        let entry = self.terms.entry(w.clone()).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = &TemplateLetter> {
        self.terms.keys().flatten()
    }

    /// The rule evaluated at index `j`.
    pub fn instantiate(&self, j: u32) -> Expr {
        let qa = QPoly::q_pow(i32::try_from(self.j_power * j as i64).expect("q exponent overflow"));
        let mut out = Expr::zero();
        for (w, c) in &self.terms {
            out.add_term(reduce(w.iter().map(|l| l.at(j))), c * &qa);
        }
        out
    }
}

/// A set of rule templates plus a normal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    name: String,
    masters: Vec<Symbol>,
    rules: Vec<RuleTemplate>,
    order: Order,
}

impl Grammar {
    /// Validates and builds a grammar. Every master needs exactly one rule,
    /// rule letters must use declared masters, and indices must never become
    /// negative for `j >= 0`.
    pub fn new(
        name: impl Into<String>,
        masters: Vec<Symbol>,
        rules: Vec<RuleTemplate>,
        order: Order,
    ) -> Result<Grammar, GrammarError> {
        for (i, m) in masters.iter().enumerate() {
            if masters[..i].contains(m) {
                return Err(GrammarError::DuplicateMaster(m.to_string()));
            }
        }
        let mut ordered = Vec::with_capacity(masters.len());
        for m in &masters {
            let mut found = rules.iter().filter(|r| r.master == *m);
            let r = found.next().ok_or_else(|| GrammarError::MissingRule(m.to_string()))?;
            if found.next().is_some() {
                return Err(GrammarError::DuplicateRule(m.to_string()));
            }
            ordered.push(r.clone());
        }
        for r in &rules {
            if !masters.contains(&r.master) {
                return Err(GrammarError::UnknownMaster(r.master.to_string()));
            }
            for l in r.letters() {
                if !masters.contains(&l.master) {
                    return Err(GrammarError::UnknownMaster(l.master.to_string()));
                }
                match l.index {
                    IndexSpec::Rel(c) | IndexSpec::Abs(c) if c < 0 => {
                        return Err(GrammarError::MalformedIndex(format!(
                            "{}[{}] can be negative",
                            l.master, l.index
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(Grammar { name: name.into(), masters, rules: ordered, order })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn masters(&self) -> &[Symbol] {
        &self.masters
    }

    pub fn rules(&self) -> &[RuleTemplate] {
        &self.rules
    }

    pub fn rule(&self, m: Symbol) -> Option<&RuleTemplate> {
        self.rules.iter().find(|r| r.master == m)
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn priority(&self) -> Priority {
        Priority::new(&self.masters)
    }

    /// The same rules under a different order.
    pub fn with_order(&self, order: Order) -> Grammar {
        Grammar { order, ..self.clone() }
    }

    /// Every rule has the shape `q^j * (...)` with all indices relative.
    pub fn satisfies_shift_condition(&self) -> bool {
        self.rules.iter().all(|r| {
            r.j_power == 1 && r.letters().all(|l| matches!(l.index, IndexSpec::Rel(_)))
        })
    }

    /// Keep-substitution order together with the shift condition.
    pub fn is_q_linear(&self) -> bool {
        self.order == Order::Kso && self.satisfies_shift_condition()
    }

    /// Applies this grammar's order to `a`.
    pub fn apply_order(&self, a: &Expr) -> Expr {
        self.order.apply(&self.priority(), a)
    }

    /// `D(a)`.
    pub fn derive(&self, a: &Expr) -> Expr {
        Deriver::new(self).derive(a)
    }

    /// `D^n(a)`.
    pub fn derive_n(&self, a: &Expr, n: usize) -> Expr {
        Deriver::new(self).derive_n(a, n)
    }

    /// `[a, D(a), ..., D^n(a)]`.
    pub fn derive_iter(&self, a: &Expr, n: usize) -> Vec<Expr> {
        let mut d = Deriver::new(self);
        let mut out = vec![a.clone()];
        for _ in 0..n {
            let next = d.derive(out.last().unwrap());
            out.push(next);
        }
        out
    }

    /// `D^n(a)` plus the number of letters cancelled while reordering.
    pub fn derive_n_traced(&self, a: &Expr, n: usize) -> (Expr, usize) {
        let mut d = Deriver::new(self);
        let e = d.derive_n(a, n);
        (e, d.cancellations())
    }

    /// The image `R(l)` of a single letter (inverse letters included).
    pub fn letter_image(&self, l: Letter) -> Expr {
        Deriver::new(self).image(l).clone()
    }
}

/// Derivation engine with a per-letter cache of rule images.
pub struct Deriver<'g> {
    grammar: &'g Grammar,
    priority: Priority,
    cache: HashMap<Letter, Expr>,
    cancellations: usize,
}

impl<'g> Deriver<'g> {
    pub fn new(grammar: &'g Grammar) -> Deriver<'g> {
        Deriver { grammar, priority: grammar.priority(), cache: HashMap::new(), cancellations: 0 }
    }

    /// Letters removed by cancellation during reordering so far.
    pub fn cancellations(&self) -> usize {
        self.cancellations
    }

    /// `R(l)`, before any reordering. Letters without a rule map to zero.
    pub fn image(&mut self, l: Letter) -> &Expr {
        if !self.cache.contains_key(&l) {
            let img = match (self.grammar.rule(l.master), l.sign) {
                (None, _) => Expr::zero(),
                (Some(r), Sign::Pos) => r.instantiate(l.index),
                (Some(r), Sign::Inv) => {
                    let pos = r.instantiate(l.index);
                    let left = Expr::letter(l);
                    let right = Expr::letter(l.shifted(1));
                    -(&(&left * &pos) * &right)
                }
            };
            self.cache.insert(l, img);
        }
        &self.cache[&l]
    }

    /// Accumulates `c * D(w)` into `out`.
    pub fn derive_word_into(&mut self, w: &Word, c: &QPoly, out: &mut Expr) {
        let letters = w.letters();
        let order = self.grammar.order;
        for i in 0..letters.len() {
            let prefix = &letters[..i];
            let suffix: Vec<Letter> = letters[i + 1..].iter().map(|l| l.shifted(1)).collect();
            let img = self.image(letters[i]).clone();
            for (rw, rc) in img.terms() {
                let raw = Word::concat3(prefix, rw.letters(), &suffix);
                let (nw, removed) = order.normalize(&self.priority, raw);
                self.cancellations += removed;
                out.add_product_term(nw, c, rc);
            }
        }
    }

    pub fn derive(&mut self, a: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (w, c) in a.terms() {
            self.derive_word_into(w, c, &mut out);
        }
        out
    }

    pub fn derive_n(&mut self, a: &Expr, n: usize) -> Expr {
        let mut cur = a.clone();
        for _ in 0..n {
            cur = self.derive(&cur);
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> Expr {
        s.parse().unwrap()
    }

    fn tan_grammar(order: Order) -> Grammar {
        let x = Symbol::new("x");
        let mut r = RuleTemplate::new(x, 1);
        r.add_term(QPoly::one(), vec![]);
        r.add_term(
            QPoly::one(),
            vec![
                TemplateLetter { master: x, index: IndexSpec::Rel(0), sign: Sign::Pos },
                TemplateLetter { master: x, index: IndexSpec::Rel(1), sign: Sign::Pos },
            ],
        );
        Grammar::new("tan", vec![x], vec![r], order).unwrap()
    }

    #[test]
    fn first_derivatives() {
        let g = tan_grammar(Order::Dio);
        assert_eq!(g.derive(&e("x[0]")), e("1 + x[1]*x[0]"));
        assert_eq!(g.derive_n(&e("x[0]"), 2), e("(1+q)*x[1] + x[1]^2*x[0] + q*x[2]*x[1]^2"));
    }

    #[test]
    fn inverse_image() {
        let g = tan_grammar(Order::Kso);
        let img = g.letter_image(Letter::inv("x", 2));
        assert_eq!(img, e("-q^2 - q^2*x[2]^-1*x[3]^-1"));
        // Leibniz on x * x^-1 = 1 before reduction.
        let x0 = e("x[0]");
        let lhs = &g.derive(&x0) * &e("x[1]^-1") + &x0 * &g.letter_image(Letter::inv("x", 0));
        assert!(lhs.is_zero());
    }

    #[test]
    fn order_example() {
        let pr = Priority::new(&[Symbol::new("x"), Symbol::new("y")]);
        let a = e("x[2]*y[2]^-1*x[1]*x[3]^2*y[3] + (1+q)*y[1]^2*x[1]^-1*x[2]");
        assert_eq!(Order::Kso.apply(&pr, &a), a);
        assert_eq!(Order::Lpo.apply(&pr, &a), e("x[1]*x[2]*x[3]^2*y[2]^-1*y[3] + (1+q)*x[1]^-1*x[2]*y[1]^2"));
        assert_eq!(Order::Aio.apply(&pr, &a), e("x[1]*x[2]*y[2]^-1*x[3]^2*y[3] + (1+q)*x[1]^-1*y[1]^2*x[2]"));
        assert_eq!(Order::Dio.apply(&pr, &a), e("x[3]^2*y[3]*x[2]*y[2]^-1*x[1] + (1+q)*x[2]*x[1]^-1*y[1]^2"));
    }

    #[test]
    fn reordering_can_cancel() {
        let pr = Priority::new(&[Symbol::new("x"), Symbol::new("y")]);
        let w = Word::from_letters([Letter::pos("x", 1), Letter::pos("y", 1), Letter::inv("x", 1)]);
        let (out, removed) = Order::Lpo.normalize(&pr, w);
        assert_eq!(out, Word::letter(Letter::pos("y", 1)));
        assert_eq!(removed, 2);
    }

    #[test]
    fn shift_condition() {
        assert!(tan_grammar(Order::Kso).is_q_linear());
        assert!(!tan_grammar(Order::Dio).is_q_linear());
        assert!(tan_grammar(Order::Dio).satisfies_shift_condition());
    }

    #[test]
    fn validation() {
        let x = Symbol::new("x");
        let y = Symbol::new("y");
        let r = RuleTemplate::new(x, 1);
        assert_eq!(
            Grammar::new("g", vec![x, y], vec![r.clone()], Order::Kso),
            Err(GrammarError::MissingRule("y".into()))
        );
        let mut bad = RuleTemplate::new(x, 1);
        bad.add_term(QPoly::one(), vec![TemplateLetter { master: x, index: IndexSpec::Rel(-1), sign: Sign::Pos }]);
        assert!(matches!(Grammar::new("g", vec![x], vec![bad], Order::Kso), Err(GrammarError::MalformedIndex(_))));
        assert_eq!("dio".parse::<Order>(), Ok(Order::Dio));
    }
}
