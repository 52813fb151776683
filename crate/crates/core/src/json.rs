//! JSON wire format for polynomials, words, expressions, series and grammars.
//!
//! Output is compact and canonical: terms appear in the same order as the
//! text form, so serializing, parsing and serializing again is byte-stable.
//! Integer coefficients are JSON numbers when they fit in `i64` and decimal
//! strings otherwise.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freealg::{Expr, Letter, Sign, Word};
use crate::grammar::{Grammar, IndexSpec, Order, RuleTemplate, TemplateLetter};
use crate::qpoly::{Monomial, QPoly};
use crate::qseries::ESeries;
use crate::symbol::{is_identifier, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("schema error: {0}")]
pub struct SchemaError(pub String);

impl From<serde_json::Error> for SchemaError {
    fn from(e: serde_json::Error) -> SchemaError {
        SchemaError(e.to_string())
    }
}

/// Values with a JSON wire form.
pub trait Wire: Sized {
    type Repr: Serialize + for<'de> Deserialize<'de>;
    fn to_wire(&self) -> Self::Repr;
    fn from_wire(r: Self::Repr) -> Result<Self, SchemaError>;
}

pub fn to_json<T: Wire>(v: &T) -> String {
    serde_json::to_string(&v.to_wire()).expect("wire types always serialize")
}

pub fn to_json_pretty<T: Wire>(v: &T) -> String {
    serde_json::to_string_pretty(&v.to_wire()).expect("wire types always serialize")
}

pub fn from_json<T: Wire>(text: &str) -> Result<T, SchemaError> {
    T::from_wire(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn of(n: &BigInt) -> IntRepr {
        match i64::try_from(n) {
            Ok(v) => IntRepr::Small(v),
            Err(_) => IntRepr::Big(n.to_string()),
        }
    }

    fn value(&self) -> Result<BigInt, SchemaError> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(s) => s.parse().map_err(|_| SchemaError(format!("`{s}` is not an integer"))),
        }
    }
}

fn symbol(name: &str) -> Result<Symbol, SchemaError> {
    if is_identifier(name) {
        Ok(Symbol::new(name))
    } else {
        Err(SchemaError(format!("`{name}` is not a valid identifier")))
    }
}

fn sign(s: i8) -> Result<Sign, SchemaError> {
    Sign::from_i64(s as i64).ok_or_else(|| SchemaError(format!("sign must be 1 or -1, got {s}")))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTermRepr {
    pub coeff: IntRepr,
    pub vars: BTreeMap<String, i32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyRepr {
    pub terms: Vec<PolyTermRepr>,
}

impl Wire for QPoly {
    type Repr = PolyRepr;

    fn to_wire(&self) -> PolyRepr {
        let terms = self
            .terms()
            .map(|(m, c)| PolyTermRepr {
                coeff: IntRepr::of(c),
                vars: m.factors().iter().map(|(s, e)| (s.as_str().to_string(), *e)).collect(),
            })
            .collect();
        PolyRepr { terms }
    }

    fn from_wire(r: PolyRepr) -> Result<QPoly, SchemaError> {
        let mut out = QPoly::zero();
        for t in r.terms {
            let mut pairs = Vec::with_capacity(t.vars.len());
            for (name, e) in &t.vars {
                pairs.push((symbol(name)?, *e));
            }
            out.add_term(Monomial::from_pairs(pairs), t.coeff.value()?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterRepr {
    pub master: String,
    pub index: u32,
    pub sign: i8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordRepr {
    pub letters: Vec<LetterRepr>,
}

fn letters_to_wire(w: &Word) -> Vec<LetterRepr> {
    w.letters()
        .iter()
        .map(|l| LetterRepr { master: l.master.as_str().to_string(), index: l.index, sign: l.sign.as_i8() })
        .collect()
}

fn letters_from_wire(ls: Vec<LetterRepr>) -> Result<Word, SchemaError> {
    let mut letters = Vec::with_capacity(ls.len());
    for l in ls {
        letters.push(Letter::new(symbol(&l.master)?, l.index, sign(l.sign)?));
    }
    Ok(Word::from_letters(letters))
}

impl Wire for Word {
    type Repr = WordRepr;

    fn to_wire(&self) -> WordRepr {
        WordRepr { letters: letters_to_wire(self) }
    }

    fn from_wire(r: WordRepr) -> Result<Word, SchemaError> {
        letters_from_wire(r.letters)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExprTermRepr {
    pub coeff: PolyRepr,
    pub word: Vec<LetterRepr>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExprRepr {
    pub terms: Vec<ExprTermRepr>,
}

impl Wire for Expr {
    type Repr = ExprRepr;

    fn to_wire(&self) -> ExprRepr {
        ExprRepr {
            terms: self.terms().map(|(w, c)| ExprTermRepr { coeff: c.to_wire(), word: letters_to_wire(w) }).collect(),
        }
    }

    fn from_wire(r: ExprRepr) -> Result<Expr, SchemaError> {
        let mut out = Expr::zero();
        for t in r.terms {
            out.add_term(letters_from_wire(t.word)?, QPoly::from_wire(t.coeff)?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesRepr {
    pub order: usize,
    pub coeffs: Vec<PolyRepr>,
}

impl Wire for ESeries {
    type Repr = SeriesRepr;

    fn to_wire(&self) -> SeriesRepr {
        SeriesRepr { order: self.order(), coeffs: self.coeffs().iter().map(QPoly::to_wire).collect() }
    }

    fn from_wire(r: SeriesRepr) -> Result<ESeries, SchemaError> {
        if r.coeffs.len() != r.order + 1 {
            return Err(SchemaError(format!("order {} needs {} coefficients, got {}", r.order, r.order + 1, r.coeffs.len())));
        }
        let coeffs = r.coeffs.into_iter().map(QPoly::from_wire).collect::<Result<Vec<_>, _>>()?;
        Ok(ESeries::new(coeffs))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum IndexRepr {
    Rel(i64),
    Abs(i64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateLetterRepr {
    pub master: String,
    pub index: IndexRepr,
    pub sign: i8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleTermRepr {
    pub coeff: PolyRepr,
    pub letters: Vec<TemplateLetterRepr>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleRepr {
    pub master: String,
    pub j_power: i64,
    pub terms: Vec<RuleTermRepr>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrammarRepr {
    pub name: String,
    pub masters: Vec<String>,
    pub order: String,
    pub rules: Vec<RuleRepr>,
}

impl Wire for Grammar {
    type Repr = GrammarRepr;

    fn to_wire(&self) -> GrammarRepr {
        let rules = self
            .rules()
            .iter()
            .map(|r| RuleRepr {
                master: r.master.as_str().to_string(),
                j_power: r.j_power,
                terms: r
                    .terms
                    .iter()
                    .map(|(w, c)| RuleTermRepr {
                        coeff: c.to_wire(),
                        letters: w
                            .iter()
                            .map(|l| TemplateLetterRepr {
                                master: l.master.as_str().to_string(),
                                index: match l.index {
                                    IndexSpec::Rel(c) => IndexRepr::Rel(c),
                                    IndexSpec::Abs(c) => IndexRepr::Abs(c),
                                },
                                sign: l.sign.as_i8(),
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect();
        GrammarRepr {
            name: self.name().to_string(),
            masters: self.masters().iter().map(|m| m.as_str().to_string()).collect(),
            order: self.order().name().to_string(),
            rules,
        }
    }

    fn from_wire(r: GrammarRepr) -> Result<Grammar, SchemaError> {
        let masters = r.masters.iter().map(|m| symbol(m)).collect::<Result<Vec<_>, _>>()?;
        let order: Order = r.order.parse().map_err(|e: crate::grammar::GrammarError| SchemaError(e.to_string()))?;
        let mut rules = Vec::with_capacity(r.rules.len());
        for rr in r.rules {
            let mut rule = RuleTemplate::new(symbol(&rr.master)?, rr.j_power);
            for t in rr.terms {
                let mut word = Vec::with_capacity(t.letters.len());
                for l in t.letters {
                    let index = match l.index {
                        IndexRepr::Rel(c) => IndexSpec::Rel(c),
                        IndexRepr::Abs(c) => IndexSpec::Abs(c),
                    };
                    word.push(TemplateLetter { master: symbol(&l.master)?, index, sign: sign(l.sign)? });
                }
                rule.add_term(QPoly::from_wire(t.coeff)?, word);
            }
            rules.push(rule);
        }
        Grammar::new(r.name, masters, rules, order).map_err(|e| SchemaError(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn empty_expression() {
        assert_eq!(to_json(&Expr::zero()), r#"{"terms":[]}"#);
        assert_eq!(from_json::<Expr>(r#"{"terms":[]}"#).unwrap(), Expr::zero());
    }

    #[test]
    fn derivative_round_trip_is_byte_stable() {
        let e = catalog::get("G_tan").unwrap();
        let d3 = e.grammar.derive_n(&e.seed, 3);
        let text = to_json(&d3);
        let back: Expr = from_json(&text).unwrap();
        assert_eq!(back, d3);
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn polynomials_keep_big_coefficients() {
        let p: QPoly = "123456789012345678901234567890*q^2*x^-1 - 3".parse().unwrap();
        let text = to_json(&p);
        assert!(text.contains(r#""123456789012345678901234567890""#));
        assert_eq!(from_json::<QPoly>(&text).unwrap(), p);
    }

    #[test]
    fn malformed_input_is_a_schema_error() {
        assert!(from_json::<QPoly>(r#"{"terms":[{"coeff":1,"vars":{"q":"two"}}]}"#).is_err());
        assert!(from_json::<Word>(r#"{"letters":[{"master":"x","index":0,"sign":2}]}"#).is_err());
        assert!(from_json::<Expr>(r#"{"terms":[{"coeff":{"terms":[]},"word":[],"extra":1}]}"#).is_err());
        assert!(from_json::<ESeries>(r#"{"order":2,"coeffs":[]}"#).is_err());
        assert!(from_json::<Expr>("[").is_err());
    }

    #[test]
    fn grammars_and_series_round_trip() {
        for e in catalog::entries() {
            let text = to_json(&e.grammar);
            let g: Grammar = from_json(&text).unwrap();
            assert_eq!(g, e.grammar, "{}", e.id);
            assert_eq!(to_json(&g), text);
        }
        let s = crate::qseries::std_series(crate::StdSeries::Tan, 6, None);
        assert_eq!(from_json::<ESeries>(&to_json(&s)).unwrap(), s);
    }

    #[test]
    fn grammar_validation_applies() {
        let text = r#"{"name":"g","masters":["x"],"order":"KSO","rules":[]}"#;
        assert!(from_json::<Grammar>(text).unwrap_err().0.contains("x"));
    }
}
