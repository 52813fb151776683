//! Formal derivatives on the group algebra of free groups, with q-weights.
//!
//! The crate computes iterated derivatives `D^n(a)` for grammars whose rules
//! substitute indexed letters `m[j]`, normalizes words under one of four
//! letter orders, evaluates words into Laurent polynomials, and compares the
//! results with independent combinatorial enumerations.
//!
//! ```
//! use qgram::{catalog, Expr};
//!
//! let entry = catalog::get("G_tan").unwrap();
//! let d2 = entry.grammar.derive_n(&entry.seed, 2);
//! assert_eq!(d2, "(1+q)*x[1] + x[1]^2*x[0] + q*x[2]*x[1]^2".parse::<Expr>().unwrap());
//! ```

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod cli;
pub mod evalmap;
pub mod freealg;
pub mod grammar;
pub mod json;
pub mod oracle;
pub mod qpoly;
pub mod qseries;
pub mod symbol;
pub mod text;
pub mod verify;

pub use evalmap::{EvalError, EvalImage, EvalMap};
pub use freealg::{reduce, Expr, Letter, Sign, Word};
pub use grammar::{Grammar, GrammarError, IndexSpec, Order, RuleTemplate, TemplateLetter};
pub use qpoly::{Monomial, QPoly, QPolyError};
pub use qseries::{ESeries, SeriesError, StdSeries};
pub use symbol::Symbol;
pub use text::{GrammarFile, ParseError};
