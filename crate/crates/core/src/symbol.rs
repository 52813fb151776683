//! Interned variable names.
//!
//! A [`Symbol`] wraps a leaked, process-wide unique `&'static str`. Equality,
//! hashing and ordering all go through the name, so sorted containers keyed by
//! symbols iterate in the same order on every run.

use std::collections::HashSet;
use std::fmt;

use once_cell::sync::Lazy;
use parking_lot::Mutex;

static INTERNER: Lazy<Mutex<HashSet<&'static str>>> = Lazy::new(|| Mutex::new(HashSet::new()));

/// An interned identifier such as `q`, `x`, or `beta`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(&'static str);

impl Symbol {
    /// Interns `name`, returning the shared symbol.
    pub fn new(name: &str) -> Symbol {
        let mut table = INTERNER.lock();
        if let Some(&s) = table.get(name) {
            return Symbol(s);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        table.insert(leaked);
        Symbol(leaked)
    }

    pub fn as_str(&self) -> &'static str {
        self.0
    }
}

/// True if `name` is a valid identifier: ASCII letter followed by letters,
/// digits, or underscores.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Symbol {
        Symbol::new(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_idempotent() {
        let a = Symbol::new("alpha");
        let b = Symbol::new(&String::from("alpha"));
        assert_eq!(a, b);
        assert!(std::ptr::eq(a.as_str(), b.as_str()));
    }

    #[test]
    fn ordering_follows_names() {
        assert!(Symbol::new("beta") < Symbol::new("q"));
        assert!(Symbol::new("x") < Symbol::new("y"));
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("x"));
        assert!(is_identifier("beta_2"));
        assert!(!is_identifier("2x"));
        assert!(!is_identifier(""));
    }
}
