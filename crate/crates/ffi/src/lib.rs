//! C ABI over the qgram library.
//!
//! Every object crosses the boundary as an opaque pointer that the caller
//! releases with the matching `*_free` function. Every fallible call returns
//! a [`QgramStatus`]; on failure the message is available from
//! [`qgram_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qgram::catalog;
use qgram::evalmap::EvalMap;
use qgram::freealg::Expr;
use qgram::grammar::Grammar;
use qgram::json::{from_json, to_json};
use qgram::qpoly::QPoly;
use qgram::qseries::gen;
use qgram::text::{check_masters, parse_expr, parse_grammar, GrammarFile};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QgramStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnknownId = 4,
    InvalidArgument = 5,
    EvalError = 6,
    Panic = 7,
}

/// A grammar with its optional evaluation map and seed.
pub struct QgramGrammar {
    grammar: Grammar,
    eval: Option<EvalMap>,
    seed: Option<Expr>,
}

/// An element of the free group algebra.
pub struct QgramExpr(Expr);

/// A Laurent polynomial with integer coefficients.
pub struct QgramPoly(QPoly);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(QgramStatus, String);

impl Failure {
    fn new(status: QgramStatus, msg: impl ToString) -> Failure {
        Failure(status, msg.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `body`, turning errors and panics into a status code.
fn guard<F>(body: F) -> QgramStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QgramStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            QgramStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(QgramStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::new(QgramStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(QgramStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(QgramStatus::NullPointer, "output pointer is null"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(QgramStatus::NullPointer, "output pointer is null"));
    }
    out.write(Box::into_raw(Box::new(v)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure::new(QgramStatus::InvalidArgument, e))?;
    put(out, c.into_raw())
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qgram_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Looks up a built-in grammar by id, e.g. "G_tan".
///
/// # Safety
/// `id` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn qgram_grammar_from_catalog(id: *const c_char, out: *mut *mut QgramGrammar) -> QgramStatus {
    guard(|| {
        let ent = catalog::get(str_arg(id, "id")?).map_err(|e| Failure::new(QgramStatus::UnknownId, e))?;
        put_box(out, QgramGrammar { grammar: ent.grammar.clone(), eval: Some(ent.eval.clone()), seed: Some(ent.seed.clone()) })
    })
}

/// Parses a grammar file.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn qgram_grammar_parse(text: *const c_char, out: *mut *mut QgramGrammar) -> QgramStatus {
    guard(|| {
        let f = parse_grammar(str_arg(text, "text")?).map_err(|e| Failure::new(QgramStatus::ParseError, e))?;
        put_box(out, QgramGrammar { grammar: f.grammar, eval: f.eval, seed: f.seed })
    })
}

/// Copies the grammar's seed into a new expression.
///
/// # Safety
/// `g` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qgram_grammar_seed(g: *const QgramGrammar, out: *mut *mut QgramExpr) -> QgramStatus {
    guard(|| {
        let g = ref_arg(g, "grammar")?;
        let seed = g.seed.clone().ok_or_else(|| Failure::new(QgramStatus::InvalidArgument, "grammar has no seed"))?;
        put_box(out, QgramExpr(seed))
    })
}

/// Prints the grammar in file form. Free the result with `qgram_string_free`.
///
/// # Safety
/// `g` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qgram_grammar_to_string(g: *const QgramGrammar, out: *mut *mut c_char) -> QgramStatus {
    guard(|| {
        let g = ref_arg(g, "grammar")?;
        let file = GrammarFile { grammar: g.grammar.clone(), eval: g.eval.clone(), seed: g.seed.clone() };
        put_string(out, file.to_string())
    })
}

/// # Safety
/// `g` must come from this library or be NULL, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qgram_grammar_free(g: *mut QgramGrammar) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Parses an expression such as "x[0]*y[1]^-1 + q*x[2]".
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn qgram_expr_parse(text: *const c_char, out: *mut *mut QgramExpr) -> QgramStatus {
    guard(|| {
        let e = parse_expr(str_arg(text, "text")?).map_err(|e| Failure::new(QgramStatus::ParseError, e))?;
        put_box(out, QgramExpr(e))
    })
}

/// Computes D^n(a) under grammar `g`.
///
/// # Safety
/// `g` and `a` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qgram_derive_n(
    g: *const QgramGrammar,
    a: *const QgramExpr,
    n: u32,
    out: *mut *mut QgramExpr,
) -> QgramStatus {
    guard(|| {
        let (g, a) = (ref_arg(g, "grammar")?, ref_arg(a, "expression")?);
        check_masters(&g.grammar, &a.0).map_err(|e| Failure::new(QgramStatus::InvalidArgument, e))?;
        put_box(out, QgramExpr(g.grammar.derive_n(&a.0, n as usize)))
    })
}

/// Number of terms of `a`.
///
/// # Safety
/// `a` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qgram_expr_omega(a: *const QgramExpr, out: *mut usize) -> QgramStatus {
    guard(|| put(out, ref_arg(a, "expression")?.0.omega()))
}

/// Canonical text form. Free the result with `qgram_string_free`.
///
/// # Safety
/// `a` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qgram_expr_to_string(a: *const QgramExpr, out: *mut *mut c_char) -> QgramStatus {
    guard(|| put_string(out, ref_arg(a, "expression")?.0.to_string()))
}

/// Canonical JSON form. Free the result with `qgram_string_free`.
///
/// # Safety
/// `a` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qgram_expr_to_json(a: *const QgramExpr, out: *mut *mut c_char) -> QgramStatus {
    guard(|| put_string(out, to_json(&ref_arg(a, "expression")?.0)))
}

/// Parses the JSON form produced by `qgram_expr_to_json`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn qgram_expr_from_json(text: *const c_char, out: *mut *mut QgramExpr) -> QgramStatus {
    guard(|| {
        let e = from_json::<Expr>(str_arg(text, "text")?).map_err(|e| Failure::new(QgramStatus::ParseError, e))?;
        put_box(out, QgramExpr(e))
    })
}

/// # Safety
/// `a` must come from this library or be NULL, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qgram_expr_free(a: *mut QgramExpr) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

fn eval_map(g: &QgramGrammar) -> Result<&EvalMap, Failure> {
    g.eval.as_ref().ok_or_else(|| Failure::new(QgramStatus::InvalidArgument, "grammar has no evaluation map"))
}

/// Applies the grammar's evaluation map to `a`.
///
/// # Safety
/// `g` and `a` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qgram_evaluate(
    g: *const QgramGrammar,
    a: *const QgramExpr,
    out: *mut *mut QgramPoly,
) -> QgramStatus {
    guard(|| {
        let (g, a) = (ref_arg(g, "grammar")?, ref_arg(a, "expression")?);
        let v = eval_map(g)?.evaluate(&a.0).map_err(|e| Failure::new(QgramStatus::EvalError, e))?;
        put_box(out, QgramPoly(v))
    })
}

/// Coefficients 0..=order of the generating function of `a`, as JSON.
/// Free the result with `qgram_string_free`.
///
/// # Safety
/// `g` and `a` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qgram_series_json(
    g: *const QgramGrammar,
    a: *const QgramExpr,
    order: u32,
    out: *mut *mut c_char,
) -> QgramStatus {
    guard(|| {
        let (g, a) = (ref_arg(g, "grammar")?, ref_arg(a, "expression")?);
        let s = gen(&g.grammar, eval_map(g)?, &a.0, order as usize).map_err(|e| Failure::new(QgramStatus::EvalError, e))?;
        put_string(out, to_json(&s))
    })
}

/// Canonical text form. Free the result with `qgram_string_free`.
///
/// # Safety
/// `p` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qgram_poly_to_string(p: *const QgramPoly, out: *mut *mut c_char) -> QgramStatus {
    guard(|| put_string(out, ref_arg(p, "polynomial")?.0.to_string()))
}

/// Canonical JSON form. Free the result with `qgram_string_free`.
///
/// # Safety
/// `p` must come from this library and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qgram_poly_to_json(p: *const QgramPoly, out: *mut *mut c_char) -> QgramStatus {
    guard(|| put_string(out, to_json(&ref_arg(p, "polynomial")?.0)))
}

/// # Safety
/// `p` must come from this library or be NULL, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qgram_poly_free(p: *mut QgramPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Predicted number of terms of D^n(seed) for a built-in grammar.
///
/// # Safety
/// `id` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn qgram_term_count(id: *const c_char, n: u32, out: *mut u64) -> QgramStatus {
    guard(|| {
        let ent = catalog::get(str_arg(id, "id")?).map_err(|e| Failure::new(QgramStatus::UnknownId, e))?;
        let c = ent.term_count(n as usize).map_err(|e| Failure::new(QgramStatus::InvalidArgument, e))?;
        put(out, c)
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library or be NULL, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qgram_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
