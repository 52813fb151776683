use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use qgram_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    qgram_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(qgram_last_error()).to_str().unwrap().to_owned()
}

#[test]
fn derive_and_print() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(qgram_grammar_from_catalog(cstr("G_tan").as_ptr(), &mut g), QgramStatus::Ok);
        let mut seed = ptr::null_mut();
        assert_eq!(qgram_grammar_seed(g, &mut seed), QgramStatus::Ok);
        let mut d = ptr::null_mut();
        assert_eq!(qgram_derive_n(g, seed, 2, &mut d), QgramStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(qgram_expr_to_string(d, &mut s), QgramStatus::Ok);
        assert_eq!(take_string(s), "(1+q)*x[1] + x[1]^2*x[0] + q*x[2]*x[1]^2");
        let mut n = 0usize;
        assert_eq!(qgram_expr_omega(d, &mut n), QgramStatus::Ok);
        assert_eq!(n, 3);
        let mut c = 0u64;
        assert_eq!(qgram_term_count(cstr("G_tan").as_ptr(), 2, &mut c), QgramStatus::Ok);
        assert_eq!(c as usize, n);
        qgram_expr_free(d);
        qgram_expr_free(seed);
        qgram_grammar_free(g);
    }
}

#[test]
fn evaluate_matches_eulerian_values() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(qgram_grammar_from_catalog(cstr("G_maj").as_ptr(), &mut g), QgramStatus::Ok);
        let mut a = ptr::null_mut();
        assert_eq!(qgram_expr_parse(cstr("x[0]").as_ptr(), &mut a), QgramStatus::Ok);
        let mut d = ptr::null_mut();
        assert_eq!(qgram_derive_n(g, a, 2, &mut d), QgramStatus::Ok);
        let mut p = ptr::null_mut();
        assert_eq!(qgram_evaluate(g, d, &mut p), QgramStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(qgram_poly_to_string(p, &mut s), QgramStatus::Ok);
        // 12 contributes x^2*y, 21 has one descent at position 1.
        let want: qgram::qpoly::QPoly = "x^2*y + q*x*y^2".parse().unwrap();
        assert_eq!(take_string(s), want.to_string());
        qgram_poly_free(p);
        qgram_expr_free(d);
        qgram_expr_free(a);
        qgram_grammar_free(g);
    }
}

#[test]
fn parsed_grammar_and_json_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        let text = "grammar G; masters x; order KSO; rule x[j] -> q^j*x[j+1]; seed x[0];";
        assert_eq!(qgram_grammar_parse(cstr(text).as_ptr(), &mut g), QgramStatus::Ok);
        let mut seed = ptr::null_mut();
        assert_eq!(qgram_grammar_seed(g, &mut seed), QgramStatus::Ok);
        let mut d = ptr::null_mut();
        assert_eq!(qgram_derive_n(g, seed, 3, &mut d), QgramStatus::Ok);
        let mut j = ptr::null_mut();
        assert_eq!(qgram_expr_to_json(d, &mut j), QgramStatus::Ok);
        let json = take_string(j);
        let mut back = ptr::null_mut();
        assert_eq!(qgram_expr_from_json(cstr(&json).as_ptr(), &mut back), QgramStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(qgram_expr_to_string(back, &mut s), QgramStatus::Ok);
        assert_eq!(take_string(s), "q^3*x[3]");
        let mut printed = ptr::null_mut();
        assert_eq!(qgram_grammar_to_string(g, &mut printed), QgramStatus::Ok);
        assert!(take_string(printed).contains("rule x[j] -> q^j*x[j+1];"));
        for p in [seed, d, back] {
            qgram_expr_free(p);
        }
        qgram_grammar_free(g);
    }
}

#[test]
fn series_json() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(qgram_grammar_from_catalog(cstr("G_inv").as_ptr(), &mut g), QgramStatus::Ok);
        let mut seed = ptr::null_mut();
        assert_eq!(qgram_grammar_seed(g, &mut seed), QgramStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(qgram_series_json(g, seed, 3, &mut s), QgramStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(v["order"], 3);
        assert_eq!(v["coeffs"].as_array().unwrap().len(), 4);
        qgram_expr_free(seed);
        qgram_grammar_free(g);
    }
}

#[test]
fn errors_set_status_and_message() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(qgram_grammar_from_catalog(cstr("G_nope").as_ptr(), &mut g), QgramStatus::UnknownId);
        assert!(g.is_null());
        assert!(last_error().contains("G_nope"));
        assert_eq!(qgram_grammar_from_catalog(ptr::null(), &mut g), QgramStatus::NullPointer);
        let mut a = ptr::null_mut();
        assert_eq!(qgram_expr_parse(cstr("x[0").as_ptr(), &mut a), QgramStatus::ParseError);
        assert!(last_error().contains("syntax error"));
        let bad = [0xffu8, 0];
        assert_eq!(qgram_expr_parse(bad.as_ptr().cast(), &mut a), QgramStatus::InvalidUtf8);
        assert_eq!(qgram_expr_parse(cstr("x[0]").as_ptr(), ptr::null_mut()), QgramStatus::NullPointer);
        let mut t = 0u64;
        assert_eq!(qgram_term_count(cstr("G_tan").as_ptr(), 0, &mut t), QgramStatus::InvalidArgument);
        qgram_grammar_free(ptr::null_mut());
        qgram_expr_free(ptr::null_mut());
        qgram_poly_free(ptr::null_mut());
        qgram_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/qgram.h");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct QgramExpr QgramExpr;"));
}
