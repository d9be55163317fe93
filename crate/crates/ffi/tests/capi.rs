use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use fgamma_ffi::*;
use libc::c_char;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    fg_string_free(s);
    out
}

unsafe fn value(lit: &str) -> *mut FgValue {
    let c = CString::new(lit).unwrap();
    let mut v = ptr::null_mut();
    assert_eq!(fg_value_parse(c.as_ptr(), &mut v), FgStatus::Ok);
    v
}

fn last_error() -> String {
    let p = fg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn orbit_of_nine_sevenths() {
    unsafe {
        let v = value("9/7");
        let mut o = ptr::null_mut();
        assert_eq!(fg_orbit(v, 10, 128, &mut o), FgStatus::Ok);
        assert_eq!(fg_orbit_len(o), 11);
        let syms: String = (0..11).map(|i| char::from(b'0' + fg_orbit_symbol(o, i) as u8)).collect();
        assert_eq!(syms, "40222044000");
        assert_eq!(fg_orbit_symbol(o, 11), -1);
        let mut s = ptr::null_mut();
        assert_eq!(fg_orbit_value(o, 1, 15, &mut s), FgStatus::Ok);
        assert_eq!(take(s), "0.285714285714286");
        assert_eq!(fg_orbit_value(o, 9, 15, &mut s), FgStatus::Ok);
        assert_eq!(take(s), "inf");
        fg_orbit_free(o);
        fg_value_free(v);
    }
}

#[test]
fn strings_for_cf_and_itinerary() {
    unsafe {
        let pi = value("pi");
        let mut s = ptr::null_mut();
        assert_eq!(fg_cf(pi, 5, 256, &mut s), FgStatus::Ok);
        assert_eq!(take(s), "[3; -7 : 15 : -1 : 292]");
        fg_value_free(pi);

        let r2 = value("sqrt(2)");
        assert_eq!(fg_itinerary(r2, 12, 256, &mut s), FgStatus::Ok);
        assert_eq!(take(s), "402204402204");
        assert_eq!(fg_value_to_string(r2, &mut s), FgStatus::Ok);
        assert_eq!(take(s), "sqrt(2)");
        fg_value_free(r2);
    }
}

#[test]
fn decode_both_forms() {
    unsafe {
        let (mut cf, mut val) = (ptr::null_mut(), ptr::null_mut());
        let it = CString::new("(402204)*").unwrap();
        assert_eq!(fg_decode(it.as_ptr(), &mut cf, &mut val), FgStatus::Ok);
        assert_eq!(take(cf), "[1; (-2 : 2)*]");
        assert_eq!(take(val), "sqrt(2)");

        let c = CString::new("[1; -3 : 2]").unwrap();
        assert_eq!(fg_decode(c.as_ptr(), &mut cf, &mut val), FgStatus::Ok);
        take(cf);
        assert_eq!(take(val), "9/7");

        let sample = CString::new("402220").unwrap();
        assert_eq!(fg_decode(sample.as_ptr(), &mut cf, &mut val), FgStatus::Ok);
        assert_eq!(take(cf), "[1; -3 : ...]");
        assert!(val.is_null());
    }
}

#[test]
fn errors_have_codes_and_messages() {
    unsafe {
        let bad = CString::new("sqrt(").unwrap();
        let mut v = ptr::null_mut();
        assert_eq!(fg_value_parse(bad.as_ptr(), &mut v), FgStatus::Parse);
        assert!(v.is_null());
        assert!(last_error().starts_with("parse error"));

        let (mut cf, mut val) = (ptr::null_mut(), ptr::null_mut());
        let it = CString::new("40(2204)*").unwrap();
        assert_eq!(fg_decode(it.as_ptr(), &mut cf, &mut val), FgStatus::Inadmissible);
        assert!(last_error().contains("42"));

        let x = value("2");
        let mut o = ptr::null_mut();
        assert_eq!(fg_orbit(x, 3, 8, &mut o), FgStatus::InvalidArgument);
        fg_value_free(x);

        assert_eq!(fg_value_parse(ptr::null(), &mut v), FgStatus::NullPointer);
        assert_eq!(fg_orbit(ptr::null(), 3, 64, &mut o), FgStatus::NullPointer);
        assert_eq!(fg_orbit_len(ptr::null()), 0);
        fg_value_free(ptr::null_mut());
        fg_orbit_free(ptr::null_mut());
        fg_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fgamma.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "typedef struct FgValue FgValue;",
        "typedef struct FgOrbit FgOrbit;",
        "FG_STATUS_OK = 0",
        "fg_value_parse(",
        "fg_orbit_value(",
        "fg_decode(",
        "fg_last_error(",
        "fg_string_free(",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
    // the header must also be valid C when a compiler is present
    if let Ok(st) = Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99"]).arg(&header).status() {
        assert!(st.success());
    }
}
