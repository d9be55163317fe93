//! C interface to `fgamma`.
//!
//! Values and orbits are opaque handles freed with their `_free` function.
//! Every fallible call returns an `FgStatus`; on failure the message is
//! available from `fg_last_error` on the same thread. Strings returned
//! through out-parameters are owned by the caller and released with
//! `fg_string_free`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fgamma::arith::{parse_literal, render_decimal, ExtReal};
use fgamma::codec::{cf_extract, cf_to_itinerary, itinerary_to_cf, periodic_cf_to_surd, CfTail, MinusCF};
use fgamma::error::Error;
use fgamma::map::{orbit, OrbitConfig, OrbitStep};
use fgamma::shift::{itinerary, Itinerary};
use libc::c_char;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FgStatus {
    Ok = 0,
    /// A required pointer was null.
    NullPointer = 1,
    Parse = 2,
    InvalidArgument = 3,
    Inadmissible = 4,
    /// A symbol could not be certified within the precision budget.
    Unresolvable = 5,
    /// Any other library error.
    Failed = 6,
    Panic = 7,
}

/// An extended real: rational, quadratic surd, certified real or infinity.
pub struct FgValue(ExtReal);

/// A computed orbit.
pub struct FgOrbit(Vec<OrbitStep>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FgStatus {
    match e {
        Error::Parse { .. } => FgStatus::Parse,
        Error::InvalidArgument(_) | Error::InvalidPrecision(_) | Error::NotQuadraticIrrational => {
            FgStatus::InvalidArgument
        }
        Error::Inadmissible { .. }
        | Error::InvalidItinerary(_)
        | Error::InvalidCf(_)
        | Error::InconsistentCf { .. }
        | Error::UnboundedRun => FgStatus::Inadmissible,
        Error::BoundaryUnresolvable { .. } | Error::PrecisionUnavailable { .. } => FgStatus::Unresolvable,
        _ => FgStatus::Failed,
    }
}

/// Runs `f`, recording its error or panic.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> FgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FgStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            FgStatus::Panic
        }
    }
}

fn null_arg(name: &str) -> Error {
    Error::InvalidArgument(format!("{name} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, Error> {
    if s.is_null() {
        return Err(null_arg(name));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Error::InvalidArgument(format!("{name} is not valid UTF-8")))
}

unsafe fn write_str(out: *mut *mut c_char, s: String) {
    *out = CString::new(s).map_or(ptr::null_mut(), CString::into_raw);
}

fn config(bits: u32) -> OrbitConfig {
    OrbitConfig::with_bits(bits)
}

/// Fixes up the status for null-pointer arguments, which are reported
/// separately from library errors.
fn check(status: FgStatus, nulls: bool) -> FgStatus {
    if nulls {
        FgStatus::NullPointer
    } else {
        status
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a number literal such as `sqrt(2)`, `9/7`, `cbrt(3)` or `pi`.
///
/// # Safety
/// `literal` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fg_value_parse(literal: *const c_char, out: *mut *mut FgValue) -> FgStatus {
    let nulls = out.is_null() || literal.is_null();
    let st = guard(|| {
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let s = read_str(literal, "literal")?;
        let v = parse_literal(s)?;
        *out = Box::into_raw(Box::new(FgValue(v)));
        Ok(())
    });
    check(st, nulls)
}

/// # Safety
/// `v` must be null or a handle from `fg_value_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fg_value_free(v: *mut FgValue) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Exact form of the value (`9/7`, `(1+sqrt(5))/2`, `inf`) or the name of
/// a certified constant.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fg_value_to_string(v: *const FgValue, out: *mut *mut c_char) -> FgStatus {
    let nulls = v.is_null() || out.is_null();
    let st = guard(|| {
        let v = v.as_ref().ok_or_else(|| null_arg("value"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        write_str(out, v.0.to_string());
        Ok(())
    });
    check(st, nulls)
}

/// Steps `0..=steps` of the orbit at `bits` bits of working precision.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fg_orbit(v: *const FgValue, steps: usize, bits: u32, out: *mut *mut FgOrbit) -> FgStatus {
    let nulls = v.is_null() || out.is_null();
    let st = guard(|| {
        let v = v.as_ref().ok_or_else(|| null_arg("value"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let rows = orbit(&v.0, steps, &config(bits))?;
        *out = Box::into_raw(Box::new(FgOrbit(rows)));
        Ok(())
    });
    check(st, nulls)
}

/// # Safety
/// `o` must be null or a handle from `fg_orbit` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fg_orbit_free(o: *mut FgOrbit) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Number of rows, or 0 for a null handle.
///
/// # Safety
/// `o` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fg_orbit_len(o: *const FgOrbit) -> usize {
    o.as_ref().map_or(0, |o| o.0.len())
}

/// Symbol digit (0, 2 or 4) of row `i`, or -1 when out of range.
///
/// # Safety
/// `o` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fg_orbit_symbol(o: *const FgOrbit, i: usize) -> i32 {
    o.as_ref()
        .and_then(|o| o.0.get(i))
        .map_or(-1, |r| r.symbol.digit().to_digit(10).unwrap_or(0) as i32)
}

/// Decimal value of row `i` with `digits` significant digits; only certified
/// digits are printed.
///
/// # Safety
/// `o` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fg_orbit_value(o: *const FgOrbit, i: usize, digits: usize, out: *mut *mut c_char) -> FgStatus {
    let nulls = o.is_null() || out.is_null();
    let st = guard(|| {
        let o = o.as_ref().ok_or_else(|| null_arg("orbit"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        let row = o
            .0
            .get(i)
            .ok_or_else(|| Error::InvalidArgument(format!("row {i} out of range")))?;
        write_str(out, render_decimal(&row.value, digits));
        Ok(())
    });
    check(st, nulls)
}

/// The first `len` itinerary symbols, in the text form `402204...`,
/// `40222044` + `0...`, or `(402204)*`.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fg_itinerary(v: *const FgValue, len: usize, bits: u32, out: *mut *mut c_char) -> FgStatus {
    let nulls = v.is_null() || out.is_null();
    let st = guard(|| {
        let v = v.as_ref().ok_or_else(|| null_arg("value"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        write_str(out, itinerary(&v.0, len, &config(bits))?.to_string());
        Ok(())
    });
    check(st, nulls)
}

/// At most `terms` minus continued fraction terms, as `[a0; a1 : ...]`.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fg_cf(v: *const FgValue, terms: usize, bits: u32, out: *mut *mut c_char) -> FgStatus {
    let nulls = v.is_null() || out.is_null();
    let st = guard(|| {
        let v = v.as_ref().ok_or_else(|| null_arg("value"))?;
        if out.is_null() {
            return Err(null_arg("out"));
        }
        write_str(out, cf_extract(&v.0, terms, &config(bits))?.prefix_string(terms));
        Ok(())
    });
    check(st, nulls)
}

/// Decodes an itinerary (`(402204)*`) or a continued fraction
/// (`[1; (-2 : 2)*]`). Writes the continued fraction and, when the input
/// determines one, the exact value; otherwise `*value_out` is null.
///
/// # Safety
/// `input` must be a NUL-terminated string; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn fg_decode(input: *const c_char, cf_out: *mut *mut c_char, value_out: *mut *mut c_char) -> FgStatus {
    let nulls = input.is_null() || cf_out.is_null() || value_out.is_null();
    let st = guard(|| {
        let s = read_str(input, "input")?;
        if cf_out.is_null() || value_out.is_null() {
            return Err(null_arg("out"));
        }
        let cf: MinusCF = if s.trim_start().starts_with('[') {
            let cf: MinusCF = s.parse()?;
            cf_to_itinerary(&cf)?;
            cf
        } else {
            let it: Itinerary = s.parse()?;
            if let Some((position, block)) = it.admissibility().violation {
                return Err(Error::Inadmissible { position, block });
            }
            itinerary_to_cf(&it)?
        };
        let value = match cf.tail() {
            CfTail::Periodic(_) => Some(periodic_cf_to_surd(&cf)?.to_string()),
            CfTail::Finite => {
                let conv = fgamma::codec::evaluate(&cf, cf.terms().len())?;
                Some(conv.last().and_then(|c| c.value()).map_or("inf".into(), |q| q.to_string()))
            }
            CfTail::Truncated => None,
        };
        write_str(cf_out, cf.to_string());
        match value {
            Some(v) => write_str(value_out, v),
            None => *value_out = ptr::null_mut(),
        }
        Ok(())
    });
    check(st, nulls)
}
