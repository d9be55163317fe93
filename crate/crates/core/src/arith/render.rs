//! Decimal rendering that prints only digits certified by an enclosure.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::Interval;
use super::{certify, ExtReal};

fn pow10(k: u32) -> BigInt {
    BigInt::from(10).pow(k)
}

/// `floor(log10 |x|)` for nonzero `x`.
fn decimal_exponent(x: &BigRational) -> i64 {
    let x = x.abs();
    let est = ((x.numer().bits() as f64 - x.denom().bits() as f64) * std::f64::consts::LOG10_2) as i64;
    let mut e = est;
    loop {
        if x < scale(e) {
            e -= 1;
        } else if x >= scale(e + 1) {
            e += 1;
        } else {
            return e;
        }
    }
}

fn scale(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(pow10(e as u32))
    } else {
        BigRational::new(BigInt::one(), pow10((-e) as u32))
    }
}

/// Round to `n` significant digits, ties away from zero: `x ≈ m·10^k`.
fn round_sig(x: &BigRational, n: usize) -> (BigInt, i64) {
    if x.is_zero() {
        return (BigInt::zero(), 0);
    }
    let mut k = decimal_exponent(x) - (n as i64 - 1);
    let y = x / scale(k);
    let twice: BigInt = y.numer() * 2;
    let den: BigInt = y.denom() * 2;
    let m_abs = (twice.abs() + y.denom()).div_floor(&den);
    let mut m = if x.is_negative() { -m_abs } else { m_abs };
    if m.abs() == pow10(n as u32) {
        m /= 10;
        k += 1;
    }
    (m, k)
}

fn format_scaled(m: &BigInt, k: i64) -> String {
    let neg = m.is_negative();
    let digits = m.abs().to_string();
    let len = digits.len() as i64;
    let lead = len - 1 + k;
    let mut body = if !(-7..=20).contains(&lead) {
        let (h, t) = digits.split_at(1);
        let t = t.trim_end_matches('0');
        if t.is_empty() {
            format!("{h}e{lead}")
        } else {
            format!("{h}.{t}e{lead}")
        }
    } else if k >= 0 {
        format!("{digits}{}", "0".repeat(k as usize))
    } else {
        let frac = (-k) as usize;
        let s = if digits.len() > frac {
            let (i, f) = digits.split_at(digits.len() - frac);
            format!("{i}.{f}")
        } else {
            format!("0.{}{digits}", "0".repeat(frac - digits.len()))
        };
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    };
    if neg {
        body.insert(0, '-');
    }
    body
}

/// Renders the largest number of significant digits (at most `max_digits`)
/// on which both endpoints of the enclosure agree after rounding to nearest.
/// An enclosure that certifies no digit at all renders as `~` followed by
/// its midpoint.
pub fn render_interval(iv: &Interval, max_digits: usize) -> String {
    let lo = iv.lo().to_rational();
    let hi = iv.hi().to_rational();
    if lo == hi {
        return render_rational(&lo, max_digits);
    }
    for n in (1..=max_digits.max(1)).rev() {
        let a = round_sig(&lo, n);
        if a == round_sig(&hi, n) {
            return format_scaled(&a.0, a.1);
        }
    }
    let mid = iv.midpoint().to_rational();
    let (m, k) = round_sig(&mid, 1);
    format!("~{}", format_scaled(&m, k))
}

fn render_rational(q: &BigRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let (m, k) = round_sig(q, digits.max(1));
    format_scaled(&m, k)
}

/// Renders `x` with `digits` significant digits, refining certified values
/// until every printed digit is certified. If refinement is unavailable the
/// digits the current enclosure certifies are printed.
pub fn render_decimal(x: &ExtReal, digits: usize) -> String {
    let digits = digits.max(1);
    match x {
        ExtReal::Infinity => "inf".into(),
        ExtReal::Rational(r) => render_rational(r.as_big(), digits),
        _ => {
            let Some(c) = certify(x) else {
                return "inf".into();
            };
            let mut bits = (digits as f64 * 3.33) as u32 + 24;
            let mut best = c.enclosure().cloned();
            if let Some(iv) = &best {
                if certifies(iv, digits) {
                    return render_interval(iv, digits);
                }
            }
            for _ in 0..6 {
                match c.refine_to(bits) {
                    Ok(r) => {
                        if let Some(iv) = r.enclosure() {
                            if certifies(iv, digits) {
                                return render_interval(iv, digits);
                            }
                            best = Some(iv.clone());
                        }
                    }
                    Err(_) => break,
                }
                bits *= 2;
            }
            match best {
                Some(iv) => render_interval(&iv, digits),
                None => "?".into(),
            }
        }
    }
}

fn certifies(iv: &Interval, digits: usize) -> bool {
    let lo = iv.lo().to_rational();
    let hi = iv.hi().to_rational();
    lo == hi || round_sig(&lo, digits) == round_sig(&hi, digits)
}
