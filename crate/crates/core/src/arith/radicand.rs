//! Square-part extraction for radicands.

use num_bigint::BigInt;
use num_integer::Roots;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest radicand accepted. Trial division up to `TRIAL_LIMIT` leaves a
/// cofactor with at most two prime factors below this bound, so a perfect
/// square test finishes the factorisation.
pub const MAX_RADICAND: u64 = 1_000_000_000_000_000_000;
const TRIAL_LIMIT: u64 = 1_000_000;

/// Splits `d >= 0` as `d = s^2 * k` with `k` squarefree. Returns `(s, k)`.
pub fn square_split(d: &BigInt) -> Result<(BigInt, BigInt)> {
    if d.is_negative() {
        return Err(Error::UnsupportedRadicand(format!("{d} is negative")));
    }
    let n = d
        .to_u64()
        .filter(|n| *n <= MAX_RADICAND)
        .ok_or_else(|| Error::UnsupportedRadicand(format!("{d} exceeds {MAX_RADICAND}")))?;
    let (s, k) = split_u64(n);
    Ok((BigInt::from(s), BigInt::from(k)))
}

/// `square_split` of `(t - 2)(t + 2)`, splitting each factor on its own so
/// that products of two in-range factors are still handled.
pub fn split_trace_discriminant(t: &BigInt) -> Result<(BigInt, BigInt)> {
    let two = BigInt::from(2);
    let (s1, k1) = square_split_any(&(t - &two).abs())?;
    let (s2, k2) = square_split_any(&(t + &two).abs())?;
    let g = k1.gcd(&k2);
    Ok((s1 * s2 * &g, (k1 / &g) * (k2 / &g)))
}

/// Like `square_split`, but a large value is also accepted when trial
/// division leaves a perfect square.
fn square_split_any(d: &BigInt) -> Result<(BigInt, BigInt)> {
    if d.to_u64().is_some_and(|n| n <= MAX_RADICAND) {
        return square_split(d);
    }
    let mut m = d.clone();
    let mut square = BigInt::one();
    let mut kernel = BigInt::one();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && m.to_u64().map_or(true, |n| n > MAX_RADICAND) {
        let bp = BigInt::from(p);
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= &bp;
        }
        if e % 2 == 1 {
            kernel *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let (s, k) = if m.to_u64().is_some_and(|n| n <= MAX_RADICAND) {
        square_split(&m)?
    } else {
        let r = m.sqrt();
        if &r * &r != m {
            return Err(Error::UnsupportedRadicand(format!("{d} exceeds {MAX_RADICAND}")));
        }
        (r, BigInt::one())
    };
    // a cofactor that survived trial division shares no prime with `kernel`
    let g = kernel.gcd(&k);
    Ok((square * s * &g, (kernel / &g) * (k / &g)))
}

fn split_u64(mut m: u64) -> (u64, u64) {
    if m == 0 {
        return (0, 1);
    }
    let mut square = 1u64;
    let mut kernel = 1u64;
    let mut take = |m: &mut u64, p: u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= p;
        }
        if e % 2 == 1 {
            kernel *= p;
        }
    };
    take(&mut m, 2);
    let mut p = 3u64;
    while p <= TRIAL_LIMIT && p * p <= m {
        if m % p == 0 {
            take(&mut m, p);
        }
        p += 2;
    }
    if m > 1 {
        // Either prime, or (past the trial limit) p*q or p^2 with p, q > 10^6.
        let r = m.sqrt();
        if p > TRIAL_LIMIT && r * r == m {
            square *= r;
        } else {
            kernel *= m;
        }
    }
    (square, kernel)
}
