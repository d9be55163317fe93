//! Certified reals: a refinable enclosure of a base constant seen through an
//! integer Möbius map.
//!
//! Every value produced by stepping the map is `M(base)` for an exact integer
//! matrix `M`, so refinement never accumulates rounding: the base is re-enclosed
//! at higher precision and pushed through `M` again.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Interval};
use super::mobius::MobiusMatrix;
use super::surd::QuadraticSurd;
use crate::error::{Error, Result};

/// Produces an enclosure of width at most `2^-bits` (absolute), or `None`.
pub type EnclosureFn = dyn Fn(u32) -> Option<Interval> + Send + Sync;

/// Initial precision of freshly constructed constants.
pub const DEFAULT_BITS: u32 = 64;
const MIN_BITS: u32 = 16;
const MAX_REFINE_ATTEMPTS: usize = 10;

enum Kind {
    Pi,
    E,
    Sqrt(BigUint),
    Cbrt(BigInt),
    Exact(BigRational),
    Custom(Box<EnclosureFn>),
}

struct Source {
    kind: Kind,
    label: String,
    // highest-precision enclosure computed so far
    cache: Mutex<Option<(u32, Interval)>>,
}

impl Source {
    fn new(kind: Kind, label: String) -> Arc<Self> {
        Arc::new(Source {
            kind,
            label,
            cache: Mutex::new(None),
        })
    }

    fn enclose(&self, bits: u32) -> Option<Interval> {
        if let Some((b, iv)) = self.cache.lock().unwrap().as_ref() {
            if *b >= bits {
                return Some(iv.clone());
            }
        }
        let iv = match &self.kind {
            Kind::Pi => Some(pi_enclosure(bits)),
            Kind::E => Some(e_enclosure(bits)),
            Kind::Sqrt(n) => Some(sqrt_enclosure(n, bits)),
            Kind::Cbrt(n) => Some(cbrt_enclosure(n, bits)),
            Kind::Exact(q) => Some(Interval::around_rational(q, bits as i64)),
            Kind::Custom(f) => f(bits),
        }?;
        if matches!(self.kind, Kind::Custom(_)) {
            return Some(iv);
        }
        let mut cache = self.cache.lock().unwrap();
        let iv = match cache.as_ref() {
            Some((_, old)) => iv.intersect(old).unwrap_or(iv),
            None => iv,
        };
        *cache = Some((bits, iv.clone()));
        Some(iv)
    }
}

/// Arbitrary-precision interval enclosure of a real number with the ability to
/// re-enclose it at any requested precision.
#[derive(Clone)]
pub struct CertifiedReal {
    source: Arc<Source>,
    map: MobiusMatrix,
    bits: u32,
    // `None` when the enclosure passes through infinity
    enclosure: Option<Interval>,
    // tightest enclosure found by any refinement of this value (shared by clones)
    best: Arc<Mutex<Option<(u32, Interval)>>>,
}

impl CertifiedReal {
    fn from_source(source: Arc<Source>, map: MobiusMatrix) -> Result<Self> {
        let base = source
            .enclose(DEFAULT_BITS)
            .ok_or(Error::PrecisionUnavailable { bits: DEFAULT_BITS })?;
        let enclosure = map.apply_interval(&base, DEFAULT_BITS + 32);
        Ok(CertifiedReal {
            source,
            map,
            bits: DEFAULT_BITS,
            enclosure,
            best: Arc::default(),
        })
    }

    fn builtin(kind: Kind, label: String) -> Self {
        CertifiedReal::from_source(Source::new(kind, label), MobiusMatrix::identity())
            .expect("built-in constants always enclose")
    }

    pub fn pi() -> Self {
        CertifiedReal::builtin(Kind::Pi, "pi".into())
    }

    pub fn e() -> Self {
        CertifiedReal::builtin(Kind::E, "e".into())
    }

    /// `√n`; exact when `n` is a perfect square.
    pub fn sqrt(n: impl Into<BigUint>) -> Self {
        let n = n.into();
        let r = n.sqrt();
        if &r * &r == n {
            return CertifiedReal::from_rational(BigRational::from_integer(r.into()));
        }
        let label = format!("sqrt({n})");
        CertifiedReal::builtin(Kind::Sqrt(n), label)
    }

    /// `∛n`; exact when `n` is a perfect cube.
    pub fn cbrt(n: impl Into<BigInt>) -> Self {
        let n = n.into();
        let r = n.cbrt();
        if &r * &r * &r == n {
            return CertifiedReal::from_rational(BigRational::from_integer(r));
        }
        let label = format!("cbrt({n})");
        CertifiedReal::builtin(Kind::Cbrt(n), label)
    }

    pub fn from_rational(q: BigRational) -> Self {
        let label = if q.is_integer() {
            q.numer().to_string()
        } else {
            format!("{}/{}", q.numer(), q.denom())
        };
        CertifiedReal::builtin(Kind::Exact(q), label)
    }

    /// Enclosure of an exact surd through its radicand: `(q·√d + p)/r`.
    pub fn from_surd(s: &QuadraticSurd) -> Self {
        let d = s.d().to_biguint().expect("radicand is positive");
        let source = Source::new(Kind::Sqrt(d), s.to_string());
        let map = MobiusMatrix::new(s.q().clone(), s.p().clone(), 0, s.r().clone());
        CertifiedReal::from_source(source, map).expect("built-in constants always enclose")
    }

    /// A value known only through a user-supplied enclosure generator. The
    /// generator must return enclosures containing the value for every
    /// precision it is asked for.
    pub fn from_fn(
        label: impl Into<String>,
        f: impl Fn(u32) -> Option<Interval> + Send + Sync + 'static,
    ) -> Result<Self> {
        CertifiedReal::from_source(
            Source::new(Kind::Custom(Box::new(f)), label.into()),
            MobiusMatrix::identity(),
        )
    }

    /// A fixed enclosure that cannot be refined.
    pub fn from_bounds(lo: Dyadic, hi: Dyadic) -> Self {
        let iv = Interval::new(lo, hi);
        let label = format!("{iv}");
        CertifiedReal::from_fn(label, move |_| Some(iv.clone())).expect("fixed bounds")
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn enclosure(&self) -> Option<&Interval> {
        self.enclosure.as_ref()
    }

    pub fn lo(&self) -> Option<&Dyadic> {
        self.enclosure.as_ref().map(|iv| iv.lo())
    }

    pub fn hi(&self) -> Option<&Dyadic> {
        self.enclosure.as_ref().map(|iv| iv.hi())
    }

    /// The integer map applied to the base constant.
    pub fn map(&self) -> &MobiusMatrix {
        &self.map
    }

    pub fn label(&self) -> &str {
        &self.source.label
    }

    /// True when the enclosure is the single point zero.
    pub fn is_exact_zero(&self) -> bool {
        matches!(&self.enclosure, Some(iv) if iv.is_point() && iv.lo().is_zero())
    }

    fn with_enclosure(&self, bits: u32, iv: Interval) -> Self {
        CertifiedReal {
            source: self.source.clone(),
            map: self.map.clone(),
            bits,
            enclosure: Some(iv),
            best: self.best.clone(),
        }
    }

    fn working_prec(&self) -> u32 {
        self.bits.max(DEFAULT_BITS) + 32
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        CertifiedReal {
            source: self.source.clone(),
            map: &MobiusMatrix::translation(k.clone()) * &self.map,
            bits: self.bits,
            enclosure: self.enclosure.as_ref().map(|iv| iv.add_int(k)),
            best: Arc::default(),
        }
    }

    /// `-1/x` on the enclosure; the caller handles the exact-zero case.
    pub fn neg_recip(&self) -> Self {
        let s = MobiusMatrix::inversion();
        CertifiedReal {
            source: self.source.clone(),
            map: &s * &self.map,
            bits: self.bits,
            enclosure: self
                .enclosure
                .as_ref()
                .and_then(|iv| s.apply_interval(iv, self.working_prec())),
            best: Arc::default(),
        }
    }

    pub fn mobius(&self, m: &MobiusMatrix) -> Self {
        CertifiedReal {
            source: self.source.clone(),
            map: m * &self.map,
            bits: self.bits,
            enclosure: self
                .enclosure
                .as_ref()
                .and_then(|iv| m.apply_interval(iv, self.working_prec())),
            best: Arc::default(),
        }
    }

    /// Enclosure of width at most `2^(1-bits)·max(1, |x|)`, nested inside the
    /// current one.
    pub fn refine_to(&self, bits: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::InvalidPrecision(bits));
        }
        if let Some(iv) = &self.enclosure {
            if meets_target(iv, bits) {
                return Ok(self.clone());
            }
        }
        let mut best = self.best.lock().unwrap();
        if let Some((b, iv)) = best.as_ref() {
            if meets_target(iv, bits) {
                return Ok(self.with_enclosure((*b).max(bits), iv.clone()));
            }
        }
        let mut src_bits = bits + 32 + 2 * self.map.max_entry_bits() as u32;
        let mut last_width: Option<Dyadic> = None;
        for _ in 0..MAX_REFINE_ATTEMPTS {
            let base = self
                .source
                .enclose(src_bits)
                .ok_or(Error::PrecisionUnavailable { bits })?;
            let base_width = base.width();
            if let Some(mut iv) = self.map.apply_interval(&base, src_bits + 32) {
                for known in [self.enclosure.as_ref(), best.as_ref().map(|(_, iv)| iv)]
                    .into_iter()
                    .flatten()
                {
                    iv = iv.intersect(known).unwrap_or(iv);
                }
                if meets_target(&iv, bits) {
                    *best = Some((bits, iv.clone()));
                    return Ok(self.with_enclosure(bits, iv));
                }
            }
            if last_width.as_ref() == Some(&base_width) {
                // the generator stopped improving
                break;
            }
            last_width = Some(base_width);
            src_bits = src_bits.saturating_mul(2);
        }
        Err(Error::PrecisionUnavailable { bits })
    }
}

fn meets_target(iv: &Interval, bits: u32) -> bool {
    let scale = {
        let m = iv.mig();
        if m > Dyadic::from_int(1) {
            m
        } else {
            Dyadic::from_int(1)
        }
    };
    iv.width() <= scale.shl(1 - bits as i64)
}

impl fmt::Debug for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CertifiedReal")
            .field("base", &self.source.label)
            .field("map", &self.map.to_string())
            .field("bits", &self.bits)
            .field("enclosure", &self.enclosure.as_ref().map(|iv| iv.to_string()))
            .finish()
    }
}

// --- constant generators --------------------------------------------------

fn fixed_interval(value: BigInt, err: BigInt, frac_bits: u32) -> Interval {
    Interval::new(
        Dyadic::new(&value - &err, -(frac_bits as i64)),
        Dyadic::new(value + err, -(frac_bits as i64)),
    )
}

/// `atan(1/k)` scaled by `2^frac_bits`, with a bound on the error in units.
fn atan_inv(k: u32, frac_bits: u32) -> (BigInt, BigInt) {
    let k2 = BigInt::from(k) * k;
    let mut power = (BigInt::one() << frac_bits as usize) / k;
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut j = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * j + 1);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &k2;
        j += 1;
        terms += 1;
    }
    // each term is off by less than two units; the tail is below one unit
    (sum, BigInt::from(2 * terms + 1))
}

fn pi_enclosure(bits: u32) -> Interval {
    let mut guard = 40;
    loop {
        let frac = bits + guard;
        let (a, ea) = atan_inv(5, frac);
        let (b, eb) = atan_inv(239, frac);
        let value = a * 16 - b * 4;
        let err: BigInt = ea * 16 + eb * 4;
        if err.bits() + 1 <= guard as u64 {
            return fixed_interval(value, err, frac);
        }
        guard += 16;
    }
}

fn e_enclosure(bits: u32) -> Interval {
    let mut guard = 40;
    loop {
        let frac = bits + guard;
        let mut term = BigInt::one() << frac as usize;
        let mut sum = BigInt::zero();
        let mut j = 1u64;
        while !term.is_zero() {
            sum += &term;
            term /= j;
            j += 1;
        }
        // truncated sum undershoots by less than 2 units per term plus a tail of 6
        let err = BigInt::from(2 * j + 6);
        if err.bits() + 1 <= guard as u64 {
            let lo = Dyadic::new(sum.clone(), -(frac as i64));
            let hi = Dyadic::new(sum + err, -(frac as i64));
            return Interval::new(lo, hi);
        }
        guard += 16;
    }
}

fn sqrt_enclosure(n: &BigUint, bits: u32) -> Interval {
    let s = (n << (2 * bits as usize)).sqrt();
    let s = BigInt::from(s);
    Interval::new(
        Dyadic::new(s.clone(), -(bits as i64)),
        Dyadic::new(s + 1, -(bits as i64)),
    )
}

fn cbrt_enclosure(n: &BigInt, bits: u32) -> Interval {
    let c = (n.abs() << (3 * bits as usize)).cbrt();
    let iv = Interval::new(
        Dyadic::new(c.clone(), -(bits as i64)),
        Dyadic::new(c + 1, -(bits as i64)),
    );
    if n.is_negative() {
        iv.neg()
    } else {
        iv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    use crate::arith::dyadic::Rounding;

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";
    const E_50: &str = "2.71828182845904523536028747135266249775724709369995";

    fn decimal(s: &str) -> BigRational {
        let (int, frac) = s.split_once('.').unwrap();
        let digits: BigInt = format!("{int}{frac}").parse().unwrap();
        BigRational::new(digits, BigInt::from(10).pow(frac.len() as u32))
    }

    fn within(iv: &Interval, reference: &BigRational, tol: &BigRational) -> bool {
        let lo = iv.lo().to_rational();
        let hi = iv.hi().to_rational();
        &lo - tol <= *reference && *reference <= &hi + tol
    }

    #[test]
    fn pi_matches_reference_digits() {
        let x = CertifiedReal::pi().refine_to(256).unwrap();
        let iv = x.enclosure().unwrap();
        let tol = BigRational::new(1.into(), BigInt::from(10).pow(50));
        assert!(within(iv, &decimal(PI_50), &tol));
        // width ≤ 2^-255 · 4
        let bound = Dyadic::new(BigInt::from(4), -255);
        assert!(iv.width() <= bound);
    }

    #[test]
    fn e_matches_reference_digits() {
        let x = CertifiedReal::e().refine_to(200).unwrap();
        let tol = BigRational::new(1.into(), BigInt::from(10).pow(50));
        assert!(within(x.enclosure().unwrap(), &decimal(E_50), &tol));
    }

    #[test]
    fn cube_root_of_two_contains_table_value() {
        let x = CertifiedReal::cbrt(2).refine_to(128).unwrap();
        let iv = x.enclosure().unwrap();
        let v = iv.midpoint().to_f64();
        assert!((v - 1.259_921_049_894_87).abs() < 1e-14);
        // cube of the endpoints brackets 2
        let lo = iv.lo().to_rational();
        let hi = iv.hi().to_rational();
        let two = BigRational::from_integer(2.into());
        assert!(&lo * &lo * &lo < two && two < &hi * &hi * &hi);
    }

    #[test]
    fn exact_zero_is_a_point() {
        let z = CertifiedReal::from_rational(BigRational::zero())
            .refine_to(1024)
            .unwrap();
        assert!(z.is_exact_zero());
    }

    #[test]
    fn refinement_is_nested() {
        let x = CertifiedReal::pi();
        let mut prev = x.refine_to(16).unwrap();
        for b in [32, 64, 100, 300, 700] {
            let next = prev.refine_to(b).unwrap();
            assert!(next.enclosure().unwrap().is_subset_of(prev.enclosure().unwrap()));
            prev = next;
        }
    }

    #[test]
    fn composed_values_refine_through_the_map() {
        // f²(√2) = -1 - √2 reached through T^-1 then S
        let x = CertifiedReal::sqrt(2u32)
            .add_int(&BigInt::from(-1))
            .neg_recip()
            .refine_to(200)
            .unwrap();
        let v = x.enclosure().unwrap().midpoint().to_f64();
        assert!((v + 1.0 + 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn precision_errors() {
        assert_eq!(
            CertifiedReal::pi().refine_to(8).unwrap_err(),
            Error::InvalidPrecision(8)
        );
        let fixed = CertifiedReal::from_bounds(
            Dyadic::round_rational(&BigRational::new(99.into(), 100.into()), 20, Rounding::Floor),
            Dyadic::round_rational(&BigRational::new(101.into(), 100.into()), 20, Rounding::Ceil),
        );
        assert!(matches!(
            fixed.refine_to(64),
            Err(Error::PrecisionUnavailable { .. })
        ));
        // a generator that gives up past 100 bits
        let failing = CertifiedReal::from_fn("flaky", |b| {
            (b < 100).then(|| {
                Interval::new(Dyadic::new(BigInt::one(), 0), Dyadic::new(BigInt::one(), 0).add(&Dyadic::new(BigInt::one(), -(b as i64))))
            })
        })
        .unwrap();
        assert_eq!(failing.refine_to(200).unwrap_err(), Error::PrecisionUnavailable { bits: 200 });
    }

    #[test]
    fn perfect_powers_are_exact() {
        assert!(CertifiedReal::sqrt(49u32).enclosure().unwrap().is_point());
        let c = CertifiedReal::cbrt(-27);
        assert_eq!(c.enclosure().unwrap().lo().to_f64().to_i64(), Some(-3));
    }
}
