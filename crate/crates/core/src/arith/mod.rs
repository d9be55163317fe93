//! Exact and certified number representations on the extended real line.
//!
//! The map only ever needs four things from a number: add an integer, take
//! `-1/x`, compare against a small integer, and (for exact values) a canonical
//! key for cycle detection. [`ExtReal`] provides exactly those over rationals,
//! quadratic surds, certified enclosures and the point at infinity.

mod certified;
mod dyadic;
mod literal;
mod mobius;
mod radicand;
mod rational;
mod render;
mod surd;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use certified::{CertifiedReal, EnclosureFn, DEFAULT_BITS};
pub use dyadic::{Dyadic, Interval, Rounding};
pub use literal::parse_literal;
pub use mobius::MobiusMatrix;
pub use radicand::{split_trace_discriminant, square_split, MAX_RADICAND};
pub use rational::Rational;
pub use render::{render_decimal, render_interval};
pub use surd::{surd_normalize, QuadraticSurd};

use crate::error::{Error, Result};

/// The three partition boundaries of the real line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    MinusOne,
    Zero,
    One,
}

impl Boundary {
    pub fn value(self) -> i64 {
        match self {
            Boundary::MinusOne => -1,
            Boundary::Zero => 0,
            Boundary::One => 1,
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Outcome of comparing a value against an integer. `Uncertain` only arises
/// for enclosures that straddle the integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Uncertain,
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

/// A point of the extended real line `ℝ ∪ {∞}`.
#[derive(Clone, Debug)]
pub enum ExtReal {
    Rational(Rational),
    Surd(QuadraticSurd),
    Certified(CertifiedReal),
    Infinity,
}

impl ExtReal {
    pub fn integer(n: impl Into<BigInt>) -> Self {
        ExtReal::Rational(Rational::from_integer(n))
    }

    pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        Ok(ExtReal::Rational(Rational::new(num, den)?))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExtReal::Certified(_))
    }

    /// Exact zero test; certified values are zero only when their enclosure is
    /// the point zero.
    pub fn is_zero(&self) -> bool {
        match self {
            ExtReal::Rational(r) => r.is_zero(),
            ExtReal::Surd(_) | ExtReal::Infinity => false,
            ExtReal::Certified(c) => c.is_exact_zero(),
        }
    }

    pub fn add_int(&self, k: &BigInt) -> ExtReal {
        match self {
            ExtReal::Rational(r) => ExtReal::Rational(r.add_int(k)),
            ExtReal::Surd(s) => ExtReal::Surd(s.add_int(k)),
            ExtReal::Certified(c) => ExtReal::Certified(c.add_int(k)),
            ExtReal::Infinity => ExtReal::Infinity,
        }
    }

    /// `-1/x` with `-1/0 = ∞` and `-1/∞ = 0`.
    pub fn neg_recip(&self) -> ExtReal {
        match self {
            ExtReal::Rational(r) => r
                .neg_recip()
                .map(ExtReal::Rational)
                .unwrap_or(ExtReal::Infinity),
            ExtReal::Surd(s) => ExtReal::Surd(s.neg_recip()),
            ExtReal::Certified(c) if c.is_exact_zero() => ExtReal::Infinity,
            ExtReal::Certified(c) => ExtReal::Certified(c.neg_recip()),
            ExtReal::Infinity => ExtReal::Rational(Rational::zero()),
        }
    }

    /// Image under an integer Möbius map.
    pub fn mobius(&self, m: &MobiusMatrix) -> ExtReal {
        match self {
            ExtReal::Rational(r) => m
                .apply_rational(r.as_big())
                .map(|q| ExtReal::Rational(q.into()))
                .unwrap_or(ExtReal::Infinity),
            ExtReal::Surd(s) => ExtReal::Surd(s.mobius(&m.a, &m.b, &m.c, &m.d)),
            ExtReal::Infinity => m
                .apply_infinity()
                .map(|q| ExtReal::Rational(q.into()))
                .unwrap_or(ExtReal::Infinity),
            ExtReal::Certified(c) => ExtReal::Certified(c.mobius(m)),
        }
    }

    /// Compares against an arbitrary integer. Infinity is greater than every
    /// integer.
    pub fn compare_int(&self, n: &BigInt) -> Comparison {
        match self {
            ExtReal::Rational(r) => r.as_big().cmp(&BigRational::from_integer(n.clone())).into(),
            ExtReal::Surd(s) => s.cmp_int(n).into(),
            ExtReal::Certified(c) => match c.enclosure().and_then(|iv| iv.cmp_int(n)) {
                Some(o) => o.into(),
                None => Comparison::Uncertain,
            },
            ExtReal::Infinity => Comparison::Greater,
        }
    }

    /// `floor(x)` when it is decided by the exact value or the enclosure.
    pub fn floor(&self) -> Option<BigInt> {
        match self {
            ExtReal::Rational(r) => Some(r.floor()),
            ExtReal::Surd(s) => Some(s.floor()),
            ExtReal::Certified(c) => {
                let iv = c.enclosure()?;
                let lo = iv.lo().floor();
                (lo == iv.hi().floor()).then_some(lo)
            }
            ExtReal::Infinity => None,
        }
    }

    /// Approximate value for display and plotting.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Infinity => f64::INFINITY,
            other => match certify(other) {
                Some(c) => match c.refine_to(64).ok().and_then(|c| c.enclosure().cloned()) {
                    Some(iv) => iv.midpoint().to_f64(),
                    None => f64::NAN,
                },
                None => f64::NAN,
            },
        }
    }
}

/// Certified view of a finite value; `None` for infinity.
pub fn certify(x: &ExtReal) -> Option<CertifiedReal> {
    match x {
        ExtReal::Rational(r) => Some(CertifiedReal::from_rational(r.as_big().clone())),
        ExtReal::Surd(s) => Some(CertifiedReal::from_surd(s)),
        ExtReal::Certified(c) => Some(c.clone()),
        ExtReal::Infinity => None,
    }
}

pub fn add_int(x: &ExtReal, k: impl Into<BigInt>) -> ExtReal {
    x.add_int(&k.into())
}

pub fn neg_recip(x: &ExtReal) -> ExtReal {
    x.neg_recip()
}

/// Trichotomy against one of the partition boundaries.
pub fn cmp_small(x: &ExtReal, n: Boundary) -> Comparison {
    x.compare_int(&BigInt::from(n.value()))
}

/// Canonical byte key of an exact value: equal values have equal keys.
pub fn state_key(x: &ExtReal) -> Result<Vec<u8>> {
    let key = match x {
        ExtReal::Rational(r) => format!("r:{}/{}", r.numer(), r.denom()),
        ExtReal::Surd(s) => format!("q:{},{},{},{}", s.p(), s.q(), s.r(), s.d()),
        ExtReal::Infinity => "inf".to_string(),
        ExtReal::Certified(_) => return Err(Error::NotExact),
    };
    Ok(key.into_bytes())
}

pub fn refine_to(x: &CertifiedReal, bits: u32) -> Result<CertifiedReal> {
    x.refine_to(bits)
}

impl PartialEq for ExtReal {
    /// Value equality for exact variants; certified values are never equal to
    /// anything, since equality of enclosures does not decide equality of reals.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExtReal::Rational(a), ExtReal::Rational(b)) => a == b,
            (ExtReal::Surd(a), ExtReal::Surd(b)) => a == b,
            (ExtReal::Infinity, ExtReal::Infinity) => true,
            _ => false,
        }
    }
}

impl fmt::Display for ExtReal {
    /// Exact values print as number literals; certified values print their
    /// base label and map.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Rational(r) => write!(f, "{r}"),
            ExtReal::Surd(s) => write!(f, "{s}"),
            ExtReal::Infinity => f.write_str("inf"),
            ExtReal::Certified(c) => {
                if c.map() == &MobiusMatrix::identity() {
                    f.write_str(c.label())
                } else {
                    let m = c.map();
                    write!(f, "({}*x{:+})/({}*x{:+}) at x={}", m.a, m.b, m.c, m.d, c.label())
                }
            }
        }
    }
}

impl From<Rational> for ExtReal {
    fn from(r: Rational) -> Self {
        ExtReal::Rational(r)
    }
}

impl From<QuadraticSurd> for ExtReal {
    fn from(s: QuadraticSurd) -> Self {
        ExtReal::Surd(s)
    }
}

impl From<CertifiedReal> for ExtReal {
    fn from(c: CertifiedReal) -> Self {
        ExtReal::Certified(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> ExtReal {
        surd_normalize(0, 1, 1, 2).unwrap()
    }

    #[test]
    fn add_int_examples() {
        let x = ExtReal::ratio(9, 7).unwrap();
        assert_eq!(add_int(&x, -1), ExtReal::ratio(2, 7).unwrap());
        assert_eq!(add_int(&sqrt2(), -1), surd_normalize(-1, 1, 1, 2).unwrap());
        assert_eq!(add_int(&ExtReal::Infinity, 5), ExtReal::Infinity);
    }

    #[test]
    fn neg_recip_examples() {
        assert_eq!(neg_recip(&ExtReal::integer(0)), ExtReal::Infinity);
        assert_eq!(neg_recip(&ExtReal::Infinity), ExtReal::integer(0));
        assert_eq!(
            neg_recip(&surd_normalize(-1, 1, 1, 2).unwrap()),
            surd_normalize(-1, -1, 1, 2).unwrap()
        );
        assert_eq!(
            neg_recip(&ExtReal::ratio(2, 7).unwrap()),
            ExtReal::ratio(-7, 2).unwrap()
        );
    }

    #[test]
    fn cmp_small_examples() {
        assert_eq!(cmp_small(&sqrt2(), Boundary::One), Comparison::Greater);
        assert_eq!(
            cmp_small(&surd_normalize(-1, 1, 1, 2).unwrap(), Boundary::Zero),
            Comparison::Greater
        );
        let straddle = CertifiedReal::from_bounds(
            Dyadic::round_rational(&BigRational::new(99.into(), 100.into()), 30, Rounding::Floor),
            Dyadic::round_rational(&BigRational::new(101.into(), 100.into()), 30, Rounding::Ceil),
        );
        assert_eq!(
            cmp_small(&ExtReal::Certified(straddle), Boundary::One),
            Comparison::Uncertain
        );
        assert_eq!(cmp_small(&ExtReal::Infinity, Boundary::MinusOne), Comparison::Greater);
        assert_eq!(cmp_small(&ExtReal::integer(-1), Boundary::MinusOne), Comparison::Equal);
    }

    #[test]
    fn state_keys() {
        let a = surd_normalize(-1, -1, 1, 2).unwrap();
        let b = surd_normalize(-2, -2, 2, 2).unwrap();
        assert_eq!(state_key(&a).unwrap(), state_key(&b).unwrap());
        let c = ExtReal::ratio(9, 7).unwrap();
        let d = ExtReal::ratio(18, 14).unwrap();
        assert_eq!(state_key(&c).unwrap(), state_key(&d).unwrap());
        let e = surd_normalize(1, 1, 2, 5).unwrap();
        let f = surd_normalize(1, 1, 3, 5).unwrap();
        assert_ne!(state_key(&e).unwrap(), state_key(&f).unwrap());
        assert_eq!(
            state_key(&ExtReal::Certified(CertifiedReal::pi())),
            Err(Error::NotExact)
        );
    }

    #[test]
    fn neg_recip_is_an_involution_through_infinity() {
        for x in [ExtReal::integer(0), ExtReal::Infinity, sqrt2(), ExtReal::ratio(-3, 5).unwrap()] {
            assert_eq!(neg_recip(&neg_recip(&x)), x);
        }
    }
}
