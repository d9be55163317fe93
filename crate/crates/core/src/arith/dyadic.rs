//! Binary floating values `mant · 2^exp` and outward-rounded intervals over them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.trim();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    fn trim(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        self.mant.sign().cmp(&num_bigint::Sign::NoSign)
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        self.add(&Dyadic::from_int(k.clone()))
    }

    /// Multiplies by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        Dyadic::new(self.mant.clone(), self.exp + k)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            // arithmetic shift rounds toward -inf
            &self.mant >> (-self.exp) as usize
        }
    }

    /// Position of the leading bit: `2^(m-1) <= |x| < 2^m`; 0 maps to `i64::MIN`.
    pub fn magnitude(&self) -> i64 {
        if self.mant.is_zero() {
            i64::MIN
        } else {
            self.mant.bits() as i64 + self.exp
        }
    }

    /// Rounds `num/den` to a dyadic with `frac_bits` bits after the binary point.
    pub fn round_ratio(num: &BigInt, den: &BigInt, frac_bits: i64, mode: Rounding) -> Self {
        debug_assert!(!den.is_zero());
        let (mut n, mut d) = (num.clone(), den.clone());
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        if frac_bits >= 0 {
            n <<= frac_bits as usize;
        } else {
            d <<= (-frac_bits) as usize;
        }
        let m = match mode {
            Rounding::Floor => n.div_floor(&d),
            Rounding::Ceil => -((-n).div_floor(&d)),
        };
        Dyadic::new(m, -frac_bits)
    }

    /// Rounds a rational to `prec` significant bits in the given direction.
    pub fn round_rational(q: &BigRational, prec: u32, mode: Rounding) -> Self {
        if q.is_zero() {
            return Dyadic::zero();
        }
        let mag = q.numer().bits() as i64 - q.denom().bits() as i64;
        let frac_bits = prec as i64 - mag;
        Dyadic::round_ratio(q.numer(), q.denom(), frac_bits, mode)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        // keep 64 significant bits before converting
        let shift = (bits - 64).max(0);
        let m = (&self.mant >> shift as usize).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi((self.exp + shift).clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    /// Tightest dyadic enclosure of `q` with `frac_bits` fractional bits.
    pub fn around_rational(q: &BigRational, frac_bits: i64) -> Self {
        Interval {
            lo: Dyadic::round_ratio(q.numer(), q.denom(), frac_bits, Rounding::Floor),
            hi: Dyadic::round_ratio(q.numer(), q.denom(), frac_bits, Rounding::Ceil),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).shl(-1)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Smallest absolute value over the interval.
    pub fn mig(&self) -> Dyadic {
        if self.lo.signum() != Ordering::Less {
            self.lo.clone()
        } else if self.hi.signum() != Ordering::Greater {
            self.hi.abs()
        } else {
            Dyadic::zero()
        }
    }

    /// Largest absolute value over the interval.
    pub fn mag(&self) -> Dyadic {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        Interval {
            lo: self.lo.add_int(k),
            hi: self.hi.add_int(k),
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        (lo <= hi).then(|| Interval {
            lo: lo.clone(),
            hi: hi.clone(),
        })
    }

    /// Position relative to an integer: `Some(ordering)` when the whole interval
    /// lies on one side (or is exactly the point), `None` when it straddles.
    pub fn cmp_int(&self, n: &BigInt) -> Option<Ordering> {
        let n = Dyadic::from_int(n.clone());
        if self.hi < n {
            Some(Ordering::Less)
        } else if self.lo > n {
            Some(Ordering::Greater)
        } else if self.lo == n && self.hi == n {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rounding_brackets_the_value() {
        for (n, d) in [(1, 3), (-1, 3), (22, 7), (-355, 113), (5, 1)] {
            let x = q(n, d);
            let lo = Dyadic::round_rational(&x, 40, Rounding::Floor);
            let hi = Dyadic::round_rational(&x, 40, Rounding::Ceil);
            assert!(lo.to_rational() <= x && x <= hi.to_rational());
            assert!(hi.sub(&lo).to_rational() <= q(1, 1 << 37));
        }
    }

    #[test]
    fn exact_dyadics_round_to_themselves() {
        let x = q(3, 8);
        let lo = Dyadic::round_rational(&x, 10, Rounding::Floor);
        let hi = Dyadic::round_rational(&x, 10, Rounding::Ceil);
        assert_eq!(lo, hi);
        assert_eq!(lo.to_rational(), x);
    }

    #[test]
    fn floor_of_negative() {
        let x = Dyadic::round_rational(&q(-7, 2), 8, Rounding::Floor);
        assert_eq!(x.floor(), BigInt::from(-4));
        assert_eq!(Dyadic::from_int(5).floor(), BigInt::from(5));
    }

    #[test]
    fn interval_comparisons() {
        let iv = Interval::around_rational(&q(99, 100), 3);
        assert_eq!(iv.cmp_int(&BigInt::from(1)), None);
        let iv = Interval::around_rational(&q(99, 100), 20);
        assert_eq!(iv.cmp_int(&BigInt::from(1)), Some(Ordering::Less));
        assert_eq!(
            Interval::point(Dyadic::zero()).cmp_int(&BigInt::zero()),
            Some(Ordering::Equal)
        );
    }
}
