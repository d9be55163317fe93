use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Interval, Rounding};

/// Integer matrix `[[a, b], [c, d]]` acting by `x ↦ (a x + b)/(c x + d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MobiusMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl MobiusMatrix {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        MobiusMatrix {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        MobiusMatrix::new(1, 0, 0, 1)
    }

    /// `T^k: x ↦ x + k`.
    pub fn translation(k: impl Into<BigInt>) -> Self {
        MobiusMatrix::new(1, k, 0, 1)
    }

    /// `S: x ↦ -1/x`.
    pub fn inversion() -> Self {
        MobiusMatrix::new(0, -1, 1, 0)
    }

    /// `x ↦ k - 1/x`, one level of a minus continued fraction.
    pub fn cf_step(k: impl Into<BigInt>) -> Self {
        MobiusMatrix::new(k, -1, 1, 0)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn max_entry_bits(&self) -> u64 {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|x| x.bits())
            .max()
            .unwrap_or(0)
    }

    /// Image of a rational; `None` is the point at infinity.
    pub fn apply_rational(&self, x: &BigRational) -> Option<BigRational> {
        let num = x * &self.a + &self.b;
        let den = x * &self.c + &self.d;
        if den.is_zero() {
            None
        } else {
            Some(num / den)
        }
    }

    /// Image of infinity: `a/c`, or `None` (infinity) when `c = 0`.
    pub fn apply_infinity(&self) -> Option<BigRational> {
        if self.c.is_zero() {
            None
        } else {
            Some(BigRational::new(self.a.clone(), self.c.clone()))
        }
    }

    /// Outward-rounded image of an interval, `None` when the pole `-d/c`
    /// lies inside it (the image then contains infinity).
    pub fn apply_interval(&self, iv: &Interval, prec: u32) -> Option<Interval> {
        if self.c.is_zero() {
            // affine: (a x + b)/d
            let lo = self.endpoint(iv.lo(), prec);
            let hi = self.endpoint(iv.hi(), prec);
            return Some(order(lo, hi));
        }
        let den_lo = iv.lo().to_rational() * &self.c + &self.d;
        let den_hi = iv.hi().to_rational() * &self.c + &self.d;
        if den_lo.is_zero() || den_hi.is_zero() || den_lo.is_positive() != den_hi.is_positive() {
            return None;
        }
        let lo = self.endpoint(iv.lo(), prec);
        let hi = self.endpoint(iv.hi(), prec);
        // monotone away from the pole, so the endpoints bound the image
        Some(order(lo, hi))
    }

    fn endpoint(&self, x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
        let x = x.to_rational();
        let y = self
            .apply_rational(&x)
            .expect("pole excluded by caller");
        (
            Dyadic::round_rational(&y, prec, Rounding::Floor),
            Dyadic::round_rational(&y, prec, Rounding::Ceil),
        )
    }
}

fn order(a: (Dyadic, Dyadic), b: (Dyadic, Dyadic)) -> Interval {
    let lo = if a.0 < b.0 { a.0 } else { b.0 };
    let hi = if a.1 > b.1 { a.1 } else { b.1 };
    Interval::new(lo, hi)
}

impl Mul for &MobiusMatrix {
    type Output = MobiusMatrix;

    fn mul(self, rhs: &MobiusMatrix) -> MobiusMatrix {
        MobiusMatrix {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl Mul for MobiusMatrix {
    type Output = MobiusMatrix;

    fn mul(self, rhs: MobiusMatrix) -> MobiusMatrix {
        &self * &rhs
    }
}

impl Default for MobiusMatrix {
    fn default() -> Self {
        MobiusMatrix::identity()
    }
}

impl fmt::Display for MobiusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl MobiusMatrix {
    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_products_are_unimodular() {
        let m = MobiusMatrix::cf_step(-2) * MobiusMatrix::cf_step(2);
        assert_eq!(m, MobiusMatrix::new(-5, 2, 2, -1));
        assert!(m.is_unimodular());
        let t = MobiusMatrix::translation(3) * MobiusMatrix::inversion();
        assert_eq!(t.det(), BigInt::one());
    }

    #[test]
    fn interval_image_with_and_without_pole() {
        let s = MobiusMatrix::inversion();
        let iv = Interval::around_rational(&BigRational::new(2.into(), 7.into()), 30);
        let img = s.apply_interval(&iv, 60).unwrap();
        assert!(img.contains_rational(&BigRational::new((-7).into(), 2.into())));
        let straddle = Interval::new(Dyadic::from_int(-1), Dyadic::from_int(1));
        assert!(s.apply_interval(&straddle, 60).is_none());
    }
}
