use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::radicand::square_split;
use super::rational::Rational;
use super::ExtReal;
use crate::error::{Error, Result};

/// Quadratic irrational `(p + q·√d) / r` in canonical form: `d` squarefree
/// and at least 2, `q ≠ 0`, `r > 0`, `gcd(p, q, r) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: BigInt,
}

/// Builds the canonical form of `(p + q·√d) / r`, collapsing to a rational
/// when `q = 0` or `d` is a perfect square.
pub fn surd_normalize(
    p: impl Into<BigInt>,
    q: impl Into<BigInt>,
    r: impl Into<BigInt>,
    d: impl Into<BigInt>,
) -> Result<ExtReal> {
    let (p, q, r, d) = (p.into(), q.into(), r.into(), d.into());
    if r.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if d.is_negative() {
        return Err(Error::UnsupportedRadicand(format!("{d} is negative")));
    }
    let (square, kernel) = square_split(&d)?;
    let q = q * square;
    if q.is_zero() || kernel.is_one() {
        return Ok(ExtReal::Rational(Rational::new(p + q, r)?));
    }
    Ok(ExtReal::Surd(QuadraticSurd::reduced(p, q, r, kernel)))
}

impl QuadraticSurd {
    /// Sign and gcd normalisation only; `d` must already be squarefree and
    /// `q`, `r` nonzero.
    pub(crate) fn reduced(mut p: BigInt, mut q: BigInt, mut r: BigInt, d: BigInt) -> Self {
        debug_assert!(!q.is_zero() && !r.is_zero());
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        QuadraticSurd { p, q, r, d }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        QuadraticSurd {
            p: &self.p + k * &self.r,
            q: self.q.clone(),
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    /// `-1/x = -r(p - q√d) / (p² - q²d)`. Never zero, so always defined.
    pub fn neg_recip(&self) -> Self {
        let norm = &self.p * &self.p - &self.q * &self.q * &self.d;
        QuadraticSurd::reduced(-&self.r * &self.p, &self.r * &self.q, norm, self.d.clone())
    }

    pub fn neg(&self) -> Self {
        QuadraticSurd {
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    /// The Galois conjugate `(p - q√d)/r`.
    pub fn conjugate(&self) -> Self {
        QuadraticSurd {
            p: self.p.clone(),
            q: -&self.q,
            r: self.r.clone(),
            d: self.d.clone(),
        }
    }

    /// Exact comparison against an integer by sign analysis of
    /// `(p - n·r) + q√d`.
    pub fn cmp_int(&self, n: &BigInt) -> Ordering {
        let a = &self.p - n * &self.r;
        sign_of_sum(&a, &self.q, &self.d)
    }

    pub fn floor(&self) -> BigInt {
        // √(q²d) is irrational, so floor((p ± √t)/r) = floor((p ± s)/r) with the
        // integer part s chosen on the correct side.
        let t = &self.q * &self.q * &self.d;
        let s: BigInt = t.sqrt();
        if self.q.is_positive() {
            (&self.p + s).div_floor(&self.r)
        } else {
            (&self.p - s - BigInt::one()).div_floor(&self.r)
        }
    }

    /// Image under `x ↦ (a x + b)/(c x + d)`; the denominator never vanishes on
    /// an irrational point.
    pub fn mobius(&self, a: &BigInt, b: &BigInt, c: &BigInt, dd: &BigInt) -> Self {
        // numerator (a p + b r) + a q √d, denominator (c p + dd r) + c q √d
        let n1 = a * &self.p + b * &self.r;
        let n2 = a * &self.q;
        let m1 = c * &self.p + dd * &self.r;
        let m2 = c * &self.q;
        // (n1 + n2√d)(m1 - m2√d) / (m1² - m2²d)
        let p = &n1 * &m1 - &n2 * &m2 * &self.d;
        let q = &n2 * &m1 - &n1 * &m2;
        let r = &m1 * &m1 - &m2 * &m2 * &self.d;
        QuadraticSurd::reduced(p, q, r, self.d.clone())
    }

    /// Coefficients `(A, B, C)` of the primitive integer polynomial
    /// `A x² + B x + C` with `A > 0` vanishing at this surd.
    pub fn minimal_polynomial(&self) -> (BigInt, BigInt, BigInt) {
        // r x - p = q√d  =>  r²x² - 2pr x + p² - q²d = 0
        let a = &self.r * &self.r;
        let b = BigInt::from(-2) * &self.p * &self.r;
        let c = &self.p * &self.p - &self.q * &self.q * &self.d;
        let g = a.gcd(&b).gcd(&c);
        (a / &g, b / &g, c / &g)
    }
}

/// Sign of `a + b√d` for squarefree `d ≥ 2` (never zero unless `a = b = 0`).
pub(crate) fn sign_of_sum(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign();
    let sb = b.sign();
    use num_bigint::Sign::*;
    match (sa, sb) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
        (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
        (Plus, Minus) => (a * a).cmp(&(b * b * d)),
        (Minus, Plus) => (b * b * d).cmp(&(a * a)),
    }
}

impl fmt::Display for QuadraticSurd {
    /// Literal form accepted by the number parser, e.g. `sqrt(2)`,
    /// `(1+sqrt(5))/2`, `-1-sqrt(2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = format!("sqrt({})", self.d);
        let radical = if self.q.is_one() {
            root
        } else if self.q == -BigInt::one() {
            format!("-{root}")
        } else {
            format!("{}*{root}", self.q)
        };
        let numerator = if self.p.is_zero() {
            radical
        } else if self.q.is_positive() {
            format!("{}+{radical}", self.p)
        } else {
            format!("{}{radical}", self.p)
        };
        if self.r.is_one() {
            f.write_str(&numerator)
        } else {
            write!(f, "({numerator})/{}", self.r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surd(p: i64, q: i64, r: i64, d: i64) -> QuadraticSurd {
        match surd_normalize(p, q, r, d).unwrap() {
            ExtReal::Surd(s) => s,
            other => panic!("expected surd, got {other:?}"),
        }
    }

    #[test]
    fn normalize_extracts_squares() {
        // (2 + 2√8)/2 = (2 + 4√2)/2 = 1 + 2√2; squaring check: (1+2√2)² = 9 + 4√2
        let s = surd(2, 2, 2, 8);
        assert_eq!((s.p(), s.q(), s.r(), s.d()), (&1.into(), &2.into(), &1.into(), &2.into()));
    }

    #[test]
    fn normalize_collapses_to_rational() {
        assert_eq!(
            surd_normalize(3, 0, 3, 5).unwrap(),
            ExtReal::Rational(Rational::from_integer(1))
        );
        assert_eq!(
            surd_normalize(1, 1, 1, 4).unwrap(),
            ExtReal::Rational(Rational::from_integer(3))
        );
    }

    #[test]
    fn normalize_errors() {
        assert_eq!(surd_normalize(1, 1, 0, 2), Err(Error::DivisionByZero));
        assert!(matches!(surd_normalize(1, 1, 1, -2), Err(Error::UnsupportedRadicand(_))));
    }

    #[test]
    fn negative_denominator_flips() {
        let s = surd(-2, -2, -2, 2);
        assert_eq!(s, surd(1, 1, 1, 2));
    }

    #[test]
    fn neg_recip_of_sqrt2_minus_one() {
        let s = surd(-1, 1, 1, 2);
        assert_eq!(s.neg_recip(), surd(-1, -1, 1, 2));
    }

    #[test]
    fn floor_and_compare() {
        assert_eq!(surd(0, 1, 1, 2).floor(), 1.into());
        assert_eq!(surd(0, -1, 1, 2).floor(), (-2).into());
        assert_eq!(surd(1, 1, 2, 5).floor(), 1.into());
        assert_eq!(surd(-1, 1, 1, 2).cmp_int(&0.into()), Ordering::Greater);
        assert_eq!(surd(0, 1, 1, 2).cmp_int(&1.into()), Ordering::Greater);
        assert_eq!(surd(0, 1, 1, 2).cmp_int(&2.into()), Ordering::Less);
    }

    #[test]
    fn display_literals() {
        assert_eq!(surd(0, 1, 1, 2).to_string(), "sqrt(2)");
        assert_eq!(surd(1, 1, 2, 5).to_string(), "(1+sqrt(5))/2");
        assert_eq!(surd(-1, -1, 1, 2).to_string(), "-1-sqrt(2)");
        assert_eq!(surd(3, -2, 7, 3).to_string(), "(3-2*sqrt(3))/7");
    }

    #[test]
    fn minimal_polynomial_of_golden_ratio() {
        let (a, b, c) = surd(1, 1, 2, 5).minimal_polynomial();
        assert_eq!((a, b, c), (1.into(), (-1).into(), (-1).into()));
    }
}
