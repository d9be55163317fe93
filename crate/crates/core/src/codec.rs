//! Minus continued fractions `a₀ − 1/(a₁ − 1/(a₂ − …))`: extraction from the
//! orbit, run-length coding to and from itineraries, evaluation by convergents
//! and exact solution of periodic expansions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{
    split_trace_discriminant, state_key, surd_normalize, Boundary, Dyadic, ExtReal, MobiusMatrix,
    QuadraticSurd,
};
use crate::error::{Error, Result};
use crate::map::{at_step, refine_until, OrbitConfig, Symbol};
use crate::shift::{Itinerary, Tail};

/// What follows the listed terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CfTail {
    /// The expansion ends; the value is rational.
    Finite,
    /// The listed terms repeat forever.
    Periodic(Vec<BigInt>),
    /// A prefix of a longer expansion.
    Truncated,
}

/// Terms `a₀, a₁, …` with `a_k ≠ 0` for `k ≥ 1`. Periodic tails are kept
/// primitive and absorb as many trailing terms (after `a₀`) as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinusCF {
    terms: Vec<BigInt>,
    tail: CfTail,
}

/// Convergent `p/q`; `q = 0` stands for infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn value(&self) -> Option<BigRational> {
        (!self.q.is_zero()).then(|| BigRational::new(self.p.clone(), self.q.clone()))
    }
}

impl fmt::Display for Convergent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}

fn primitive(w: &[BigInt]) -> Vec<BigInt> {
    let n = w.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| w[i] == w[i - p]) {
            return w[..p].to_vec();
        }
    }
    w.to_vec()
}

impl MinusCF {
    pub fn new(terms: Vec<BigInt>, tail: CfTail) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidCf("missing a0".into()));
        }
        if let Some(k) = terms.iter().skip(1).position(Zero::is_zero) {
            return Err(Error::InvalidCf(format!("term a{} is zero", k + 1)));
        }
        let tail = match tail {
            CfTail::Periodic(w) => {
                if w.is_empty() {
                    return Err(Error::InvalidCf("empty periodic tail".into()));
                }
                if w.iter().any(Zero::is_zero) {
                    return Err(Error::InvalidCf("zero term in periodic tail".into()));
                }
                CfTail::Periodic(primitive(&w))
            }
            other => other,
        };
        let mut cf = MinusCF { terms, tail };
        if let CfTail::Periodic(w) = &mut cf.tail {
            while cf.terms.len() > 1 && cf.terms.last() == w.last() {
                cf.terms.pop();
                w.rotate_right(1);
            }
        }
        Ok(cf)
    }

    pub fn from_ints(terms: &[i64], tail: CfTail) -> Result<Self> {
        MinusCF::new(terms.iter().map(|&t| BigInt::from(t)).collect(), tail)
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    pub fn tail(&self) -> &CfTail {
        &self.tail
    }

    /// Term `k`, expanding a periodic tail.
    pub fn term(&self, k: usize) -> Option<&BigInt> {
        if let Some(t) = self.terms.get(k) {
            return Some(t);
        }
        match &self.tail {
            CfTail::Periodic(w) => Some(&w[(k - self.terms.len()) % w.len()]),
            _ => None,
        }
    }

    /// Number of available terms, `None` when periodic.
    pub fn available(&self) -> Option<usize> {
        match self.tail {
            CfTail::Periodic(_) => None,
            _ => Some(self.terms.len()),
        }
    }

    /// The first `n` terms as `[a0; a1 : …]` without a tail marker.
    pub fn prefix_string(&self, n: usize) -> String {
        let terms: Vec<String> = (0..n).map_while(|k| self.term(k)).map(|t| t.to_string()).collect();
        match terms.split_first() {
            Some((a0, [])) => format!("[{a0}]"),
            Some((a0, rest)) => format!("[{a0}; {}]", rest.join(" : ")),
            None => "[]".into(),
        }
    }
}

impl fmt::Display for MinusCF {
    /// `[1; -3 : 2]`, `[1; (-2 : 2)*]`, and `[3; -7 : 15 : ...]` for a
    /// truncated prefix.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rest: Vec<String> = self.terms[1..].iter().map(|t| t.to_string()).collect();
        match &self.tail {
            CfTail::Finite => {}
            CfTail::Truncated => rest.push("...".into()),
            CfTail::Periodic(w) => {
                let w: Vec<String> = w.iter().map(|t| t.to_string()).collect();
                rest.push(format!("({})*", w.join(" : ")));
            }
        }
        if rest.is_empty() {
            write!(f, "[{}]", self.terms[0])
        } else {
            write!(f, "[{}; {}]", self.terms[0], rest.join(" : "))
        }
    }
}

impl FromStr for MinusCF {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        let inner = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::parse(0, body, "expected `[a0; a1 : ...]`"))?;
        let offset = s.find('[').unwrap_or(0) + 1;
        let (a0, rest) = match inner.split_once(';') {
            Some((a, r)) => (a, Some(r)),
            None => (inner, None),
        };
        let int = |tok: &str, at: usize| -> Result<BigInt> {
            let t = tok.trim();
            t.parse::<BigInt>()
                .map_err(|_| Error::parse(at, if t.is_empty() { "<empty>" } else { t }, "expected an integer"))
        };
        let mut terms = vec![int(a0, offset)?];
        let mut tail = CfTail::Finite;
        if let Some(rest) = rest {
            let rest_at = offset + a0.len() + 1;
            let (plain, periodic) = match rest.find('(') {
                Some(open) => {
                    let after = &rest[open + 1..];
                    let close = after
                        .find(')')
                        .ok_or_else(|| Error::parse(rest_at + open, "(", "unclosed periodic tail"))?;
                    let marker = after[close + 1..].trim();
                    if marker != "*" {
                        return Err(Error::parse(rest_at + open + close + 2, marker, "expected `*` closing the CF"));
                    }
                    let plain = rest[..open].trim_end();
                    let plain = plain
                        .strip_suffix(':')
                        .map(str::trim_end)
                        .or(if plain.is_empty() { Some("") } else { None })
                        .ok_or_else(|| Error::parse(rest_at + open, "(", "expected `:` before the periodic tail"))?;
                    (plain, Some((&after[..close], rest_at + open + 1)))
                }
                None => (rest, None),
            };
            if !plain.trim().is_empty() {
                let mut at = rest_at;
                for tok in plain.split(':') {
                    if tok.trim() == "..." {
                        tail = CfTail::Truncated;
                    } else if tail == CfTail::Truncated {
                        return Err(Error::parse(at, tok.trim(), "terms after `...`"));
                    } else {
                        terms.push(int(tok, at)?);
                    }
                    at += tok.len() + 1;
                }
            }
            if let Some((p, mut at)) = periodic {
                if tail == CfTail::Truncated {
                    return Err(Error::parse(at, "(", "periodic tail after `...`"));
                }
                let mut w = Vec::new();
                for tok in p.split(':') {
                    w.push(int(tok, at)?);
                    at += tok.len() + 1;
                }
                tail = CfTail::Periodic(w);
            }
        }
        MinusCF::new(terms, tail)
    }
}

/// Signed run length `trunc(x)` (0 on `(-1, 1)`), certified for enclosures.
fn run_length(x: &ExtReal, cfg: &OrbitConfig) -> Result<(BigInt, ExtReal)> {
    refine_until(x, cfg, |v| {
        let ExtReal::Certified(c) = v else {
            return Ok(trunc_exact(v));
        };
        let Some(iv) = c.enclosure() else {
            return Err(Boundary::Zero);
        };
        let zero = Dyadic::zero();
        if iv.lo() >= &zero {
            let lo = iv.lo().floor();
            if lo == iv.hi().floor() {
                Ok(lo)
            } else {
                Err(Boundary::One)
            }
        } else if iv.hi() <= &zero {
            let lo = iv.hi().neg().floor();
            if lo == iv.lo().neg().floor() {
                Ok(-lo)
            } else {
                Err(Boundary::MinusOne)
            }
        } else if iv.lo() > &Dyadic::from_int(-1) && iv.hi() < &Dyadic::from_int(1) {
            Ok(BigInt::zero())
        } else {
            Err(Boundary::Zero)
        }
    })
}

fn trunc_exact(x: &ExtReal) -> BigInt {
    let fl = x.floor().expect("finite exact value");
    if fl.is_negative() {
        // ceiling for negatives
        let neg = ExtReal::integer(fl.clone());
        if neg == *x {
            fl
        } else {
            fl + 1
        }
    } else {
        fl
    }
}

/// First `k_terms` terms of the minus continued fraction of `x`, read off the
/// orbit: each term is the signed length of a run of unit translations and
/// runs are separated by applications of `S`.
pub fn cf_extract(x: &ExtReal, k_terms: usize, cfg: &OrbitConfig) -> Result<MinusCF> {
    cfg.validate()?;
    if x.is_infinite() {
        return Err(Error::InvalidArgument("infinity has no continued fraction".into()));
    }
    if k_terms == 0 {
        return Err(Error::InvalidArgument("at least one term is required".into()));
    }
    let mut terms = Vec::new();
    let mut cur = x.clone();
    let mut step = 0usize;
    for index in 0..k_terms {
        if cur.is_infinite() {
            return MinusCF::new(terms, CfTail::Finite);
        }
        let (a, v) = run_length(&cur, cfg).map_err(|e| at_step(e, step))?;
        if a.abs() > BigInt::from(cfg.max_steps) {
            return Err(Error::TermBudgetExceeded {
                index,
                budget: cfg.max_steps,
            });
        }
        step += a.abs().to_usize().unwrap_or(usize::MAX) + 1;
        let rest = v.add_int(&-&a);
        terms.push(a);
        cur = rest.neg_recip();
    }
    let tail = if cur.is_infinite() {
        CfTail::Finite
    } else {
        CfTail::Truncated
    };
    MinusCF::new(terms, tail)
}

fn run_term(run: &[Symbol]) -> Result<BigInt> {
    let Some(&first) = run.first() else {
        return Ok(BigInt::zero());
    };
    if run.iter().any(|&s| s != first) {
        return Err(Error::InvalidItinerary("mixed run".into()));
    }
    let n = BigInt::from(run.len());
    Ok(if first == Symbol::S2 { -n } else { n })
}

/// Splits a word on zeros into run-length terms. Returns the terms of all
/// runs closed by a zero and the unterminated remainder.
fn runs(word: &[Symbol]) -> Result<(Vec<BigInt>, Vec<Symbol>)> {
    let mut terms = Vec::new();
    let mut run = Vec::new();
    for &s in word {
        if s == Symbol::S0 {
            terms.push(run_term(&run)?);
            run.clear();
        } else {
            run.push(s);
        }
    }
    Ok((terms, run))
}

/// Run-length decoding: a maximal run of `m` fours is the term `+m`, of `m`
/// twos the term `-m`; zeros separate runs and a leading zero gives `a₀ = 0`.
pub fn itinerary_to_cf(it: &Itinerary) -> Result<MinusCF> {
    let report = it.admissibility();
    if let Some((position, block)) = report.violation {
        return Err(Error::Inadmissible { position, block });
    }
    match it.tail() {
        Tail::Infinity => {
            let mut word = it.head().to_vec();
            word.push(Symbol::S0);
            let (terms, _) = runs(&word)?;
            MinusCF::new(terms, CfTail::Finite)
        }
        Tail::None => {
            let (terms, _) = runs(it.head())?;
            if terms.is_empty() {
                return Err(Error::InvalidItinerary(
                    "sample contains no complete run".into(),
                ));
            }
            MinusCF::new(terms, CfTail::Truncated)
        }
        Tail::Periodic(w) => {
            let Some(z) = w.iter().position(|&s| s == Symbol::S0) else {
                return Err(Error::UnboundedRun);
            };
            // unroll the tail so that the period starts right after a zero
            let mut head = it.head().to_vec();
            head.extend_from_slice(&w[..=z]);
            let mut period = w[z + 1..].to_vec();
            period.extend_from_slice(&w[..=z]);
            let (terms, rest) = runs(&head)?;
            debug_assert!(rest.is_empty());
            let (pterms, prest) = runs(&period)?;
            debug_assert!(prest.is_empty());
            MinusCF::new(terms, CfTail::Periodic(pterms))
        }
    }
}

fn push_run(out: &mut Vec<Symbol>, a: &BigInt) -> Result<()> {
    let n = a
        .abs()
        .to_usize()
        .filter(|&n| n <= 1 << 24)
        .ok_or_else(|| Error::InvalidCf(format!("term {a} is too large to expand")))?;
    let s = if a.is_negative() { Symbol::S2 } else { Symbol::S4 };
    out.extend(std::iter::repeat(s).take(n));
    out.push(Symbol::S0);
    Ok(())
}

/// Inverse of [`itinerary_to_cf`]. Fails when the expansion contains a
/// forbidden block, e.g. two consecutive terms of the same sign.
pub fn cf_to_itinerary(cf: &MinusCF) -> Result<Itinerary> {
    let mut head = Vec::new();
    for a in &cf.terms {
        push_run(&mut head, a)?;
    }
    let tail = match &cf.tail {
        CfTail::Finite => Tail::Infinity,
        CfTail::Truncated => Tail::None,
        CfTail::Periodic(w) => {
            let mut word = Vec::new();
            for a in w {
                push_run(&mut word, a)?;
            }
            Tail::Periodic(word)
        }
    };
    let it = Itinerary::new(head, tail);
    if let Some((position, block)) = it.admissibility().violation {
        return Err(Error::InconsistentCf { position, block });
    }
    Ok(it)
}

/// Convergents `p_k/q_k` for `k < n` from `p_k = a_k p_{k-1} - p_{k-2}`,
/// `q_k = a_k q_{k-1} - q_{k-2}` with `(p_{-1}, q_{-1}) = (1, 0)` and
/// `(p_{-2}, q_{-2}) = (0, -1)`. A zero denominator at depth `n - 1` is an error.
pub fn evaluate(cf: &MinusCF, n: usize) -> Result<Vec<Convergent>> {
    if n == 0 {
        return Err(Error::InvalidArgument("at least one term is required".into()));
    }
    if let Some(avail) = cf.available() {
        if n > avail {
            return Err(Error::InvalidArgument(format!(
                "requested {n} terms but only {avail} are available"
            )));
        }
    }
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigInt::zero(), -BigInt::one());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let a = cf.term(k).expect("term available");
        let p = a * &p1 - &p2;
        let q = a * &q1 - &q2;
        p2 = std::mem::replace(&mut p1, p.clone());
        q2 = std::mem::replace(&mut q1, q.clone());
        out.push(Convergent { p, q });
    }
    if out.last().is_some_and(|c| c.q.is_zero()) {
        return Err(Error::Pole { depth: n - 1 });
    }
    Ok(out)
}

/// Product of `[[a, -1], [1, 0]]` over the terms.
pub fn cf_matrix(terms: &[BigInt]) -> MobiusMatrix {
    terms
        .iter()
        .fold(MobiusMatrix::identity(), |m, a| m * MobiusMatrix::cf_step(a.clone()))
}

/// Exact value of a periodic expansion. The tail value `y` is a fixed point
/// of the period matrix `[[A, B], [C, D]]`, a root of `C y² + (D - A) y - B`;
/// the root is chosen by re-encoding it, then the head is folded back in.
pub fn periodic_cf_to_surd(cf: &MinusCF) -> Result<QuadraticSurd> {
    let CfTail::Periodic(period) = cf.tail() else {
        return Err(Error::InvalidArgument("continued fraction is not periodic".into()));
    };
    cf_to_itinerary(cf)?;
    let m = cf_matrix(period);
    debug_assert!(m.is_unimodular());
    let (a, b, c, d) = (&m.a, &m.b, &m.c, &m.d);
    let disc = (d - a) * (d - a) + BigInt::from(4) * b * c;
    if !disc.is_positive() {
        return Err(Error::NotHyperbolic);
    }
    if c.is_zero() {
        // the only finite fixed point is rational
        return Err(Error::InconsistentPeriodicCf);
    }
    let two_c = BigInt::from(2) * c;
    let head = cf_matrix(cf.terms());
    // det M = 1, so disc = (tr M)^2 - 4
    let (root, kernel) = split_trace_discriminant(&m.trace())?;
    for sign in [1, -1] {
        let y = surd_normalize(a - d, &root * sign, two_c.clone(), kernel.clone())?;
        let ExtReal::Surd(_) = y else {
            return Err(Error::InconsistentPeriodicCf);
        };
        if !reencodes(&y, period) {
            continue;
        }
        let x = y.mobius(&head);
        let ExtReal::Surd(s) = x else {
            return Err(Error::NotQuadraticIrrational);
        };
        let check = cf_extract(
            &ExtReal::Surd(s.clone()),
            cf.terms().len() + 2 * period.len(),
            &OrbitConfig::default(),
        )?;
        let expected = (0..cf.terms().len() + 2 * period.len()).all(|k| check.term(k) == cf.term(k));
        if expected {
            return Ok(s);
        }
    }
    Err(Error::InconsistentPeriodicCf)
}

/// True when the orbit of `y` has the run lengths `period` and returns to `y`.
fn reencodes(y: &ExtReal, period: &[BigInt]) -> bool {
    let mut cur = y.clone();
    for a in period {
        if cur.is_infinite() || trunc_exact(&cur) != *a {
            return false;
        }
        cur = cur.add_int(&-a).neg_recip();
    }
    matches!((state_key(&cur), state_key(y)), (Ok(k1), Ok(k2)) if k1 == k2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_literal;

    fn cf(s: &str) -> MinusCF {
        s.parse().unwrap()
    }

    fn lit(s: &str) -> ExtReal {
        parse_literal(s).unwrap()
    }

    fn it(s: &str) -> Itinerary {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip() {
        for s in ["[1; -3 : 2]", "[1; (-2 : 2)*]", "[3; -7 : 15 : ...]", "[5]", "[0; (-2 : 2)*]", "[2; -1 : (3 : -2)*]"] {
            assert_eq!(cf(s).to_string(), s);
        }
        assert_eq!(cf(" [ 1 ;-3:2 ] "), cf("[1; -3 : 2]"));
        assert_eq!(cf("[1; -2 : (2 : -2)*]"), cf("[1; (-2 : 2)*]"));
        assert_eq!(cf("[1; (-2 : 2 : -2 : 2)*]"), cf("[1; (-2 : 2)*]"));
        for bad in ["1; 2", "[1; x]", "[1; 0 : 2]", "[1; (2 : -2)]", "[]", "[1; (]"] {
            assert!(bad.parse::<MinusCF>().is_err(), "{bad}");
        }
    }

    #[test]
    fn extraction_examples() {
        let c = OrbitConfig::default();
        assert_eq!(cf_extract(&lit("9/7"), 5, &c).unwrap(), cf("[1; -3 : 2]"));
        assert_eq!(cf_extract(&lit("9/7"), 3, &c).unwrap(), cf("[1; -3 : 2]"));
        assert_eq!(cf_extract(&lit("pi"), 5, &c).unwrap(), cf("[3; -7 : 15 : -1 : 292 : ...]"));
        assert_eq!(cf_extract(&lit("cbrt(3)"), 4, &c).unwrap(), cf("[1; -2 : 3 : -1 : ...]"));
        assert_eq!(cf_extract(&lit("0"), 3, &c).unwrap(), cf("[0]"));
        assert_eq!(cf_extract(&lit("-5/2"), 3, &c).unwrap(), cf("[-2; 2]"));
        assert_eq!(cf_extract(&lit("sqrt(2)"), 5, &c).unwrap(), cf("[1; -2 : 2 : -2 : 2 : ...]"));
        let big = OrbitConfig {
            max_steps: 10,
            ..OrbitConfig::default()
        };
        assert!(matches!(
            cf_extract(&lit("100"), 2, &big),
            Err(Error::TermBudgetExceeded { index: 0, .. })
        ));
    }

    #[test]
    fn itinerary_codec_examples() {
        assert_eq!(itinerary_to_cf(&it("402220440...")).unwrap(), cf("[1; -3 : 2]"));
        assert_eq!(itinerary_to_cf(&it("(440220)*")).unwrap(), cf("[2; (-2 : 2)*]"));
        assert_eq!(itinerary_to_cf(&it("(022044)*")).unwrap(), cf("[0; (-2 : 2)*]"));
        assert_eq!(cf_to_itinerary(&cf("[1; -3 : 2]")).unwrap(), it("402220440..."));
        assert_eq!(cf_to_itinerary(&cf("[1; (-2 : 2)*]")).unwrap(), it("(402204)*"));
        assert_eq!(cf_to_itinerary(&cf("[0; 5]")).unwrap(), it("0444440..."));
        assert!(matches!(
            cf_to_itinerary(&cf("[1; -1 : -1]")),
            Err(Error::InconsistentCf { .. })
        ));
        assert!(matches!(itinerary_to_cf(&it("40(2204)*")), Err(Error::Inadmissible { .. })));
        assert_eq!(itinerary_to_cf(&it("(4)*")), Err(Error::UnboundedRun));
    }

    #[test]
    fn convergents() {
        let v = evaluate(&cf("[1; -3 : 2]"), 3).unwrap();
        assert_eq!(v.last().unwrap().value().unwrap(), BigRational::new(9.into(), 7.into()));
        let v = evaluate(&cf("[1; -2 : 3 : -1]"), 4).unwrap();
        assert_eq!(v[3].value().unwrap(), BigRational::new(13.into(), 9.into()));
        let v = evaluate(&cf("[7]"), 1).unwrap();
        assert_eq!(v[0], Convergent { p: 7.into(), q: 1.into() });
        for w in evaluate(&cf("[1; (-2 : 2)*]"), 12).unwrap().windows(2) {
            let det = &w[1].p * &w[0].q - &w[0].p * &w[1].q;
            assert_eq!(det, -BigInt::one());
        }
        assert!(evaluate(&cf("[1; 2]"), 3).is_err());
    }

    #[test]
    fn periodic_solutions() {
        let s = periodic_cf_to_surd(&cf("[1; (-2 : 2)*]")).unwrap();
        assert_eq!(ExtReal::Surd(s), lit("sqrt(2)"));
        let s = periodic_cf_to_surd(&cf("[0; (-2 : 2)*]")).unwrap();
        assert_eq!(ExtReal::Surd(s), lit("-1+sqrt(2)"));
        let s = periodic_cf_to_surd(&cf("[2; (-2 : 2)*]")).unwrap();
        assert_eq!(ExtReal::Surd(s), lit("1+sqrt(2)"));
        assert_eq!(
            cf_matrix(&[BigInt::from(-2), BigInt::from(2)]),
            MobiusMatrix::new(-5, 2, 2, -1)
        );
        let golden = itinerary_to_cf(&it("(4020)*")).unwrap();
        assert_eq!(golden, cf("[1; (-1 : 1)*]"));
        let s = periodic_cf_to_surd(&golden).unwrap();
        assert_eq!(ExtReal::Surd(s), lit("(1+sqrt(5))/2"));
        assert!(matches!(
            periodic_cf_to_surd(&cf("[2; (2 : -2)*]")),
            Err(Error::InconsistentCf { .. })
        ));
        // parabolic period: y = 2 - 1/y has the double root 1
        assert!(matches!(
            periodic_cf_to_surd(&cf("[0; (2)*]")),
            Err(Error::NotHyperbolic) | Err(Error::InconsistentCf { .. })
        ));
    }
}
