//! The symbol space: itineraries, admissibility, the shift and the metric.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::ExtReal;
use crate::error::{Error, Result};
use crate::map::{symbols_until_infinity, OrbitConfig, Symbol};

/// What follows the explicit head of an itinerary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    /// Finite sample; nothing is known past the head.
    None,
    /// The word repeated forever.
    Periodic(Vec<Symbol>),
    /// `0` repeated forever, reserved for orbits reaching infinity.
    Infinity,
}

/// A word over `{0, 2, 4}` with an optional infinite tail, kept in canonical
/// form: periodic tails are primitive and the head is as short as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Itinerary {
    head: Vec<Symbol>,
    tail: Tail,
}

/// Words that never occur in the itinerary of a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ForbiddenBlock {
    B24,
    B42,
    B00,
    B202,
    B404,
    NonzeroAfterInfinity,
}

impl fmt::Display for ForbiddenBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ForbiddenBlock::B24 => "24",
            ForbiddenBlock::B42 => "42",
            ForbiddenBlock::B00 => "00",
            ForbiddenBlock::B202 => "202",
            ForbiddenBlock::B404 => "404",
            ForbiddenBlock::NonzeroAfterInfinity => "nonzero-after-infinity-tail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub violation: Option<(usize, ForbiddenBlock)>,
    /// Conditions that a genuine itinerary is expected to satisfy but which
    /// are not enforced.
    pub warnings: Vec<String>,
}

fn primitive_root(w: &[Symbol]) -> &[Symbol] {
    let n = w.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| w[i] == w[i - p]) {
            return &w[..p];
        }
    }
    w
}

impl Itinerary {
    /// Builds an itinerary and brings it to canonical form. No admissibility
    /// check is made; see [`Itinerary::checked`].
    pub fn new(head: Vec<Symbol>, tail: Tail) -> Self {
        let mut it = Itinerary { head, tail };
        it.canonicalize();
        it
    }

    pub fn checked(head: Vec<Symbol>, tail: Tail) -> Result<Self> {
        let it = Itinerary::new(head, tail);
        if let Some((position, block)) = it.admissibility().violation {
            return Err(Error::Inadmissible { position, block });
        }
        Ok(it)
    }

    pub fn finite(head: Vec<Symbol>) -> Self {
        Itinerary::new(head, Tail::None)
    }

    fn canonicalize(&mut self) {
        if let Tail::Periodic(w) = &self.tail {
            if w.is_empty() {
                self.tail = Tail::None;
            } else {
                let root = primitive_root(w).to_vec();
                self.tail = if root == [Symbol::S0] {
                    Tail::Infinity
                } else {
                    Tail::Periodic(root)
                };
            }
        }
        match &mut self.tail {
            Tail::Periodic(w) => {
                while let Some(&h) = self.head.last() {
                    if Some(&h) != w.last() {
                        break;
                    }
                    self.head.pop();
                    w.rotate_right(1);
                }
            }
            Tail::Infinity => {
                while self.head.last() == Some(&Symbol::S0) {
                    self.head.pop();
                }
            }
            Tail::None => {}
        }
    }

    pub fn head(&self) -> &[Symbol] {
        &self.head
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Number of symbols, `None` when infinite.
    pub fn len(&self) -> Option<usize> {
        match self.tail {
            Tail::None => Some(self.head.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn symbol_at(&self, i: usize) -> Option<Symbol> {
        if let Some(&s) = self.head.get(i) {
            return Some(s);
        }
        let j = i - self.head.len();
        match &self.tail {
            Tail::None => None,
            Tail::Periodic(w) => Some(w[j % w.len()]),
            Tail::Infinity => Some(Symbol::S0),
        }
    }

    /// The first `n` symbols (fewer if the itinerary is a shorter finite word).
    pub fn prefix(&self, n: usize) -> Vec<Symbol> {
        (0..n).map_while(|i| self.symbol_at(i)).collect()
    }

    pub fn admissibility(&self) -> AdmissibilityReport {
        is_admissible(&self.head, &self.tail)
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility().ok
    }
}

fn block_at(w: &[Symbol], i: usize, zero_suffix: usize) -> Option<ForbiddenBlock> {
    use Symbol::*;
    let a = w[i];
    if let Some(&b) = w.get(i + 1) {
        match (a, b) {
            (S2, S4) => return Some(ForbiddenBlock::B24),
            (S4, S2) => return Some(ForbiddenBlock::B42),
            (S0, S0) if i < zero_suffix => return Some(ForbiddenBlock::B00),
            _ => {}
        }
    }
    if let (Some(&b), Some(&c)) = (w.get(i + 1), w.get(i + 2)) {
        match (a, b, c) {
            (S2, S0, S2) => return Some(ForbiddenBlock::B202),
            (S4, S0, S4) => return Some(ForbiddenBlock::B404),
            _ => {}
        }
    }
    None
}

/// Scans every window of length 2 and 3, including the junctions between
/// head and tail and between consecutive copies of a periodic tail. `00` is
/// allowed only where the all-zero suffix of an infinity tail begins.
pub fn is_admissible(head: &[Symbol], tail: &Tail) -> AdmissibilityReport {
    let mut warnings = Vec::new();
    let (seq, scan_len, zero_suffix) = match tail {
        Tail::None => (head.to_vec(), head.len(), usize::MAX),
        Tail::Infinity => {
            let mut seq = head.to_vec();
            let start = seq.iter().rposition(|&s| s != Symbol::S0).map_or(0, |p| p + 1);
            seq.extend([Symbol::S0; 3]);
            (seq, head.len() + 1, start)
        }
        Tail::Periodic(w) => {
            let mut seq = head.to_vec();
            while seq.len() < head.len() + w.len() + 2 {
                seq.extend_from_slice(w);
            }
            let zeros = w.iter().filter(|&&s| s == Symbol::S0).count();
            if zeros < 2 {
                warnings.push(format!(
                    "periodic tail contains {zeros} zero(s) per period; genuine cycles contain at least two"
                ));
            }
            (seq, head.len() + w.len(), usize::MAX)
        }
    };
    for i in 0..scan_len.min(seq.len()) {
        if let Some(block) = block_at(&seq, i, zero_suffix) {
            return AdmissibilityReport {
                ok: false,
                violation: Some((i, block)),
                warnings,
            };
        }
    }
    AdmissibilityReport {
        ok: true,
        violation: None,
        warnings,
    }
}

/// Drops the first symbol.
pub fn shift(it: &Itinerary) -> Result<Itinerary> {
    if !it.head.is_empty() {
        return Ok(Itinerary::new(it.head[1..].to_vec(), it.tail.clone()));
    }
    match &it.tail {
        Tail::None => Err(Error::EmptyItinerary),
        Tail::Infinity => Ok(it.clone()),
        Tail::Periodic(w) => {
            let mut w = w.clone();
            w.rotate_left(1);
            Ok(Itinerary::new(Vec::new(), Tail::Periodic(w)))
        }
    }
}

/// `Σ_{i<horizon} |idx(s_i) - idx(t_i)| / 3^i` over the contiguous symbol
/// indices `0, 1, 2`.
pub fn distance(s: &Itinerary, t: &Itinerary, horizon: usize) -> Result<BigRational> {
    let mut sum = BigRational::zero();
    let mut scale = BigInt::from(1);
    for i in 0..horizon {
        let (Some(a), Some(b)) = (s.symbol_at(i), t.symbol_at(i)) else {
            return Err(Error::InvalidArgument(format!(
                "itinerary not defined up to horizon {horizon}"
            )));
        };
        let diff = (a.index() as i64 - b.index() as i64).abs();
        if diff != 0 {
            sum += BigRational::new(BigInt::from(diff), scale.clone());
        }
        scale *= 3;
    }
    Ok(sum)
}

/// Itinerary of the first `len` orbit points. When the orbit reaches
/// infinity the result carries the infinity tail.
pub fn itinerary(x: &ExtReal, len: usize, cfg: &OrbitConfig) -> Result<Itinerary> {
    if len > cfg.max_steps {
        return Err(Error::MaxStepsExceeded {
            budget: cfg.max_steps,
            last: x.to_string(),
        });
    }
    let (syms, inf_at) = symbols_until_infinity(x, len, cfg)?;
    // reaching infinity exactly at `len` is not observed by a sample of that length
    let tail = if inf_at.is_some() {
        Tail::Infinity
    } else {
        Tail::None
    };
    Ok(Itinerary::new(syms, tail))
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.head {
            write!(f, "{s}")?;
        }
        match &self.tail {
            Tail::None => Ok(()),
            Tail::Infinity => f.write_str("0..."),
            Tail::Periodic(w) => {
                f.write_str("(")?;
                for s in w {
                    write!(f, "{s}")?;
                }
                f.write_str(")*")
            }
        }
    }
}

impl FromStr for Itinerary {
    type Err = Error;

    /// Parses `40222044`, `40(2204)*` or `402220440...`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut head = Vec::new();
        let mut i = 0;
        let bad = |off: usize, tok: &str, why: &str| Error::parse(off, tok, why);
        while i < chars.len() {
            let (off, c) = chars[i];
            match c {
                '0' | '2' | '4' => {
                    if chars[i..].iter().skip(1).take(3).map(|(_, c)| *c).eq("...".chars()) {
                        if i + 4 != chars.len() {
                            let (o, t) = chars[i + 4];
                            return Err(if Symbol::from_digit(t).is_some() {
                                Error::Inadmissible {
                                    position: head.len() + 1,
                                    block: ForbiddenBlock::NonzeroAfterInfinity,
                                }
                            } else {
                                bad(o, &t.to_string(), "unexpected input after infinity tail")
                            });
                        }
                        if c != '0' {
                            return Err(bad(off, &c.to_string(), "infinity tail must be `0...`"));
                        }
                        return Ok(Itinerary::new(head, Tail::Infinity));
                    }
                    head.push(Symbol::from_digit(c).unwrap());
                    i += 1;
                }
                '(' => {
                    let close = chars[i..]
                        .iter()
                        .position(|(_, c)| *c == ')')
                        .map(|p| p + i)
                        .ok_or_else(|| bad(off, "(", "unclosed periodic tail"))?;
                    let mut word = Vec::new();
                    for &(o, d) in &chars[i + 1..close] {
                        word.push(
                            Symbol::from_digit(d)
                                .ok_or_else(|| bad(o, &d.to_string(), "expected 0, 2 or 4"))?,
                        );
                    }
                    if word.is_empty() {
                        return Err(bad(off, "()", "empty periodic tail"));
                    }
                    match chars.get(close + 1) {
                        Some((_, '*')) => {}
                        Some(&(o, t)) => return Err(bad(o, &t.to_string(), "expected `*`")),
                        None => return Err(bad(s.len(), "<end>", "expected `*`")),
                    }
                    if let Some(&(o, t)) = chars.get(close + 2) {
                        return Err(bad(o, &t.to_string(), "unexpected input after periodic tail"));
                    }
                    return Ok(Itinerary::new(head, Tail::Periodic(word)));
                }
                other => return Err(bad(off, &other.to_string(), "expected 0, 2, 4, `(` or `0...`")),
            }
        }
        Ok(Itinerary::new(head, Tail::None))
    }
}

pub fn symbols(s: &str) -> Result<Vec<Symbol>> {
    s.char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(o, c)| {
            Symbol::from_digit(c).ok_or_else(|| Error::parse(o, c.to_string(), "expected 0, 2 or 4"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_literal;

    fn it(s: &str) -> Itinerary {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip() {
        for s in ["40222044", "402220440...", "(402204)*", "0...", "4(022)*", "", "4020(2204)*"] {
            assert_eq!(it(s).to_string(), s, "{s}");
        }
        assert_eq!(it("4(022044)*"), it("(402204)*"));
        assert_eq!(it("(402204402204)*"), it("(402204)*"));
        assert_eq!(it("(0)*"), it("0..."));
        assert_eq!(it("4 0 2 2"), it("4022"));
        assert!(matches!("40(22".parse::<Itinerary>(), Err(Error::Parse { .. })));
        assert!(matches!("401".parse::<Itinerary>(), Err(Error::Parse { .. })));
        assert!(matches!("0...4".parse::<Itinerary>(), Err(Error::Inadmissible { .. })));
    }

    #[test]
    fn admissibility_examples() {
        assert!(it("(402204)*").is_admissible());
        let r = is_admissible(&symbols("424").unwrap(), &Tail::None);
        assert_eq!(r.violation, Some((0, ForbiddenBlock::B42)));
        let r = is_admissible(&symbols("202").unwrap(), &Tail::None);
        assert_eq!(r.violation, Some((0, ForbiddenBlock::B202)));
        assert!(it("402220440...").is_admissible());
        assert!(!is_admissible(&symbols("4004").unwrap(), &Tail::None).ok);
        // the junction between copies of the tail
        let r = is_admissible(&symbols("40").unwrap(), &Tail::Periodic(symbols("2204").unwrap()));
        assert_eq!(r.violation, Some((5, ForbiddenBlock::B42)));
        // too few zeros per period is reported, not rejected
        let r = is_admissible(&[], &Tail::Periodic(symbols("4").unwrap()));
        assert!(r.ok);
        assert_eq!(r.warnings.len(), 1);
        let r = is_admissible(&symbols("0").unwrap(), &Tail::Infinity);
        assert!(r.ok);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&it("(402204)*")).unwrap(), it("(022044)*"));
        assert_eq!(shift(&it("40...")).unwrap(), it("0..."));
        assert_eq!(shift(&it("40")).unwrap(), it("0"));
        assert_eq!(shift(&it("0...")).unwrap(), it("0..."));
        assert_eq!(shift(&it("")), Err(Error::EmptyItinerary));
    }

    #[test]
    fn distance_examples() {
        let s = it("(4)*");
        let t = it("(2)*");
        assert_eq!(distance(&s, &s, 10).unwrap(), BigRational::zero());
        assert_eq!(distance(&s, &t, 1).unwrap(), BigRational::from_integer(1.into()));
        let a = it("(402204)*");
        let b = it("402204402200...");
        let d = distance(&a, &b, 20).unwrap();
        assert!(d <= BigRational::new(1.into(), BigInt::from(3).pow(10)));
        assert!(distance(&it("40"), &a, 5).is_err());
    }

    #[test]
    fn itineraries_of_points() {
        let cfg = OrbitConfig::default();
        let x = parse_literal("9/7").unwrap();
        assert_eq!(itinerary(&x, 12, &cfg).unwrap().to_string(), "402220440...");
        assert_eq!(itinerary(&x, 12, &cfg).unwrap().head().len(), 8);
        let x = parse_literal("sqrt(2)").unwrap();
        assert_eq!(itinerary(&x, 12, &cfg).unwrap().to_string(), "402204402204");
        assert_eq!(itinerary(&ExtReal::Infinity, 3, &cfg).unwrap(), it("0..."));
    }
}
