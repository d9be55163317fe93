//! The map `f_Γ` on the extended real line, the partition classifier and
//! orbit iteration with certified symbol decisions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::arith::{
    cmp_small, render_decimal, render_interval, Boundary, Comparison, Dyadic, ExtReal,
};
use crate::error::{Error, Result};

/// Cell of the partition `P⁰ = (-1, 1)`, `P² = (-∞, -1]`, `P⁴ = [1, ∞)`.
/// The point at infinity is coded `S0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    S0,
    S2,
    S4,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::S0, Symbol::S2, Symbol::S4];

    pub fn digit(self) -> char {
        match self {
            Symbol::S0 => '0',
            Symbol::S2 => '2',
            Symbol::S4 => '4',
        }
    }

    /// Contiguous index `0, 1, 2` used by the metric.
    pub fn index(self) -> u8 {
        match self {
            Symbol::S0 => 0,
            Symbol::S2 => 1,
            Symbol::S4 => 2,
        }
    }

    pub fn from_digit(c: char) -> Option<Symbol> {
        match c {
            '0' => Some(Symbol::S0),
            '2' => Some(Symbol::S2),
            '4' => Some(Symbol::S4),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.digit())
    }
}

/// Budgets for orbit computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitConfig {
    pub max_steps: usize,
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig {
            max_steps: 10_000,
            start_bits: 128,
            max_bits: 1 << 20,
        }
    }
}

impl OrbitConfig {
    pub fn with_bits(bits: u32) -> Self {
        let d = OrbitConfig::default();
        OrbitConfig {
            start_bits: bits,
            max_bits: d.max_bits.max(bits),
            ..d
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument("max_steps must be positive".into()));
        }
        if self.start_bits < 16 {
            return Err(Error::InvalidPrecision(self.start_bits));
        }
        if self.start_bits > self.max_bits {
            return Err(Error::InvalidArgument(format!(
                "start_bits {} exceeds max_bits {}",
                self.start_bits, self.max_bits
            )));
        }
        Ok(())
    }
}

/// One row of an orbit table.
#[derive(Clone, Debug)]
pub struct OrbitStep {
    pub index: usize,
    pub value: ExtReal,
    pub symbol: Symbol,
    /// Decimal rendering; only certified digits are printed.
    pub approx: String,
}

/// Significant digits in [`OrbitStep::approx`].
pub const APPROX_DIGITS: usize = 17;

/// Modular-group generator: `T^k(x) = x + k` or `S(x) = -1/x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    T(BigInt),
    S,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::T(k) if k.is_one() => f.write_str("T"),
            Generator::T(k) => write!(f, "T^{k}"),
            Generator::S => f.write_str("S"),
        }
    }
}

/// Branch of `f_Γ` taken on a cell, as a generator.
pub fn branch(sym: Symbol) -> Generator {
    match sym {
        Symbol::S0 => Generator::S,
        Symbol::S2 => Generator::T(BigInt::one()),
        Symbol::S4 => Generator::T(-BigInt::one()),
    }
}

fn exact_symbol(x: &ExtReal) -> Symbol {
    if x.is_infinite() {
        return Symbol::S0;
    }
    match cmp_small(x, Boundary::MinusOne) {
        Comparison::Less | Comparison::Equal => return Symbol::S2,
        _ => {}
    }
    match cmp_small(x, Boundary::One) {
        Comparison::Greater | Comparison::Equal => Symbol::S4,
        _ => Symbol::S0,
    }
}

/// Symbol of an enclosure, or the boundary it still straddles. `S0` is only
/// certified once the enclosure also excludes 0, so that the next step
/// `-1/x` has a bounded enclosure.
fn interval_symbol(x: &ExtReal) -> std::result::Result<Symbol, Boundary> {
    let ExtReal::Certified(c) = x else {
        return Ok(exact_symbol(x));
    };
    if c.is_exact_zero() {
        return Ok(Symbol::S0);
    }
    let Some(iv) = c.enclosure() else {
        // the enclosure passes through infinity: the previous value straddled 0
        return Err(Boundary::Zero);
    };
    let m1 = Dyadic::from_int(-1);
    let p1 = Dyadic::from_int(1);
    let zero = Dyadic::zero();
    if iv.hi() <= &m1 {
        Ok(Symbol::S2)
    } else if iv.lo() >= &p1 {
        Ok(Symbol::S4)
    } else if iv.lo() <= &m1 {
        Err(Boundary::MinusOne)
    } else if iv.hi() >= &p1 {
        Err(Boundary::One)
    } else if iv.lo() <= &zero && iv.hi() >= &zero {
        Err(Boundary::Zero)
    } else {
        Ok(Symbol::S0)
    }
}

/// Refines a certified value until `accept` succeeds, doubling the precision
/// from `cfg.start_bits` up to `cfg.max_bits`.
pub(crate) fn refine_until<T>(
    x: &ExtReal,
    cfg: &OrbitConfig,
    mut accept: impl FnMut(&ExtReal) -> std::result::Result<T, Boundary>,
) -> Result<(T, ExtReal)> {
    let mut boundary = match accept(x) {
        Ok(t) => return Ok((t, x.clone())),
        Err(b) => b,
    };
    let ExtReal::Certified(c) = x else {
        unreachable!("exact values always decide");
    };
    let mut bits = cfg.start_bits.max(c.bits().saturating_mul(2)).max(16);
    loop {
        if bits > cfg.max_bits {
            break;
        }
        let refined = match c.refine_to(bits) {
            Ok(r) => ExtReal::Certified(r),
            Err(Error::PrecisionUnavailable { .. }) => break,
            Err(e) => return Err(e),
        };
        match accept(&refined) {
            Ok(t) => return Ok((t, refined)),
            Err(b) => boundary = b,
        }
        if bits == cfg.max_bits {
            break;
        }
        bits = bits.saturating_mul(2).min(cfg.max_bits);
    }
    Err(Error::BoundaryUnresolvable {
        step: None,
        boundary,
        bits: bits.min(cfg.max_bits),
    })
}

/// Certified symbol of `x` together with the (possibly refined) value whose
/// enclosure certifies it.
pub fn decide(x: &ExtReal, cfg: &OrbitConfig) -> Result<(Symbol, ExtReal)> {
    refine_until(x, cfg, interval_symbol)
}

/// Partition cell of `x` under the default configuration.
pub fn classify(x: &ExtReal) -> Result<Symbol> {
    classify_with(x, &OrbitConfig::default())
}

pub fn classify_with(x: &ExtReal, cfg: &OrbitConfig) -> Result<Symbol> {
    decide(x, cfg).map(|(s, _)| s)
}

/// Applies the branch of `f_Γ` selected by `sym`.
pub fn apply_branch(x: &ExtReal, sym: Symbol) -> ExtReal {
    if x.is_infinite() {
        return ExtReal::Infinity;
    }
    match sym {
        Symbol::S0 => x.neg_recip(),
        Symbol::S2 => x.add_int(&BigInt::one()),
        Symbol::S4 => x.add_int(&-BigInt::one()),
    }
}

/// One application of `f_Γ`.
pub fn f_gamma(x: &ExtReal) -> Result<ExtReal> {
    f_gamma_with(x, &OrbitConfig::default())
}

pub fn f_gamma_with(x: &ExtReal, cfg: &OrbitConfig) -> Result<ExtReal> {
    let (sym, x) = decide(x, cfg)?;
    Ok(apply_branch(&x, sym))
}

fn approx(x: &ExtReal) -> String {
    match x {
        ExtReal::Certified(c) => match c.enclosure() {
            Some(iv) => render_interval(iv, APPROX_DIGITS),
            None => "?".into(),
        },
        other => render_decimal(other, APPROX_DIGITS),
    }
}

/// Steps `0..=n` of the orbit of `x`. Certified values are kept at
/// `cfg.start_bits` relative precision and refined further whenever a symbol
/// is not yet certified.
pub fn orbit(x: &ExtReal, n: usize, cfg: &OrbitConfig) -> Result<Vec<OrbitStep>> {
    cfg.validate()?;
    if n > cfg.max_steps {
        return Err(Error::MaxStepsExceeded {
            budget: cfg.max_steps,
            last: x.to_string(),
        });
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = x.clone();
    for index in 0..=n {
        let value = keep_precision(&cur, cfg)?;
        let (symbol, value) = decide(&value, cfg).map_err(|e| at_step(e, index))?;
        let next = apply_branch(&value, symbol);
        out.push(OrbitStep {
            index,
            approx: approx(&value),
            value,
            symbol,
        });
        cur = next;
    }
    Ok(out)
}

/// Symbols of steps `0..n` (exclusive), stopping after the first infinite value.
pub(crate) fn symbols_until_infinity(
    x: &ExtReal,
    n: usize,
    cfg: &OrbitConfig,
) -> Result<(Vec<Symbol>, Option<usize>)> {
    let mut syms = Vec::with_capacity(n);
    let mut cur = x.clone();
    for index in 0..n {
        if cur.is_infinite() {
            return Ok((syms, Some(index)));
        }
        let value = keep_precision(&cur, cfg)?;
        let (symbol, value) = decide(&value, cfg).map_err(|e| at_step(e, index))?;
        syms.push(symbol);
        cur = apply_branch(&value, symbol);
    }
    Ok((syms, None))
}

fn keep_precision(x: &ExtReal, cfg: &OrbitConfig) -> Result<ExtReal> {
    match x {
        ExtReal::Certified(c) if c.enclosure().is_some() => match c.refine_to(cfg.start_bits) {
            Ok(r) => Ok(ExtReal::Certified(r)),
            // a non-refinable enclosure is used as is
            Err(Error::PrecisionUnavailable { .. }) => Ok(x.clone()),
            Err(e) => Err(e),
        },
        _ => Ok(x.clone()),
    }
}

pub(crate) fn at_step(e: Error, index: usize) -> Error {
    match e {
        Error::BoundaryUnresolvable { boundary, bits, .. } => Error::BoundaryUnresolvable {
            step: Some(index),
            boundary,
            bits,
        },
        other => other,
    }
}

/// Applies a generator word right to left: `[g₁, g₂](x) = g₁(g₂(x))`.
pub fn apply_word(x: &ExtReal, word: &[Generator]) -> ExtReal {
    word.iter().rev().fold(x.clone(), |acc, g| match g {
        Generator::T(k) => acc.add_int(k),
        Generator::S => acc.neg_recip(),
    })
}

/// Generator word realizing the composition of the given branch symbols
/// (applied in order), with consecutive translations merged.
pub fn word_of_symbols(symbols: &[Symbol]) -> Vec<Generator> {
    let mut word: Vec<Generator> = Vec::new();
    for &s in symbols.iter().rev() {
        let g = branch(s);
        match (word.last_mut(), &g) {
            (Some(Generator::T(k)), Generator::T(j)) => *k += j,
            _ => word.push(g),
        }
    }
    word
}

/// `Σ|M_i| + n_S`: the number of map steps a generator word stands for.
pub fn word_length(word: &[Generator]) -> BigInt {
    word.iter()
        .map(|g| match g {
            Generator::T(k) => k.abs(),
            Generator::S => BigInt::one(),
        })
        .sum()
}
