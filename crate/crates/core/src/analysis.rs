//! Exact cycle detection, rational termination, short-period scans and the
//! semiconjugacy harness.

use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::arith::{state_key, ExtReal, QuadraticSurd, Rational};
use crate::error::{Error, Result};
use crate::map::{apply_branch, decide, word_of_symbols, Generator, OrbitConfig, Symbol};
use crate::shift::{itinerary, shift, Itinerary, Tail};

/// An exact cycle of `f_Γ` reached after `preperiod` steps.
#[derive(Clone, Debug)]
pub struct CycleReport {
    pub preperiod: usize,
    pub period: usize,
    pub cycle_states: Vec<ExtReal>,
    pub cycle_word: Itinerary,
    /// `f^period` on `cycle_states[0]` as a word `T^{M₁} S … T^{M_n} S`.
    pub generator_word: Vec<Generator>,
    /// Symbols of the cycle starting at `cycle_states[0]` (not rotated into
    /// canonical form).
    pub symbols: Vec<Symbol>,
}

impl CycleReport {
    pub fn to_json(&self) -> Value {
        json!({
            "preperiod": self.preperiod,
            "period": self.period,
            "states": self.cycle_states.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "word": self.symbols.iter().map(|s| s.digit()).collect::<String>(),
            "itinerary": self.cycle_word.to_string(),
            "generator_word": self.generator_word.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct TerminationReport {
    pub steps_to_infinity: usize,
    pub itinerary: Itinerary,
}

impl TerminationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "steps": self.steps_to_infinity,
            "itinerary": self.itinerary.to_string(),
        })
    }
}

/// Iterates an exact surd, keyed by canonical state, until a state repeats.
pub fn detect_cycle(x: &QuadraticSurd, cfg: &OrbitConfig) -> Result<CycleReport> {
    detect_cycle_ext(&ExtReal::Surd(x.clone()), cfg)
}

/// As [`detect_cycle`] for any exact value. Rationals end at infinity and
/// are rejected.
pub fn detect_cycle_ext(x: &ExtReal, cfg: &OrbitConfig) -> Result<CycleReport> {
    if !matches!(x, ExtReal::Surd(_)) {
        return Err(Error::NotQuadraticIrrational);
    }
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut symbols = Vec::new();
    let mut cur = x.clone();
    for i in 0..=cfg.max_steps {
        let key = state_key(&cur)?;
        if let Some(&j) = seen.get(&key) {
            let cycle_symbols = symbols[j..i].to_vec();
            return Ok(CycleReport {
                preperiod: j,
                period: i - j,
                cycle_states: states[j..i].to_vec(),
                cycle_word: Itinerary::new(Vec::new(), Tail::Periodic(cycle_symbols.clone())),
                generator_word: word_of_symbols(&cycle_symbols),
                symbols: cycle_symbols,
            });
        }
        seen.insert(key, i);
        let (sym, _) = decide(&cur, cfg)?;
        let next = apply_branch(&cur, sym);
        states.push(cur);
        symbols.push(sym);
        cur = next;
    }
    Err(Error::MaxStepsExceeded {
        budget: cfg.max_steps,
        last: cur.to_string(),
    })
}

/// Exact iteration of a rational until it reaches infinity.
pub fn rational_termination(x: &Rational, cfg: &OrbitConfig) -> Result<TerminationReport> {
    let mut cur = ExtReal::Rational(x.clone());
    let mut symbols = Vec::new();
    for step in 0..=cfg.max_steps {
        if cur.is_infinite() {
            return Ok(TerminationReport {
                steps_to_infinity: step,
                itinerary: Itinerary::new(symbols, Tail::Infinity),
            });
        }
        let (sym, _) = decide(&cur, cfg)?;
        cur = apply_branch(&cur, sym);
        symbols.push(sym);
    }
    Err(Error::MaxStepsExceeded {
        budget: cfg.max_steps,
        last: cur.to_string(),
    })
}

/// Result of searching a finite itinerary prefix for a short period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub horizon: usize,
    pub max_period: usize,
    pub prefix: String,
    /// Smallest period `p ≤ max_period` and the offset from which the prefix
    /// is `p`-periodic, if any.
    pub candidate: Option<(usize, usize)>,
}

impl ScanReport {
    pub const NOTE: &'static str =
        "a finite prefix without short periods is consistent with, but not a proof of, aperiodicity";

    pub fn to_json(&self) -> Value {
        json!({
            "horizon": self.horizon,
            "max_period": self.max_period,
            "prefix": self.prefix,
            "period": self.candidate.map(|c| c.0),
            "offset": self.candidate.map(|c| c.1),
            "note": Self::NOTE,
        })
    }
}

/// Smallest `p ≤ max_period` such that `word[s..]` is `p`-periodic for some
/// offset `s` leaving at least `2·max_period` symbols, with the smallest such
/// offset.
pub fn find_period(word: &[Symbol], max_period: usize) -> Option<(usize, usize)> {
    let n = word.len();
    let span = 2 * max_period;
    if n < span {
        return None;
    }
    let latest = n - span;
    for p in 1..=max_period {
        // first index from which word[i] == word[i + p] holds to the end
        let mut s = n - p;
        while s > 0 && word[s - 1] == word[s - 1 + p] {
            s -= 1;
        }
        if s <= latest {
            return Some((p, s));
        }
    }
    None
}

/// Checks the first `horizon` certified symbols of `x` for a period of at
/// most `max_period`. This is a word check only.
pub fn aperiodicity_scan(
    x: &ExtReal,
    horizon: usize,
    max_period: usize,
    cfg: &OrbitConfig,
) -> Result<ScanReport> {
    if max_period == 0 || horizon < 2 * max_period {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} must be at least twice max_period {max_period}"
        )));
    }
    let it = itinerary(x, horizon, cfg)?;
    let word = it.prefix(horizon);
    Ok(ScanReport {
        horizon,
        max_period,
        prefix: word.iter().map(|s| s.digit()).collect(),
        candidate: find_period(&word, max_period),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub sample: usize,
    pub position: usize,
    pub expected: Option<Symbol>,
    pub found: Option<Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiconjugacyReport {
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl SemiconjugacyReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks `I(f(x)) = σ(I(x))` symbol by symbol up to `depth`.
pub fn verify_semiconjugacy(
    samples: &[ExtReal],
    depth: usize,
    cfg: &OrbitConfig,
) -> Result<SemiconjugacyReport> {
    verify_semiconjugacy_with(
        samples,
        depth,
        |x| crate::map::f_gamma_with(x, cfg),
        |x, n| itinerary(x, n, cfg),
        shift,
    )
}

/// The harness behind [`verify_semiconjugacy`] with the map, the itinerary
/// and the shift supplied by the caller. Samples are checked in parallel;
/// the reported counterexample is the one with the smallest sample index.
pub fn verify_semiconjugacy_with<F, I, S>(
    samples: &[ExtReal],
    depth: usize,
    map: F,
    itin: I,
    sigma: S,
) -> Result<SemiconjugacyReport>
where
    F: Fn(&ExtReal) -> Result<ExtReal> + Sync,
    I: Fn(&ExtReal, usize) -> Result<Itinerary> + Sync,
    S: Fn(&Itinerary) -> Result<Itinerary> + Sync,
{
    let results: Vec<Result<Option<Counterexample>>> = samples
        .par_iter()
        .enumerate()
        .map(|(k, x)| {
            let lhs = itin(&map(x)?, depth)?;
            let rhs = sigma(&itin(x, depth + 1)?)?;
            for i in 0..depth {
                let (a, b) = (rhs.symbol_at(i), lhs.symbol_at(i));
                if a.is_none() || b.is_none() {
                    break;
                }
                if a != b {
                    return Ok(Some(Counterexample {
                        sample: k,
                        position: i,
                        expected: a,
                        found: b,
                    }));
                }
            }
            Ok(None)
        })
        .collect();
    let mut counterexample = None;
    for r in results {
        if let Some(c) = r? {
            counterexample = Some(c);
            break;
        }
    }
    Ok(SemiconjugacyReport {
        checked: samples.len(),
        counterexample,
    })
}
