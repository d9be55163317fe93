//! Randomized property checks over the whole library. Every check is seeded,
//! so a run is reproducible; the `verify` command and the acceptance tests
//! both call into this module.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{detect_cycle, rational_termination, verify_semiconjugacy, CycleReport};
use crate::arith::{
    certify, cmp_small, state_key, surd_normalize, Boundary, CertifiedReal, Comparison, ExtReal,
    Interval, QuadraticSurd, Rational,
};
use crate::codec::{cf_extract, cf_to_itinerary, evaluate, itinerary_to_cf, periodic_cf_to_surd};
use crate::map::{apply_word, f_gamma, orbit, word_length, OrbitConfig, Symbol};
use crate::shift::{distance, is_admissible, itinerary, shift, Itinerary, Tail};

/// Outcome of one property.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, failures: usize, total: usize, first: Option<String>) -> Self {
        let detail = match first {
            Some(f) => format!("{failures}/{total} failures; first: {f}"),
            None => format!("{total} cases"),
        };
        Check {
            name,
            passed: failures == 0,
            detail,
        }
    }
}

/// Tally of failures with the first one kept for the report.
#[derive(Default)]
struct Tally {
    total: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    fn finish(self, name: &'static str) -> Check {
        Check::new(name, self.failures, self.total, self.first)
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// --- generators --------------------------------------------------------------

pub fn random_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    let p = rng.gen_range(-bound..=bound);
    let q = rng.gen_range(1..=bound);
    Rational::new(p, q).expect("nonzero denominator")
}

/// A random irrational surd `(p + q√d)/r` with `2 ≤ d ≤ max_d`.
pub fn random_surd(rng: &mut impl Rng, max_d: i64, coef: i64) -> QuadraticSurd {
    loop {
        let d = rng.gen_range(2..=max_d);
        let p = rng.gen_range(-coef..=coef);
        let q = rng.gen_range(-coef..=coef);
        let r = rng.gen_range(1..=coef);
        if let Ok(ExtReal::Surd(s)) = surd_normalize(p, q, r, d) {
            return s;
        }
    }
}

fn allowed_next(word: &[Symbol]) -> Vec<Symbol> {
    use Symbol::*;
    match (word.len().checked_sub(2).map(|i| word[i]), word.last()) {
        (_, None) => vec![S0, S2, S4],
        (_, Some(S2)) => vec![S2, S0],
        (_, Some(S4)) => vec![S4, S0],
        (Some(S2), Some(S0)) => vec![S4],
        (Some(S4), Some(S0)) => vec![S2],
        (_, Some(S0)) => vec![S2, S4],
    }
}

/// Extends `word` by `n` symbols chosen uniformly among those that keep it
/// free of forbidden blocks.
pub fn extend_admissible(rng: &mut impl Rng, word: &mut Vec<Symbol>, n: usize) {
    for _ in 0..n {
        let next = *allowed_next(word).choose(rng).expect("never empty");
        word.push(next);
    }
}

/// A random admissible itinerary with head length at most `max_len`. Finite
/// samples end in `0`, so that every run is complete.
pub fn random_itinerary(rng: &mut impl Rng, max_len: usize) -> Itinerary {
    loop {
        let mut head = Vec::new();
        let len = rng.gen_range(1..=max_len);
        extend_admissible(rng, &mut head, len);
        let it = match rng.gen_range(0..3) {
            0 => {
                if head.last() != Some(&Symbol::S0) {
                    continue;
                }
                Itinerary::new(head, Tail::None)
            }
            1 => Itinerary::new(head, Tail::Infinity),
            _ => {
                let mut seq = head.clone();
                let plen = rng.gen_range(2..=12);
                extend_admissible(rng, &mut seq, plen);
                let period = seq[head.len()..].to_vec();
                if period.iter().filter(|&&s| s == Symbol::S0).count() < 2 {
                    continue;
                }
                Itinerary::new(head, Tail::Periodic(period))
            }
        };
        if it.is_admissible() {
            return it;
        }
    }
}

/// A random admissible infinite itinerary (periodic or infinity tail).
fn random_infinite_itinerary(rng: &mut impl Rng, max_len: usize) -> Itinerary {
    loop {
        let it = random_itinerary(rng, max_len);
        if it.len().is_none() {
            return it;
        }
    }
}

fn to_string(w: &[Symbol]) -> String {
    w.iter().map(|s| s.digit()).collect()
}

fn enclose(x: &ExtReal, bits: u32) -> Option<Interval> {
    certify(x)?.refine_to(bits).ok()?.enclosure().cloned()
}

// --- exact arithmetic -----------------------------------------------------------

pub fn neg_recip_involution(n: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for k in 0..n {
        let x = if k % 2 == 0 {
            ExtReal::Rational(random_rational(&mut rng, 1000))
        } else {
            ExtReal::Surd(random_surd(&mut rng, 50, 20))
        };
        let y = x.neg_recip().neg_recip();
        t.check(y == x, || format!("x = {x}, got {y}"));
    }
    t.finish("neg_recip involution")
}

pub fn surd_normalize_sound(n: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for _ in 0..n {
        let p = rng.gen_range(-50i64..=50);
        let q = rng.gen_range(-50i64..=50);
        let r = rng.gen_range(-50i64..=50);
        let d = rng.gen_range(0i64..=400);
        if r == 0 {
            continue;
        }
        let Ok(x) = surd_normalize(p, q, r, d) else {
            t.check(false, || format!("({p}, {q}, {r}, {d}) rejected"));
            continue;
        };
        // value: √d enclosed independently, pushed through (q t + p)/r
        let root = CertifiedReal::sqrt(d as u64);
        let raw = root.mobius(&crate::arith::MobiusMatrix::new(q, p, 0, r));
        let raw = raw.refine_to(128).ok().and_then(|c| c.enclosure().cloned());
        let norm = enclose(&x, 128);
        let same_value = matches!((&raw, &norm), (Some(a), Some(b)) if a.intersect(b).is_some());
        let idempotent = match &x {
            ExtReal::Surd(s) => {
                surd_normalize(s.p().clone(), s.q().clone(), s.r().clone(), s.d().clone()).ok()
                    == Some(x.clone())
            }
            _ => true,
        };
        t.check(same_value && idempotent, || format!("({p}, {q}, {r}, {d}) -> {x}"));
    }
    t.finish("surd_normalize value-preserving and idempotent")
}

pub fn cmp_small_agrees(n: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for _ in 0..n {
        let s = ExtReal::Surd(random_surd(&mut rng, 50, 20));
        let iv = enclose(&s, 256).expect("surds enclose");
        for b in [Boundary::MinusOne, Boundary::Zero, Boundary::One] {
            let exact = cmp_small(&s, b);
            let numeric = iv.cmp_int(&BigInt::from(b.value()));
            let ok = exact != Comparison::Uncertain
                && numeric.map_or(true, |o| Comparison::from(o) == exact);
            t.check(ok, || format!("{s} vs {b}: exact {exact:?}, interval {numeric:?}"));
        }
    }
    t.finish("cmp_small agrees with 256-bit enclosures")
}

pub fn nested_refinement() -> Check {
    let mut t = Tally::default();
    let values = [
        CertifiedReal::pi(),
        CertifiedReal::e(),
        CertifiedReal::cbrt(2),
        CertifiedReal::sqrt(3u32),
        CertifiedReal::pi().mobius(&crate::arith::MobiusMatrix::new(-5, 2, 2, -1)),
    ];
    for x in &values {
        for b in [16u32, 64, 128, 300] {
            for k in [1u32, 17, 200] {
                let coarse = x.refine_to(b).ok().and_then(|c| c.enclosure().cloned());
                let fine = x.refine_to(b + k).ok().and_then(|c| c.enclosure().cloned());
                let ok = matches!((&coarse, &fine), (Some(c), Some(f)) if f.is_subset_of(c));
                t.check(ok, || format!("{} at {b} then {}", x.label(), b + k));
            }
        }
    }
    t.finish("nested refinement")
}

// --- the map --------------------------------------------------------------------

pub fn branch_coherence(n: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for k in 0..n {
        let x = if k % 2 == 0 {
            ExtReal::Rational(random_rational(&mut rng, 60))
        } else {
            ExtReal::Surd(random_surd(&mut rng, 50, 20))
        };
        let iv = enclose(&x, 256).expect("finite");
        let side = |b: i64| match iv.cmp_int(&BigInt::from(b)) {
            Some(o) => o,
            // only exact integers can straddle at 256 bits
            None => x.compare_int(&BigInt::from(b)).try_into_ordering(),
        };
        let expected = if side(-1) != Ordering::Greater {
            x.add_int(&BigInt::one())
        } else if side(1) != Ordering::Less {
            x.add_int(&-BigInt::one())
        } else {
            x.neg_recip()
        };
        let got = f_gamma(&x);
        t.check(got.as_ref().ok() == Some(&expected), || format!("x = {x}: {got:?}"));
    }
    t.finish("branch/partition coherence")
}

trait IntoOrdering {
    fn try_into_ordering(self) -> Ordering;
}

impl IntoOrdering for Comparison {
    fn try_into_ordering(self) -> Ordering {
        match self {
            Comparison::Less => Ordering::Less,
            Comparison::Equal => Ordering::Equal,
            Comparison::Greater => Ordering::Greater,
            Comparison::Uncertain => unreachable!("exact comparison"),
        }
    }
}

pub fn unique_fixed_point(n: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let inf = f_gamma(&ExtReal::Infinity).map(|y| y.is_infinite()).unwrap_or(false);
    t.check(inf, || "f(inf) != inf".into());
    for k in 0..n {
        let x = if k % 2 == 0 {
            ExtReal::Rational(random_rational(&mut rng, 1000))
        } else {
            ExtReal::Surd(random_surd(&mut rng, 50, 20))
        };
        let y = f_gamma(&x).expect("exact");
        let fixed = state_key(&x).ok() == state_key(&y).ok();
        t.check(!fixed, || format!("f({x}) = {x}"));
    }
    t.finish("infinity is the only fixed point")
}

pub fn certified_tracks_exact(steps: usize) -> Check {
    let mut t = Tally::default();
    let cfg = OrbitConfig::with_bits(256);
    let exact = orbit(&ExtReal::Surd(sqrt2()), steps, &cfg).expect("exact orbit");
    let cert = orbit(&ExtReal::Certified(CertifiedReal::sqrt(2u32)), steps, &cfg);
    let Ok(cert) = cert else {
        t.check(false, || format!("certified orbit failed: {:?}", cert.err()));
        return t.finish("certified and exact orbits of sqrt(2) agree");
    };
    let tol = BigRational::new(BigInt::one(), BigInt::one() << 200);
    for (a, b) in exact.iter().zip(&cert) {
        let ea = enclose(&a.value, 400).expect("finite");
        let ExtReal::Certified(c) = &b.value else {
            t.check(false, || format!("step {} is not certified", b.index));
            continue;
        };
        let eb = c.enclosure().expect("bounded").clone();
        let diff = (ea.midpoint().to_rational() - eb.midpoint().to_rational()).abs();
        t.check(a.symbol == b.symbol && diff <= tol, || format!("step {}", a.index));
    }
    t.finish("certified and exact orbits of sqrt(2) agree")
}

fn sqrt2() -> QuadraticSurd {
    match surd_normalize(0, 1, 1, 2) {
        Ok(ExtReal::Surd(s)) => s,
        _ => unreachable!(),
    }
}

pub fn rationals_reach_infinity(bound: i64) -> Check {
    let mut t = Tally::default();
    let cfg = OrbitConfig::default();
    for p in -bound..=bound {
        for q in 1..=bound {
            let x = Rational::new(p, q).expect("q > 0");
            let r = rational_termination(&x, &cfg);
            t.check(r.is_ok(), || format!("{p}/{q}: {:?}", r.err()));
        }
    }
    t.finish("rationals reach infinity")
}

// --- the symbol space --------------------------------------------------------------

/// `I∘f = σ∘I` on random rationals `|p|, |q| ≤ 100` and surds with `d ≤ 50`.
pub fn semiconjugacy(n_rationals: usize, n_surds: usize, depth: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut samples = Vec::new();
    for _ in 0..n_rationals {
        samples.push(ExtReal::Rational(random_rational(&mut rng, 100)));
    }
    for _ in 0..n_surds {
        samples.push(ExtReal::Surd(random_surd(&mut rng, 50, 20)));
    }
    let total = samples.len();
    match verify_semiconjugacy(&samples, depth, &OrbitConfig::default()) {
        Ok(r) => Check::new(
            "semiconjugacy I(f(x)) = shift(I(x))",
            usize::from(!r.passed()),
            total,
            r.counterexample.map(|c| format!("{} at position {}", samples[c.sample], c.position)),
        ),
        Err(e) => Check::new("semiconjugacy I(f(x)) = shift(I(x))", 1, total, Some(e.to_string())),
    }
}

/// Scans raw orbit symbol windows for forbidden blocks; `00` may only start
/// the suffix after the orbit reached infinity. Returns the check and the
/// number of windows scanned.
pub fn orbit_windows(min_windows: usize, len: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let cfg = OrbitConfig::default();
    let mut k = 0usize;
    while t.total < min_windows {
        k += 1;
        let x = if k % 2 == 0 {
            ExtReal::Rational(random_rational(&mut rng, 1000))
        } else {
            ExtReal::Surd(random_surd(&mut rng, 50, 20))
        };
        let steps = orbit(&x, len, &cfg).expect("exact orbit");
        let syms: Vec<Symbol> = steps.iter().map(|s| s.symbol).collect();
        let inf_from = steps.iter().position(|s| s.value.is_infinite());
        for i in 0..syms.len().saturating_sub(2) {
            let w = &syms[i..i + 3];
            let d = to_string(w);
            let bad3 = d == "202" || d == "404";
            let bad2 = |a: usize| {
                let p = to_string(&syms[a..a + 2]);
                p == "24" || p == "42" || (p == "00" && inf_from.map_or(true, |f| a + 1 < f))
            };
            t.check(!bad3 && !bad2(i) && !bad2(i + 1), || format!("{x}: window {d} at {i}"));
        }
    }
    t.finish("orbit windows avoid forbidden blocks")
}

/// Itineraries produced from random exact points pass the admissibility check.
pub fn produced_itineraries_admissible(n: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let cfg = OrbitConfig::default();
    for k in 0..n {
        let x = if k % 2 == 0 {
            ExtReal::Rational(random_rational(&mut rng, 100))
        } else {
            ExtReal::Surd(random_surd(&mut rng, 50, 20))
        };
        let it = itinerary(&x, 120, &cfg).expect("exact");
        t.check(it.is_admissible(), || format!("{x}: {it}"));
    }
    t.finish("produced itineraries are admissible")
}

/// Pairs agreeing on exactly `n + 1` symbols are within `3^-n`.
pub fn metric_bound(pairs: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let horizon = 200;
    while t.total < pairs {
        let s = random_infinite_itinerary(&mut rng, 40);
        let n = rng.gen_range(0..20usize);
        let mut prefix = s.prefix(n + 1);
        let s_next = s.symbol_at(n + 1).expect("infinite");
        let options: Vec<Symbol> = allowed_next(&prefix).into_iter().filter(|&c| c != s_next).collect();
        let Some(&c) = options.choose(&mut rng) else {
            continue;
        };
        prefix.push(c);
        let extra = rng.gen_range(0..30);
        extend_admissible(&mut rng, &mut prefix, extra);
        let tt = Itinerary::new(prefix, Tail::Infinity);
        if !tt.is_admissible() {
            continue;
        }
        let d = distance(&s, &tt, horizon).expect("infinite");
        let bound = BigRational::new(BigInt::one(), BigInt::from(3).pow(n as u32));
        t.check(d <= bound && !d.is_zero(), || format!("{s} vs {tt}, n = {n}, d = {d}"));
    }
    t.finish("metric bound d <= 3^-n")
}

/// `d_H(σs, σt) ≤ 3·d_{H+1}(s, t)` for random admissible pairs.
pub fn shift_lipschitz(pairs: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let horizon = 100;
    for _ in 0..pairs {
        let s = random_infinite_itinerary(&mut rng, 40);
        let u = random_infinite_itinerary(&mut rng, 40);
        let lhs = distance(&shift(&s).unwrap(), &shift(&u).unwrap(), horizon).unwrap();
        let rhs = distance(&s, &u, horizon + 1).unwrap() * BigInt::from(3);
        t.check(lhs <= rhs, || format!("{s} vs {u}"));
    }
    t.finish("shift is 3-Lipschitz")
}

// --- the codec ----------------------------------------------------------------------

pub fn codec_round_trip(n: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    for _ in 0..n {
        let it = random_itinerary(&mut rng, 60);
        let back = itinerary_to_cf(&it).and_then(|cf| cf_to_itinerary(&cf));
        t.check(back.as_ref() == Ok(&it), || format!("{it} -> {back:?}"));
    }
    t.finish("itinerary -> CF -> itinerary")
}

pub fn rational_round_trip(bound: i64) -> Check {
    let mut t = Tally::default();
    let cfg = OrbitConfig::default();
    for p in -bound..=bound {
        for q in 1..=bound {
            let x = BigRational::new(p.into(), q.into());
            let ok = cf_extract(&ExtReal::Rational(x.clone().into()), 10_000, &cfg)
                .and_then(|cf| {
                    let n = cf.terms().len();
                    evaluate(&cf, n)
                })
                .map(|c| c.last().and_then(|c| c.value()) == Some(x.clone()));
            t.check(ok == Ok(true), || format!("{p}/{q}: {ok:?}"));
        }
    }
    t.finish("p/q -> CF -> p/q")
}

pub fn extraction_matches_decoding(n: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let cfg = OrbitConfig::default();
    for k in 0..n {
        let x = if k % 2 == 0 {
            ExtReal::Rational(random_rational(&mut rng, 100))
        } else {
            ExtReal::Surd(random_surd(&mut rng, 50, 20))
        };
        let a = cf_extract(&x, 8, &cfg).expect("exact");
        let b = itinerary(&x, 400, &cfg).and_then(|it| itinerary_to_cf(&it));
        let ok = match &b {
            Ok(b) => (0..8).all(|i| match (a.term(i), b.term(i)) {
                (Some(u), Some(v)) => u == v,
                _ => true,
            }),
            Err(_) => false,
        };
        t.check(ok, || format!("{x}: {a} vs {b:?}"));
    }
    t.finish("cf_extract agrees with decoded itinerary")
}

/// `|p_k/q_k - x|` decreases over the first `terms` convergents.
pub fn convergence(terms: usize) -> Check {
    let mut t = Tally::default();
    let cfg = OrbitConfig::default();
    let values = [
        ("sqrt(2)", ExtReal::Surd(sqrt2())),
        ("cbrt(2)", ExtReal::Certified(CertifiedReal::cbrt(2))),
        ("cbrt(3)", ExtReal::Certified(CertifiedReal::cbrt(3))),
        ("pi", ExtReal::Certified(CertifiedReal::pi())),
    ];
    for (name, x) in &values {
        let cf = cf_extract(x, terms, &cfg).expect("expansion");
        let conv = evaluate(&cf, terms).expect("convergents");
        let iv = enclose(x, 512).expect("finite");
        let (lo, hi) = (iv.lo().to_rational(), iv.hi().to_rational());
        let mut prev_lo: Option<BigRational> = None;
        for (k, c) in conv.iter().enumerate() {
            let Some(v) = c.value() else {
                t.check(false, || format!("{name}: pole at {k}"));
                continue;
            };
            // enclosure of |v - x|
            let (a, b) = ((&v - &hi).abs(), (&v - &lo).abs());
            let (err_lo, err_hi) = if (&v - &hi).signum() != (&v - &lo).signum() {
                (BigRational::zero(), a.max(b))
            } else {
                (a.clone().min(b.clone()), a.max(b))
            };
            if let Some(p) = &prev_lo {
                t.check(&err_hi < p, || format!("{name}: convergent {k} = {v} not closer"));
            }
            prev_lo = Some(err_lo);
        }
    }
    t.finish("convergents approach the value monotonically")
}

/// `periodic_cf_to_surd` of a detected cycle's word returns the entry state.
pub fn surd_round_trip(n: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut t = Tally::default();
    let cfg = OrbitConfig::default();
    for _ in 0..n {
        let s = random_surd(&mut rng, 50, 20);
        let r = detect_cycle(&s, &cfg);
        let back = r.as_ref().map_err(|e| e.clone()).and_then(|r| {
            let it = Itinerary::new(Vec::new(), Tail::Periodic(r.symbols.clone()));
            periodic_cf_to_surd(&itinerary_to_cf(&it)?)
        });
        let ok = match (&r, &back) {
            (Ok(r), Ok(b)) => state_key(&ExtReal::Surd(b.clone())).ok() == state_key(&r.cycle_states[0]).ok(),
            _ => false,
        };
        t.check(ok, || format!("{s}: {back:?}"));
    }
    t.finish("periodic CF of a cycle decodes to its entry state")
}

// --- cycles -----------------------------------------------------------------------

/// All surds `(p + q√d)/r` with `d ∈ {2, 3, 5}`, `|p|, |q|, r ≤ coef`.
pub fn surd_sweep(coef: i64) -> Vec<QuadraticSurd> {
    let mut out = Vec::new();
    let mut keys = std::collections::HashSet::new();
    for d in [2i64, 3, 5] {
        for p in -coef..=coef {
            for q in -coef..=coef {
                for r in 1..=coef {
                    if q == 0 {
                        continue;
                    }
                    if let Ok(ExtReal::Surd(s)) = surd_normalize(p, q, r, d) {
                        if keys.insert(s.to_string()) {
                            out.push(s);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Detected cycles, each re-verified: full-cycle re-application, generator
/// word, step count, and the periodic decode landing on a cycle state.
/// Cycles with fewer than two zeros per period are counted as warnings.
pub fn cycle_sweep(coef: i64, max_steps: usize) -> (Check, Check, usize) {
    let cfg = OrbitConfig {
        max_steps,
        ..OrbitConfig::default()
    };
    let mut found = Tally::default();
    let mut decode = Tally::default();
    let mut warnings = 0;
    for s in surd_sweep(coef) {
        let r = detect_cycle(&s, &cfg);
        let Ok(r) = r else {
            found.check(false, || format!("{s}: {:?}", r.err()));
            continue;
        };
        found.check(cycle_sound(&r), || format!("{s}: cycle does not verify"));
        if r.symbols.iter().filter(|&&x| x == Symbol::S0).count() < 2 {
            warnings += 1;
        }
        let keys: Vec<Vec<u8>> = r.cycle_states.iter().map(|x| state_key(x).unwrap()).collect();
        let back = itinerary_to_cf(&r.cycle_word).and_then(|cf| periodic_cf_to_surd(&cf));
        let ok = matches!(&back, Ok(b) if keys.contains(&state_key(&ExtReal::Surd(b.clone())).unwrap()));
        decode.check(ok, || format!("{s}: {} -> {back:?}", r.cycle_word));
    }
    (
        found.finish("every sweep surd has a verified cycle"),
        decode.finish("periodic decode lands on the detected cycle"),
        warnings,
    )
}

/// Re-applies `f` around the whole cycle and checks the generator word.
pub fn cycle_sound(r: &CycleReport) -> bool {
    let n = r.period;
    for (i, x) in r.cycle_states.iter().enumerate() {
        let Ok(y) = f_gamma(x) else { return false };
        if state_key(&y).ok() != state_key(&r.cycle_states[(i + 1) % n]).ok() {
            return false;
        }
    }
    let x0 = &r.cycle_states[0];
    apply_word(x0, &r.generator_word) == *x0
        && word_length(&r.generator_word) == BigInt::from(n)
        && is_admissible(&[], r.cycle_word.tail()).ok
}

/// The whole suite. `quick` shrinks sample sizes for interactive use.
pub fn run_all(quick: bool) -> Vec<Check> {
    let s = |full: usize, small: usize| if quick { small } else { full };
    let (cycles, decode, _) = cycle_sweep(5, 5000);
    vec![
        neg_recip_involution(s(1000, 200), 1),
        surd_normalize_sound(s(1000, 200), 2),
        cmp_small_agrees(s(1000, 200), 3),
        nested_refinement(),
        branch_coherence(s(1000, 200), 4),
        unique_fixed_point(s(10_000, 1000), 5),
        certified_tracks_exact(100),
        rationals_reach_infinity(if quick { 20 } else { 50 }),
        semiconjugacy(s(500, 100), s(200, 40), 50, 6),
        orbit_windows(s(100_000, 10_000), 100, 7),
        produced_itineraries_admissible(s(500, 100), 8),
        metric_bound(s(1000, 200), 9),
        shift_lipschitz(s(1000, 200), 10),
        codec_round_trip(s(500, 100), 11),
        rational_round_trip(if quick { 15 } else { 40 }),
        extraction_matches_decoding(s(200, 50), 12),
        convergence(15),
        surd_round_trip(s(100, 30), 13),
        cycles,
        decode,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let failed: Vec<String> = run_all(true)
            .into_iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn random_itineraries_are_admissible() {
        let mut r = rng(99);
        for _ in 0..200 {
            assert!(random_itinerary(&mut r, 30).is_admissible());
        }
    }
}
