//! End-to-end chains across modules: literal, orbit, itinerary, expansion,
//! decoding and cycle detection must tell the same story.

use fgamma::analysis::{aperiodicity_scan, detect_cycle_ext, rational_termination};
use fgamma::arith::{parse_literal, state_key, CertifiedReal, ExtReal};
use fgamma::codec::{cf_extract, cf_to_itinerary, evaluate, itinerary_to_cf, periodic_cf_to_surd, CfTail, MinusCF};
use fgamma::error::Error;
use fgamma::map::{orbit, OrbitConfig};
use fgamma::shift::{itinerary, Itinerary, Tail};

fn cfg() -> OrbitConfig {
    OrbitConfig::default()
}

#[test]
fn surds_decode_back_to_themselves() {
    for lit in ["sqrt(2)", "(1+sqrt(5))/2", "sqrt(2)/3", "(3-2*sqrt(3))/7", "-5+sqrt(11)", "sqrt(7)/2"] {
        let x = parse_literal(lit).unwrap();
        let r = detect_cycle_ext(&x, &cfg()).unwrap();
        // the itinerary of x is its pre-period followed by the cycle word
        let head = itinerary(&x, r.preperiod, &cfg()).unwrap().prefix(r.preperiod);
        let it = Itinerary::new(head, Tail::Periodic(r.symbols.clone()));
        let cf = itinerary_to_cf(&it).unwrap();
        assert!(matches!(cf.tail(), CfTail::Periodic(_)), "{lit}: {cf}");
        let back = ExtReal::Surd(periodic_cf_to_surd(&cf).unwrap());
        assert_eq!(state_key(&back).unwrap(), state_key(&x).unwrap(), "{lit}: {cf}");
        // and the expansion read off the value agrees with the decoded one
        let direct = cf_extract(&x, 12, &cfg()).unwrap();
        for k in 0..12 {
            assert_eq!(direct.term(k), cf.term(k), "{lit} term {k}");
        }
    }
}

#[test]
fn rationals_decode_back_to_themselves() {
    for (p, q) in [(9, 7), (4, 3), (5, 4), (-13, 8), (0, 1), (355, 113)] {
        let x = ExtReal::ratio(p, q).unwrap();
        let ExtReal::Rational(r) = &x else { unreachable!() };
        let t = rational_termination(r, &cfg()).unwrap();
        let cf = itinerary_to_cf(&t.itinerary).unwrap();
        assert_eq!(cf.tail(), &CfTail::Finite);
        let v = evaluate(&cf, cf.terms().len()).unwrap().last().unwrap().value().unwrap();
        assert_eq!(v, r.as_big().clone());
        assert_eq!(cf_to_itinerary(&cf).unwrap(), t.itinerary);
        let rows = orbit(&x, t.steps_to_infinity, &cfg()).unwrap();
        assert!(rows[t.steps_to_infinity].value.is_infinite());
        assert!(!rows[t.steps_to_infinity - 1].value.is_infinite() || t.steps_to_infinity == 0);
    }
}

#[test]
fn single_run_expansion() {
    let cf = MinusCF::from_ints(&[0, 5], CfTail::Finite).unwrap();
    assert_eq!(cf_to_itinerary(&cf).unwrap().to_string(), "0444440...");
    assert_eq!(evaluate(&cf, 2).unwrap()[1].to_string(), "-1/5");
}

#[test]
fn zero_lead_periodic_expansion() {
    let it: Itinerary = "(022044)*".parse().unwrap();
    let cf = itinerary_to_cf(&it).unwrap();
    assert_eq!(cf.to_string(), "[0; (-2 : 2)*]");
    assert_eq!(periodic_cf_to_surd(&cf).unwrap().to_string(), "-1+sqrt(2)");
}

#[test]
fn same_sign_period_is_inconsistent() {
    let cf: MinusCF = "[2; (2 : -2)*]".parse().unwrap();
    assert!(matches!(cf_to_itinerary(&cf), Err(Error::InconsistentCf { .. })));
    let cf: MinusCF = "[2; (-2 : 2)*]".parse().unwrap();
    assert_eq!(cf_to_itinerary(&cf).unwrap().to_string(), "(440220)*");
    assert_eq!(periodic_cf_to_surd(&cf).unwrap().to_string(), "1+sqrt(2)");
}

#[test]
fn scans_separate_quadratic_from_cubic() {
    let root2 = ExtReal::Certified(CertifiedReal::sqrt(2u32));
    let r = aperiodicity_scan(&root2, 100, 40, &cfg()).unwrap();
    assert_eq!(r.candidate.map(|c| c.0), Some(6));
    for lit in ["cbrt(2)", "pi", "cbrt(3)", "e"] {
        let r = aperiodicity_scan(&parse_literal(lit).unwrap(), 100, 40, &OrbitConfig::with_bits(512)).unwrap();
        assert_eq!(r.candidate, None, "{lit}");
    }
}
