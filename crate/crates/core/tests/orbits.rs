//! Orbit values, itineraries and expansions of cubic and transcendental
//! inputs, against reference values computed independently at 4000 bits.

use fgamma::arith::{parse_literal, render_decimal};
use fgamma::codec::cf_extract;
use fgamma::map::{orbit, OrbitConfig};
use fgamma::shift::itinerary;

fn check_rows(lit: &str, bits: u32, rows: &[(usize, &str)]) {
    let x = parse_literal(lit).unwrap();
    let n = rows.iter().map(|r| r.0).max().unwrap();
    let steps = orbit(&x, n, &OrbitConfig::with_bits(bits)).unwrap();
    for &(k, want) in rows {
        assert_eq!(render_decimal(&steps[k].value, 20), want, "{lit} step {k}");
    }
}

fn check_symbols(lit: &str, bits: u32, want: &str) {
    let x = parse_literal(lit).unwrap();
    let it = itinerary(&x, want.len(), &OrbitConfig::with_bits(bits)).unwrap();
    assert_eq!(it.to_string(), want, "{lit}");
}

fn check_cf(lit: &str, want: &[i64]) {
    let x = parse_literal(lit).unwrap();
    let cf = cf_extract(&x, want.len(), &OrbitConfig::with_bits(512)).unwrap();
    let got: Vec<i64> = (0..want.len()).map(|k| cf.term(k).unwrap().try_into().unwrap()).collect();
    assert_eq!(got, want, "{lit}");
}

#[test]
fn cube_root_of_two() {
    check_rows(
        "cbrt(2)",
        1024,
        &[
            (0, "1.2599210498948731648"),
            (1, "0.25992104989487316477"),
            (5, "-0.84732210186307263952"),
            (17, "-0.22092167902527537775"),
            (22, "0.52649103705929751315"),
            (26, "0.11189244188653292681"),
            (35, "-0.93715413784670748973"),
            (36, "1.0670603261675747475"),
            (37, "0.06706032616757474746"),
            (38, "-14.91194655840376203"),
            (115, "1.0698082160690570284"),
        ],
    );
    check_symbols("cbrt(2)", 1024, "402220402222204020444402040222222220402222222222222204022222");
    check_cf("cbrt(2)", &[1, -3, 1, -5, 1, -1, 4, -1, 1, -8, 1, -14]);
}

#[test]
fn cube_root_of_three() {
    check_rows(
        "cbrt(3)",
        256,
        &[
            (0, "1.4422495703074083823"),
            (1, "0.44224957030740838232"),
            (2, "-2.2611666966796562484"),
            (3, "-1.2611666966796562484"),
            (4, "-0.26116669667965624843"),
            (5, "3.828972119008677792"),
            (6, "2.828972119008677792"),
            (7, "1.828972119008677792"),
            (8, "0.82897211900867779201"),
            (9, "-1.2063131884288762974"),
            (10, "-0.20631318842887629741"),
        ],
    );
    check_symbols("cbrt(3)", 256, "402204440204444020444440204022222204402222204444444402220444");
    check_cf("cbrt(3)", &[1, -2, 3, -1, 4, -1, 5, -1, 1, -6, 2, -5]);
}

#[test]
fn pi() {
    check_rows(
        "pi",
        2048,
        &[
            (3, "0.14159265358979323846"),
            (11, "-0.062513305931045769793"),
            (27, "0.99659440668571988892"),
            (29, "-0.0034172310133726034641"),
            (30, "292.63459101439547238"),
            (322, "0.63459101439547237854"),
        ],
    );
    check_symbols("pi", 1024, "444022222220444444444444444020444444444444444444444444444444");
    check_cf("pi", &[3, -7, 15, -1, 292, -1, 1, -1, 2, -1, 3, -1]);
}

#[test]
fn e() {
    check_rows(
        "e",
        512,
        &[
            (0, "2.7182818284590452354"),
            (3, "-1.3922111911773328144"),
            (10, "1.2204792856454378093"),
            (50, "5.5192061700340730593"),
        ],
    );
    check_symbols("e", 512, "440204402040222204020444444020402222222204020444444444402040");
    check_cf("e", &[2, -1, 2, -1, 1, -4, 1, -1, 6, -1, 1, -8]);
}

#[test]
fn low_precision_still_certifies_or_says_so() {
    // 64 bits is far too little for pi at step 322; the orbit must either be
    // right or fail with a certification error, never silently wrong
    let x = parse_literal("pi").unwrap();
    match orbit(&x, 322, &OrbitConfig { max_bits: 64, ..OrbitConfig::with_bits(64) }) {
        Ok(rows) => assert_eq!(render_decimal(&rows[322].value, 5), "0.63459"),
        Err(e) => assert!(
            matches!(e, fgamma::error::Error::BoundaryUnresolvable { .. } | fgamma::error::Error::PrecisionUnavailable { .. }),
            "{e}"
        ),
    }
}
