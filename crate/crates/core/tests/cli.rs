use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fgamma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fgamma"))
        .args(args)
        .env_remove("FGAMMA_PRECISION")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = fgamma(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn schema() -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&doc).unwrap()
}

#[test]
fn cf_of_pi() {
    assert_eq!(stdout(&["cf", "pi", "--terms", "5"]), "[3; -7 : 15 : -1 : 292]\n");
}

#[test]
fn cube_root_csv_row_five() {
    let text = stdout(&["orbit", "cbrt(2)", "--steps", "115", "--precision", "1024", "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["step", "symbol", "value"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 116);
    assert_eq!(&rows[5][0], "5");
    assert_eq!(&rows[5][1], "0");
    assert_eq!(&rows[5][2], "-0.847322101863073");
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[0].parse::<usize>().unwrap(), i);
        assert!(matches!(&r[1], "0" | "2" | "4"));
        r[2].parse::<f64>().unwrap();
    }
}

#[test]
fn decode_sqrt2() {
    assert_eq!(
        stdout(&["decode", "(402204)*"]),
        "itinerary: (402204)*\ncf: [1; (-2 : 2)*]\nvalue: sqrt(2)\napprox: 1.4142135623731\n"
    );
    assert_eq!(
        stdout(&["decode", "[2; (-2 : 2)*]"]),
        "itinerary: (440220)*\ncf: [2; (-2 : 2)*]\nvalue: 1+sqrt(2)\napprox: 2.4142135623731\n"
    );
}

#[test]
fn inadmissible_decode_is_a_usage_error() {
    let out = fgamma(&["decode", "40(2204)*"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("block 42"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(fgamma(&["orbit"]).status.code(), Some(2));
    assert_eq!(fgamma(&["orbit", "sqrt(2", "--steps", "3"]).status.code(), Some(2));
    assert_eq!(fgamma(&["orbit", "2", "--precision", "15"]).status.code(), Some(2));
    assert_eq!(fgamma(&["orbit", "2", "--steps", "0"]).status.code(), Some(2));
    assert_eq!(fgamma(&["cf", "2", "--format", "svg"]).status.code(), Some(2));
    assert_eq!(fgamma(&["periodic", "pi"]).status.code(), Some(2));
    assert_eq!(fgamma(&["plot", "0"]).status.code(), Some(1));
    assert_eq!(fgamma(&["--version"]).status.code(), Some(0));
}

#[test]
fn uncertifiable_boundary_exits_three() {
    // at 16 bits the orbit of pi cannot get past the large run of 292
    let out = fgamma(&["orbit", "pi", "--steps", "322", "--precision", "16"]);
    if out.status.success() {
        return;
    }
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
}

#[test]
fn precision_from_environment() {
    let run = |env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_fgamma"));
        c.args(["orbit", "pi", "--steps", "2", "--format", "json"]);
        match env {
            Some(v) => c.env("FGAMMA_PRECISION", v),
            None => c.env_remove("FGAMMA_PRECISION"),
        };
        let v: Value = serde_json::from_slice(&c.output().unwrap().stdout).unwrap();
        v["precision"].as_u64().unwrap()
    };
    assert_eq!(run(None), 256);
    assert_eq!(run(Some("1024")), 1024);
}

#[test]
fn json_outputs_validate() {
    let schema = schema();
    let commands: &[&[&str]] = &[
        &["orbit", "9/7", "--steps", "12", "--format", "json"],
        &["orbit", "cbrt(3)", "--steps", "10", "--format", "json"],
        &["itinerary", "sqrt(3)", "--format", "json"],
        &["cf", "pi", "--terms", "5", "--format", "json"],
        &["cf", "9/7", "--format", "json"],
        &["decode", "(4020)*", "--format", "json"],
        &["decode", "402220", "--format", "json"],
        &["periodic", "sqrt(2)", "--format", "json"],
        &["periodic", "4/3", "--format", "json"],
        &["scan", "cbrt(2)", "--format", "json"],
        &["scan", "sqrt(7)", "--format", "json"],
    ];
    for args in commands {
        let v: Value = serde_json::from_str(&stdout(args)).unwrap();
        let msgs: Vec<String> = match schema.validate(&v) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| e.to_string()).collect(),
        };
        assert!(msgs.is_empty(), "{args:?}: {msgs:?}");
    }
}

#[test]
fn periodic_reports() {
    let v: Value = serde_json::from_str(&stdout(&["periodic", "(1+sqrt(5))/2", "--format", "json"])).unwrap();
    assert_eq!(v["period"], 4);
    assert_eq!(v["itinerary"], "(4020)*");
    assert_eq!(stdout(&["periodic", "4/3"]), "steps to infinity: 6\nitinerary: 402220...\n");
}

#[test]
fn plot_writes_svg_file() {
    let dir = std::env::temp_dir().join(format!("fgamma-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("pi.svg");
    let out = fgamma(&["plot", "pi", "--steps", "30", "--precision", "512", "-o", file.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let svg = std::fs::read_to_string(&file).unwrap();
    assert!(svg.contains("<svg") && svg.contains(r#"version="1.1""#));
    let inline = stdout(&["plot", "pi", "--steps", "30", "--precision", "512"]);
    assert_eq!(svg, inline);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_quick_passes() {
    let out = stdout(&["verify", "--quick"]);
    assert!(out.lines().all(|l| l.starts_with("PASS ")), "{out}");
}
