//! Command-line front end. `run` is the whole program; `main` only forwards
//! arguments and the standard streams.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{aperiodicity_scan, detect_cycle_ext, rational_termination, ScanReport};
use crate::arith::{parse_literal, render_decimal, ExtReal};
use crate::codec::{cf_extract, cf_to_itinerary, evaluate, itinerary_to_cf, periodic_cf_to_surd, CfTail, MinusCF};
use crate::error::Error;
use crate::map::{orbit, OrbitConfig, OrbitStep};
use crate::plot::{emit_plot, PlotOptions, PlotStyle};
use crate::shift::{itinerary, Itinerary};
use crate::verify;

pub const MIN_PRECISION: u32 = 16;
pub const MAX_PRECISION: u32 = 1 << 20;

#[derive(Parser, Debug)]
#[command(
    name = "fgamma",
    version,
    about = "Orbits, itineraries and minus continued fractions of the modular-group boundary map",
    after_help = "Number literals: integers, decimals, p/q, sqrt(n), cbrt(n), pi, e, combined with + - * / and parentheses.\n\
                  Precision is in bits of relative accuracy. Long orbits of transcendental inputs lose about\n\
                  log2|a| bits per large run a; following pi to step 322 needs at least 1024 bits."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in bits for certified values.
    #[arg(long, global = true, env = "FGAMMA_PRECISION", default_value_t = 256)]
    precision: u32,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Significant digits for decimal values.
    #[arg(long, global = true, default_value_t = 15)]
    digits: usize,

    /// Write the data stream to a file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of f^k(x) for k = 0..=steps.
    Orbit {
        input: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// The first `len` symbols of the itinerary of x.
    Itinerary {
        input: String,
        #[arg(long, default_value_t = 40)]
        len: usize,
    },
    /// Minus continued fraction terms of x.
    Cf {
        input: String,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Decodes an itinerary such as `(402204)*` or a continued fraction
    /// such as `[1; (-2 : 2)*]`.
    Decode { input: String },
    /// Cycle of a quadratic surd, or the number of steps a rational takes to
    /// reach infinity.
    Periodic {
        input: String,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
    },
    /// Searches an itinerary prefix for a short period.
    Scan {
        input: String,
        #[arg(long, default_value_t = 100)]
        horizon: usize,
        #[arg(long, default_value_t = 40)]
        max_period: usize,
    },
    /// SVG plot of an orbit.
    Plot {
        input: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Style::Timeseries)]
        style: Style,
        /// Half-width of the plotted window.
        #[arg(long)]
        bound: Option<f64>,
        #[arg(long)]
        title: Option<String>,
    },
    /// Runs the randomized property suite.
    Verify {
        /// Smaller sample sizes.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Style {
    Timeseries,
    Cobweb,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::InvalidPrecision(_)
        | Error::Inadmissible { .. }
        | Error::InvalidItinerary(_)
        | Error::InvalidCf(_)
        | Error::InconsistentCf { .. }
        | Error::UnboundedRun
        | Error::UnsupportedRadicand(_)
        | Error::NotQuadraticIrrational => 2,
        Error::BoundaryUnresolvable { .. } | Error::PrecisionUnavailable { .. } => 3,
        _ => 1,
    }
}

/// Runs one command. Data goes to `out` (or the `--output` file),
/// diagnostics to `err`. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind::*;
            return match e.kind() {
                DisplayHelp | DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    let result = execute(&cli);
    match result {
        Ok(Output { data, failed }) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, data.as_bytes()),
                None => out.write_all(data.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return 1;
            }
            i32::from(failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

struct Output {
    data: String,
    /// Nonzero exit without an error value (a failed `verify`).
    failed: bool,
}

impl From<String> for Output {
    fn from(data: String) -> Self {
        Output { data, failed: false }
    }
}

fn config(cli: &Cli) -> Result<OrbitConfig, Error> {
    if !(MIN_PRECISION..=MAX_PRECISION).contains(&cli.precision) {
        return Err(if cli.precision < MIN_PRECISION {
            Error::InvalidPrecision(cli.precision)
        } else {
            Error::InvalidArgument(format!(
                "precision {} exceeds the maximum of {MAX_PRECISION} bits",
                cli.precision
            ))
        });
    }
    Ok(OrbitConfig::with_bits(cli.precision))
}

fn format(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format, Error> {
    let f = cli.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<&str> = allowed.iter().map(|f| format_name(*f)).collect();
        Err(Error::InvalidArgument(format!(
            "format {} is not available for this command (use {})",
            format_name(f),
            names.join(", ")
        )))
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
        Format::Text => "text",
        Format::Svg => "svg",
    }
}

fn positive(name: &str, v: usize) -> Result<(), Error> {
    if v == 0 {
        return Err(Error::InvalidArgument(format!("--{name} must be positive")));
    }
    Ok(())
}

fn json_doc(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    let cfg = config(cli)?;
    let digits = cli.digits.max(1);
    use Format::*;
    Ok(match &cli.command {
        Command::Orbit { input, steps } => {
            positive("steps", *steps)?;
            let fmt = format(cli, Text, &[Csv, Json, Text])?;
            let x = parse_literal(input)?;
            let rows = orbit(&x, *steps, &cfg)?;
            orbit_table(input, cli.precision, &rows, fmt, digits).into()
        }
        Command::Itinerary { input, len } => {
            positive("len", *len)?;
            let fmt = format(cli, Text, &[Json, Text])?;
            let x = parse_literal(input)?;
            let it = itinerary(&x, *len, &cfg)?;
            match fmt {
                Json => json_doc(json!({
                    "command": "itinerary",
                    "input": input,
                    "itinerary": it.to_string(),
                    "admissible": it.is_admissible(),
                })),
                _ => format!("{it}\n"),
            }
            .into()
        }
        Command::Cf { input, terms } => {
            positive("terms", *terms)?;
            let fmt = format(cli, Text, &[Json, Text])?;
            let x = parse_literal(input)?;
            let cf = cf_extract(&x, *terms, &cfg)?;
            match fmt {
                Json => json_doc(json!({
                    "command": "cf",
                    "input": input,
                    "terms": cf.terms().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                    "tail": tail_name(cf.tail()),
                    "cf": cf.to_string(),
                })),
                _ => format!("{}\n", cf.prefix_string(*terms)),
            }
            .into()
        }
        Command::Decode { input } => {
            let fmt = format(cli, Text, &[Json, Text])?;
            decode(input, fmt, digits)?.into()
        }
        Command::Periodic { input, max_steps } => {
            positive("max-steps", *max_steps)?;
            let fmt = format(cli, Text, &[Json, Text])?;
            let cfg = OrbitConfig {
                max_steps: *max_steps,
                ..cfg
            };
            periodic(input, &cfg, fmt)?.into()
        }
        Command::Scan {
            input,
            horizon,
            max_period,
        } => {
            positive("horizon", *horizon)?;
            positive("max-period", *max_period)?;
            let fmt = format(cli, Text, &[Json, Text])?;
            let x = parse_literal(input)?;
            let r = aperiodicity_scan(&x, *horizon, *max_period, &cfg)?;
            match fmt {
                Json => {
                    let mut v = r.to_json();
                    v["command"] = json!("scan");
                    v["input"] = json!(input);
                    json_doc(v)
                }
                _ => {
                    let found = match r.candidate {
                        Some((p, s)) => format!("period {p} from offset {s}"),
                        None => format!("no period <= {}", r.max_period),
                    };
                    format!("prefix: {}\nresult: {found}\nnote: {}\n", r.prefix, ScanReport::NOTE)
                }
            }
            .into()
        }
        Command::Plot {
            input,
            steps,
            style,
            bound,
            title,
        } => {
            positive("steps", *steps)?;
            format(cli, Svg, &[Svg])?;
            let x = parse_literal(input)?;
            let rows = orbit(&x, *steps, &cfg)?;
            let opts = PlotOptions {
                style: match style {
                    Style::Timeseries => PlotStyle::Timeseries,
                    Style::Cobweb => PlotStyle::Cobweb,
                },
                bound: *bound,
                title: title.clone(),
            };
            emit_plot(&rows, &opts)?.into()
        }
        Command::Verify { quick } => {
            let fmt = format(cli, Text, &[Json, Text])?;
            let checks = verify::run_all(*quick);
            let failed = checks.iter().any(|c| !c.passed);
            let data = match fmt {
                Json => json_doc(json!({
                    "command": "verify",
                    "passed": !failed,
                    "checks": checks.iter().map(|c| json!({
                        "name": c.name,
                        "passed": c.passed,
                        "detail": c.detail,
                    })).collect::<Vec<_>>(),
                })),
                _ => checks
                    .iter()
                    .map(|c| format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                    .collect(),
            };
            Output { data, failed }
        }
    })
}

fn tail_name(t: &CfTail) -> &'static str {
    match t {
        CfTail::Finite => "finite",
        CfTail::Periodic(_) => "periodic",
        CfTail::Truncated => "truncated",
    }
}

fn orbit_table(input: &str, bits: u32, rows: &[OrbitStep], fmt: Format, digits: usize) -> String {
    let values: Vec<String> = rows.iter().map(|r| render_decimal(&r.value, digits)).collect();
    match fmt {
        Format::Csv => {
            let mut s = String::from("step,symbol,value\n");
            for (r, v) in rows.iter().zip(&values) {
                s.push_str(&format!("{},{},{}\n", r.index, r.symbol, v));
            }
            s
        }
        Format::Json => json_doc(json!({
            "command": "orbit",
            "input": input,
            "precision": bits,
            "steps": rows.iter().zip(&values).map(|(r, v)| json!({
                "step": r.index,
                "symbol": r.symbol.to_string(),
                "value": v,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let width = values.iter().map(|v| v.len()).max().unwrap_or(0);
            let mut s = format!("{:>5}  {}  {:>width$}\n", "step", "sym", "value");
            for (r, v) in rows.iter().zip(&values) {
                s.push_str(&format!("{:>5}  {:>3}  {:>width$}\n", r.index, r.symbol, v));
            }
            s
        }
    }
}

fn decode(input: &str, fmt: Format, digits: usize) -> Result<String, Error> {
    let (it, cf) = if input.trim_start().starts_with('[') {
        let cf: MinusCF = input.parse()?;
        (cf_to_itinerary(&cf)?, cf)
    } else {
        let it: Itinerary = input.parse()?;
        if let Some((position, block)) = it.admissibility().violation {
            return Err(Error::Inadmissible { position, block });
        }
        let cf = itinerary_to_cf(&it)?;
        (it, cf)
    };
    // exact value when the tail determines one; otherwise the last convergent
    let (value, exact) = match cf.tail() {
        CfTail::Periodic(_) => (Some(ExtReal::Surd(periodic_cf_to_surd(&cf)?)), true),
        tail => {
            let conv = evaluate(&cf, cf.terms().len())?;
            let v = conv.last().and_then(|c| c.value()).map(|q| ExtReal::Rational(q.into()));
            (v, *tail == CfTail::Finite)
        }
    };
    let approx = value.as_ref().map(|v| render_decimal(v, digits));
    Ok(match fmt {
        Format::Json => json_doc(json!({
            "command": "decode",
            "input": input,
            "itinerary": it.to_string(),
            "cf": cf.to_string(),
            "value": value.as_ref().map(|v| v.to_string()),
            "exact": exact,
            "approx": approx,
        })),
        _ => {
            let label = if exact { "value" } else { "convergent" };
            let mut s = format!("itinerary: {it}\ncf: {cf}\n");
            match (&value, &approx) {
                (Some(v), Some(a)) => s.push_str(&format!("{label}: {v}\napprox: {a}\n")),
                _ => s.push_str(&format!("{label}: inf\n")),
            }
            s
        }
    })
}

fn periodic(input: &str, cfg: &OrbitConfig, fmt: Format) -> Result<String, Error> {
    let x = parse_literal(input)?;
    Ok(match &x {
        ExtReal::Surd(_) => {
            let r = detect_cycle_ext(&x, cfg)?;
            match fmt {
                Format::Json => {
                    let mut v = r.to_json();
                    v["command"] = json!("periodic");
                    v["input"] = json!(input);
                    v["kind"] = json!("cycle");
                    json_doc(v)
                }
                _ => {
                    let word: String = r.symbols.iter().map(|s| s.digit()).collect();
                    let gens: Vec<String> = r.generator_word.iter().map(|g| g.to_string()).collect();
                    let mut s = format!(
                        "preperiod: {}\nperiod: {}\nword: {word}\nitinerary: {}\ngenerators: {}\nstates:\n",
                        r.preperiod,
                        r.period,
                        r.cycle_word,
                        gens.join(" ")
                    );
                    for st in &r.cycle_states {
                        s.push_str(&format!("  {st}\n"));
                    }
                    s
                }
            }
        }
        ExtReal::Rational(q) => {
            let r = rational_termination(q, cfg)?;
            match fmt {
                Format::Json => {
                    let mut v = r.to_json();
                    v["command"] = json!("periodic");
                    v["input"] = json!(input);
                    v["kind"] = json!("termination");
                    json_doc(v)
                }
                _ => format!("steps to infinity: {}\nitinerary: {}\n", r.steps_to_infinity, r.itinerary),
            }
        }
        ExtReal::Infinity => match fmt {
            Format::Json => json_doc(json!({
                "command": "periodic",
                "input": input,
                "kind": "termination",
                "steps": 0,
                "itinerary": "0...",
            })),
            _ => "steps to infinity: 0\nitinerary: 0...\n".into(),
        },
        ExtReal::Certified(_) => return Err(Error::NotQuadraticIrrational),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fgamma").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["orbit", "1/0"]).0, 2);
        assert_eq!(call(&["orbit", "1+"]).0, 2);
        assert_eq!(call(&["bogus"]).0, 2);
        assert_eq!(call(&["orbit", "2", "--precision", "8"]).0, 2);
        assert_eq!(call(&["decode", "40(2204)*"]).0, 2);
        assert_eq!(call(&["plot", "0", "--steps", "3"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn errors_go_to_stderr_only() {
        let (code, out, err) = call(&["cf", "sqrt(-2"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.starts_with("error: parse error"));
    }

    #[test]
    fn decode_reports_value() {
        let (code, out, _) = call(&["decode", "(402204)*"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "itinerary: (402204)*\ncf: [1; (-2 : 2)*]\nvalue: sqrt(2)\napprox: 1.4142135623731\n"
        );
        let (_, out, _) = call(&["decode", "[1; -3 : 2]"]);
        assert!(out.contains("value: 9/7"), "{out}");
    }

    #[test]
    fn periodic_text() {
        let (_, out, _) = call(&["periodic", "9/7"]);
        assert_eq!(out, "steps to infinity: 9\nitinerary: 402220440...\n");
    }
}
