//! `taxiseed`: compute generalized taxicab numbers T(n, m, t), seed numbers
//! and seed values, equal-sum witness constructions, and exponent range scans.
//!
//! Every invocation prints a single JSON envelope to stdout (or CSV where
//! `--csv` applies); diagnostics go to stderr. Exit codes: 0 success,
//! 1 not found within the search limit, 2 usage error, 3 internal
//! consistency failure.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use taxiseed_core::{arith, oracle, scan, witness, Error};

#[derive(Parser)]
#[command(name = "taxiseed", version, about = "Generalized taxicab numbers and their seeds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Brute-force T(n, m, t): least value that is a sum of n positive m-th
    /// powers in at least t ways.
    Taxicab {
        #[arg(short)]
        n: u64,
        #[arg(short)]
        m: u32,
        #[arg(short)]
        t: u64,
        /// Exclusive search limit; defaults from the seed construction when
        /// n is at least the conjectured seed number.
        #[arg(long)]
        limit: Option<u64>,
        /// Enumerate every representation of the winning value instead of the
        /// first t.
        #[arg(long)]
        all_reps: bool,
    },
    /// Closed-form seed number S(m, t) and seed value V(m, t).
    Seed {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        t: u32,
        /// Use the general-t pair-value enumeration even for t = 2 or 3.
        #[arg(long)]
        conjecture: bool,
    },
    /// Seed table for 1 <= m <= m_max at t = 2 or t = 3.
    Table {
        #[arg(short, value_parser = clap::value_parser!(u32).range(2..=3))]
        t: u32,
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        csv: bool,
    },
    /// Drop-set analysis of n -> T(n, m, t) and the empirical seed.
    Drops {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        t: u64,
        #[arg(long)]
        n_max: u64,
        #[arg(long, default_value_t = 3)]
        window: u64,
        /// Value search limit for locating the smallest workable n; defaults
        /// from the seed construction.
        #[arg(long)]
        v_limit: Option<u64>,
    },
    /// Build and verify an equal-sum witness construction.
    Construct {
        #[arg(short)]
        m: u32,
        #[arg(short, default_value_t = 2)]
        t: u32,
        #[arg(long)]
        kind: String,
    },
    /// Range scan over exponents m with per-m seed classification.
    Scan {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        #[arg(long)]
        workers: Option<usize>,
        /// Output file; records stream here and a `<out>.ckpt` checkpoint is
        /// maintained. Without it, records are returned inline.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Resume from the checkpoint next to --out.
        #[arg(long, requires = "out")]
        resume: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Cross-check the closed-form seed against the brute-force oracle
    /// (desk scale: t in {2, 3}, m <= 8).
    Verify {
        #[arg(short)]
        m: u32,
        #[arg(short)]
        t: u32,
    },
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli.command) {
        Ok(Output { command, parameters, result, csv, exit_code }) => {
            match csv {
                Some(lines) => println!("{lines}"),
                None => {
                    let envelope = json!({
                        "command": command,
                        "parameters": Value::Object(parameters),
                        "result": result,
                        "timing_ms": started.elapsed().as_millis() as u64,
                    });
                    println!("{envelope}");
                }
            }
            std::process::exit(exit_code);
        }
        Err(e) => {
            eprintln!("taxiseed: {e}");
            std::process::exit(exit_code_for(&e));
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NotFoundWithinLimit { .. } => 1,
        Error::Precondition(_) | Error::ArithmeticOverflow => 2,
        Error::InternalConsistency(_) => 3,
        Error::Io(_) => 1,
    }
}

struct Output {
    command: &'static str,
    parameters: Map<String, Value>,
    result: Value,
    /// When set, raw CSV is printed instead of the JSON envelope.
    csv: Option<String>,
    exit_code: i32,
}

impl Output {
    fn json(command: &'static str, parameters: Map<String, Value>, result: Value) -> Self {
        Output { command, parameters, result, csv: None, exit_code: 0 }
    }
}

fn params(entries: &[(&str, Value)]) -> Map<String, Value> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn run(command: Command) -> Result<Output, Error> {
    match command {
        Command::Taxicab { n, m, t, limit, all_reps } => cmd_taxicab(n, m, t, limit, all_reps),
        Command::Seed { m, t, conjecture } => cmd_seed(m, t, conjecture),
        Command::Table { t, m_max, csv } => cmd_table(t, m_max, csv),
        Command::Drops { m, t, n_max, window, v_limit } => cmd_drops(m, t, n_max, window, v_limit),
        Command::Construct { m, t, kind } => cmd_construct(m, t, &kind),
        Command::Scan { from, to, workers, out, resume, csv } => {
            cmd_scan(from, to, workers, out, resume, csv)
        }
        Command::Verify { m, t } => cmd_verify(m, t),
    }
}

/// Default exclusive search limit: once n reaches the conjectured seed S, the
/// padding construction pins T(n, m, t) = V + (n - S), so V + (n - S) + 1 is
/// guaranteed to contain it.
fn default_taxicab_limit(n: u64, m: u32, t: u64) -> Result<u64, Error> {
    let t32 = u32::try_from(t).map_err(|_| Error::Precondition("t too large".into()))?;
    let report = arith::conjectured_seed(m, t32.max(2))?;
    let seed = report.seed_number.to_u64();
    let value = report.seed_value.to_u64();
    match (seed, value) {
        (Some(s), Some(v)) if n >= s => Ok(v + (n - s) + 1),
        _ => Err(Error::Precondition(format!(
            "no default limit applies at n = {n}; pass --limit"
        ))),
    }
}

fn rep_to_value(r: &oracle::Representation) -> Value {
    json!(r.bases)
}

fn cmd_taxicab(
    n: u64,
    m: u32,
    t: u64,
    limit: Option<u64>,
    all_reps: bool,
) -> Result<Output, Error> {
    let limit = match limit {
        Some(l) => l,
        None => default_taxicab_limit(n, m, t)?,
    };
    let policy = if all_reps { oracle::RepsPolicy::All } else { oracle::RepsPolicy::FirstT };
    let r = oracle::taxicab(n, m, t, limit, policy)?;
    let parameters = params(&[
        ("n", json!(n)),
        ("m", json!(m)),
        ("t", json!(t)),
        ("limit", json!(limit)),
        ("all_reps", json!(all_reps)),
    ]);
    let result = json!({
        "value": r.value.to_string(),
        "search_ceiling": r.search_ceiling.to_string(),
        "representations": r.representations.iter().map(rep_to_value).collect::<Vec<_>>(),
    });
    Ok(Output::json("taxicab", parameters, result))
}

fn seed_report_value(r: &arith::SeedReport) -> Value {
    json!({
        "m": r.m,
        "t": r.t,
        "seed_number": r.seed_number.to_string(),
        "seed_value": r.seed_value.to_string(),
        "status": match r.status {
            arith::SeedStatus::Exact => "exact",
            arith::SeedStatus::ConjecturedUpperBound => "conjectured-upper-bound",
        },
        "case_label": r.case_label.map(|c| c.to_string()),
    })
}

fn cmd_seed(m: u32, t: u32, conjecture: bool) -> Result<Output, Error> {
    if m < 1 || t < 2 {
        return Err(Error::Precondition("seed requires m >= 1 and t >= 2".into()));
    }
    let report = if conjecture || t > 3 {
        arith::conjectured_seed(m, t)?
    } else if t == 2 {
        arith::seed_two_ways(m)
    } else {
        arith::seed_three_ways(m)
    };
    let parameters = params(&[
        ("m", json!(m)),
        ("t", json!(t)),
        ("conjecture", json!(conjecture)),
    ]);
    Ok(Output::json("seed", parameters, seed_report_value(&report)))
}

fn cmd_table(t: u32, m_max: u32, csv: bool) -> Result<Output, Error> {
    if m_max < 1 {
        return Err(Error::Precondition("--m-max must be at least 1".into()));
    }
    let mut rows = Vec::new();
    let mut csv_lines = vec![if t == 2 {
        "m,d,s,v".to_string()
    } else {
        "m,d,s,v,case".to_string()
    }];
    for m in 1..=m_max {
        let q = arith::seed_quantities(m);
        let report = if t == 2 {
            arith::seed_two_ways_from(&q)
        } else {
            arith::seed_three_ways_from(&q)
        };
        csv_lines.push(match t {
            2 => format!("{m},{},{},{}", q.d, report.seed_number, report.seed_value),
            _ => format!(
                "{m},{},{},{},{}",
                q.d,
                report.seed_number,
                report.seed_value,
                report.case_label.map(|c| c.to_string()).unwrap_or_default()
            ),
        });
        rows.push(json!({
            "m": m,
            "d": q.d.to_string(),
            "seed_number": report.seed_number.to_string(),
            "seed_value": report.seed_value.to_string(),
            "case_label": report.case_label.map(|c| c.to_string()),
        }));
    }
    let parameters = params(&[("t", json!(t)), ("m_max", json!(m_max))]);
    let mut output = Output::json("table", parameters, json!({ "rows": rows }));
    if csv {
        output.csv = Some(csv_lines.join("\n"));
    }
    Ok(output)
}

fn cmd_drops(
    m: u32,
    t: u64,
    n_max: u64,
    window: u64,
    v_limit: Option<u64>,
) -> Result<Output, Error> {
    let v_limit = match v_limit {
        Some(v) => v,
        None => {
            let t32 = u32::try_from(t).map_err(|_| Error::Precondition("t too large".into()))?;
            arith::conjectured_seed(m, t32.max(2))?
                .seed_value
                .to_u64()
                .and_then(|v| v.checked_add(n_max + window + 1))
                .ok_or_else(|| {
                    Error::Precondition("no default --v-limit applies at this size".into())
                })?
        }
    };
    let r = oracle::drops(m, t, n_max, v_limit, window)?;
    let parameters = params(&[
        ("m", json!(m)),
        ("t", json!(t)),
        ("n_max", json!(n_max)),
        ("window", json!(window)),
        ("v_limit", json!(v_limit)),
    ]);
    let result = json!({
        "n0": r.n0,
        "taxicab_sequence": r.taxicab_sequence
            .iter()
            .map(|(n, v)| json!([n, v.to_string()]))
            .collect::<Vec<_>>(),
        "drops": r.drops.iter().collect::<Vec<_>>(),
        "empirical_seed": r.empirical_seed,
        "seed_value": r.seed_value.to_string(),
        "stabilization_window": r.stabilization_window,
        "window_truncated": r.window_truncated,
    });
    Ok(Output::json("drops", parameters, result))
}

fn cmd_construct(m: u32, t: u32, kind: &str) -> Result<Output, Error> {
    let w = match kind {
        "lemma21" => witness::lemma21_construction(m, t)?,
        "thm51" => witness::thm51_construction(m, t.max(2))?,
        other => {
            let id: witness::EquationId = other
                .parse()
                .map_err(|e: String| Error::Precondition(e))?;
            witness::equation_witness(id, m)?
        }
    };
    let report = witness::verify_witness(&w);
    let parameters = params(&[("m", json!(m)), ("t", json!(t)), ("kind", json!(kind))]);
    let result = json!({
        "witness": serde_json::to_value(&w).expect("witness serialization"),
        "length": w.length.to_string(),
        "verified": report.pass,
        "discrepancy": report.discrepancy,
    });
    let mut output = Output::json("construct", parameters, result);
    if !report.pass {
        output.exit_code = 3;
    }
    Ok(output)
}

fn cmd_scan(
    from: u32,
    to: u32,
    workers: Option<usize>,
    out: Option<PathBuf>,
    resume: bool,
    csv: bool,
) -> Result<Output, Error> {
    if from < 1 || from > to {
        return Err(Error::Precondition("scan requires 1 <= from <= to".into()));
    }
    let workers =
        workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
    let cfg = scan::ScanConfig::new(from, to, workers);
    let parameters = params(&[
        ("from", json!(from)),
        ("to", json!(to)),
        ("workers", json!(workers)),
        ("resume", json!(resume)),
    ]);
    match out {
        Some(path) => {
            let format = if csv { scan::ScanFormat::Csv } else { scan::ScanFormat::JsonLines };
            let summary = scan::run_scan_to_file(&cfg, &path, format, resume)?;
            let result = json!({
                "out": path.display().to_string(),
                "records_written": summary.records_written,
                "resumed_from": summary.resumed_from,
                "last_m": summary.last_m,
            });
            Ok(Output::json("scan", parameters, result))
        }
        None => {
            let mut records = Vec::new();
            let mut csv_lines = vec![scan::ScanRecord::CSV_HEADER.to_string()];
            for record in scan::scan_range(&cfg) {
                let record = record?;
                csv_lines.push(record.to_csv_line());
                records.push(record.to_json_value());
            }
            let mut output =
                Output::json("scan", parameters, json!({ "records": records }));
            if csv {
                output.csv = Some(csv_lines.join("\n"));
            }
            Ok(output)
        }
    }
}

/// Desk-scale oracle limits for the formula cross-check.
fn verify_limits(seed: u64, value: u64, window: u64) -> (u64, u64) {
    (seed + 2 * window, value + 100)
}

fn cmd_verify(m: u32, t: u32) -> Result<Output, Error> {
    if !(2..=3).contains(&t) || !(1..=8).contains(&m) {
        return Err(Error::Precondition(
            "verify is desk-scale only: t in {2, 3}, 1 <= m <= 8".into(),
        ));
    }
    let formula = if t == 2 { arith::seed_two_ways(m) } else { arith::seed_three_ways(m) };
    let seed = formula.seed_number.to_u64().ok_or(Error::ArithmeticOverflow)?;
    let value = formula.seed_value.to_u64().ok_or(Error::ArithmeticOverflow)?;
    let window = 3;
    let (n_max, v_limit) = verify_limits(seed, value, window);
    let report = oracle::drops(m, u64::from(t), n_max, v_limit, window)?;
    let matches = report.empirical_seed == seed && report.seed_value == value;
    let parameters = params(&[("m", json!(m)), ("t", json!(t))]);
    let result = json!({
        "formula_seed": seed.to_string(),
        "formula_value": value.to_string(),
        "empirical_seed": report.empirical_seed.to_string(),
        "empirical_value": report.seed_value.to_string(),
        "drops": report.drops.iter().collect::<Vec<_>>(),
        "match": matches,
    });
    let mut output = Output::json("verify", parameters, result);
    if !matches {
        output.exit_code = 3;
    }
    Ok(output)
}
