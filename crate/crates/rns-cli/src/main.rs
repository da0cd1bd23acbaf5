//! `rnsdiv`: inspect RNS word formats, emit inverse tables, and run traced
//! scaling, conversion, base-extension, decomposition, and division.
//!
//! Exit codes: 0 success, 1 usage error, 2 arithmetic or input error,
//! 3 selftest or fuzz failure.

use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num_bigint::BigUint;

use rns_core::config::{parse_format_config, value_from_cells};
use rns_core::oracle::{exhaustive_toy_check, fuzz_divisions, toy_format, verify_reference_table};
use rns_core::selftest::run_selftest;
use rns_core::{
    base_extend_traced, build_inverse_table, decompose, divide, emit_trace, format_efficiency,
    mod9_default_format, mrc_digits, mrc_value, multi_factor_scale, DivideOptions, DivisionMode,
    RnsFormat, RnsValue, TraceFormat,
};

#[derive(Parser)]
#[command(
    name = "rnsdiv",
    version,
    about = "Residue-number-system arithmetic traces and direct integer division"
)]
struct Cli {
    /// Format config file (`width N` / `power BASE POWER` / `plain PRIME`
    /// lines); the bundled 18-digit word when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the moduli table, range, and bit efficiency
    Format,
    /// Print the multiplicative-inverse table (UND marks same-base cells)
    Luts,
    /// Encode a decimal value into RNS digits
    Encode { value: String },
    /// Decode a comma-separated digit list; `*` marks an invalid digit
    Decode { digits: String },
    /// Trace scaling by a sequence of base-power factors
    Scale {
        value: String,
        /// Factor values, each a power of a format base (e.g. 125,3,16)
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<u64>,
    },
    /// Trace mixed-radix conversion
    Mrc { value: String },
    /// Base-extend the digit file (cells with `*`), tracing the recovery
    Extend { file: PathBuf },
    /// Trace divisor decomposition and print the factor script
    Decompose { value: String },
    /// Divide: prints `quotient Q remainder R`
    Div {
        dividend: String,
        divisor: String,
        /// Re-run the divisor decomposition every iteration
        #[arg(long)]
        live: bool,
        /// Also emit the full trace (md, csv, or json)
        #[arg(long, value_name = "FMT")]
        trace: Option<String>,
    },
    /// Run the bundled reference traces and table verification
    Selftest,
    /// Check seeded random divisions against the big-integer oracle
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also run every division of the 360-range toy word
        #[arg(long)]
        exhaustive_toy: bool,
        /// Write the machine-readable report here
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
    },
}

fn main() {
    // Die quietly when a pipe downstream closes (e.g. `rnsdiv luts | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}

fn load_format(config: &Option<PathBuf>) -> Result<Arc<RnsFormat>, String> {
    match config {
        None => Ok(mod9_default_format()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("reading {}: {e}", path.display()))?;
            let cfg = parse_format_config(&text).map_err(|e| e.to_string())?;
            Ok(Arc::new(cfg.build().map_err(|e| e.to_string())?))
        }
    }
}

fn parse_value(fmt: &Arc<RnsFormat>, text: &str) -> Result<RnsValue, String> {
    let x = BigUint::from_str(text).map_err(|_| format!("`{text}` is not a decimal integer"))?;
    RnsValue::encode(fmt, &x).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<i32, String> {
    let fmt = load_format(&cli.config)?;
    match cli.command {
        Command::Format => {
            println!("digit width: {} bits, {} digits", fmt.digit_width(), fmt.digit_count());
            println!("index base power modulus kind");
            for (i, s) in fmt.specs().iter().enumerate() {
                println!(
                    "{:>5} {:>4} {:>5} {:>7} {}",
                    i + 1,
                    s.base(),
                    s.max_power(),
                    s.modulus(),
                    if s.is_power_based() { "power" } else { "plain" }
                );
            }
            println!("range = {}", fmt.range());
            println!("log2(range) = {:.2}", fmt.range_bits());
            println!("efficiency = {:.2}%", format_efficiency(&fmt));
            Ok(0)
        }
        Command::Luts => {
            let tbl = build_inverse_table(&fmt);
            print_luts(&tbl);
            Ok(0)
        }
        Command::Encode { value } => {
            let v = parse_value(&fmt, &value)?;
            let cells: Vec<String> = v
                .cells()
                .iter()
                .map(|c| c.map(|v| v.to_string()).unwrap_or_else(|| "*".into()))
                .collect();
            println!("{}", cells.join(","));
            Ok(0)
        }
        Command::Decode { digits } => {
            let v = value_from_cells(&fmt, &digits).map_err(|e| e.to_string())?;
            println!("{}", v.decode());
            Ok(0)
        }
        Command::Scale { value, factors } => {
            let v = parse_value(&fmt, &value)?;
            let tbl = build_inverse_table(&fmt);
            let steps: Vec<(usize, u32)> = factors
                .iter()
                .map(|&f| {
                    fmt.locate_power_value(f)
                        .ok_or_else(|| format!("{f} is not a base power of this format"))
                })
                .collect::<Result<_, _>>()?;
            let (out, trace) = multi_factor_scale(&v, &steps, &tbl).map_err(|e| e.to_string())?;
            print!("{}", emit_trace(&trace, TraceFormat::Markdown));
            println!("value = {}", out.decode());
            Ok(0)
        }
        Command::Mrc { value } => {
            let v = parse_value(&fmt, &value)?;
            let (digits, trace) = mrc_digits(&v);
            print!("{}", emit_trace(&trace, TraceFormat::Markdown));
            let list: Vec<String> =
                digits.iter().map(|d| format!("{}@{}", d.value, d.radix)).collect();
            println!("digits = [{}]", list.join(", "));
            println!("value = {}", mrc_value(&digits));
            Ok(0)
        }
        Command::Extend { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| format!("reading {}: {e}", file.display()))?;
            let line: Vec<String> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect();
            let v = value_from_cells(&fmt, &line.join(",")).map_err(|e| e.to_string())?;
            let tbl = build_inverse_table(&fmt);
            let (out, trace, logs) = base_extend_traced(&v, &tbl).map_err(|e| e.to_string())?;
            print!("{}", emit_trace(&trace, TraceFormat::Markdown));
            for log in &logs {
                println!(
                    "recovered d_{} = {} (weights {:?}, partial sums {:?})",
                    log.target + 1,
                    out.digit(log.target).value(),
                    log.weights,
                    log.accumulators
                );
            }
            println!("value = {}", out.decode());
            Ok(0)
        }
        Command::Decompose { value } => {
            let v = parse_value(&fmt, &value)?;
            let tbl = build_inverse_table(&fmt);
            let (script, trace) = decompose(&v, &tbl).map_err(|e| e.to_string())?;
            print!("{}", emit_trace(&trace, TraceFormat::Markdown));
            let steps: Vec<String> = script
                .steps
                .iter()
                .map(|s| match s {
                    rns_core::ScriptStep::Increment => "inc".to_string(),
                    rns_core::ScriptStep::Scale { factor, .. } => format!("scale({factor})"),
                    rns_core::ScriptStep::BaseExtend => "extend".to_string(),
                })
                .collect();
            println!("script = {}", steps.join(", "));
            let factors: Vec<String> = script.factors().iter().map(u64::to_string).collect();
            println!("factors = {}", factors.join(" x "));
            println!("increments = {}", script.increments);
            println!("ŷ = {}", script.y_hat);
            Ok(0)
        }
        Command::Div { dividend, divisor, live, trace } => {
            let trace_fmt = trace
                .map(|t| TraceFormat::from_str(&t))
                .transpose()
                .map_err(|e| e.to_string())?;
            let x = parse_value(&fmt, &dividend)?;
            let y = parse_value(&fmt, &divisor)?;
            let tbl = build_inverse_table(&fmt);
            let mode = if live { DivisionMode::Live } else { DivisionMode::Replay };
            let options = DivideOptions { mode, capture_trace: true };
            let result = divide(&x, &y, &tbl, &options).map_err(|e| e.to_string())?;
            if let Some(tf) = trace_fmt {
                print!("{}", emit_trace(&result.trace, tf));
                if tf != TraceFormat::Json {
                    println!(
                        "iterations = {}, corrections = {}, cycle estimate = {}",
                        result.iterations, result.corrections, result.cycle_estimate
                    );
                }
            }
            println!(
                "quotient {} remainder {}",
                result.quotient.decode(),
                result.remainder.decode()
            );
            Ok(0)
        }
        Command::Selftest => {
            let report = run_selftest();
            print!("{}", report.text());
            let fmt = rns_core::mod9_power_format();
            let tbl = build_inverse_table(&fmt);
            let table_report = verify_reference_table(&fmt, &tbl);
            print!("{}", table_report.text());
            Ok(if report.passed() && table_report.passed() { 0 } else { 3 })
        }
        Command::Fuzz { count, seed, exhaustive_toy, json } => {
            let tbl = build_inverse_table(&fmt);
            let report = fuzz_divisions(&fmt, &tbl, count, seed);
            print!("{}", report.text());
            let mut failed = !report.passed();
            let mut failure_objects = Vec::new();
            for f in &report.failures {
                let path = format!("fuzz_failure_{}.md", f.index);
                std::fs::write(&path, &f.trace_md)
                    .map_err(|e| format!("writing {path}: {e}"))?;
                println!("trace written to {path}");
                let mut obj = serde_json::to_value(f).expect("failure serializes");
                obj["trace_path"] = serde_json::Value::String(path);
                failure_objects.push(obj);
            }
            let mut toy_json = serde_json::Value::Null;
            if exhaustive_toy {
                let toy_tbl = build_inverse_table(&toy_format());
                let (cases, failures) = exhaustive_toy_check(&toy_tbl);
                println!("exhaustive toy: {cases} cases, {} failures", failures.len());
                for (x, y) in failures.iter().take(10) {
                    println!("exhaustive toy failure: {x} / {y}");
                }
                failed |= !failures.is_empty();
                toy_json = serde_json::json!({ "cases": cases, "failures": failures });
            }
            if let Some(path) = json {
                let doc = serde_json::json!({
                    "seed": report.seed,
                    "cases": report.cases,
                    "failures": failure_objects,
                    "exhaustive_toy": toy_json,
                });
                std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap())
                    .map_err(|e| format!("writing {}: {e}", path.display()))?;
                println!("report written to {}", path.display());
            }
            Ok(if failed { 3 } else { 0 })
        }
    }
}

fn print_luts(tbl: &rns_core::InverseTable) {
    let values: Vec<(usize, u32, u64)> = tbl.divisor_values().to_vec();
    let header: Vec<String> = values.iter().map(|(_, _, v)| v.to_string()).collect();
    println!("inverse of row value with respect to column modulus");
    println!("{:>8} | {}", "1/x", header.join(" "));
    for &(j, k, d) in &values {
        let mut cells = Vec::with_capacity(values.len());
        for &(i, p, _) in &values {
            match tbl.try_inverse(j, k, i, p) {
                Some(v) => cells.push(v.to_string()),
                None => cells.push("UND".into()),
            }
        }
        println!("{d:>8} | {}", cells.join(" "));
    }
}
