//! `collatz` — the command-line surface of the scenario toolkit.
//!
//! Exit codes: 0 on success, 1 when a requested verification or sweep
//! fails, 2 on usage or parse errors. All numeric output is plain
//! decimal.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use collatz_scenarios::{
    an_series, apply_scenario, extract_scenario, hook_table, hook_table_text, is_handle, link_even,
    link_odd, on_series, period_phase_json, ratio_decimal, realization_json, sweep_verify,
    verify_link, write_svg, BigUint, PeriodPhase, Scenario, SeriesPoint, StopRule, SvgOptions,
};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "collatz",
    version,
    about = "Collatz scenarios: periods, phases, realizations, handle links, series plots"
)]
struct Cli {
    /// Emit JSON instead of plain text
    #[arg(long, global = true)]
    json: bool,

    /// Directory for written files (default: $COLLATZ_OUT or ".")
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print start period, start phase, end period, end phase of a scenario
    Periods {
        /// Scenario text, e.g. "sdsdd" or "(s^7d^4)^9"
        scenario: String,
    },
    /// Print the k-th start and end numbers of a scenario
    Realize {
        scenario: String,
        /// Realization index (1-based)
        k: u64,
        /// Replay the realization through the raw rules and report PASS/FAIL
        #[arg(long)]
        verify: bool,
    },
    /// Replay the k-th realization through the raw rules
    Verify { scenario: String, k: u64 },
    /// Run the raw rules from an odd start number and print its scenario
    Trace {
        /// Odd start number (any size)
        n: String,
        /// Stop rule: "one" (reach 1), "sigma=N" (N spikes), "ops=N" (N raw steps)
        #[arg(long, default_value = "one")]
        stop: String,
        /// Also write the trajectory: csv, svg, both, or none
        #[arg(long, default_value = "none")]
        format: String,
    },
    /// Link an integer (not divisible by 3) to a handle
    Link {
        /// Target integer (any size)
        n: String,
    },
    /// Link and verify every non-RC0 integer up to a limit; print a JSON report
    Sweep {
        #[arg(value_parser = clap::value_parser!(u64).range(18..))]
        limit: u64,
    },
    /// Print the period/phase table of the hooks s, sd, sd^2, ...
    Hooks {
        /// Largest down count to include
        max_delta: u64,
    },
    /// Print |M-N|/N for the k-th realization, exact and as a decimal
    Rho { scenario: String, k: u64 },
    /// Render realizations of a scenario as an SVG
    Plot {
        scenario: String,
        /// Comma-separated realization indices
        #[arg(long, default_value = "1,2,3")]
        realizations: String,
        /// Series mode: "on" (odd values only) or "an" (all values)
        #[arg(long, default_value = "on")]
        mode: String,
        /// Linear y axis instead of log10
        #[arg(long)]
        linear: bool,
        /// Output file (default: plot.svg in the out directory)
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("COLLATZ_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    match run(&cli, &out_dir) {
        Ok(code) => ExitCode::from(code),
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

fn usage_error(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn failure(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_FAILURE,
        message: message.into(),
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> CliError {
        failure(format!("io error: {e}"))
    }
}

fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    Scenario::parse(text).map_err(|e| usage_error(format!("bad scenario {text:?}: {e}")))
}

fn parse_biguint(text: &str) -> Result<BigUint, CliError> {
    BigUint::from_str(text).map_err(|e| usage_error(format!("bad integer {text:?}: {e}")))
}

fn periods_of(s: &Scenario) -> Result<PeriodPhase, CliError> {
    PeriodPhase::for_scenario(s).map_err(|e| failure(e.to_string()))
}

fn run(cli: &Cli, out_dir: &Path) -> Result<u8, CliError> {
    match &cli.cmd {
        Cmd::Periods { scenario } => {
            let s = parse_scenario(scenario)?;
            let pp = periods_of(&s)?;
            if cli.json {
                println!("{}", period_phase_json(&s, &pp));
            } else {
                println!(
                    "{} {} {} {}",
                    pp.start_period, pp.start_phase, pp.end_period, pp.end_phase
                );
            }
            Ok(0)
        }
        Cmd::Realize {
            scenario,
            k,
            verify,
        } => {
            let s = parse_scenario(scenario)?;
            let pp = periods_of(&s)?;
            let r = pp.realize(*k).map_err(|e| usage_error(e.to_string()))?;
            let verdict = if *verify {
                let ok = apply_scenario(&r.start, &s)
                    .map(|t| t.end() == &r.end)
                    .unwrap_or(false);
                Some(ok)
            } else {
                None
            };
            if cli.json {
                let mut v = realization_json(&s, &pp, &r);
                if let Some(ok) = verdict {
                    v["verified"] = serde_json::json!(ok);
                }
                println!("{v}");
            } else {
                match verdict {
                    None => println!("{} {}", r.start, r.end),
                    Some(ok) => {
                        println!("{} {} {}", r.start, r.end, if ok { "PASS" } else { "FAIL" })
                    }
                }
            }
            Ok(if verdict == Some(false) {
                EXIT_FAILURE
            } else {
                0
            })
        }
        Cmd::Verify { scenario, k } => {
            let s = parse_scenario(scenario)?;
            let pp = periods_of(&s)?;
            let r = pp.realize(*k).map_err(|e| usage_error(e.to_string()))?;
            let ok = apply_scenario(&r.start, &s)
                .map(|t| t.end() == &r.end)
                .unwrap_or(false);
            if cli.json {
                let mut v = realization_json(&s, &pp, &r);
                v["verified"] = serde_json::json!(ok);
                println!("{v}");
            } else {
                println!("{} {} {}", r.start, r.end, if ok { "PASS" } else { "FAIL" });
            }
            Ok(if ok { 0 } else { EXIT_FAILURE })
        }
        Cmd::Trace { n, stop, format } => {
            let start = parse_biguint(n)?;
            if &start % 2u32 == BigUint::from(0u32) {
                return Err(usage_error(format!(
                    "{start} is even; trace starts on odd values"
                )));
            }
            let rule = parse_stop_rule(stop)?;
            let ex = extract_scenario(&start, rule).map_err(|e| failure(e.to_string()))?;
            let mut artifacts: Vec<PathBuf> = Vec::new();
            let (csv_wanted, svg_wanted) = match format.as_str() {
                "none" => (false, false),
                "csv" => (true, false),
                "svg" => (false, true),
                "both" => (true, true),
                other => return Err(usage_error(format!("bad --format {other:?}"))),
            };
            if csv_wanted {
                let path = out_dir.join("trace.csv");
                let mut w = BufWriter::new(File::create(&path)?);
                ex.trajectory.write_csv(&mut w)?;
                w.flush()?;
                artifacts.push(path);
            }
            if svg_wanted {
                let path = out_dir.join("trace.svg");
                let mut w = BufWriter::new(File::create(&path)?);
                write_svg(
                    &[(
                        format!("start {}", ex.trajectory.start()),
                        an_series(&ex.trajectory),
                    )],
                    &SvgOptions::default(),
                    &mut w,
                )?;
                w.flush()?;
                artifacts.push(path);
            }
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "start": ex.trajectory.start().to_string(),
                        "scenario": ex.scenario.to_string(),
                        "end": ex.trajectory.end().to_string(),
                        "steps": ex.trajectory.step_count(),
                        "artifacts": artifacts.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
                    })
                );
            } else {
                println!("{}", ex.scenario);
                for p in &artifacts {
                    println!("wrote {}", p.display());
                }
            }
            Ok(0)
        }
        Cmd::Link { n } => {
            let target = parse_biguint(n)?;
            if &target % 3u32 == BigUint::from(0u32) {
                return Err(usage_error(format!(
                    "{target} is divisible by 3; only non-RC0 targets are linked{}",
                    if is_handle(&target) {
                        " (it is itself a handle)"
                    } else {
                        ""
                    }
                )));
            }
            let link = if &target % 2u32 == BigUint::from(1u32) {
                link_odd(&target)
            } else {
                link_even(&target)
            }
            .map_err(|e| usage_error(e.to_string()))?;
            let ok = verify_link(&link);
            let word = link
                .scenario
                .as_ref()
                .map(|s| s.compressed())
                .unwrap_or_else(|| "-".to_string());
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "target": link.target.to_string(),
                        "handle": link.handle.to_string(),
                        "scenario": word,
                        "steps": link.steps,
                        "rule": link.provenance.rule,
                        "p": link.provenance.p.to_string(),
                        "verified": ok,
                    })
                );
            } else {
                println!(
                    "target={} handle={} scenario={} steps={} {}",
                    link.target,
                    link.handle,
                    word,
                    link.steps,
                    if ok { "PASS" } else { "FAIL" }
                );
            }
            Ok(if ok { 0 } else { EXIT_FAILURE })
        }
        Cmd::Sweep { limit } => {
            let report = sweep_verify(*limit);
            println!(
                "{}",
                serde_json::to_string_pretty(&report.to_json()).unwrap()
            );
            Ok(if report.passed() { 0 } else { EXIT_FAILURE })
        }
        Cmd::Hooks { max_delta } => {
            if cli.json {
                let rows: Vec<_> = hook_table(*max_delta)
                    .into_iter()
                    .map(|(d, pp)| {
                        serde_json::json!({
                            "delta": d,
                            "A_M": pp.start_period.to_string(),
                            "B_M": pp.start_phase.to_string(),
                            "A_N": pp.end_period.to_string(),
                            "B_N": pp.end_phase.to_string(),
                        })
                    })
                    .collect();
                println!("{}", serde_json::Value::Array(rows));
            } else {
                print!("{}", hook_table_text(*max_delta));
            }
            Ok(0)
        }
        Cmd::Rho { scenario, k } => {
            let s = parse_scenario(scenario)?;
            let pp = periods_of(&s)?;
            let rho = pp.rho_metric(*k).map_err(|e| usage_error(e.to_string()))?;
            let decimal = ratio_decimal(&rho, 4);
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "scenario": s.compressed(),
                        "k": k,
                        "numerator": rho.numer().to_string(),
                        "denominator": rho.denom().to_string(),
                        "decimal": decimal,
                    })
                );
            } else {
                println!("{}/{} {}", rho.numer(), rho.denom(), decimal);
            }
            Ok(0)
        }
        Cmd::Plot {
            scenario,
            realizations,
            mode,
            linear,
            output,
        } => {
            let s = parse_scenario(scenario)?;
            let pp = periods_of(&s)?;
            let ks = parse_index_list(realizations)?;
            let use_on = match mode.as_str() {
                "on" => true,
                "an" => false,
                other => return Err(usage_error(format!("bad --mode {other:?}"))),
            };
            let mut series: Vec<(String, Vec<SeriesPoint>)> = Vec::new();
            for k in ks {
                let r = pp.realize(k).map_err(|e| usage_error(e.to_string()))?;
                let t = apply_scenario(&r.start, &s).map_err(|e| failure(e.to_string()))?;
                let points = if use_on { on_series(&t) } else { an_series(&t) };
                series.push((format!("k={k}"), points));
            }
            let path = output.clone().unwrap_or_else(|| out_dir.join("plot.svg"));
            let opts = SvgOptions {
                log_scale: !linear,
                ..SvgOptions::default()
            };
            let mut w = BufWriter::new(File::create(&path)?);
            write_svg(&series, &opts, &mut w)?;
            w.flush()?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "scenario": s.compressed(),
                        "mode": if use_on { "on" } else { "an" },
                        "artifacts": [path.display().to_string()],
                    })
                );
            } else {
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
    }
}

fn parse_stop_rule(text: &str) -> Result<StopRule, CliError> {
    if text == "one" {
        return Ok(StopRule::UntilOne);
    }
    if let Some(v) = text.strip_prefix("sigma=") {
        let n: u64 = v
            .parse()
            .map_err(|_| usage_error(format!("bad spike count {v:?}")))?;
        return Ok(StopRule::Spikes(n));
    }
    if let Some(v) = text.strip_prefix("ops=") {
        let n: usize = v
            .parse()
            .map_err(|_| usage_error(format!("bad op count {v:?}")))?;
        return Ok(StopRule::Steps(n));
    }
    Err(usage_error(format!(
        "bad --stop {text:?}; expected \"one\", \"sigma=N\", or \"ops=N\""
    )))
}

fn parse_index_list(text: &str) -> Result<Vec<u64>, CliError> {
    let ks: Result<Vec<u64>, _> = text.split(',').map(|p| p.trim().parse::<u64>()).collect();
    match ks {
        Ok(ks) if !ks.is_empty() => Ok(ks),
        _ => Err(usage_error(format!("bad realization list {text:?}"))),
    }
}
