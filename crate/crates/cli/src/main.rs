mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use pogame::certification::{certify, window_sweep, ObservedPair, CLASSICAL_BOUND};
use pogame::classical::enumerate_max;
use pogame::quantum::{
    charlie_success_numeric, omega_b, omega_c, trine_preparations, SequentialConfig,
};
use pogame::robustness::{
    fidelity_curve, minimize_t, verify_operator_inequalities, Scenario, TSource,
};

use output::{emit, to_csv, to_json_array, to_json_object, Cell, Record};
use verify::{run_suite, SuiteConfig, SELF_TEST_FRAME_OFFSET};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Sweeps, verdicts and figure data for the sequential parity-oblivious game.
#[derive(Debug, Parser)]
#[command(name = "pogame", version)]
struct Cli {
    /// Output format (default: csv for sweeps, json for verdicts, text for reports).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact classical maximum under the parity-oblivious constraint.
    ClassicalBound {
        /// Message alphabet size.
        #[arg(short = 'd', default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=6))]
        d: u8,
    },
    /// Optimal Bob and Charlie success probabilities against eta_B.
    Tradeoff {
        #[arg(long, default_value_t = 201)]
        steps: usize,
    },
    /// Certify the unsharpness parameter from an observed pair of success probabilities.
    Certify {
        a_b: f64,
        a_c: f64,
        /// Distance from the trade-off curve still counted as on it.
        #[arg(long, default_value_t = 5e-5)]
        tol: f64,
    },
    /// Required unsharpness of a third observer across the certification window.
    Debbie {
        #[arg(long, default_value_t = 201)]
        steps: usize,
    },
    /// Fidelity lower bound against success probability for one scenario.
    Robustness {
        #[arg(long)]
        scenario: String,
        #[arg(long = "eta-b")]
        eta_b: f64,
        #[arg(long, default_value_t = 201)]
        steps: usize,
        /// Angle grid points per interval for the operator-inequality check.
        #[arg(long = "grid-n", default_value_t = 1024)]
        grid_n: usize,
        /// Allowed negative eigenvalue in the operator-inequality check.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run every library invariant and report pass/fail per property.
    VerifyAll {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long = "grid-n", default_value_t = 256)]
        grid_n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Rotate Bob's measurement frame to check that the suite detects the fault.
        #[arg(long)]
        self_test: bool,
    },
}

/// Parameters shared by the sweep commands.
#[derive(Debug, Clone, PartialEq)]
struct SweepConfig {
    command: &'static str,
    start: f64,
    stop: f64,
    steps: usize,
    tol: f64,
}

impl SweepConfig {
    fn validate(self) -> anyhow::Result<Self> {
        if self.steps < 2 {
            bail!(UsageError(format!(
                "{}: --steps must be at least 2",
                self.command
            )));
        }
        if self.start.is_nan() || self.stop.is_nan() || self.start > self.stop {
            bail!(UsageError(format!(
                "{}: range start exceeds stop",
                self.command
            )));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            bail!(UsageError(format!(
                "{}: --tol must be positive",
                self.command
            )));
        }
        Ok(self)
    }

    fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(move |i| {
            if i + 1 == self.steps {
                self.stop
            } else {
                self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64
            }
        })
    }
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

struct Rendered {
    text: String,
    code: u8,
}

fn table(records: &[Record], format: Option<Format>) -> String {
    match format {
        Some(Format::Json) => to_json_array(records),
        _ => to_csv(records),
    }
}

fn classical_bound(d: u8, format: Option<Format>) -> anyhow::Result<Rendered> {
    let r = enumerate_max(d as usize)?;
    let best = r.argmax.first().context("no parity-oblivious encoder")?;
    let encoder: String = best.encoder().iter().map(|m| m.to_string()).collect();
    let decoder = best
        .decoder()
        .iter()
        .map(|row| row.iter().map(|b| b.to_string()).collect::<String>())
        .collect::<Vec<_>>()
        .join(" ");
    let value = *r.max_success.numer() as f64 / *r.max_success.denom() as f64;
    let record: Record = vec![
        ("d", Cell::from(d as u64)),
        ("max_success", Cell::from(r.max_success.to_string())),
        ("max_success_decimal", Cell::from(value)),
        ("strategies_searched", Cell::from(r.strategies_searched)),
        ("oblivious_encoders", Cell::from(r.oblivious_encoders)),
        ("argmax_encoder", Cell::from(encoder.clone())),
        ("argmax_decoder", Cell::from(decoder.clone())),
    ];
    let text = match format {
        Some(Format::Json) => to_json_object(&record),
        Some(Format::Csv) => to_csv(&[record]),
        None => format!(
            "maximum success: {} ({value:.6})\nencoders searched: {}\nparity-oblivious encoders: {}\n\
             argmax encoder (messages for x,a = 10 11 20 21 30 31): {encoder}\n\
             argmax decoder (outputs for y = 1 2 3, one block per message): {decoder}\n",
            r.max_success, r.strategies_searched, r.oblivious_encoders
        ),
    };
    Ok(Rendered { text, code: 0 })
}

fn tradeoff(steps: usize, format: Option<Format>) -> anyhow::Result<Rendered> {
    let sweep = SweepConfig {
        command: "tradeoff",
        start: 0.0,
        stop: 1.0,
        steps,
        tol: 1.0,
    }
    .validate()?;
    let prep = trine_preparations(std::f64::consts::FRAC_PI_3)?;
    let records = sweep
        .points()
        .map(|eta| {
            let config = SequentialConfig::ideal(&prep, eta, 1.0, 1.0)?;
            Ok(vec![
                ("eta_b", Cell::from(eta)),
                ("omega_b", Cell::from(omega_b(eta)?)),
                ("omega_c_closed", Cell::from(omega_c(eta, 1.0)?)),
                (
                    "omega_c_numeric",
                    Cell::from(charlie_success_numeric(&prep, &config)),
                ),
                ("classical_bound", Cell::from(CLASSICAL_BOUND)),
            ])
        })
        .collect::<anyhow::Result<Vec<Record>>>()?;
    Ok(Rendered {
        text: table(&records, format),
        code: 0,
    })
}

fn certify_cmd(a_b: f64, a_c: f64, tol: f64, format: Option<Format>) -> anyhow::Result<Rendered> {
    let pair = ObservedPair::new(a_b, a_c).map_err(|e| UsageError(e.to_string()))?;
    let v = certify(pair, tol).map_err(|e| UsageError(e.to_string()))?;
    let record: Record = vec![
        ("a_b", Cell::from(a_b)),
        ("a_c", Cell::from(a_c)),
        ("on_curve", Cell::from(v.on_curve)),
        ("certified_eta_b", Cell::from(v.certified_eta_b)),
        (
            "eta_b_interval_lo",
            Cell::from(v.eta_b_interval.map(|i| i.0)),
        ),
        (
            "eta_b_interval_hi",
            Cell::from(v.eta_b_interval.map(|i| i.1)),
        ),
        ("both_quantum", Cell::from(v.both_quantum)),
        ("reason", v.reason.map_or(Cell::Null, Cell::from)),
    ];
    let text = match format {
        Some(Format::Csv) => to_csv(&[record]),
        _ => to_json_object(&record),
    };
    Ok(Rendered {
        text,
        code: if v.both_quantum { 0 } else { EXIT_NEGATIVE },
    })
}

fn debbie(steps: usize, format: Option<Format>) -> anyhow::Result<Rendered> {
    SweepConfig {
        command: "debbie",
        start: 2.0 / 3.0,
        stop: 3f64.sqrt() / 2.0,
        steps,
        tol: 1.0,
    }
    .validate()?;
    let rows = window_sweep(steps)?;
    let min = rows
        .iter()
        .map(|r| r.eta_d_required)
        .fold(f64::INFINITY, f64::min);
    let verdict = if min > 1.0 { "infeasible" } else { "feasible" };
    let records: Vec<Record> = rows
        .iter()
        .map(|r| {
            vec![
                ("eta_b", Cell::from(r.eta_b)),
                ("eta_c_min", Cell::from(r.eta_c_min)),
                ("eta_d_required", Cell::from(r.eta_d_required)),
                ("eta_d_sharp_charlie", Cell::from(r.eta_d_sharp_charlie)),
                ("feasible", Cell::from(r.eta_d_required <= 1.0)),
            ]
        })
        .collect();
    let text = match format {
        None => {
            let mut s =
                String::from("eta_b       eta_c_min   eta_d_required  eta_d_sharp_charlie\n");
            for r in &rows {
                s.push_str(&format!(
                    "{:<11.6} {:<11.6} {:<15.6} {:.6}\n",
                    r.eta_b, r.eta_c_min, r.eta_d_required, r.eta_d_sharp_charlie
                ));
            }
            s.push_str(&format!(
                "minimum required eta_D over the window: {min:.6}\nverdict: {verdict}\n"
            ));
            s
        }
        Some(_) => {
            eprintln!("verdict: {verdict} (minimum required eta_D {min:.6})");
            table(&records, format)
        }
    };
    Ok(Rendered { text, code: 0 })
}

fn robustness(
    scenario: &str,
    eta_b: f64,
    steps: usize,
    grid_n: usize,
    tol: f64,
    format: Option<Format>,
) -> anyhow::Result<Rendered> {
    let scenario: Scenario = scenario
        .parse()
        .map_err(|e: pogame::Error| UsageError(e.to_string()))?;
    if !(0.0..=1.0).contains(&eta_b) {
        bail!(UsageError(format!("--eta-b {eta_b} outside [0, 1]")));
    }
    SweepConfig {
        command: "robustness",
        start: CLASSICAL_BOUND,
        stop: 1.0,
        steps,
        tol,
    }
    .validate()?;
    if grid_n < 64 {
        bail!(UsageError("--grid-n must be at least 64".into()));
    }
    let curve = fidelity_curve(scenario, eta_b, steps).map_err(|e| UsageError(e.to_string()))?;
    let s = scenario.design_s(eta_b);
    let t = scenario.stated_t(eta_b);
    let report = verify_operator_inequalities(
        scenario,
        s,
        eta_b,
        TSource::ClosedFormAt { s_design: s },
        grid_n,
        tol,
    )?;
    let t_min = minimize_t(scenario, s, eta_b, grid_n)?;
    let records: Vec<Record> = curve
        .into_iter()
        .map(|(a, f)| {
            vec![
                ("success_probability", Cell::from(a)),
                ("fidelity_lower_bound", Cell::from(f)),
                ("s", Cell::from(s)),
                ("t", Cell::from(t)),
                ("worst_lambda_min", Cell::from(report.worst_lambda_min)),
                ("t_min_over_theta", Cell::from(t_min.t_value)),
            ]
        })
        .collect();
    Ok(Rendered {
        text: table(&records, format),
        code: 0,
    })
}

fn verify_all(cfg: SuiteConfig, format: Option<Format>) -> anyhow::Result<Rendered> {
    if cfg.tol.is_nan() || cfg.tol <= 0.0 || cfg.grid_n < 64 {
        bail!(UsageError(
            "--tol must be positive and --grid-n at least 64".into()
        ));
    }
    let checks = run_suite(&cfg);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let records: Vec<Record> = checks.iter().map(|c| c.record()).collect();
    let text = match format {
        None => {
            let mut s = String::new();
            if cfg.self_test {
                s.push_str(&format!(
                    "self-test: Bob's frame rotated by {SELF_TEST_FRAME_OFFSET} rad\n"
                ));
            }
            for c in &checks {
                s.push_str(&format!(
                    "{} {}: {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
            s.push_str(&format!(
                "{} passed, {failed} failed\n",
                checks.len() - failed
            ));
            s
        }
        Some(_) => table(&records, format),
    };
    Ok(Rendered {
        text,
        code: if failed == 0 { 0 } else { EXIT_NEGATIVE },
    })
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let format = cli.format;
    let rendered = match cli.command {
        Command::ClassicalBound { d } => classical_bound(d, format)?,
        Command::Tradeoff { steps } => tradeoff(steps, format)?,
        Command::Certify { a_b, a_c, tol } => certify_cmd(a_b, a_c, tol, format)?,
        Command::Debbie { steps } => debbie(steps, format)?,
        Command::Robustness {
            scenario,
            eta_b,
            steps,
            grid_n,
            tol,
        } => robustness(&scenario, eta_b, steps, grid_n, tol, format)?,
        Command::VerifyAll {
            seed,
            grid_n,
            tol,
            self_test,
        } => verify_all(
            SuiteConfig {
                seed,
                self_test,
                grid_n,
                tol,
            },
            format,
        )?,
    };
    emit(&rendered.text, cli.out.as_deref())?;
    Ok(rendered.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = if err.chain().any(|e| e.is::<std::io::Error>()) {
                EXIT_IO
            } else if err.is::<UsageError>() || err.is::<pogame::Error>() {
                EXIT_USAGE
            } else {
                EXIT_NEGATIVE
            };
            ExitCode::from(code)
        }
    }
}
