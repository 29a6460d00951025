mod commands;
mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use sos_core::format::sig12;
use sos_core::fock::StateJson;
use sos_core::validation::run_suite_with;
use sos_core::{CMatrix, QuantumState, Space, C64};

use commands::{CliError, Options};
use config::Sweep;
use output::{Run, Section};

#[derive(Parser)]
#[command(name = "sos", version, about = "Spin-oscillator measurement model: closed forms, Lindblad oracle, Szilard engine and cost model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON object overriding the command's default parameters.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Parameter sweep `param:min:max:count:lin|log`; repeat for a grid.
    #[arg(long, global = true)]
    sweep: Vec<Sweep>,
    /// Tolerance for the command's analytic-vs-numeric check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Fixed Fock dimension instead of the automatic truncation.
    #[arg(long, global = true)]
    fock_dim: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Cat-state coherence: closed form against the Lindblad integrator.
    Decoherence,
    /// Tunneling rates: exact, leading-exponent and oracle.
    Tunneling,
    /// Pulse + relaxation measurement protocol.
    Measure,
    /// Szilard engine efficiency curve and optimum.
    Szilard,
    /// Minimal work of an N-gate computation.
    Cost,
    /// Run the acceptance suite, or check a state file.
    Validate {
        /// Comma-separated criterion numbers (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Validate a density matrix stored as {dim, real_part, imag_part}.
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Decoherence => "decoherence",
            Command::Tunneling => "tunneling",
            Command::Measure => "measure",
            Command::Szilard => "szilard",
            Command::Cost => "cost",
            Command::Validate { .. } => "validate",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let name = cli.command.name();
    let overrides = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(CliError::Io)?;
            serde_json::from_str::<Value>(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => json!({}),
    };
    let opts = Options {
        tol: cli.tol,
        fock_dim: cli.fock_dim,
    };
    let (text, failed) = match &cli.command {
        Command::Validate { only, state } => {
            if !cli.sweep.is_empty() {
                return Err(CliError::Config("`validate` takes no sweeps".into()));
            }
            match state {
                Some(path) => validate_state(path, cli.format)?,
                None => validate_suite(only, cli.format),
            }
        }
        _ => {
            let config = config::merge(&commands::defaults(name), &overrides, name)?;
            let points = config::grid(&cli.sweep);
            for (param, _) in points.first().into_iter().flatten() {
                if config.get(param).is_none() {
                    return Err(CliError::Config(format!("cannot sweep unknown field `{param}`")));
                }
            }
            let sections = points
                .par_iter()
                .map(|p| {
                    let c = config::apply_point(&config, p, name)?;
                    commands::run(name, &c, &opts)
                })
                .collect::<Result<Vec<Section>, CliError>>()?;
            let sweeps: Vec<String> = cli.sweep.iter().map(sweep_string).collect();
            let run = Run {
                command: name,
                config: &config,
                sweeps: &sweeps,
                points: &points,
                sections: &sections,
            };
            let failures: Vec<&String> = sections.iter().filter_map(|s| s.failure.as_ref()).collect();
            for f in &failures {
                eprintln!("check failed: {f}");
            }
            let text = match cli.format {
                Format::Csv => output::csv(&run),
                Format::Json => output::json(&run),
            };
            (text, !failures.is_empty())
        }
    };
    emit(cli.out.as_ref(), &text)?;
    Ok(if failed { 2 } else { 0 })
}

fn sweep_string(s: &Sweep) -> String {
    let spacing = match s.spacing {
        config::Spacing::Lin => "lin",
        config::Spacing::Log => "log",
    };
    format!("{}:{}:{}:{}:{spacing}", s.param, sig12(s.min), sig12(s.max), s.count)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(CliError::Io),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(CliError::Io)
        }
    }
}

fn validate_suite(only: &[u8], format: Format) -> (String, bool) {
    let report = run_suite_with(only, |c| eprintln!("{}", c.line()));
    let text = match format {
        Format::Csv => {
            let mut s = String::from("# sos validate\n");
            for c in &report.criteria {
                s.push_str(&format!("# {}\n", c.line()));
            }
            s.push_str("id,passed,seconds\n");
            for c in &report.criteria {
                s.push_str(&format!("{},{},{}\n", c.id, c.passed as u8, sig12(c.seconds)));
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::to_value(&report).expect("serializes"))
                .expect("serializes");
            s.push('\n');
            s
        }
    };
    (text, !report.all_passed())
}

fn validate_state(path: &PathBuf, format: Format) -> Result<(String, bool), CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::Io)?;
    let raw: StateJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let n = raw.dim;
    if raw.real_part.len() != n * n || raw.imag_part.len() != n * n {
        return Err(CliError::Config(format!(
            "{}: expected {} entries in real_part and imag_part for dim {n}",
            path.display(),
            n * n
        )));
    }
    let m = CMatrix::from_fn(n, n, |i, j| C64::new(raw.real_part[i * n + j], raw.imag_part[i * n + j]));
    let state = QuantumState::new_unchecked(m.clone(), Space::oscillator(n))?;
    let verdict = state.validate();
    let herm = sos_core::linalg::hermiticity_defect(&m);
    let trace = state.trace();
    let min_eig = state.min_eigenvalue();
    let purity = state.purity();
    let failure = verdict.err().map(|e| e.to_string());
    let body = match format {
        Format::Csv => {
            let mut s = format!("# sos validate --state {}\n", path.display());
            if let Some(f) = &failure {
                s.push_str(&format!("# FAILED: {f}\n"));
            }
            s.push_str("dim,trace_re,trace_im,hermiticity_defect,min_eigenvalue,purity,valid\n");
            s.push_str(&format!(
                "{n},{},{},{},{},{},{}\n",
                sig12(trace.re),
                sig12(trace.im),
                sig12(herm),
                sig12(min_eig),
                sig12(purity),
                failure.is_none() as u8
            ));
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({
                "dim": n,
                "trace": [trace.re, trace.im],
                "hermiticity_defect": herm,
                "min_eigenvalue": min_eig,
                "purity": purity,
                "valid": failure.is_none(),
                "failure": failure,
            }))
            .expect("serializes");
            s.push('\n');
            s
        }
    };
    if let Some(f) = &failure {
        eprintln!("{f}");
    }
    Ok((body, failure.is_some()))
}
