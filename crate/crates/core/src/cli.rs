//! Command-line surface: `check`, `fuzz`, `sharpness` and `witness`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::bounds::hypothesis::{check_requirements, Requirements};
use crate::bounds::{check_hypothesis, check_lemma, evaluate, BoundError, BoundId, EvalOptions, Instance, LemmaId, Mode};
use crate::generate::{equality_witness, GenError};
use crate::harness::{emit_report, run_fuzz, search_sharpness, FuzzConfig, FuzzError, ReportFormat, SharpnessConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "polar-bounds", version, about = "Check Bernstein-type polynomial inequalities numerically")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one instance and print the evaluation as JSON.
    Check {
        instance: PathBuf,
        #[arg(long, default_value = "pointwise")]
        mode: Mode,
        /// Check an auxiliary lemma (L1..L5) instead of the instance's bound.
        #[arg(long)]
        lemma: Option<LemmaId>,
    },
    /// Run randomized trials over a set of bounds.
    Fuzz {
        /// `ALL` or a comma-separated list of bound IDs.
        #[arg(long, default_value = "ALL")]
        bounds: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        degree_min: usize,
        #[arg(long, default_value_t = 12)]
        degree_max: usize,
        #[arg(long, default_value = "pointwise")]
        mode: Mode,
        #[arg(long)]
        threads: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: ReportFormat,
    },
    /// Hill-climb towards equality for one bound.
    Sharpness {
        #[arg(long)]
        bound: BoundId,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long = "s")]
        special_multiplicity: Option<usize>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long, default_value = "pointwise")]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the equality witness of a bound together with its evaluation.
    Witness {
        #[arg(long)]
        bound: BoundId,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: malformed instance: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
    #[error("unknown bound {0:?}")]
    UnknownBound(String),
    #[error(transparent)]
    Fuzz(#[from] FuzzError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Serialize)]
struct Failure<'a> {
    error: &'static str,
    message: String,
    hypothesis: crate::bounds::HypothesisReport,
    check: &'a str,
}

#[derive(Serialize)]
struct WitnessOutput<'a> {
    instance: &'a Instance,
    evaluation: &'a crate::bounds::BoundEvaluation,
    equality_gap: f64,
}

/// Parses `args` (program name first) and runs the selected command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Check { instance, mode, lemma } => check(&instance, mode, lemma),
        Command::Fuzz {
            bounds,
            trials,
            seed,
            degree_min,
            degree_max,
            mode,
            threads,
            out,
            format,
        } => {
            let cfg = FuzzConfig {
                bounds: parse_bounds(&bounds)?,
                trials,
                degree_min,
                degree_max,
                seed,
                mode,
                threads,
                ..FuzzConfig::default()
            };
            let report = run_fuzz(&cfg)?;
            write_output(out.as_deref(), &emit_report(&report, format))?;
            let violations = report.violations();
            eprintln!(
                "{} bounds, {} trials each, {violations} violations, {:.2?}",
                report.sections.len(),
                trials,
                report.wall_time
            );
            Ok(if violations == 0 { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::Sharpness {
            bound,
            budget,
            seed,
            degree,
            special_multiplicity,
            k,
            mode,
            out,
        } => {
            let cfg = SharpnessConfig {
                degree,
                special_multiplicity,
                k,
                mode,
                ..SharpnessConfig::new(bound, budget, seed)
            };
            let result = search_sharpness(&cfg)?;
            write_output(out.as_deref(), &to_json(&result))?;
            Ok(EXIT_OK)
        }
        Command::Witness { bound, degree, alpha } => {
            let instance = equality_witness(bound, degree, alpha)?;
            match evaluate(&instance, &EvalOptions::default()) {
                Ok(evaluation) => {
                    let output = WitnessOutput {
                        instance: &instance,
                        equality_gap: evaluation.equality_gap(),
                        evaluation: &evaluation,
                    };
                    write_output(None, &to_json(&output))?;
                    Ok(if evaluation.is_violation() { EXIT_VIOLATION } else { EXIT_OK })
                }
                Err(e) => {
                    report_failure(&instance, None, &e)?;
                    Ok(EXIT_VIOLATION)
                }
            }
        }
    }
}

fn check(path: &Path, mode: Mode, lemma: Option<LemmaId>) -> Result<i32, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let instance: Instance = serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    let opts = EvalOptions::with_mode(mode);
    let result = match lemma {
        Some(l) => check_lemma(l, &instance, &opts),
        None => evaluate(&instance, &opts),
    };
    match result {
        Ok(evaluation) => {
            write_output(None, &to_json(&evaluation))?;
            Ok(if evaluation.is_violation() { EXIT_VIOLATION } else { EXIT_OK })
        }
        Err(e) => {
            report_failure(&instance, lemma, &e)?;
            Ok(EXIT_VIOLATION)
        }
    }
}

fn report_failure(instance: &Instance, lemma: Option<LemmaId>, error: &BoundError) -> Result<(), CliError> {
    let (hypothesis, check) = match lemma {
        Some(l) => (check_requirements(instance, &Requirements::for_lemma(l)), l.as_str()),
        None => (check_hypothesis(instance), instance.bound_id.as_str()),
    };
    let failure = Failure {
        error: error.tag(),
        message: error.to_string(),
        hypothesis,
        check,
    };
    write_output(None, &to_json(&failure))
}

fn parse_bounds(list: &str) -> Result<Vec<BoundId>, CliError> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(BoundId::ALL.to_vec());
    }
    let mut bounds = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let id: BoundId = item.parse().map_err(|_| CliError::UnknownBound(item.to_string()))?;
        if !bounds.contains(&id) {
            bounds.push(id);
        }
    }
    Ok(bounds)
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("output contains only finite numbers and strings");
    out.push(b'\n');
    out
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
