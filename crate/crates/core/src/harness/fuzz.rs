use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{evaluate, BoundId, EvalOptions, Instance, Mode, Outcome};
use crate::generate::{generate, sub_seed, GeneratorSpec, Range, MAX_DEGREE};

pub const SCHEMA: &str = "polar-bounds/1";
pub const THREADS_ENV: &str = "POLAR_BOUNDS_THREADS";
pub const HISTOGRAM_BINS: usize = 20;
pub const HISTOGRAM_LO: f64 = 1e-12;
pub const HISTOGRAM_HI: f64 = 1e3;

#[derive(Debug, Error)]
pub enum FuzzError {
    #[error("invalid fuzz config: {0}")]
    InvalidConfig(String),
    #[error("cannot build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub bounds: Vec<BoundId>,
    pub trials: usize,
    pub degree_min: usize,
    pub degree_max: usize,
    pub seed: u64,
    pub mode: Mode,
    pub tol_factor: f64,
    pub grid: usize,
    /// Worker count; not part of the report so that output is independent of it.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        let opts = EvalOptions::default();
        Self {
            bounds: BoundId::ALL.to_vec(),
            trials: 100,
            degree_min: 1,
            degree_max: 12,
            seed: 0,
            mode: opts.mode,
            tol_factor: opts.tol_factor,
            grid: opts.grid,
            threads: None,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> Result<(), FuzzError> {
        let bad = |m: String| Err(FuzzError::InvalidConfig(m));
        if self.bounds.is_empty() {
            return bad("no bounds selected".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.degree_min < 1 || self.degree_min > self.degree_max || self.degree_max > MAX_DEGREE {
            return bad(format!(
                "degree range [{}, {}] must lie within [1, {MAX_DEGREE}]",
                self.degree_min, self.degree_max
            ));
        }
        if !(self.tol_factor >= 0.0 && self.tol_factor.is_finite()) {
            return bad(format!("tolerance factor {} must be finite and non-negative", self.tol_factor));
        }
        if self.grid == 0 {
            return bad("grid must be at least 1".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        Ok(())
    }

    pub fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            mode: self.mode,
            tol_factor: self.tol_factor,
            grid: self.grid,
            ..EvalOptions::default()
        }
    }

    /// The smaller of the configured worker count and the environment cap.
    pub fn effective_threads(&self) -> Option<usize> {
        let env = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&t| t >= 1);
        match (self.threads, env) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// One row per trial; fields mirror the CSV columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub bound_id: BoundId,
    pub trial: usize,
    pub n: usize,
    pub s: usize,
    pub k: f64,
    pub abs_z0: f64,
    pub abs_polar: Option<f64>,
    pub alpha: f64,
    pub lhs: Option<f64>,
    pub rhs_min: Option<f64>,
    pub margin: Option<f64>,
    /// `holds`, `violated`, `uniform_exceeded`, or an error tag.
    pub outcome: String,
}

/// A trial kept in full so it can be re-checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub trial: usize,
    pub margin: f64,
    pub tolerance: f64,
    pub instance: Instance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginHistogram {
    pub lo: f64,
    pub hi: f64,
    /// Margins below `lo`, negative ones included.
    pub below: u64,
    pub above: u64,
    pub counts: Vec<u64>,
}

impl Default for MarginHistogram {
    fn default() -> Self {
        Self {
            lo: HISTOGRAM_LO,
            hi: HISTOGRAM_HI,
            below: 0,
            above: 0,
            counts: vec![0; HISTOGRAM_BINS],
        }
    }
}

impl MarginHistogram {
    pub fn add(&mut self, margin: f64) {
        if margin < self.lo {
            self.below += 1;
        } else if margin >= self.hi {
            self.above += 1;
        } else {
            let bins = self.counts.len();
            let pos = (margin / self.lo).log10() / (self.hi / self.lo).log10() * bins as f64;
            self.counts[(pos as usize).min(bins - 1)] += 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.below + self.above + self.counts.iter().sum::<u64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSection {
    pub bound_id: BoundId,
    pub trials: usize,
    pub violations: usize,
    pub violation_instances: Vec<CaseRecord>,
    pub uniform_exceeded: usize,
    pub errors: BTreeMap<String, usize>,
    pub min_margin: Option<f64>,
    pub histogram: MarginHistogram,
    /// Smallest non-negative margin.
    pub sharpest: Option<CaseRecord>,
    pub records: Vec<TrialRecord>,
}

impl BoundSection {
    fn new(bound_id: BoundId) -> Self {
        Self {
            bound_id,
            trials: 0,
            violations: 0,
            violation_instances: Vec::new(),
            uniform_exceeded: 0,
            errors: BTreeMap::new(),
            min_margin: None,
            histogram: MarginHistogram::default(),
            sharpest: None,
            records: Vec::new(),
        }
    }

    fn push(&mut self, result: TrialResult) {
        self.trials += 1;
        let TrialResult { record, instance, tolerance } = result;
        if let Some(margin) = record.margin {
            self.histogram.add(margin);
            self.min_margin = Some(self.min_margin.map_or(margin, |m: f64| m.min(margin)));
            let case = || CaseRecord {
                trial: record.trial,
                margin,
                tolerance,
                instance: instance.clone().expect("evaluated trials keep their instance"),
            };
            match record.outcome.as_str() {
                "violated" => {
                    self.violations += 1;
                    self.violation_instances.push(case());
                }
                "uniform_exceeded" => self.uniform_exceeded += 1,
                _ => {}
            }
            if margin >= 0.0 && self.sharpest.as_ref().is_none_or(|s| margin < s.margin) {
                self.sharpest = Some(case());
            }
        } else {
            *self.errors.entry(record.outcome.clone()).or_default() += 1;
        }
        self.records.push(record);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub schema: String,
    pub config: FuzzConfig,
    pub sections: Vec<BoundSection>,
    /// Not serialised, so reports of identical runs are byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl FuzzReport {
    pub fn violations(&self) -> usize {
        self.sections.iter().map(|s| s.violations).sum()
    }

    pub fn section(&self, id: BoundId) -> Option<&BoundSection> {
        self.sections.iter().find(|s| s.bound_id == id)
    }

    pub fn empty(config: FuzzConfig) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            sections: config.bounds.iter().map(|&b| BoundSection::new(b)).collect(),
            config,
            wall_time: Duration::ZERO,
        }
    }
}

struct TrialResult {
    record: TrialRecord,
    instance: Option<Instance>,
    tolerance: f64,
}

fn run_trial(cfg: &FuzzConfig, opts: &EvalOptions, bound_id: BoundId, trial: usize) -> TrialResult {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, bound_id.index() as u64, trial as u64));
    let degree = Range::new(cfg.degree_min as f64, cfg.degree_max as f64);
    let spec = GeneratorSpec::random(bound_id, degree, &mut rng);
    let blank = |outcome: &str| TrialRecord {
        bound_id,
        trial,
        n: spec.degree,
        s: spec.special_multiplicity,
        k: spec.k,
        abs_z0: 0.0,
        abs_polar: None,
        alpha: 0.0,
        lhs: None,
        rhs_min: None,
        margin: None,
        outcome: outcome.to_string(),
    };
    let inst = match generate(&spec) {
        Ok(inst) => inst,
        Err(_) => {
            return TrialResult {
                record: blank("generator_error"),
                instance: None,
                tolerance: 0.0,
            }
        }
    };
    let mut record = TrialRecord {
        abs_z0: if inst.poly.special_multiplicity > 0 { inst.poly.special_root.norm() } else { 0.0 },
        abs_polar: inst.polar.map(|p| p.modulus()),
        alpha: inst.alpha,
        ..blank("")
    };
    match evaluate(&inst, opts) {
        Ok(e) => {
            record.lhs = Some(e.lhs.certified(e.direction));
            record.rhs_min = Some(e.rhs.min());
            record.margin = Some(e.margin);
            record.outcome = match e.outcome {
                Outcome::Holds => "holds",
                Outcome::Violated => "violated",
                Outcome::UniformExceeded => "uniform_exceeded",
            }
            .to_string();
            TrialResult {
                record,
                instance: Some(inst),
                tolerance: e.tolerance,
            }
        }
        Err(err) => {
            record.outcome = err.tag().to_string();
            TrialResult {
                record,
                instance: None,
                tolerance: 0.0,
            }
        }
    }
}

/// Runs every configured trial; the report depends only on the config.
pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzReport, FuzzError> {
    cfg.validate()?;
    let start = Instant::now();
    let opts = cfg.eval_options();
    let jobs: Vec<(usize, usize)> = (0..cfg.bounds.len())
        .flat_map(|b| (0..cfg.trials).map(move |t| (b, t)))
        .collect();
    let work = || -> Vec<TrialResult> {
        jobs.par_iter()
            .map(|&(b, t)| run_trial(cfg, &opts, cfg.bounds[b], t))
            .collect()
    };
    let results = match cfg.effective_threads() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| FuzzError::Pool(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut report = FuzzReport::empty(cfg.clone());
    for (&(b, _), result) in jobs.iter().zip(results) {
        report.sections[b].push(result);
    }
    report.wall_time = start.elapsed();
    Ok(report)
}
