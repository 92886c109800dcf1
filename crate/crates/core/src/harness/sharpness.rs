use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::hypothesis::Requirements;
use crate::bounds::{check_hypothesis, evaluate, BoundId, EvalOptions, Instance, Mode};
use crate::generate::{equality_witness, generate, perturb, sub_seed, GenError, GeneratorSpec, Range};

pub const INITIAL_STEP: f64 = 0.1;
pub const STEP_DECAY: f64 = 0.5;
pub const REJECTION_STREAK: usize = 20;
/// Evaluations spent on one restart before moving to the next.
pub const RESTART_BUDGET: usize = 200;
/// Degree used for restarts when none is configured.
pub const DEFAULT_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessConfig {
    pub bound_id: BoundId,
    /// Total number of bound evaluations.
    pub budget: usize,
    pub seed: u64,
    pub degree: Option<usize>,
    pub special_multiplicity: Option<usize>,
    pub k: Option<f64>,
    pub mode: Mode,
}

impl SharpnessConfig {
    pub fn new(bound_id: BoundId, budget: usize, seed: u64) -> Self {
        Self {
            bound_id,
            budget,
            seed,
            degree: None,
            special_multiplicity: None,
            k: None,
            mode: Mode::Pointwise,
        }
    }

    fn admits_witness(&self) -> bool {
        self.special_multiplicity.unwrap_or(0) == 0 && self.k.unwrap_or(1.0) == 1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalResult {
    pub bound_id: BoundId,
    pub best_instance: Option<Instance>,
    /// Largest LHS/RHS ratio seen (RHS/LHS for lower bounds).
    pub best_ratio: Option<f64>,
    pub best_margin: Option<f64>,
    pub restarts: usize,
    pub accepted_steps: usize,
    pub evaluations: usize,
    pub witness_in_restarts: bool,
}

fn restart_instance(cfg: &SharpnessConfig, restart: usize) -> Result<Instance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, u64::MAX, restart as u64));
    let req = Requirements::for_bound(cfg.bound_id);
    let lowest = cfg.special_multiplicity.map_or(2, |s| s + 1) as f64;
    let degree = match cfg.degree {
        Some(n) => Range::new(n as f64, n as f64),
        None => Range::new(lowest, lowest.max(8.0)),
    };
    let mut spec = GeneratorSpec::random(cfg.bound_id, degree, &mut rng);
    if let Some(s) = cfg.special_multiplicity {
        spec.special_multiplicity = s;
    }
    if let Some(k) = cfg.k {
        let rebuilt = GeneratorSpec::new(cfg.bound_id, spec.degree, spec.special_multiplicity, k, rng.gen());
        spec = rebuilt;
    }
    if spec.special_multiplicity > 0 && !req.has_special_zero() {
        return Err(GenError::InfeasibleSpec(format!("{} has no exceptional zero", cfg.bound_id)));
    }
    generate(&spec)
}

/// Random-restart hill climbing on the LHS/RHS ratio.
pub fn search_sharpness(cfg: &SharpnessConfig) -> Result<ExtremalResult, GenError> {
    let opts = EvalOptions::with_mode(cfg.mode);
    let mut result = ExtremalResult {
        bound_id: cfg.bound_id,
        best_instance: None,
        best_ratio: None,
        best_margin: None,
        restarts: 0,
        accepted_steps: 0,
        evaluations: 0,
        witness_in_restarts: false,
    };
    let witness = if cfg.admits_witness() {
        equality_witness(cfg.bound_id, cfg.degree.unwrap_or(DEFAULT_DEGREE), 0.0).ok()
    } else {
        None
    };
    result.witness_in_restarts = witness.is_some();
    let mut witness = witness;
    let budget = cfg.budget.max(1);

    while result.evaluations < budget {
        let restart = result.restarts;
        result.restarts += 1;
        let start = match witness.take() {
            Some(w) => w,
            None => restart_instance(cfg, restart)?,
        };
        let limit = (result.evaluations + RESTART_BUDGET).min(budget);
        result.evaluations += 1;
        let Ok(eval) = evaluate(&start, &opts) else { continue };
        let (mut current, mut ratio) = (start, eval.ratio);
        record(&mut result, &current, ratio, eval.margin);

        let (mut step, mut streak, mut move_index) = (INITIAL_STEP, 0usize, 0u64);
        while result.evaluations < limit {
            let mut candidate = perturb(&current, step, sub_seed(cfg.seed, restart as u64, move_index));
            if let Some(k) = cfg.k {
                candidate.k = k;
            }
            move_index += 1;
            result.evaluations += 1;
            let accepted = match evaluate(&candidate, &opts) {
                Ok(e) if e.ratio > ratio && check_hypothesis(&candidate).ok() => {
                    ratio = e.ratio;
                    record(&mut result, &candidate, ratio, e.margin);
                    current = candidate;
                    true
                }
                _ => false,
            };
            if accepted {
                result.accepted_steps += 1;
                streak = 0;
            } else {
                streak += 1;
                if streak >= REJECTION_STREAK {
                    step *= STEP_DECAY;
                    streak = 0;
                }
            }
        }
    }
    Ok(result)
}

fn record(result: &mut ExtremalResult, inst: &Instance, ratio: f64, margin: f64) {
    if result.best_ratio.is_none_or(|best| ratio > best) {
        result.best_ratio = Some(ratio);
        result.best_margin = Some(margin);
        result.best_instance = Some(inst.clone());
    }
}
