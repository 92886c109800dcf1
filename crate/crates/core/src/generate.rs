//! Random instances that satisfy each bound's hypotheses by construction.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::hypothesis::{check_requirements, KRegime, Requirements, RootSide, SpecialZero};
use crate::bounds::{BoundId, Instance, LemmaId};
use crate::poly::{FactoredPolynomial, PolarParameter, PolarRegime};

/// Relative gap kept between sampled roots and a disk boundary.
pub const SAFETY_GAP: f64 = 1e-3;

/// Largest degree the generator accepts.
pub const MAX_DEGREE: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),
    #[error("no equality witness is known for {0}")]
    NoWitnessKnown(BoundId),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn valid(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo >= 0.0 && self.lo <= self.hi
    }

    fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.gen_range(self.lo..=self.hi)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Z0Policy {
    Fixed(Complex64),
    Annulus { r_lo: f64, r_hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaPolicy {
    Fixed(f64),
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub bound_id: BoundId,
    pub degree: usize,
    pub special_multiplicity: usize,
    pub k: f64,
    pub z0_policy: Z0Policy,
    pub root_modulus: Range,
    /// Modulus range of the polar parameter, when the bound has one.
    pub polar_modulus: Option<Range>,
    pub scale_modulus: Range,
    pub alpha_policy: AlphaPolicy,
    pub seed: u64,
}

/// Default sampling ranges for a hypothesis table row.
struct Policy {
    roots: Range,
    z0: Z0Policy,
    polar: Option<Range>,
}

fn default_policy(req: &Requirements, k: f64) -> Policy {
    let roots = match req.roots {
        RootSide::Anywhere => Range::new(0.05, 3.0),
        RootSide::Outside => Range::new(k * (1.0 + SAFETY_GAP), 3.0 * k.max(1.0)),
        RootSide::Inside => Range::new(0.05 * k, k * (1.0 - SAFETY_GAP)),
    };
    let z0 = match req.special {
        SpecialZero::None | SpecialZero::Origin => Z0Policy::Fixed(Complex64::new(0.0, 0.0)),
        SpecialZero::InsideUnit => Z0Policy::Annulus { r_lo: 0.0, r_hi: 0.9 },
        SpecialZero::InsideK => Z0Policy::Annulus { r_lo: 0.0, r_hi: 0.9 * k },
        SpecialZero::OutsideUnit => Z0Policy::Annulus { r_lo: 1.1, r_hi: 3.0 },
        SpecialZero::OutsideK => Z0Policy::Annulus { r_lo: 1.1 * k, r_hi: 3.0 * k },
    };
    let polar = req.polar.map(|regime| match regime {
        PolarRegime::Outer => Range::new(1.0, 5.0),
        PolarRegime::Inner => Range::new(0.0, 1.0),
    });
    Policy { roots, z0, polar }
}

fn k_range(regime: KRegime) -> Range {
    match regime {
        KRegime::Unit => Range::new(1.0, 1.0),
        KRegime::AtMostOne => Range::new(0.2, 1.0),
        KRegime::AtLeastOne => Range::new(1.0, 2.0),
    }
}

impl GeneratorSpec {
    /// The default policies for `bound_id` at fixed `n`, `s` and `k`.
    pub fn new(bound_id: BoundId, degree: usize, special_multiplicity: usize, k: f64, seed: u64) -> Self {
        let policy = default_policy(&Requirements::for_bound(bound_id), k);
        Self {
            bound_id,
            degree,
            special_multiplicity,
            k,
            z0_policy: policy.z0,
            root_modulus: policy.roots,
            polar_modulus: policy.polar,
            scale_modulus: Range::new(0.5, 2.0),
            alpha_policy: AlphaPolicy::Uniform,
            seed,
        }
    }

    /// Draws `n`, `s` and `k` from their default ranges, then uses the default policies.
    pub fn random(bound_id: BoundId, degree: Range, rng: &mut impl Rng) -> Self {
        let req = Requirements::for_bound(bound_id);
        let (n, s, k) = random_shape(&req, degree, rng);
        Self::new(bound_id, n, s, k, rng.next_u64())
    }
}

fn random_shape(req: &Requirements, degree: Range, rng: &mut impl Rng) -> (usize, usize, f64) {
    let n = rng.gen_range(degree.lo as usize..=degree.hi as usize).max(1);
    let s = if req.has_special_zero() { rng.gen_range(0..n) } else { 0 };
    let k = k_range(req.k).sample(rng);
    (n, s, k)
}

fn infeasible(msg: impl Into<String>) -> GenError {
    GenError::InfeasibleSpec(msg.into())
}

fn validate(spec: &GeneratorSpec, req: &Requirements) -> Result<(), GenError> {
    let (n, s, k) = (spec.degree, spec.special_multiplicity, spec.k);
    if n == 0 || n > MAX_DEGREE {
        return Err(infeasible(format!("degree {n} outside [1, {MAX_DEGREE}]")));
    }
    if s >= n && (s > 0 || req.has_special_zero()) {
        return Err(infeasible(format!("s = {s} must be below n = {n}")));
    }
    if s > 0 && !req.has_special_zero() {
        return Err(infeasible(format!("{} has no exceptional zero; s must be 0", spec.bound_id)));
    }
    let k_ok = k.is_finite()
        && k > 0.0
        && match req.k {
            KRegime::Unit => k == 1.0,
            KRegime::AtMostOne => k <= 1.0,
            KRegime::AtLeastOne => k >= 1.0,
        };
    if !k_ok {
        return Err(infeasible(format!("k = {k} does not match the regime of {}", spec.bound_id)));
    }
    let roots = spec.root_modulus;
    let roots_ok = roots.valid()
        && match req.roots {
            RootSide::Anywhere => true,
            RootSide::Outside => roots.lo >= k,
            RootSide::Inside => roots.hi <= k,
        }
        && (!req.c0_nonzero || roots.lo > 0.0);
    if !roots_ok {
        return Err(infeasible(format!("root moduli [{}, {}] violate the hypothesis", roots.lo, roots.hi)));
    }
    if s > 0 {
        let (lo, hi) = match spec.z0_policy {
            Z0Policy::Fixed(z) => (z.norm(), z.norm()),
            Z0Policy::Annulus { r_lo, r_hi } => (r_lo, r_hi),
        };
        let gap = crate::bounds::hypothesis::DEGENERATE_GAP;
        let ok = Range::new(lo, hi).valid()
            && match req.special {
                SpecialZero::None => true,
                SpecialZero::InsideUnit => hi <= 1.0 - gap,
                SpecialZero::InsideK => hi <= k - gap,
                SpecialZero::Origin => hi == 0.0,
                SpecialZero::OutsideUnit => lo >= 1.0 + gap,
                SpecialZero::OutsideK => lo >= k + gap,
            };
        if !ok {
            return Err(infeasible(format!("z0 policy [{lo}, {hi}] violates the hypothesis")));
        }
    }
    match (req.polar, spec.polar_modulus) {
        (None, _) => {}
        (Some(_), None) => return Err(infeasible("a polar modulus range is required")),
        (Some(regime), Some(r)) => {
            let ok = r.valid()
                && match regime {
                    PolarRegime::Outer => r.lo >= 1.0,
                    PolarRegime::Inner => r.hi <= 1.0,
                };
            if !ok {
                return Err(infeasible(format!("polar modulus [{}, {}] violates {regime:?}", r.lo, r.hi)));
            }
        }
    }
    if !spec.scale_modulus.valid() || spec.scale_modulus.lo <= 0.0 {
        return Err(infeasible("scale modulus must be positive"));
    }
    Ok(())
}

fn polar_sample(r: f64, rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(r, rng.gen_range(0.0..TAU))
}

fn build(spec: &GeneratorSpec, req: &Requirements) -> Result<Instance, GenError> {
    validate(spec, req)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, s) = (spec.degree, spec.special_multiplicity);
    let scale = polar_sample(spec.scale_modulus.sample(&mut rng), &mut rng);
    let plain = (0..n - s)
        .map(|_| {
            let r = spec.root_modulus.sample(&mut rng);
            polar_sample(r, &mut rng)
        })
        .collect();
    let z0 = match spec.z0_policy {
        Z0Policy::Fixed(z) => z,
        Z0Policy::Annulus { r_lo, r_hi } => {
            let r = Range::new(r_lo, r_hi).sample(&mut rng);
            polar_sample(r, &mut rng)
        }
    };
    let alpha = match spec.alpha_policy {
        AlphaPolicy::Fixed(a) => a,
        AlphaPolicy::Uniform => rng.gen_range(0.0..TAU),
    };
    let polar = match (req.polar, spec.polar_modulus) {
        (Some(regime), Some(range)) => {
            let value = polar_sample(range.sample(&mut rng), &mut rng);
            Some(PolarParameter::new(value, regime).map_err(|e| infeasible(e.to_string()))?)
        }
        _ => None,
    };
    Ok(Instance {
        bound_id: spec.bound_id,
        poly: FactoredPolynomial::new(scale, plain, if s > 0 { z0 } else { Complex64::new(0.0, 0.0) }, s),
        k: spec.k,
        alpha,
        polar,
    })
}

/// Samples an instance; deterministic in `spec.seed`.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance, GenError> {
    build(spec, &Requirements::for_bound(spec.bound_id))
}

/// The bound id that lemma instances are tagged with.
pub fn lemma_tag(lemma: LemmaId) -> BoundId {
    match lemma {
        LemmaId::L5 => BoundId::SpecialZeroDerivative,
        _ => BoundId::Bernstein,
    }
}

/// A random instance satisfying the hypotheses of `lemma`.
pub fn generate_for_lemma(lemma: LemmaId, degree: Range, seed: u64) -> Result<Instance, GenError> {
    let req = Requirements::for_lemma(lemma);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, s, k) = random_shape(&req, degree, &mut rng);
    let policy = default_policy(&req, k);
    let spec = GeneratorSpec {
        bound_id: lemma_tag(lemma),
        degree: n,
        special_multiplicity: s,
        k,
        z0_policy: policy.z0,
        root_modulus: policy.roots,
        polar_modulus: policy.polar,
        scale_modulus: Range::new(0.5, 2.0),
        alpha_policy: AlphaPolicy::Uniform,
        seed: rng.next_u64(),
    };
    build(&spec, &req)
}

/// Roots of `z^n + e^{i a}`.
fn shifted_unity_roots(n: usize, a: f64) -> Vec<Complex64> {
    (0..n)
        .map(|l| Complex64::from_polar(1.0, (a + PI + TAU * l as f64) / n as f64))
        .collect()
}

/// Real polar parameter used by the `|beta| >= 1` witnesses.
pub const WITNESS_BETA: f64 = 2.0;

/// The closed-form equality case of `bound_id` at degree `n`.
pub fn equality_witness(bound_id: BoundId, n: usize, alpha: f64) -> Result<Instance, GenError> {
    use BoundId::*;
    if n == 0 || n > MAX_DEGREE {
        return Err(infeasible(format!("degree {n} outside [1, {MAX_DEGREE}]")));
    }
    let one = Complex64::new(1.0, 0.0);
    // at n = 1 the polar derivative is constant and only an aligned beta attains equality
    let beta_phase = if n == 1 { alpha } else { 0.0 };
    let outer = || PolarParameter::outer(Complex64::from_polar(WITNESS_BETA, beta_phase)).ok();
    let inner_one = || PolarParameter::inner(one).ok();
    let (roots, alpha, polar) = match bound_id {
        Bernstein => (vec![Complex64::new(0.0, 0.0); n], 0.0, None),
        RotatedNodes | RotatedNodesLower => (shifted_unity_roots(n, 0.0), 0.0, None),
        ErdosLax | ErdosLaxNodes | DerivativeSpecialInside => (shifted_unity_roots(n, alpha), alpha, None),
        PolarUnitDisk | PolarZeroFree | PolarSpecialInside | PolarSpecialOrigin => {
            (shifted_unity_roots(n, alpha), alpha, outer())
        }
        PolarZerosWithinLarge | PolarZerosWithinSmall | PolarSpecialOutside | PolarSpecialOutsideLarge => {
            (shifted_unity_roots(n, 0.0), 0.0, inner_one())
        }
        DerivativeLowerOutside | DerivativeLowerLarge => (shifted_unity_roots(n, 0.0), 0.0, None),
        FrappierNodes | SpecialZeroDerivative => return Err(GenError::NoWitnessKnown(bound_id)),
    };
    Ok(Instance {
        bound_id,
        poly: FactoredPolynomial::from_roots(one, roots),
        k: 1.0,
        alpha,
        polar,
    })
}

fn disk_step(step: f64, rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(step * rng.gen::<f64>(), rng.gen_range(0.0..TAU))
}

fn with_modulus(z: Complex64, r: f64) -> Complex64 {
    if z.norm() == 0.0 {
        Complex64::new(r, 0.0)
    } else {
        z * (r / z.norm())
    }
}

/// Smallest root modulus kept when `c_0 != 0` is required.
const MIN_ROOT_FRACTION: f64 = 1e-6;

/// Moves every root and free parameter by at most `step`, projecting values
/// that leave the hypothesis region back onto its boundary.
pub fn perturb(inst: &Instance, step: f64, seed: u64) -> Instance {
    if step <= 0.0 {
        return inst.clone();
    }
    let req = Requirements::for_bound(inst.bound_id);
    perturb_with(inst, &req, step, seed)
}

pub(crate) fn perturb_with(inst: &Instance, req: &Requirements, step: f64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = inst.clone();

    out.k = match req.k {
        KRegime::Unit => 1.0,
        KRegime::AtMostOne => (inst.k + rng.gen_range(-step..=step)).clamp(0.05, 1.0),
        KRegime::AtLeastOne => (inst.k + rng.gen_range(-step..=step)).max(1.0),
    };
    let k = out.k;

    let scale = inst.poly.leading_scale + disk_step(step, &mut rng);
    out.poly.leading_scale = if scale.norm() < 1e-3 { with_modulus(scale, 1e-3) } else { scale };

    let exempt = req.has_special_zero();
    let project = |z: Complex64| -> Complex64 {
        let r = z.norm();
        match req.roots {
            RootSide::Anywhere => z,
            RootSide::Outside if r < k => with_modulus(z, k),
            RootSide::Inside if r > k => with_modulus(z, k),
            RootSide::Inside if req.c0_nonzero && r < MIN_ROOT_FRACTION * k => with_modulus(z, MIN_ROOT_FRACTION * k),
            _ => z,
        }
    };
    for root in out.poly.plain_roots.iter_mut() {
        *root = project(*root + disk_step(step, &mut rng));
    }

    if out.poly.special_multiplicity > 0 {
        let z0 = inst.poly.special_root + disk_step(step, &mut rng);
        out.poly.special_root = if exempt {
            let r = z0.norm();
            let (lo, hi) = match req.special {
                SpecialZero::None => (0.0, f64::INFINITY),
                SpecialZero::Origin => (0.0, 0.0),
                SpecialZero::InsideUnit => (0.0, 0.9),
                SpecialZero::InsideK => (0.0, 0.9 * k),
                SpecialZero::OutsideUnit => (1.1, f64::INFINITY),
                SpecialZero::OutsideK => (1.1 * k, f64::INFINITY),
            };
            if hi == 0.0 {
                Complex64::new(0.0, 0.0)
            } else if r < lo || r > hi {
                with_modulus(z0, r.clamp(lo, hi))
            } else {
                z0
            }
        } else {
            project(z0)
        };
    }

    out.alpha = inst.alpha + rng.gen_range(-step..=step);

    if let Some(p) = inst.polar {
        let v = p.value() + disk_step(step, &mut rng);
        let v = match p.regime() {
            PolarRegime::Outer if v.norm() < 1.0 => with_modulus(v, 1.0),
            PolarRegime::Inner if v.norm() > 1.0 => with_modulus(v, 1.0),
            _ => v,
        };
        out.polar = PolarParameter::new(v, p.regime()).ok().or(Some(p));
    }

    debug_assert!(
        !check_requirements(inst, req).ok() || check_requirements(&out, req).ok(),
        "perturb left the feasible region"
    );
    out
}

/// Mixes a master seed with two counters into an independent sub-seed.
pub fn sub_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut x = splitmix(seed);
    x = splitmix(x ^ a.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    splitmix(x ^ b.wrapping_mul(0xd1b5_4a32_d192_ed03))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{check_hypothesis, evaluate, EvalOptions};

    #[test]
    fn thm21_spec_is_deterministic_and_valid() {
        let spec = GeneratorSpec::new(BoundId::PolarSpecialInside, 6, 2, 0.8, 7);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(check_hypothesis(&a).ok());
        assert_eq!(a.poly.degree(), 6);
        assert_eq!(a.poly.special_multiplicity, 2);
    }

    #[test]
    fn thm22_spec_respects_gaps() {
        for seed in 0..200 {
            let inst = generate(&GeneratorSpec::new(BoundId::PolarSpecialOutside, 5, 1, 0.6, seed)).unwrap();
            assert!(inst.poly.plain_roots.iter().all(|r| r.norm() <= 0.6 * (1.0 - SAFETY_GAP) + 1e-15));
            let z0 = inst.poly.special_root.norm();
            assert!((1.1 - 1e-15..=3.0 + 1e-15).contains(&z0));
        }
    }

    #[test]
    fn infeasible_specs() {
        assert!(matches!(
            generate(&GeneratorSpec::new(BoundId::PolarSpecialInside, 3, 3, 0.8, 1)),
            Err(GenError::InfeasibleSpec(_))
        ));
        assert!(matches!(
            generate(&GeneratorSpec::new(BoundId::PolarSpecialOutsideLarge, 3, 1, 0.5, 1)),
            Err(GenError::InfeasibleSpec(_))
        ));
        let mut spec = GeneratorSpec::new(BoundId::ErdosLax, 3, 0, 1.0, 1);
        spec.root_modulus = Range::new(0.5, 2.0);
        assert!(matches!(generate(&spec), Err(GenError::InfeasibleSpec(_))));
    }

    #[test]
    fn random_specs_pass_hypotheses() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for id in BoundId::ALL {
            for _ in 0..300 {
                let spec = GeneratorSpec::random(id, Range::new(1.0, 12.0), &mut rng);
                let inst = generate(&spec).unwrap();
                let report = check_hypothesis(&inst);
                assert!(report.ok(), "{id}: {report}");
            }
        }
    }

    #[test]
    fn lemma_instances_pass_hypotheses() {
        for lemma in LemmaId::ALL {
            for seed in 0..100 {
                let inst = generate_for_lemma(lemma, Range::new(1.0, 10.0), seed).unwrap();
                assert!(check_requirements(&inst, &Requirements::for_lemma(lemma)).ok());
            }
        }
    }

    #[test]
    fn witnesses() {
        let w = equality_witness(BoundId::PolarSpecialInside, 4, 0.0).unwrap();
        let p = w.poly.expand().unwrap();
        let want = [1.0, 0.0, 0.0, 0.0, 1.0];
        for (c, w) in p.coeffs().iter().zip(want) {
            assert!((c - Complex64::new(w, 0.0)).norm() < 1e-14);
        }
        assert_eq!((w.k, w.poly.special_multiplicity), (1.0, 0));
        let b = equality_witness(BoundId::Bernstein, 3, 0.7).unwrap();
        assert_eq!(b.poly.expand().unwrap().coeffs().len(), 4);
        assert_eq!(b.poly.expand().unwrap().coeffs()[3], Complex64::new(1.0, 0.0));
        let t = equality_witness(BoundId::PolarSpecialOutside, 5, 0.0).unwrap();
        assert_eq!(t.polar.unwrap().value(), Complex64::new(1.0, 0.0));
        assert!(matches!(
            equality_witness(BoundId::FrappierNodes, 3, 0.0),
            Err(GenError::NoWitnessKnown(_))
        ));
    }

    #[test]
    fn witnesses_attain_equality() {
        for id in BoundId::ALL {
            for n in [1, 3, 6] {
                let Ok(w) = equality_witness(id, n, 0.4) else { continue };
                assert!(check_hypothesis(&w).ok(), "{id}");
                let e = evaluate(&w, &EvalOptions::default()).unwrap();
                assert!(e.equality_gap() <= 1e-6, "{id} n={n}: ratio {}", e.ratio);
            }
        }
    }

    #[test]
    fn zero_step_is_identity() {
        let inst = generate(&GeneratorSpec::new(BoundId::PolarSpecialInside, 6, 2, 0.8, 3)).unwrap();
        assert_eq!(perturb(&inst, 0.0, 9), inst);
    }

    #[test]
    fn perturbation_walks_stay_feasible() {
        for id in BoundId::ALL {
            let mut inst = generate(&GeneratorSpec::random(id, Range::new(2.0, 8.0), &mut ChaCha8Rng::seed_from_u64(id.index() as u64))).unwrap();
            for i in 0..1000 {
                inst = perturb(&inst, 1e-2, i);
                let report = check_hypothesis(&inst);
                assert!(report.ok(), "{id} step {i}: {report}");
            }
        }
    }

    #[test]
    fn small_perturbation_of_thm21() {
        let inst = generate(&GeneratorSpec::new(BoundId::PolarSpecialInside, 6, 2, 0.8, 3)).unwrap();
        let moved = perturb(&inst, 1e-3, 1);
        assert!(moved.poly.plain_roots.iter().all(|r| r.norm() >= moved.k));
        assert!(moved.poly.special_root.norm() <= 0.9 * moved.k);
    }

    #[test]
    fn sub_seeds_differ() {
        assert_ne!(sub_seed(1, 0, 0), sub_seed(1, 0, 1));
        assert_ne!(sub_seed(1, 0, 1), sub_seed(1, 1, 0));
        assert_eq!(sub_seed(9, 3, 4), sub_seed(9, 3, 4));
    }
}
