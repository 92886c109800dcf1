//! Bounds with an exceptional zero of order `s` at `z0`.

use super::hypothesis::{check_hypothesis, require};
use super::polar::{inner_large_form, inner_small_form, outer_form, polar_lhs};
use super::{
    certified, lower_uniform, upper_with_form, BoundError, BoundEvaluation, BoundId, CheckId, Context, EvalOptions,
    Instance, PointwiseForm,
};
use crate::circle;

fn prepare(inst: &Instance, opts: &EvalOptions, ids: &[BoundId]) -> Result<(Context, super::HypothesisReport), BoundError> {
    if !ids.contains(&inst.bound_id) {
        return Err(BoundError::WrongEvaluator(inst.bound_id));
    }
    let report = check_hypothesis(inst);
    require(inst, &report)?;
    Ok((Context::new(inst, opts)?, report))
}

/// Handles `THM21_2_1`, `COR_2_2` and `COR_2_3`.
pub fn eval_thm21(inst: &Instance, opts: &EvalOptions) -> Result<BoundEvaluation, BoundError> {
    use BoundId::*;
    let (ctx, report) = prepare(inst, opts, &[PolarSpecialInside, PolarSpecialOrigin, DerivativeSpecialInside])?;
    let check = CheckId::Bound(inst.bound_id);
    if inst.bound_id == DerivativeSpecialInside {
        let form = outer_form(&ctx, 2.0);
        let limit = PointwiseForm {
            constant: 0.0,
            factor: ctx.nf() / (2.0 * ctx.k.powi(ctx.n as i32)),
            ..form
        };
        return upper_with_form(check, &ctx, &ctx.p.derivative(), limit, true, report, opts);
    }
    let (lhs, modulus) = polar_lhs(inst, &ctx)?;
    upper_with_form(check, &ctx, &lhs, outer_form(&ctx, modulus), true, report, opts)
}

/// `(n/2) [2 max|P| - scale * sqrt(brace at max|P|)]`.
fn lower_from_form(
    inst: &Instance,
    ctx: &Context,
    form: PointwiseForm,
    scale: f64,
    report: super::HypothesisReport,
    opts: &EvalOptions,
) -> Result<BoundEvaluation, BoundError> {
    let max_p = ctx.max_value();
    let brace = form.brace(max_p * max_p);
    if brace < 0.0 || brace.is_nan() {
        return Err(BoundError::BraceNegative {
            angle: ctx.max_p.witness_angle,
            value: brace,
        });
    }
    let rhs = ctx.nf() / 2.0 * (2.0 * max_p - scale * brace.sqrt());
    let lhs = certified(circle::circle_max_modulus(&ctx.p.derivative(), 1.0, opts.rel_tol))?;
    Ok(lower_uniform(CheckId::Bound(inst.bound_id), lhs, rhs, report, opts))
}

/// Handles `THM22_2_4` and `LOWER_2_7`.
pub fn eval_thm22(inst: &Instance, opts: &EvalOptions) -> Result<BoundEvaluation, BoundError> {
    use BoundId::*;
    let (ctx, report) = prepare(inst, opts, &[PolarSpecialOutside, DerivativeLowerOutside])?;
    if inst.bound_id == DerivativeLowerOutside {
        return lower_from_form(inst, &ctx, inner_small_form(&ctx, 0.0), 1.0, report, opts);
    }
    let (lhs, modulus) = polar_lhs(inst, &ctx)?;
    upper_with_form(
        CheckId::Bound(inst.bound_id),
        &ctx,
        &lhs,
        inner_small_form(&ctx, modulus),
        true,
        report,
        opts,
    )
}

/// Handles `THM23_2_8` and `LOWER_REMARK_2_3`.
pub fn eval_thm23(inst: &Instance, opts: &EvalOptions) -> Result<BoundEvaluation, BoundError> {
    use BoundId::*;
    let (ctx, report) = prepare(inst, opts, &[PolarSpecialOutsideLarge, DerivativeLowerLarge])?;
    if inst.bound_id == DerivativeLowerLarge {
        let kn = ctx.k.powi(ctx.n as i32);
        return lower_from_form(inst, &ctx, inner_large_form(&ctx, 0.0), kn, report, opts);
    }
    let (lhs, modulus) = polar_lhs(inst, &ctx)?;
    upper_with_form(
        CheckId::Bound(inst.bound_id),
        &ctx,
        &lhs,
        inner_large_form(&ctx, modulus),
        true,
        report,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::polar::tests::{random_roots, shifted_unity_roots};
    use crate::bounds::{evaluate, Direction, Outcome, Rhs};
    use crate::poly::{FactoredPolynomial, PolarParameter};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn build(
        id: BoundId,
        plain: Vec<Complex64>,
        z0: Complex64,
        s: usize,
        k: f64,
        alpha: f64,
        polar: Option<PolarParameter>,
    ) -> Instance {
        Instance {
            bound_id: id,
            poly: FactoredPolynomial::new(c(1.0, 0.0), plain, z0, s),
            k,
            alpha,
            polar,
        }
    }

    fn outer(x: f64) -> Option<PolarParameter> {
        Some(PolarParameter::outer(c(x, 0.0)).unwrap())
    }

    fn inner(x: f64) -> Option<PolarParameter> {
        Some(PolarParameter::inner(c(x, 0.0)).unwrap())
    }

    fn points(e: &BoundEvaluation) -> Vec<(f64, f64)> {
        match &e.rhs {
            Rhs::Pointwise(p) => p.iter().map(|x| (x.at, x.rhs)).collect(),
            Rhs::Uniform(v) => vec![(e.witness_angle, *v)],
        }
    }

    #[test]
    fn thm21_equality_for_shifted_monomial() {
        for (n, a, beta) in [(2usize, 0.0, 1.0), (5, 0.9, 3.0), (7, -2.2, 1.5)] {
            for id in [BoundId::PolarSpecialInside, BoundId::PolarSpecialOrigin] {
                let i = build(id, shifted_unity_roots(n, a), c(0.0, 0.0), 0, 1.0, a, outer(beta));
                let e = evaluate(&i, &Default::default()).unwrap();
                let target = n as f64 * (beta + 1.0);
                assert!(e.margin.abs() < 1e-7 * target, "{id} margin {}", e.margin);
                assert!((e.rhs.min() - target).abs() < 1e-8 * target);
            }
            let i = build(BoundId::DerivativeSpecialInside, shifted_unity_roots(n, a), c(0.0, 0.0), 0, 1.0, a, None);
            let e = evaluate(&i, &Default::default()).unwrap();
            assert!(e.margin.abs() < 1e-7 * n as f64, "margin {}", e.margin);
        }
    }

    fn random_thm21(rng: &mut ChaCha8Rng, s_zero: bool, origin: bool) -> Instance {
        let n = rng.gen_range(2..=9);
        let s = if s_zero { 0 } else { rng.gen_range(1..n) };
        let k = rng.gen_range(0.2..=1.0);
        let z0 = if origin { c(0.0, 0.0) } else { Complex64::from_polar(rng.gen_range(0.0..=0.9 * k), rng.gen_range(0.0..TAU)) };
        let plain = random_roots(rng, n - s, k * 1.001, 3.0);
        let beta = rng.gen_range(1.0..5.0);
        build(BoundId::PolarSpecialInside, plain, z0, s, k, rng.gen_range(0.0..TAU), outer(beta))
    }

    #[test]
    fn thm21_reduces_to_zero_free_bound_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let thm = random_thm21(&mut rng, true, false);
            let ha = Instance {
                bound_id: BoundId::PolarZeroFree,
                ..thm.clone()
            };
            let a = evaluate(&thm, &Default::default()).unwrap();
            let b = evaluate(&ha, &Default::default()).unwrap();
            assert_eq!(points(&a), points(&b));
            assert_eq!(a.margin.to_bits(), b.margin.to_bits());
        }
    }

    #[test]
    fn thm21_at_origin_matches_cor22_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let thm = random_thm21(&mut rng, false, true);
            let cor = Instance {
                bound_id: BoundId::PolarSpecialOrigin,
                ..thm.clone()
            };
            let a = evaluate(&thm, &Default::default()).unwrap();
            let b = evaluate(&cor, &Default::default()).unwrap();
            assert_eq!(points(&a), points(&b));
        }
    }

    #[test]
    fn thm21_large_beta_tends_to_derivative_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let mut thm = random_thm21(&mut rng, false, false);
            let phase = rng.gen_range(0.0..TAU);
            thm.polar = Some(PolarParameter::outer(Complex64::from_polar(1e8, phase)).unwrap());
            let cor = Instance {
                bound_id: BoundId::DerivativeSpecialInside,
                polar: None,
                ..thm.clone()
            };
            let a = evaluate(&thm, &Default::default()).unwrap();
            let b = evaluate(&cor, &Default::default()).unwrap();
            for ((_, ra), (_, rb)) in points(&a).into_iter().zip(points(&b)) {
                assert!((ra / 1e8 - rb).abs() <= 1e-6 * rb.abs().max(1e-300), "{ra} {rb}");
            }
        }
    }

    #[test]
    fn thm21_random_instances_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..300 {
            let i = random_thm21(&mut rng, false, false);
            let e = evaluate(&i, &Default::default()).unwrap();
            assert!(e.margin >= -1e-8 * (1.0 + e.rhs.scale()), "{} {i:?}", e.margin);
        }
    }

    #[test]
    fn thm21_rejects_z0_outside_k() {
        let i = build(BoundId::PolarSpecialInside, vec![c(1.5, 0.0)], c(0.85, 0.0), 1, 0.8, 0.0, outer(2.0));
        assert!(matches!(evaluate(&i, &Default::default()), Err(BoundError::HypothesisViolated(_))));
    }

    #[test]
    fn thm22_and_thm23_equality_on_zn_plus_one() {
        for n in [2usize, 4, 7] {
            for id in [BoundId::PolarSpecialOutside, BoundId::PolarSpecialOutsideLarge] {
                let i = build(id, shifted_unity_roots(n, 0.0), c(0.0, 0.0), 0, 1.0, 0.0, inner(1.0));
                let e = evaluate(&i, &Default::default()).unwrap();
                assert!(e.margin.abs() < 1e-7 * n as f64, "{id} {}", e.margin);
                assert!((e.rhs.min() - 2.0 * n as f64).abs() < 1e-8 * n as f64);
            }
        }
    }

    #[test]
    fn lower_bounds_on_zn_plus_one() {
        for n in [1usize, 3, 6] {
            for id in [BoundId::DerivativeLowerOutside, BoundId::DerivativeLowerLarge] {
                let i = build(id, shifted_unity_roots(n, 0.0), c(0.0, 0.0), 0, 1.0, 0.0, None);
                let e = evaluate(&i, &Default::default()).unwrap();
                assert_eq!(e.direction, Direction::Lower);
                assert!((e.rhs.min() - n as f64).abs() < 1e-8 * n as f64, "{id} {}", e.rhs.min());
                assert_eq!(e.outcome, Outcome::Holds);
            }
        }
    }

    fn random_inner(rng: &mut ChaCha8Rng, id: BoundId, s_zero: bool) -> Instance {
        let n = rng.gen_range(2..=9);
        let s = if s_zero { 0 } else { rng.gen_range(1..n) };
        let large = matches!(id, BoundId::PolarSpecialOutsideLarge | BoundId::DerivativeLowerLarge);
        let k = if large { rng.gen_range(1.0..=2.0) } else { rng.gen_range(0.2..=1.0) };
        let (lo, hi) = if large { (1.1 * k, 3.0 * k) } else { (1.1, 3.0) };
        let z0 = if s_zero { c(0.0, 0.0) } else { Complex64::from_polar(rng.gen_range(lo..=hi), rng.gen_range(0.0..TAU)) };
        let plain = random_roots(rng, n - s, 0.05 * k, 0.999 * k);
        let polar = if id.direction() == Direction::Lower { None } else { inner(rng.gen_range(0.0..=1.0)) };
        build(id, plain, z0, s, k, rng.gen_range(0.0..TAU), polar)
    }

    #[test]
    fn thm22_and_thm23_reduce_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for (thm, base) in [
            (BoundId::PolarSpecialOutside, BoundId::PolarZerosWithinSmall),
            (BoundId::PolarSpecialOutsideLarge, BoundId::PolarZerosWithinLarge),
        ] {
            for _ in 0..100 {
                let i = random_inner(&mut rng, thm, true);
                let j = Instance { bound_id: base, ..i.clone() };
                let a = evaluate(&i, &Default::default()).unwrap();
                let b = evaluate(&j, &Default::default()).unwrap();
                assert_eq!(points(&a), points(&b));
            }
        }
    }

    #[test]
    fn thm23_random_instances_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for id in BoundId::ALL.into_iter().filter(|b| b.index() >= BoundId::PolarSpecialOutside.index()) {
            for _ in 0..150 {
                let i = random_inner(&mut rng, id, false);
                let e = evaluate(&i, &Default::default()).unwrap();
                assert!(e.margin >= -1e-8 * (1.0 + e.rhs.scale()), "{id} {} {i:?}", e.margin);
            }
        }
    }
}
