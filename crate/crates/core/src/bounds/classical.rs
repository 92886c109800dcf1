//! Ordinary-derivative bounds with a uniform right-hand side.

use super::hypothesis::{check_hypothesis, require};
use super::{
    certified, lower_uniform, upper_with_form, BoundError, BoundEvaluation, BoundId, CheckId, Context,
    EvalOptions, Instance, PointwiseForm,
};
use crate::circle;

fn constant_form(value: f64) -> PointwiseForm {
    PointwiseForm {
        constant: value,
        factor: 0.0,
        brace_const: 0.0,
        brace_slope: 0.0,
    }
}

/// Handles `B_1_1`, `F_1_2`, `A_1_3`, `A_1_5_LOWER`, `EL_1_6` and `A_1_7`.
pub fn eval_classical(inst: &Instance, opts: &EvalOptions) -> Result<BoundEvaluation, BoundError> {
    use BoundId::*;
    if !matches!(
        inst.bound_id,
        Bernstein | FrappierNodes | RotatedNodes | RotatedNodesLower | ErdosLax | ErdosLaxNodes
    ) {
        return Err(BoundError::WrongEvaluator(inst.bound_id));
    }
    let report = check_hypothesis(inst);
    require(inst, &report)?;
    let ctx = Context::new(inst, opts)?;
    let n = ctx.nf();
    let max_p = ctx.max_value();
    let check = CheckId::Bound(inst.bound_id);
    let dp = ctx.p.derivative();

    let rhs = match inst.bound_id {
        Bernstein => n * max_p,
        FrappierNodes => n * circle::frappier_points_max(&ctx.p)?,
        RotatedNodes => n / 2.0 * (ctx.m_alpha + ctx.m_alpha_pi),
        ErdosLax => n / 2.0 * max_p,
        ErdosLaxNodes => n / 2.0 * ctx.node_sq_sum().sqrt(),
        RotatedNodesLower => {
            let m0 = circle::roots_of_unity_max(&ctx.p, 0.0)?.value;
            let m_pi = circle::roots_of_unity_max(&ctx.p, std::f64::consts::PI)?.value;
            let rhs = n / 2.0 * (2.0 * max_p - (m0 + m_pi));
            let lhs = certified(circle::circle_max_modulus(&dp, 1.0, opts.rel_tol))?;
            return Ok(lower_uniform(check, lhs, rhs, report, opts));
        }
        _ => unreachable!(),
    };
    upper_with_form(check, &ctx, &dp, constant_form(rhs), false, report, opts)
}

/// `A` of the special-zero derivative bound.
pub(crate) fn thm_a_constant(n: f64, s: f64, abs_z0: f64, k: f64) -> f64 {
    (1.0 + abs_z0).powf(s + 1.0) * (n - s) / ((1.0 + k) * (1.0 - abs_z0))
}

/// Handles `THM_A_1_8`.
pub fn eval_thm_a(inst: &Instance, opts: &EvalOptions) -> Result<BoundEvaluation, BoundError> {
    if inst.bound_id != BoundId::SpecialZeroDerivative {
        return Err(BoundError::WrongEvaluator(inst.bound_id));
    }
    let report = check_hypothesis(inst);
    require(inst, &report)?;
    let ctx = Context::new(inst, opts)?;
    let (n, s, z0, k) = (ctx.nf(), ctx.sf(), ctx.abs_z0, ctx.k);
    if z0 >= 1.0 {
        return Err(BoundError::DegenerateZ0 { abs_z0: z0 });
    }
    let a = thm_a_constant(n, s, z0, k);
    let min_k = certified(circle::circle_min_modulus(&ctx.p, k, opts.rel_tol))?.value();
    let rhs = (s / (1.0 - z0) + a / (1.0 - z0).powf(s)) * ctx.max_value() - a / (k + z0).powf(s) * min_k;
    upper_with_form(
        CheckId::Bound(inst.bound_id),
        &ctx,
        &ctx.p.derivative(),
        constant_form(rhs),
        false,
        report,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{Direction, Lhs, Outcome, Rhs};
    use crate::poly::FactoredPolynomial;
    use num_complex::Complex64;
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Roots of `z^n + e^{i a}`.
    fn shifted_unity_roots(n: usize, a: f64) -> Vec<Complex64> {
        (0..n)
            .map(|l| Complex64::from_polar(1.0, (a + PI + TAU * l as f64) / n as f64))
            .collect()
    }

    fn inst(id: BoundId, roots: Vec<Complex64>, alpha: f64) -> Instance {
        Instance {
            bound_id: id,
            poly: FactoredPolynomial::from_roots(c(1.0, 0.0), roots),
            k: 1.0,
            alpha,
            polar: None,
        }
    }

    fn rhs_value(e: &BoundEvaluation) -> f64 {
        match e.rhs {
            Rhs::Uniform(v) => v,
            Rhs::Pointwise(_) => panic!("expected uniform"),
        }
    }

    fn lhs_hi(e: &BoundEvaluation) -> f64 {
        match &e.lhs {
            Lhs::Extremum(x) => x.hi,
            Lhs::Value(v) => *v,
        }
    }

    #[test]
    fn bernstein_equality_for_monomial() {
        for n in 1..=8 {
            let e = eval_classical(&inst(BoundId::Bernstein, vec![c(0.0, 0.0); n], 0.0), &Default::default()).unwrap();
            assert!((rhs_value(&e) - n as f64).abs() < 1e-9);
            assert!((lhs_hi(&e) - n as f64).abs() < 1e-8);
            assert_eq!(e.outcome, Outcome::Holds);
            assert!(e.margin.abs() < 1e-8);
        }
    }

    #[test]
    fn rotated_nodes_equality_for_zn_plus_one() {
        for n in 2..=7 {
            let roots = shifted_unity_roots(n, 0.0);
            let up = eval_classical(&inst(BoundId::RotatedNodes, roots.clone(), 0.0), &Default::default()).unwrap();
            assert!((rhs_value(&up) - n as f64).abs() < 1e-9, "{}", rhs_value(&up));
            assert!(up.margin.abs() < 1e-7);
            let low = eval_classical(&inst(BoundId::RotatedNodesLower, roots, 0.0), &Default::default()).unwrap();
            assert_eq!(low.direction, Direction::Lower);
            assert!((rhs_value(&low) - n as f64).abs() < 1e-8);
            assert_eq!(low.outcome, Outcome::Holds);
        }
    }

    #[test]
    fn erdos_lax_equalities() {
        for (n, a) in [(3usize, 0.4), (5, 1.3), (6, -2.0)] {
            let roots = shifted_unity_roots(n, a);
            let el = eval_classical(&inst(BoundId::ErdosLax, roots.clone(), 0.0), &Default::default()).unwrap();
            assert!((rhs_value(&el) - n as f64).abs() < 1e-8);
            assert!(el.margin.abs() < 1e-7);
            let a17 = eval_classical(&inst(BoundId::ErdosLaxNodes, roots, a), &Default::default()).unwrap();
            assert!((rhs_value(&a17) - n as f64).abs() < 1e-9, "{}", rhs_value(&a17));
            assert_eq!(a17.outcome, Outcome::Holds);
        }
    }

    #[test]
    fn frappier_refines_bernstein() {
        // z^2 + i: node max sqrt(2), circle max 2
        let roots = vec![Complex64::from_polar(1.0, 3.0 * PI / 4.0), Complex64::from_polar(1.0, -PI / 4.0)];
        let f = eval_classical(&inst(BoundId::FrappierNodes, roots.clone(), 0.0), &Default::default()).unwrap();
        let b = eval_classical(&inst(BoundId::Bernstein, roots, 0.0), &Default::default()).unwrap();
        assert!((rhs_value(&f) - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((rhs_value(&b) - 4.0).abs() < 1e-9);
        assert!(f.margin >= 0.0);
    }

    #[test]
    fn erdos_lax_rejects_inner_root() {
        let err = eval_classical(&inst(BoundId::ErdosLax, vec![c(0.5, 0.0), c(2.0, 0.0)], 0.0), &Default::default());
        assert!(matches!(err, Err(BoundError::HypothesisViolated(_))));
    }

    #[test]
    fn wrong_evaluator() {
        let i = inst(BoundId::PolarUnitDisk, vec![c(2.0, 0.0)], 0.0);
        assert!(matches!(eval_classical(&i, &Default::default()), Err(BoundError::WrongEvaluator(_))));
        assert!(matches!(eval_thm_a(&i, &Default::default()), Err(BoundError::WrongEvaluator(_))));
    }

    fn thm_a_inst(scale: Complex64, plain: Vec<Complex64>, z0: Complex64, s: usize, k: f64) -> Instance {
        Instance {
            bound_id: BoundId::SpecialZeroDerivative,
            poly: FactoredPolynomial::new(scale, plain, z0, s),
            k,
            alpha: 0.0,
            polar: None,
        }
    }

    #[test]
    fn thm_a_s_zero_substitution() {
        // A = n / (1 + k) = n / 2; RHS = (n/2)(max|P| - min_{|z|=1}|P|)
        let plain = vec![c(1.5, 0.5), c(-2.0, 1.0), c(0.3, -1.2)];
        let i = thm_a_inst(c(1.0, 0.0), plain, c(0.4, 0.0), 0, 1.0);
        let e = eval_thm_a(&i, &Default::default()).unwrap();
        let p = i.poly.expand().unwrap();
        let max = circle::circle_max_modulus(&p, 1.0, 1e-10).unwrap().value();
        let min = circle::circle_min_modulus(&p, 1.0, 1e-10).unwrap().value();
        assert!((rhs_value(&e) - 1.5 * (max - min)).abs() < 1e-12 * (1.0 + max));
        assert_eq!(e.outcome, Outcome::Holds);
    }

    #[test]
    fn thm_a_hand_case() {
        // P = z (z + 1): n = 2, s = 1, z0 = 0, k = 1; A = 1/2
        // RHS = (1 + 1/2) * 2 - (1/2) * min_{|z|=1}|z+1| = 3 - 0 = 3; LHS = max|2z + 1| = 3
        let i = thm_a_inst(c(1.0, 0.0), vec![c(-1.0, 0.0)], c(0.0, 0.0), 1, 1.0);
        assert!((thm_a_constant(2.0, 1.0, 0.0, 1.0) - 0.5).abs() < 1e-15);
        let e = eval_thm_a(&i, &Default::default()).unwrap();
        assert!((lhs_hi(&e) - 3.0).abs() < 1e-8);
        assert!((rhs_value(&e) - 3.0).abs() < 1e-9);
        assert!(e.margin >= -e.tolerance);
    }

    #[test]
    fn thm_a_degenerate_and_hypothesis() {
        let i = thm_a_inst(c(1.0, 0.0), vec![c(2.0, 0.0)], c(1.0, 0.0), 1, 1.0);
        assert!(matches!(eval_thm_a(&i, &Default::default()), Err(BoundError::DegenerateZ0 { .. })));
        let i = thm_a_inst(c(1.0, 0.0), vec![c(1.2, 0.0)], c(0.2, 0.0), 1, 1.5);
        assert!(matches!(eval_thm_a(&i, &Default::default()), Err(BoundError::HypothesisViolated(_))));
    }

    #[test]
    fn scaling_covariance() {
        let roots = vec![c(0.3, 0.4), c(-1.2, 0.1), c(0.9, -2.0)];
        let base = eval_classical(&inst(BoundId::RotatedNodes, roots.clone(), 0.3), &Default::default()).unwrap();
        for factor in [c(2.0, 0.0), c(0.0, 10.0)] {
            let mut i = inst(BoundId::RotatedNodes, roots.clone(), 0.3);
            i.poly.leading_scale = factor;
            let e = eval_classical(&i, &Default::default()).unwrap();
            let m = factor.norm();
            assert!((rhs_value(&e) - m * rhs_value(&base)).abs() < 1e-10 * m * rhs_value(&base));
            assert!((e.margin - m * base.margin).abs() < 1e-8 * m * rhs_value(&base));
        }
    }
}
