//! The auxiliary inequalities as standalone checks.

use num_complex::Complex64;

use super::hypothesis::{check_requirements, require, Requirements};
use super::polar::polar_lhs;
use super::{
    certified, coeff_ratio, from_samples, grid_angles, upper_with_form, BoundError, BoundEvaluation, CheckId, Context,
    EvalOptions, Instance, Lhs, LemmaId, PointSample, PointwiseForm,
};
use crate::circle;
use crate::poly::DensePolynomial;

/// Radii checked for the growth lemma.
pub const GROWTH_RADII: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// Points with `|P(z)|` below this are skipped by the logarithmic-derivative lemma.
pub const NEAR_ZERO: f64 = 1e-12;

/// Both sides of `Re(z P'/P) <= (n - t) / (1 + k)` at `z`, or `None` when `P(z)` is too small.
pub fn lemma4_sides(p: &DensePolynomial, k: f64, z: Complex64) -> Option<(f64, f64)> {
    let (value, deriv) = p.evaluate_with_derivative(z);
    if value.norm() < NEAR_ZERO {
        return None;
    }
    let n = p.degree();
    let t = coeff_ratio(p.coeffs()[0].norm(), k.powi(n as i32) * p.leading().norm());
    let lhs = (z * deriv / value).re;
    Some((lhs, (n as f64 - t) / (1.0 + k)))
}

pub fn check_lemma(lemma: LemmaId, inst: &Instance, opts: &EvalOptions) -> Result<BoundEvaluation, BoundError> {
    let req = Requirements::for_lemma(lemma);
    let report = check_requirements(inst, &req);
    require(inst, &report)?;
    let ctx = Context::with_special(inst, opts, req.has_special_zero())?;
    let check = CheckId::Lemma(lemma);
    let n = ctx.nf();
    let direction = lemma.direction();

    match lemma {
        LemmaId::L1 | LemmaId::L2 => {
            let dp = ctx.p.derivative();
            let dq = ctx.p.conjugate_reciprocal_deg(ctx.n).derivative();
            let bound = if lemma == LemmaId::L1 {
                n * ctx.max_value()
            } else {
                n * n / 2.0 * ctx.node_sq_sum()
            };
            let points = grid_angles(opts.grid)
                .map(|at| {
                    let z = Complex64::from_polar(1.0, at);
                    let (a, b) = (dp.evaluate(z).norm(), dq.evaluate(z).norm());
                    let lhs = if lemma == LemmaId::L1 { a + b } else { a * a + b * b };
                    PointSample { at, lhs, rhs: bound }
                })
                .collect();
            Ok(from_samples(check, direction, Lhs::Extremum(ctx.max_p), points, report, opts))
        }
        LemmaId::L3 => {
            let mut points = Vec::with_capacity(GROWTH_RADII.len());
            for r in GROWTH_RADII {
                let at_r = certified(circle::circle_max_modulus(&ctx.p, r, opts.rel_tol))?;
                points.push(PointSample {
                    at: r,
                    lhs: at_r.lo,
                    rhs: r.powi(ctx.n as i32) * ctx.max_p.hi,
                });
            }
            Ok(from_samples(check, direction, Lhs::Extremum(ctx.max_p), points, report, opts))
        }
        LemmaId::L4 => {
            let points: Vec<_> = grid_angles(opts.grid)
                .filter_map(|at| {
                    lemma4_sides(&ctx.p, ctx.k, Complex64::from_polar(1.0, at)).map(|(lhs, rhs)| PointSample { at, lhs, rhs })
                })
                .collect();
            let lhs = points.iter().map(|p| p.lhs).fold(f64::NEG_INFINITY, f64::max);
            Ok(from_samples(check, direction, Lhs::Value(lhs), points, report, opts))
        }
        LemmaId::L5 => {
            let (lhs, modulus) = polar_lhs(inst, &ctx)?;
            let (s, z0, k) = (ctx.sf(), ctx.abs_z0, ctx.k);
            let w = coeff_ratio(ctx.h_c0(), ctx.h_lead_scaled());
            let r = s / (1.0 - z0) + (n - s) / (1.0 + k) - w / (1.0 + k);
            let form = PointwiseForm {
                constant: n * ctx.max_value(),
                factor: n / 2.0 * (modulus - 1.0),
                brace_const: ctx.node_sq_sum(),
                brace_slope: -2.0 * (1.0 - 2.0 / n * r),
            };
            upper_with_form(check, &ctx, &lhs, form, true, report, opts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::polar::tests::random_roots;
    use crate::bounds::{BoundId, Outcome};
    use crate::poly::{FactoredPolynomial, PolarParameter};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plain(roots: Vec<Complex64>, k: f64) -> Instance {
        Instance {
            bound_id: BoundId::Bernstein,
            poly: FactoredPolynomial::from_roots(c(1.0, 0.0), roots),
            k,
            alpha: 0.0,
            polar: None,
        }
    }

    #[test]
    fn l1_equality_for_monomial() {
        let e = check_lemma(LemmaId::L1, &plain(vec![c(0.0, 0.0); 5], 1.0), &Default::default()).unwrap();
        assert!(e.margin.abs() < 1e-8);
        assert_eq!(e.outcome, Outcome::Holds);
    }

    #[test]
    fn l4_hand_case() {
        let p = DensePolynomial::from_real(&[2.0, 1.0]);
        let (lhs, rhs) = lemma4_sides(&p, 2.0, c(1.0, 0.0)).unwrap();
        assert!((lhs - 1.0 / 3.0).abs() < 1e-15);
        assert!((rhs - 1.0 / 3.0).abs() < 1e-15);
        let e = check_lemma(LemmaId::L4, &plain(vec![c(-2.0, 0.0)], 2.0), &Default::default()).unwrap();
        assert!(e.margin.abs() < 1e-12);
        assert_eq!(e.witness_angle, 0.0);
    }

    #[test]
    fn l4_skips_zeros_on_the_circle() {
        let p = DensePolynomial::from_real(&[1.0, 0.0, 1.0]);
        assert!(lemma4_sides(&p, 1.0, c(0.0, 1.0)).is_none());
        let e = check_lemma(LemmaId::L4, &plain(vec![c(0.0, 1.0), c(0.0, -1.0)], 1.0), &Default::default()).unwrap();
        let crate::bounds::Rhs::Pointwise(points) = &e.rhs else { panic!() };
        assert_eq!(points.len(), 4094);
    }

    #[test]
    fn l3_equality_for_monomial() {
        let e = check_lemma(LemmaId::L3, &plain(vec![c(0.0, 0.0); 4], 1.0), &Default::default()).unwrap();
        let crate::bounds::Rhs::Pointwise(points) = &e.rhs else { panic!() };
        let half = points.iter().find(|p| p.at == 0.5).unwrap();
        assert!((half.lhs - 0.0625).abs() < 1e-15 && (half.rhs - 0.0625).abs() < 1e-12, "{half:?}");
        assert!(e.margin.abs() < 1e-10 && e.margin >= -e.tolerance);
    }

    #[test]
    fn lemmas_hold_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let n = rng.gen_range(1..=10);
            let generic = plain(random_roots(&mut rng, n, 0.05, 3.0), 1.0);
            for lemma in [LemmaId::L1, LemmaId::L2, LemmaId::L3] {
                let e = check_lemma(lemma, &generic, &Default::default()).unwrap();
                assert!(e.margin >= -e.tolerance, "{lemma:?} {}", e.margin);
            }
            let k = rng.gen_range(1.0..=2.0);
            let zero_free = plain(random_roots(&mut rng, n, k * 1.001, 3.0 * k), k);
            let e = check_lemma(LemmaId::L4, &zero_free, &Default::default()).unwrap();
            assert!(e.margin >= -e.tolerance, "L4 {}", e.margin);

            let s = rng.gen_range(0..n);
            let z0 = Complex64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..TAU));
            let special = Instance {
                bound_id: BoundId::SpecialZeroDerivative,
                poly: FactoredPolynomial::new(c(1.0, 0.0), random_roots(&mut rng, n - s, k * 1.001, 3.0 * k), z0, s),
                k,
                alpha: rng.gen_range(0.0..TAU),
                polar: Some(PolarParameter::outer(Complex64::from_polar(rng.gen_range(1.0..5.0), 0.3)).unwrap()),
            };
            let e = check_lemma(LemmaId::L5, &special, &Default::default()).unwrap();
            assert!(e.margin >= -e.tolerance, "L5 {}", e.margin);
        }
    }

    #[test]
    fn l4_rejects_small_k() {
        let err = check_lemma(LemmaId::L4, &plain(vec![c(2.0, 0.0)], 0.5), &Default::default());
        assert!(matches!(err, Err(BoundError::HypothesisViolated(_))));
    }
}
