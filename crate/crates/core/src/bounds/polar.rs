//! Polar-derivative bounds and the right-hand-side forms they share.
//!
//! Each form is written once for a general exceptional zero of order `s`.
//! Families without an exceptional zero evaluate it with `s = 0` and `H = P`,
//! so the `s = 0` specialisations agree bit for bit.

use super::hypothesis::{check_hypothesis, require};
use super::{coeff_ratio, upper_with_form, BoundError, BoundEvaluation, BoundId, CheckId, Context, EvalOptions, Instance, PointwiseForm};
use crate::poly::DensePolynomial;

/// Zeros outside a disk of radius `k <= 1`, `|beta| >= 1`.
pub(crate) fn outer_form(ctx: &Context, beta_mod: f64) -> PointwiseForm {
    let (n, s, k, z0) = (ctx.nf(), ctx.sf(), ctx.k, ctx.abs_z0);
    let kn = k.powi(ctx.n as i32);
    let max_p = ctx.max_value();
    let special = 2.0 * s * (k + z0) / (n * (k - z0));
    let ratio = coeff_ratio(ctx.h_c0(), ctx.h_lead_scaled());
    PointwiseForm {
        constant: n * max_p,
        factor: n * (beta_mod - 1.0) / (2.0 * kn),
        brace_const: ctx.node_sq_sum() + special * max_p * max_p,
        brace_slope: -(2.0 * kn * kn / n) * ratio,
    }
}

/// Zeros inside a disk of radius `k <= 1`, exceptional zero in `|z| > 1`, `|gamma| <= 1`.
pub(crate) fn inner_small_form(ctx: &Context, gamma_mod: f64) -> PointwiseForm {
    let (n, s, k, z0) = (ctx.nf(), ctx.sf(), ctx.k, ctx.abs_z0);
    let u = coeff_ratio(ctx.h_lead_scaled(), ctx.h_c0());
    let inner = s * z0 / (z0 - 1.0) + (n - s) * k / (k + 1.0) - k / (k + 1.0) * u;
    let w = 1.0 - 2.0 / n * inner;
    PointwiseForm {
        constant: n * gamma_mod * ctx.max_value(),
        factor: n / 2.0 * (1.0 - gamma_mod),
        brace_const: ctx.node_sq_sum(),
        brace_slope: -2.0 * w,
    }
}

/// Zeros inside a disk of radius `k >= 1`, exceptional zero in `|z| > k`, `|gamma| <= 1`.
pub(crate) fn inner_large_form(ctx: &Context, gamma_mod: f64) -> PointwiseForm {
    let (n, s, k, z0) = (ctx.nf(), ctx.sf(), ctx.k, ctx.abs_z0);
    let kn = k.powi(ctx.n as i32);
    let max_p = ctx.max_value();
    let special = 2.0 * s * (z0 + k) / (n * (z0 - k));
    let v = coeff_ratio(ctx.h_lead_scaled(), ctx.h_c0());
    PointwiseForm {
        constant: n * gamma_mod * max_p,
        factor: n * kn * (1.0 - gamma_mod) / 2.0,
        brace_const: ctx.node_sq_sum() + special * max_p * max_p,
        brace_slope: -(2.0 / (n * kn * kn)) * v,
    }
}

pub(crate) fn polar_lhs(inst: &Instance, ctx: &Context) -> Result<(DensePolynomial, f64), BoundError> {
    let beta = inst.polar.ok_or_else(|| BoundError::RegimeMismatch {
        bound: inst.bound_id,
        detail: "polar parameter missing".into(),
    })?;
    Ok((ctx.p.polar_derivative(beta.value()), beta.modulus()))
}

/// Handles `MIR_1_10`, `HA_1_11`, `APP_1_12` and `MH_1_13`.
pub fn eval_polar_upper(inst: &Instance, opts: &EvalOptions) -> Result<BoundEvaluation, BoundError> {
    use BoundId::*;
    if !matches!(
        inst.bound_id,
        PolarUnitDisk | PolarZeroFree | PolarZerosWithinLarge | PolarZerosWithinSmall
    ) {
        return Err(BoundError::WrongEvaluator(inst.bound_id));
    }
    let report = check_hypothesis(inst);
    require(inst, &report)?;
    let ctx = Context::new(inst, opts)?;
    let (lhs, modulus) = polar_lhs(inst, &ctx)?;
    let form = match inst.bound_id {
        PolarUnitDisk | PolarZeroFree => outer_form(&ctx, modulus),
        PolarZerosWithinLarge => inner_large_form(&ctx, modulus),
        _ => inner_small_form(&ctx, modulus),
    };
    upper_with_form(CheckId::Bound(inst.bound_id), &ctx, &lhs, form, true, report, opts)
}
