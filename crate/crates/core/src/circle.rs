//! Extrema of `|P|` on circles.
//!
//! Two kinds of quantities live here. The first are exact finite maxima over
//! rotated roots of unity, which the rotated-node bounds use directly. The
//! second are certified enclosures of the global max or min of `|P(r e^{it})|`.
//!
//! Certification works on `g(t) = |P(r e^{it})|^2`, a real trigonometric
//! polynomial of degree `n`. Bernstein's inequality for trigonometric
//! polynomials bounds `|g''''| <= n^4 max g`, so a cubic Hermite interpolant
//! built from `g` and `g'` at consecutive samples is off by at most
//! `n^4 G h^4 / 384` on an interval of width `h`, where `G` is any upper
//! bound for `max g`. The first such `G` comes from the Lipschitz estimate
//! `max |P| <= sample_max / (1 - n pi / N)`. Intervals whose bound cannot beat
//! the current best sample are discarded and the rest are bisected until the
//! enclosure meets the requested tolerance.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::DensePolynomial;

/// Smallest relative tolerance accepted by the certified routines.
pub const MIN_REL_TOL: f64 = 1e-12;

/// Absolute tolerance used for a minimum that is numerically zero.
pub const MIN_ABS_TOL: f64 = 1e-10;

const GOLDEN_ITERS: usize = 80;
const REFINE_ROUNDS: usize = 80;
const MAX_ACTIVE_INTERVALS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ExtremumKind {
    Max,
    Min,
}

/// Enclosure `[lo, hi]` of the max or min of `|P|` on `|z| = radius`.
///
/// For `Max`, `lo` is attained at `witness_angle`; for `Min`, `hi` is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleExtremum {
    pub lo: f64,
    pub hi: f64,
    pub witness_angle: f64,
    pub kind: ExtremumKind,
    pub radius: f64,
    pub converged: bool,
}

impl CircleExtremum {
    /// The attained sample value (`lo` for a max, `hi` for a min).
    pub fn value(&self) -> f64 {
        match self.kind {
            ExtremumKind::Max => self.lo,
            ExtremumKind::Min => self.hi,
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    fn exact(value: f64, kind: ExtremumKind, radius: f64) -> Self {
        Self {
            lo: value,
            hi: value,
            witness_angle: 0.0,
            kind,
            radius,
            converged: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircleError {
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("relative tolerance must be at least {MIN_REL_TOL:e}, got {0:e}")]
    InvalidTolerance(f64),
    #[error("refinement stalled at [{:e}, {:e}]", best.lo, best.hi)]
    ToleranceNotMet { best: CircleExtremum },
}

impl CircleError {
    /// The best enclosure reached before refinement stalled, if any.
    pub fn best(&self) -> Option<CircleExtremum> {
        match self {
            Self::ToleranceNotMet { best } => Some(*best),
            _ => None,
        }
    }
}

/// `M_alpha` and where it was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootsOfUnityMax {
    pub value: f64,
    /// `l*` in `1..=n`; the smallest index on ties.
    pub arg_index: usize,
    pub alpha: f64,
}

/// Maximum of `|P|` over `e^{i(alpha + 2 l pi)/n}`, `l = 1..=n`.
pub fn roots_of_unity_max(p: &DensePolynomial, alpha: f64) -> Result<RootsOfUnityMax, CircleError> {
    let n = p.degree();
    if n == 0 {
        return Err(CircleError::DegreeZero);
    }
    let nf = n as f64;
    let mut best = RootsOfUnityMax {
        value: f64::NEG_INFINITY,
        arg_index: 1,
        alpha,
    };
    for l in 1..=n {
        let angle = (alpha + 2.0 * l as f64 * PI) / nf;
        let v = p.evaluate(Complex64::from_polar(1.0, angle)).norm();
        if v > best.value {
            best.value = v;
            best.arg_index = l;
        }
    }
    Ok(best)
}

/// Maximum of `|P|` over the `2n` points `e^{i l pi / n}`, `l = 1..=2n`.
pub fn frappier_points_max(p: &DensePolynomial) -> Result<f64, CircleError> {
    let n = p.degree();
    if n == 0 {
        return Err(CircleError::DegreeZero);
    }
    let nf = n as f64;
    Ok((1..=2 * n)
        .map(|l| p.evaluate(Complex64::from_polar(1.0, l as f64 * PI / nf)).norm())
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Certified enclosure of `max_{|z|=r} |P(z)|`.
pub fn circle_max_modulus(p: &DensePolynomial, r: f64, rel_tol: f64) -> Result<CircleExtremum, CircleError> {
    circle_extremum(p, r, rel_tol, ExtremumKind::Max)
}

/// Certified enclosure of `min_{|z|=r} |P(z)|`.
pub fn circle_min_modulus(p: &DensePolynomial, r: f64, rel_tol: f64) -> Result<CircleExtremum, CircleError> {
    circle_extremum(p, r, rel_tol, ExtremumKind::Min)
}

/// Sample count used for the first pass at degree `n`.
pub fn initial_samples(n: usize) -> usize {
    (512 * n).max(4096)
}

/// `g = |P(r e^{it})|^2` together with `dg/dt`.
#[derive(Debug, Clone, Copy)]
struct Sample {
    angle: f64,
    g: f64,
    dg: f64,
}

fn sample(p: &DensePolynomial, r: f64, angle: f64) -> Sample {
    let z = Complex64::from_polar(r, angle);
    let (v, dv) = p.evaluate_with_derivative(z);
    // d/dt P(r e^{it}) = i z P'(z)
    let dz = Complex64::new(0.0, 1.0) * z * dv;
    Sample {
        angle,
        g: v.norm_sqr(),
        dg: 2.0 * (v.conj() * dz).re,
    }
}

/// Range of the cubic Hermite interpolant on `[a.angle, b.angle]`.
fn hermite_range(a: &Sample, b: &Sample) -> (f64, f64) {
    let h = b.angle - a.angle;
    let c0 = a.g;
    let c1 = h * a.dg;
    let c2 = 3.0 * (b.g - a.g) - 2.0 * h * a.dg - h * b.dg;
    let c3 = 2.0 * (a.g - b.g) + h * a.dg + h * b.dg;
    let eval = |s: f64| c0 + s * (c1 + s * (c2 + s * c3));
    let mut lo = a.g.min(b.g);
    let mut hi = a.g.max(b.g);
    let mut consider = |s: f64| {
        if s > 0.0 && s < 1.0 {
            let v = eval(s);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    };
    // roots of c1 + 2 c2 s + 3 c3 s^2
    let qa = 3.0 * c3;
    let qb = 2.0 * c2;
    let qc = c1;
    if qa.abs() <= 1e-300 {
        if qb != 0.0 {
            consider(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            let q = -0.5 * (qb + qb.signum() * sq);
            consider(q / qa);
            if q != 0.0 {
                consider(qc / q);
            }
        }
    }
    (lo, hi)
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: Sample,
    b: Sample,
    bound: f64,
}

struct Refiner<'a> {
    p: &'a DensePolynomial,
    r: f64,
    kind: ExtremumKind,
    n4: f64,
}

impl Refiner<'_> {
    /// Upper (max) or lower (min) bound for `g` over the interval.
    fn bound(&self, a: &Sample, b: &Sample, g_upper: f64) -> f64 {
        let h = b.angle - a.angle;
        let err = self.n4 * g_upper * h.powi(4) / 384.0;
        let (lo, hi) = hermite_range(a, b);
        match self.kind {
            ExtremumKind::Max => hi + err,
            ExtremumKind::Min => lo - err,
        }
    }

    fn better(&self, x: f64, than: f64) -> bool {
        match self.kind {
            ExtremumKind::Max => x > than,
            ExtremumKind::Min => x < than,
        }
    }

    /// Golden-section search for the extremum of `g` on `[lo, hi]`.
    fn golden(&self, mut lo: f64, mut hi: f64, best: &mut Sample) {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let mut f1 = sample(self.p, self.r, x1);
        let mut f2 = sample(self.p, self.r, x2);
        for _ in 0..GOLDEN_ITERS {
            if hi - lo <= 1e-15 * (1.0 + lo.abs()) {
                break;
            }
            if self.better(f1.g, f2.g) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = sample(self.p, self.r, x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = sample(self.p, self.r, x2);
            }
        }
        for f in [f1, f2] {
            if self.better(f.g, best.g) {
                *best = f;
            }
        }
    }
}

fn normalize_angle(t: f64) -> f64 {
    let a = t.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

fn circle_extremum(
    p: &DensePolynomial,
    r: f64,
    rel_tol: f64,
    kind: ExtremumKind,
) -> Result<CircleExtremum, CircleError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(CircleError::InvalidRadius(r));
    }
    if rel_tol.is_nan() || rel_tol < MIN_REL_TOL {
        return Err(CircleError::InvalidTolerance(rel_tol));
    }
    let n = p.degree();
    if n == 0 {
        return Ok(CircleExtremum::exact(p.coeffs()[0].norm(), kind, r));
    }

    let count = initial_samples(n);
    let step = TAU / count as f64;
    let samples: Vec<Sample> = (0..=count)
        .map(|j| {
            if j == count {
                // wrap-around endpoint, same value as angle 0
                let s0 = sample(p, r, 0.0);
                Sample { angle: TAU, ..s0 }
            } else {
                sample(p, r, j as f64 * step)
            }
        })
        .collect();

    let nf = n as f64;
    let refiner = Refiner {
        p,
        r,
        kind,
        n4: nf.powi(4),
    };

    // best attained sample; ties go to the smallest angle
    let mut best_index = 0;
    for (j, s) in samples[..count].iter().enumerate() {
        if refiner.better(s.g, samples[best_index].g) {
            best_index = j;
        }
    }
    let mut best = samples[best_index];

    // global upper bound on max g from the Lipschitz estimate
    let sample_max = samples.iter().map(|s| s.g).fold(0.0, f64::max).sqrt();
    let lipschitz = 1.0 - nf * PI / count as f64;
    let mut g_upper = (sample_max / lipschitz).powi(2);

    // polish the best bracket
    let left = best.angle - step;
    let right = best.angle + step;
    refiner.golden(left, right, &mut best);

    let mut active: Vec<Interval> = samples
        .windows(2)
        .map(|w| Interval {
            a: w[0],
            b: w[1],
            bound: refiner.bound(&w[0], &w[1], g_upper),
        })
        .collect();
    // bound contributed by discarded intervals
    let mut settled = best.g;

    let tol_factor = (1.0 + rel_tol).powi(2);
    let mut converged = false;
    for round in 0..=REFINE_ROUNDS {
        let extreme_bound = active.iter().map(|iv| iv.bound).fold(settled, |acc, b| match kind {
            ExtremumKind::Max => acc.max(b),
            ExtremumKind::Min => acc.min(b),
        });
        if kind == ExtremumKind::Max {
            g_upper = g_upper.min(extreme_bound.max(best.g));
        }
        let enclosure = finish(best, extreme_bound, kind, r, false);
        if meets_tolerance(&enclosure, rel_tol) {
            converged = true;
            break;
        }
        if round == REFINE_ROUNDS {
            break;
        }
        // keep only intervals that could still move the enclosure
        let threshold = match kind {
            ExtremumKind::Max => best.g * tol_factor,
            ExtremumKind::Min => best.g / tol_factor,
        };
        let mut next = Vec::with_capacity(active.len());
        for iv in active {
            let keep = match kind {
                ExtremumKind::Max => iv.bound > threshold,
                ExtremumKind::Min => iv.bound < threshold,
            };
            if keep {
                next.push(iv);
            } else {
                settled = match kind {
                    ExtremumKind::Max => settled.max(iv.bound.min(threshold)),
                    ExtremumKind::Min => settled.min(iv.bound.max(threshold)),
                };
            }
        }
        if next.len() * 2 > MAX_ACTIVE_INTERVALS {
            active = next;
            break;
        }
        active = Vec::with_capacity(next.len() * 2);
        for iv in next {
            let mid = sample(p, r, 0.5 * (iv.a.angle + iv.b.angle));
            if refiner.better(mid.g, best.g) {
                best = mid;
            }
            for (a, b) in [(iv.a, mid), (mid, iv.b)] {
                active.push(Interval {
                    a,
                    b,
                    bound: refiner.bound(&a, &b, g_upper),
                });
            }
        }
        if let Some(top) = active
            .iter()
            .copied()
            .reduce(|x, y| if refiner.better(y.bound, x.bound) { y } else { x })
        {
            // polish inside the most promising interval
            refiner.golden(top.a.angle, top.b.angle, &mut best);
        }
    }

    let extreme_bound = active.iter().map(|iv| iv.bound).fold(settled, |acc, b| match kind {
        ExtremumKind::Max => acc.max(b),
        ExtremumKind::Min => acc.min(b),
    });
    let result = finish(best, extreme_bound, kind, r, converged);
    if converged {
        Ok(result)
    } else {
        Err(CircleError::ToleranceNotMet { best: result })
    }
}

fn finish(best: Sample, bound: f64, kind: ExtremumKind, radius: f64, converged: bool) -> CircleExtremum {
    let attained = best.g.max(0.0).sqrt();
    let (lo, hi) = match kind {
        ExtremumKind::Max => (attained, bound.max(best.g).sqrt()),
        ExtremumKind::Min => (bound.min(best.g).max(0.0).sqrt(), attained),
    };
    CircleExtremum {
        lo,
        hi,
        witness_angle: normalize_angle(best.angle),
        kind,
        radius,
        converged,
    }
}

fn meets_tolerance(e: &CircleExtremum, rel_tol: f64) -> bool {
    let width = e.hi - e.lo;
    let reference = match e.kind {
        ExtremumKind::Max => e.lo,
        ExtremumKind::Min => e.hi,
    };
    if width <= rel_tol * reference.max(1e-300) {
        return true;
    }
    e.kind == ExtremumKind::Min && e.lo <= 0.0 && width <= MIN_ABS_TOL
}
