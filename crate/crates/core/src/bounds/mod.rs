//! Evaluators for the catalogued inequalities.
//!
//! Every [`BoundId`] names one inequality. Evaluating an [`Instance`] checks
//! the zero-location hypotheses, computes both sides, and reports a margin:
//! `rhs - lhs` for upper bounds and `lhs - rhs` for lower bounds, from
//! certified enclosures. A margin below `-tol` with
//! `tol = tol_factor * (1 + |rhs scale|)` is a violation.
//!
//! Right-hand sides containing `|P(z)|^2` are checked [`Mode::Pointwise`] by
//! default, i.e. `|L(z)| <= RHS(z)` at every grid point with the same `z` on
//! both sides. [`Mode::Uniform`] substitutes `|P|` at the maximiser of the
//! left-hand side instead; it is a diagnostic and its excesses are reported as
//! [`Outcome::UniformExceeded`], not as violations.
//!
//! | id | inequality (on `|z| = 1`, `M_a` the max over rotated `n`-th roots of unity) |
//! |----|------|
//! | `B_1_1` | `max|P'| <= n max|P|` |
//! | `F_1_2` | `max|P'| <= n max_{l<=2n} |P(e^{i l pi/n})|` |
//! | `A_1_3` | `max|P'| <= (n/2)(M_a + M_{a+pi})` |
//! | `A_1_5_LOWER` | `max|P'| >= (n/2)(2 max|P| - M_0 - M_pi)` |
//! | `EL_1_6` | no zeros in `|z|<1`: `max|P'| <= (n/2) max|P|` |
//! | `A_1_7` | no zeros in `|z|<1`: `max|P'| <= (n/2) sqrt(M_a^2 + M_{a+pi}^2)` |
//! | `THM_A_1_8` | zero of order `s` at `|z0|<1`, others in `|z|>=k>=1`: `max|P'|` against `max|P|` and `min_{|z|=k}|P|` |
//! | `MIR_1_10` | no zeros in `|z|<1`, `|beta|>=1`: polar derivative bound |
//! | `HA_1_11` | no zeros in `|z|<k<=1`, `|beta|>=1`: polar derivative bound |
//! | `APP_1_12` | no zeros in `|z|>k>=1`, `|beta|<=1`, `c_0 != 0` |
//! | `MH_1_13` | no zeros in `|z|>k`, `k<=1`, `|beta|<=1`, `c_0 != 0` |
//! | `THM21_2_1` | zeros in `|z|>=k`, `k<=1`, except order `s` at `|z0|<k`; `|beta|>=1` |
//! | `COR_2_2` | as `THM21_2_1` with `z0 = 0` |
//! | `COR_2_3` | ordinary-derivative limit of `THM21_2_1` |
//! | `THM22_2_4` | zeros in `|z|<=k`, `k<=1`, except order `s` at `|z0|>1`; `|gamma|<=1` |
//! | `LOWER_2_7` | `gamma = 0` consequence of `THM22_2_4`: lower bound on `max|P'|` |
//! | `THM23_2_8` | zeros in `|z|<=k`, `k>=1`, except order `s` at `|z0|>k`; `|gamma|<=1` |
//! | `LOWER_REMARK_2_3` | `gamma = 0` consequence of `THM23_2_8`: lower bound on `max|P'|` |

mod classical;
pub(crate) mod hypothesis;
mod lemmas;
mod polar;
mod theorems;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circle::{self, CircleError, CircleExtremum};
use crate::poly::{DensePolynomial, FactoredPolynomial, PolarParameter, PolyError};

pub use classical::{eval_classical, eval_thm_a};
pub use hypothesis::{check_hypothesis, Clause, HypothesisReport};
pub use lemmas::{check_lemma, lemma4_sides};
pub use polar::eval_polar_upper;
pub use theorems::{eval_thm21, eval_thm22, eval_thm23};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundId {
    #[serde(rename = "B_1_1")]
    Bernstein,
    #[serde(rename = "F_1_2")]
    FrappierNodes,
    #[serde(rename = "A_1_3")]
    RotatedNodes,
    #[serde(rename = "A_1_5_LOWER")]
    RotatedNodesLower,
    #[serde(rename = "EL_1_6")]
    ErdosLax,
    #[serde(rename = "A_1_7")]
    ErdosLaxNodes,
    #[serde(rename = "THM_A_1_8")]
    SpecialZeroDerivative,
    #[serde(rename = "MIR_1_10")]
    PolarUnitDisk,
    #[serde(rename = "HA_1_11")]
    PolarZeroFree,
    #[serde(rename = "APP_1_12")]
    PolarZerosWithinLarge,
    #[serde(rename = "MH_1_13")]
    PolarZerosWithinSmall,
    #[serde(rename = "THM21_2_1")]
    PolarSpecialInside,
    #[serde(rename = "COR_2_2")]
    PolarSpecialOrigin,
    #[serde(rename = "COR_2_3")]
    DerivativeSpecialInside,
    #[serde(rename = "THM22_2_4")]
    PolarSpecialOutside,
    #[serde(rename = "LOWER_2_7")]
    DerivativeLowerOutside,
    #[serde(rename = "THM23_2_8")]
    PolarSpecialOutsideLarge,
    #[serde(rename = "LOWER_REMARK_2_3")]
    DerivativeLowerLarge,
}

impl BoundId {
    pub const ALL: [BoundId; 18] = [
        BoundId::Bernstein,
        BoundId::FrappierNodes,
        BoundId::RotatedNodes,
        BoundId::RotatedNodesLower,
        BoundId::ErdosLax,
        BoundId::ErdosLaxNodes,
        BoundId::SpecialZeroDerivative,
        BoundId::PolarUnitDisk,
        BoundId::PolarZeroFree,
        BoundId::PolarZerosWithinLarge,
        BoundId::PolarZerosWithinSmall,
        BoundId::PolarSpecialInside,
        BoundId::PolarSpecialOrigin,
        BoundId::DerivativeSpecialInside,
        BoundId::PolarSpecialOutside,
        BoundId::DerivativeLowerOutside,
        BoundId::PolarSpecialOutsideLarge,
        BoundId::DerivativeLowerLarge,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::Bernstein => "B_1_1",
            BoundId::FrappierNodes => "F_1_2",
            BoundId::RotatedNodes => "A_1_3",
            BoundId::RotatedNodesLower => "A_1_5_LOWER",
            BoundId::ErdosLax => "EL_1_6",
            BoundId::ErdosLaxNodes => "A_1_7",
            BoundId::SpecialZeroDerivative => "THM_A_1_8",
            BoundId::PolarUnitDisk => "MIR_1_10",
            BoundId::PolarZeroFree => "HA_1_11",
            BoundId::PolarZerosWithinLarge => "APP_1_12",
            BoundId::PolarZerosWithinSmall => "MH_1_13",
            BoundId::PolarSpecialInside => "THM21_2_1",
            BoundId::PolarSpecialOrigin => "COR_2_2",
            BoundId::DerivativeSpecialInside => "COR_2_3",
            BoundId::PolarSpecialOutside => "THM22_2_4",
            BoundId::DerivativeLowerOutside => "LOWER_2_7",
            BoundId::PolarSpecialOutsideLarge => "THM23_2_8",
            BoundId::DerivativeLowerLarge => "LOWER_REMARK_2_3",
        }
    }

    /// Stable small integer used for seeding.
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&b| b == self).unwrap_or(0)
    }

    pub fn direction(self) -> Direction {
        match self {
            BoundId::RotatedNodesLower | BoundId::DerivativeLowerOutside | BoundId::DerivativeLowerLarge => {
                Direction::Lower
            }
            _ => Direction::Upper,
        }
    }

    /// Whether the right-hand side depends on `|P(z)|` at a free point.
    pub fn has_pointwise_rhs(self) -> bool {
        matches!(
            self,
            BoundId::PolarUnitDisk
                | BoundId::PolarZeroFree
                | BoundId::PolarZerosWithinLarge
                | BoundId::PolarZerosWithinSmall
                | BoundId::PolarSpecialInside
                | BoundId::PolarSpecialOrigin
                | BoundId::DerivativeSpecialInside
                | BoundId::PolarSpecialOutside
                | BoundId::PolarSpecialOutsideLarge
        )
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown id {0:?}")]
pub struct UnknownId(pub String);

impl FromStr for BoundId {
    type Err = UnknownId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim();
        Self::ALL
            .iter()
            .copied()
            .find(|b| b.as_str().eq_ignore_ascii_case(wanted))
            .ok_or_else(|| UnknownId(s.to_string()))
    }
}

/// The auxiliary inequalities, checkable on their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    /// `|P'(z)| + |Q'(z)| <= n max|P|` on `|z| = 1`.
    L1,
    /// `|P'(z)|^2 + |Q'(z)|^2 <= (n^2/2)(M_a^2 + M_{a+pi}^2)` on `|z| = 1`.
    L2,
    /// `max_{|z|=r}|P| >= r^n max_{|z|=1}|P|` for `r <= 1`.
    L3,
    /// `Re(z P'/P) <= (n - (|c_0| - k^n|c_n|)/(|c_0| + k^n|c_n|)) / (1+k)` when `P` has no zeros in `|z| < k`, `k >= 1`.
    L4,
    /// Polar-derivative bound for a zero of order `s` at `|z0| < 1`, other zeros in `|z| >= k >= 1`.
    L5,
}

impl LemmaId {
    pub const ALL: [LemmaId; 5] = [LemmaId::L1, LemmaId::L2, LemmaId::L3, LemmaId::L4, LemmaId::L5];

    pub fn as_str(self) -> &'static str {
        match self {
            LemmaId::L1 => "L1",
            LemmaId::L2 => "L2",
            LemmaId::L3 => "L3",
            LemmaId::L4 => "L4",
            LemmaId::L5 => "L5",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            LemmaId::L3 => Direction::Lower,
            _ => Direction::Upper,
        }
    }
}

impl FromStr for LemmaId {
    type Err = UnknownId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|l| l.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownId(s.to_string()))
    }
}

/// What an evaluation checked: a catalogued bound or a lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckId {
    Bound(BoundId),
    Lemma(LemmaId),
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckId::Bound(b) => f.write_str(b.as_str()),
            CheckId::Lemma(l) => f.write_str(l.as_str()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Mode {
    Pointwise,
    Uniform,
}

impl FromStr for Mode {
    type Err = UnknownId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pointwise" => Ok(Mode::Pointwise),
            "uniform" => Ok(Mode::Uniform),
            _ => Err(UnknownId(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Holds,
    Violated,
    /// The diagnostic uniform substitution exceeded the bound; informational.
    UniformExceeded,
}

/// A polynomial with every parameter a bound needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub bound_id: BoundId,
    pub poly: FactoredPolynomial,
    pub k: f64,
    pub alpha: f64,
    #[serde(default)]
    pub polar: Option<PolarParameter>,
}

/// Evaluation knobs; the defaults are the ones the acceptance suite pins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub mode: Mode,
    /// Relative factor in `tol = tol_factor * (1 + |rhs scale|)`.
    pub tol_factor: f64,
    /// Number of equally spaced angles for pointwise checks.
    pub grid: usize,
    /// Relative tolerance requested from the circle extremum routines.
    pub rel_tol: f64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Pointwise,
            tol_factor: 1e-8,
            grid: 4096,
            rel_tol: 1e-10,
        }
    }
}

impl EvalOptions {
    pub fn with_mode(mode: Mode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }
}

/// One checked point: an angle on the unit circle, or a radius for the
/// radius sweep of `L3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    pub at: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lhs {
    Extremum(CircleExtremum),
    Value(f64),
}

impl Lhs {
    /// The certified end that a margin is computed from.
    pub fn certified(&self, direction: Direction) -> f64 {
        match (self, direction) {
            (Lhs::Extremum(e), Direction::Upper) => e.hi,
            (Lhs::Extremum(e), Direction::Lower) => e.lo,
            (Lhs::Value(v), _) => *v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rhs {
    Uniform(f64),
    Pointwise(Vec<PointSample>),
}

impl Rhs {
    pub fn min(&self) -> f64 {
        match self {
            Rhs::Uniform(v) => *v,
            Rhs::Pointwise(points) => points.iter().map(|p| p.rhs).fold(f64::INFINITY, f64::min),
        }
    }

    pub fn scale(&self) -> f64 {
        match self {
            Rhs::Uniform(v) => v.abs(),
            Rhs::Pointwise(points) => points.iter().map(|p| p.rhs.abs()).fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub check: CheckId,
    pub mode: Mode,
    pub direction: Direction,
    pub lhs: Lhs,
    pub rhs: Rhs,
    pub margin: f64,
    pub tolerance: f64,
    /// `lhs / rhs` for upper bounds (max over points), `rhs / lhs` for lower
    /// bounds; at most `1` when the bound holds.
    pub ratio: f64,
    pub witness_angle: f64,
    pub hypothesis: HypothesisReport,
    pub outcome: Outcome,
}

impl BoundEvaluation {
    pub fn is_violation(&self) -> bool {
        self.outcome == Outcome::Violated
    }

    /// `1 - ratio`, the relative distance from equality.
    pub fn equality_gap(&self) -> f64 {
        (1.0 - self.ratio).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("hypotheses not satisfied: {0}")]
    HypothesisViolated(HypothesisReport),
    #[error("polar parameter does not match the regime required by {bound}: {detail}")]
    RegimeMismatch { bound: BoundId, detail: String },
    #[error("special zero is degenerate: |z0| = {abs_z0}")]
    DegenerateZ0 { abs_z0: f64 },
    #[error("brace under the square root is negative ({value:e}) at angle {angle}")]
    BraceNegative { angle: f64, value: f64 },
    #[error("{0} is not handled by this evaluator")]
    WrongEvaluator(BoundId),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Circle(#[from] CircleError),
}

impl BoundError {
    /// Short tag used in reports.
    pub fn tag(&self) -> &'static str {
        match self {
            BoundError::HypothesisViolated(_) => "hypothesis_violated",
            BoundError::RegimeMismatch { .. } => "regime_mismatch",
            BoundError::DegenerateZ0 { .. } => "degenerate_z0",
            BoundError::BraceNegative { .. } => "brace_negative",
            BoundError::WrongEvaluator(_) => "wrong_evaluator",
            BoundError::Poly(_) => "poly_error",
            BoundError::Circle(_) => "circle_error",
        }
    }
}

/// Dispatches to the evaluator responsible for `inst.bound_id`.
pub fn evaluate(inst: &Instance, opts: &EvalOptions) -> Result<BoundEvaluation, BoundError> {
    use BoundId::*;
    match inst.bound_id {
        Bernstein | FrappierNodes | RotatedNodes | RotatedNodesLower | ErdosLax | ErdosLaxNodes => {
            eval_classical(inst, opts)
        }
        SpecialZeroDerivative => eval_thm_a(inst, opts),
        PolarUnitDisk | PolarZeroFree | PolarZerosWithinLarge | PolarZerosWithinSmall => {
            eval_polar_upper(inst, opts)
        }
        PolarSpecialInside | PolarSpecialOrigin | DerivativeSpecialInside => eval_thm21(inst, opts),
        PolarSpecialOutside | DerivativeLowerOutside => eval_thm22(inst, opts),
        PolarSpecialOutsideLarge | DerivativeLowerLarge => eval_thm23(inst, opts),
    }
}

/// `(a - b) / (a + b)`, the coefficient ratio that appears in the refined bounds.
pub(crate) fn coeff_ratio(a: f64, b: f64) -> f64 {
    (a - b) / (a + b)
}

/// Quantities shared by every evaluator.
pub(crate) struct Context {
    pub n: usize,
    pub p: DensePolynomial,
    /// `H` with `P = (z - z0)^s H`.
    pub h: DensePolynomial,
    pub s: usize,
    pub abs_z0: f64,
    pub k: f64,
    pub max_p: CircleExtremum,
    pub m_alpha: f64,
    pub m_alpha_pi: f64,
}

impl Context {
    pub fn new(inst: &Instance, opts: &EvalOptions) -> Result<Self, BoundError> {
        let special = hypothesis::Requirements::for_bound(inst.bound_id).has_special_zero();
        Self::with_special(inst, opts, special)
    }

    /// `special = false` treats `z0` as an ordinary root, so `H = P` and `s = 0`.
    pub fn with_special(inst: &Instance, opts: &EvalOptions, special: bool) -> Result<Self, BoundError> {
        let p = inst.poly.expand()?;
        let s = inst.poly.special_multiplicity;
        let (h, s, abs_z0) = if special && s > 0 {
            (inst.poly.plain_part()?, s, inst.poly.special_root.norm())
        } else {
            (p.clone(), 0, 0.0)
        };
        let max_p = certified(circle::circle_max_modulus(&p, 1.0, opts.rel_tol))?;
        let m_alpha = circle::roots_of_unity_max(&p, inst.alpha)?.value;
        let m_alpha_pi = circle::roots_of_unity_max(&p, inst.alpha + PI)?.value;
        Ok(Self {
            n: p.degree(),
            h,
            s,
            abs_z0,
            k: inst.k,
            max_p,
            m_alpha,
            m_alpha_pi,
            p,
        })
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `M_a^2 + M_{a+pi}^2`.
    pub fn node_sq_sum(&self) -> f64 {
        self.m_alpha * self.m_alpha + self.m_alpha_pi * self.m_alpha_pi
    }

    /// `|c_0|` of `H`.
    pub fn h_c0(&self) -> f64 {
        self.h.coeffs()[0].norm()
    }

    /// `|c_{n-s}|` of `H`.
    pub fn h_lead(&self) -> f64 {
        self.h.leading().norm()
    }

    /// `k^{n-s} |c_{n-s}|`.
    pub fn h_lead_scaled(&self) -> f64 {
        self.k.powi((self.n - self.s) as i32) * self.h_lead()
    }

    /// `s` as a float, and `0` when the exceptional zero is vacuous.
    pub fn sf(&self) -> f64 {
        self.s as f64
    }

    pub fn max_value(&self) -> f64 {
        self.max_p.value()
    }
}

/// Accepts an enclosure that stalled short of its tolerance: it is still a
/// valid enclosure, only wider.
pub(crate) fn certified(result: Result<CircleExtremum, CircleError>) -> Result<CircleExtremum, BoundError> {
    match result {
        Ok(e) => Ok(e),
        Err(CircleError::ToleranceNotMet { best }) => Ok(best),
        Err(e) => Err(e.into()),
    }
}

pub(crate) fn grid_angles(grid: usize) -> impl Iterator<Item = f64> {
    (0..grid).map(move |j| j as f64 * TAU / grid as f64)
}

/// `rhs(z) = constant + factor * sqrt(brace_const + brace_slope * |P(z)|^2)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PointwiseForm {
    pub constant: f64,
    pub factor: f64,
    pub brace_const: f64,
    pub brace_slope: f64,
}

impl PointwiseForm {
    pub fn brace(&self, p_sq: f64) -> f64 {
        self.brace_const + self.brace_slope * p_sq
    }

    pub fn value(&self, angle: f64, p_sq: f64) -> Result<f64, BoundError> {
        let brace = self.brace(p_sq);
        if brace < 0.0 || brace.is_nan() {
            return Err(BoundError::BraceNegative { angle, value: brace });
        }
        Ok(self.constant + self.factor * brace.sqrt())
    }
}

fn tolerance(opts: &EvalOptions, rhs: &Rhs) -> f64 {
    opts.tol_factor * (1.0 + rhs.scale())
}

fn ratio_of(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num <= 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Upper bound `|L(z)| <= form(z)`, where `L` is the polynomial on the left.
pub(crate) fn upper_with_form(
    check: CheckId,
    ctx: &Context,
    lhs_poly: &DensePolynomial,
    form: PointwiseForm,
    pointwise_rhs: bool,
    hypothesis: HypothesisReport,
    opts: &EvalOptions,
) -> Result<BoundEvaluation, BoundError> {
    let lhs_ext = certified(circle::circle_max_modulus(lhs_poly, 1.0, opts.rel_tol))?;
    let direction = Direction::Upper;
    if pointwise_rhs && opts.mode == Mode::Pointwise {
        let mut points = Vec::with_capacity(opts.grid + 1);
        for angle in grid_angles(opts.grid).chain(std::iter::once(lhs_ext.witness_angle)) {
            let z = Complex64::from_polar(1.0, angle);
            let p_sq = ctx.p.evaluate(z).norm_sqr();
            let rhs = form.value(angle, p_sq)?;
            points.push(PointSample {
                at: angle,
                lhs: lhs_poly.evaluate(z).norm(),
                rhs,
            });
        }
        let rhs = Rhs::Pointwise(points);
        let Rhs::Pointwise(points) = &rhs else { unreachable!() };
        let (mut margin, mut ratio, mut witness) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for pt in points {
            let m = pt.rhs - pt.lhs;
            if m < margin {
                margin = m;
                witness = pt.at;
            }
            ratio = ratio.max(ratio_of(pt.lhs, pt.rhs));
        }
        let tolerance = tolerance(opts, &rhs);
        let outcome = if margin < -tolerance { Outcome::Violated } else { Outcome::Holds };
        return Ok(BoundEvaluation {
            check,
            mode: Mode::Pointwise,
            direction,
            lhs: Lhs::Extremum(lhs_ext),
            rhs,
            margin,
            tolerance,
            ratio,
            witness_angle: witness,
            hypothesis,
            outcome,
        });
    }

    let angle = lhs_ext.witness_angle;
    let p_sq = ctx.p.evaluate(Complex64::from_polar(1.0, angle)).norm_sqr();
    let value = form.value(angle, p_sq)?;
    let rhs = Rhs::Uniform(value);
    let margin = value - lhs_ext.hi;
    let tolerance = tolerance(opts, &rhs);
    let outcome = if margin >= -tolerance {
        Outcome::Holds
    } else if pointwise_rhs {
        Outcome::UniformExceeded
    } else {
        Outcome::Violated
    };
    Ok(BoundEvaluation {
        check,
        mode: if pointwise_rhs { Mode::Uniform } else { opts.mode },
        direction,
        ratio: ratio_of(lhs_ext.lo, value),
        lhs: Lhs::Extremum(lhs_ext),
        rhs,
        margin,
        tolerance,
        witness_angle: angle,
        hypothesis,
        outcome,
    })
}

/// Lower bound `lhs >= rhs` for a single certified extremum and a single value.
pub(crate) fn lower_uniform(
    check: CheckId,
    lhs_ext: CircleExtremum,
    rhs_value: f64,
    hypothesis: HypothesisReport,
    opts: &EvalOptions,
) -> BoundEvaluation {
    let rhs = Rhs::Uniform(rhs_value);
    let margin = lhs_ext.lo - rhs_value;
    let tolerance = tolerance(opts, &rhs);
    BoundEvaluation {
        check,
        mode: opts.mode,
        direction: Direction::Lower,
        ratio: ratio_of(rhs_value, lhs_ext.lo),
        witness_angle: lhs_ext.witness_angle,
        lhs: Lhs::Extremum(lhs_ext),
        rhs,
        margin,
        tolerance,
        hypothesis,
        outcome: if margin < -tolerance { Outcome::Violated } else { Outcome::Holds },
    }
}

/// Pointwise check built from explicit samples (used by the lemmas).
pub(crate) fn from_samples(
    check: CheckId,
    direction: Direction,
    lhs: Lhs,
    points: Vec<PointSample>,
    hypothesis: HypothesisReport,
    opts: &EvalOptions,
) -> BoundEvaluation {
    let (mut margin, mut ratio, mut witness) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for pt in &points {
        let (m, r) = match direction {
            Direction::Upper => (pt.rhs - pt.lhs, ratio_of(pt.lhs, pt.rhs)),
            Direction::Lower => (pt.lhs - pt.rhs, ratio_of(pt.rhs, pt.lhs)),
        };
        if m < margin {
            margin = m;
            witness = pt.at;
        }
        ratio = ratio.max(r);
    }
    let rhs = Rhs::Pointwise(points);
    let tolerance = tolerance(opts, &rhs);
    BoundEvaluation {
        check,
        mode: Mode::Pointwise,
        direction,
        lhs,
        rhs,
        margin,
        tolerance,
        ratio,
        witness_angle: witness,
        hypothesis,
        outcome: if margin < -tolerance { Outcome::Violated } else { Outcome::Holds },
    }
}
