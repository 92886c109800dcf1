//! Zero-location hypotheses, checked on the factored form.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{BoundError, BoundId, Instance, LemmaId};
use crate::poly::PolarRegime;

/// Relative slack on root-modulus comparisons, so that roots built as
/// `e^{it}` still count as lying on `|z| = 1`.
pub const ROOT_SLACK: f64 = 1e-12;

/// Minimum distance between `|z0|` and the boundary it must avoid.
pub const DEGENERATE_GAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub clauses: Vec<Clause>,
}

impl HypothesisReport {
    pub fn ok(&self) -> bool {
        self.clauses.iter().all(|c| c.ok)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.ok)
    }

    fn push(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.clauses.push(Clause {
            name: name.to_string(),
            ok,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed: Vec<_> = self.failures().map(|c| format!("{} ({})", c.name, c.detail)).collect();
        if failed.is_empty() {
            f.write_str("all clauses hold")
        } else {
            write!(f, "{}", failed.join("; "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum KRegime {
    /// The statement has no `k`; it must be `1`.
    Unit,
    AtMostOne,
    AtLeastOne,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RootSide {
    Anywhere,
    /// `|r| >= k`.
    Outside,
    /// `|r| <= k`.
    Inside,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum SpecialZero {
    /// No exceptional zero: `z0` is an ordinary root.
    None,
    /// `|z0| < 1`.
    InsideUnit,
    /// `|z0| < k`.
    InsideK,
    /// `z0 = 0`.
    Origin,
    /// `|z0| > 1`.
    OutsideUnit,
    /// `|z0| > k`.
    OutsideK,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Requirements {
    pub k: KRegime,
    pub roots: RootSide,
    pub special: SpecialZero,
    pub polar: Option<PolarRegime>,
    pub c0_nonzero: bool,
}

impl Requirements {
    pub fn for_bound(id: BoundId) -> Self {
        use BoundId::*;
        let base = Self {
            k: KRegime::Unit,
            roots: RootSide::Anywhere,
            special: SpecialZero::None,
            polar: None,
            c0_nonzero: false,
        };
        match id {
            Bernstein | FrappierNodes | RotatedNodes | RotatedNodesLower => base,
            ErdosLax | ErdosLaxNodes => Self {
                roots: RootSide::Outside,
                ..base
            },
            SpecialZeroDerivative => Self {
                k: KRegime::AtLeastOne,
                roots: RootSide::Outside,
                special: SpecialZero::InsideUnit,
                ..base
            },
            PolarUnitDisk => Self {
                roots: RootSide::Outside,
                polar: Some(PolarRegime::Outer),
                ..base
            },
            PolarZeroFree => Self {
                k: KRegime::AtMostOne,
                roots: RootSide::Outside,
                polar: Some(PolarRegime::Outer),
                ..base
            },
            PolarZerosWithinLarge => Self {
                k: KRegime::AtLeastOne,
                roots: RootSide::Inside,
                polar: Some(PolarRegime::Inner),
                c0_nonzero: true,
                ..base
            },
            PolarZerosWithinSmall => Self {
                k: KRegime::AtMostOne,
                roots: RootSide::Inside,
                polar: Some(PolarRegime::Inner),
                c0_nonzero: true,
                ..base
            },
            PolarSpecialInside => Self {
                k: KRegime::AtMostOne,
                roots: RootSide::Outside,
                special: SpecialZero::InsideK,
                polar: Some(PolarRegime::Outer),
                ..base
            },
            PolarSpecialOrigin => Self {
                k: KRegime::AtMostOne,
                roots: RootSide::Outside,
                special: SpecialZero::Origin,
                polar: Some(PolarRegime::Outer),
                ..base
            },
            DerivativeSpecialInside => Self {
                k: KRegime::AtMostOne,
                roots: RootSide::Outside,
                special: SpecialZero::InsideK,
                ..base
            },
            PolarSpecialOutside => Self {
                k: KRegime::AtMostOne,
                roots: RootSide::Inside,
                special: SpecialZero::OutsideUnit,
                polar: Some(PolarRegime::Inner),
                c0_nonzero: true,
            },
            DerivativeLowerOutside => Self {
                k: KRegime::AtMostOne,
                roots: RootSide::Inside,
                special: SpecialZero::OutsideUnit,
                polar: None,
                c0_nonzero: true,
            },
            PolarSpecialOutsideLarge => Self {
                k: KRegime::AtLeastOne,
                roots: RootSide::Inside,
                special: SpecialZero::OutsideK,
                polar: Some(PolarRegime::Inner),
                c0_nonzero: true,
            },
            DerivativeLowerLarge => Self {
                k: KRegime::AtLeastOne,
                roots: RootSide::Inside,
                special: SpecialZero::OutsideK,
                polar: None,
                c0_nonzero: true,
            },
        }
    }

    pub fn for_lemma(id: LemmaId) -> Self {
        match id {
            LemmaId::L1 | LemmaId::L2 | LemmaId::L3 => Self::for_bound(BoundId::Bernstein),
            LemmaId::L4 => Self {
                k: KRegime::AtLeastOne,
                roots: RootSide::Outside,
                special: SpecialZero::None,
                polar: None,
                c0_nonzero: false,
            },
            LemmaId::L5 => Self {
                polar: Some(PolarRegime::Outer),
                ..Self::for_bound(BoundId::SpecialZeroDerivative)
            },
        }
    }

    /// Whether `s < n` is part of the statement.
    pub fn has_special_zero(&self) -> bool {
        self.special != SpecialZero::None
    }
}

/// Evaluates every hypothesis clause of `inst.bound_id`.
pub fn check_hypothesis(inst: &Instance) -> HypothesisReport {
    check_requirements(inst, &Requirements::for_bound(inst.bound_id))
}

pub(crate) fn check_requirements(inst: &Instance, req: &Requirements) -> HypothesisReport {
    let mut report = HypothesisReport::default();
    let poly = &inst.poly;
    let n = poly.degree();
    let s = poly.special_multiplicity;
    let k = inst.k;

    report.push("degree", n >= 1, format!("n = {n}"));
    report.push(
        "nonzero_scale",
        poly.leading_scale.norm() > 0.0 && poly.leading_scale.norm().is_finite(),
        format!("|scale| = {}", poly.leading_scale.norm()),
    );

    let k_ok = k.is_finite()
        && k > 0.0
        && match req.k {
            KRegime::Unit => (k - 1.0).abs() <= ROOT_SLACK,
            KRegime::AtMostOne => k <= 1.0,
            KRegime::AtLeastOne => k >= 1.0,
        };
    let k_rule = match req.k {
        KRegime::Unit => "k = 1",
        KRegime::AtMostOne => "0 < k <= 1",
        KRegime::AtLeastOne => "k >= 1",
    };
    report.push("k_regime", k_ok, format!("{k_rule}, k = {k}"));

    if req.has_special_zero() {
        report.push("multiplicity", s < n, format!("s = {s}, n = {n}"));
    }

    // roots subject to the disk constraint: the exceptional zero is exempt
    let constrained: Vec<_> = if req.has_special_zero() {
        poly.plain_roots.clone()
    } else {
        poly.all_roots()
    };
    match req.roots {
        RootSide::Anywhere => {}
        RootSide::Outside => {
            let worst = constrained.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min);
            report.push(
                "roots_outside",
                worst >= k * (1.0 - ROOT_SLACK),
                format!("min |root| = {worst}, need >= {k}"),
            );
        }
        RootSide::Inside => {
            let worst = constrained.iter().map(|r| r.norm()).fold(0.0, f64::max);
            report.push(
                "roots_inside",
                worst <= k * (1.0 + ROOT_SLACK),
                format!("max |root| = {worst}, need <= {k}"),
            );
        }
    }

    let abs_z0 = poly.special_root.norm();
    if req.has_special_zero() {
        let (ok, rule) = if s == 0 {
            (true, "vacuous (s = 0)".to_string())
        } else {
            match req.special {
                SpecialZero::None => unreachable!(),
                SpecialZero::InsideUnit => (1.0 - abs_z0 >= DEGENERATE_GAP, "|z0| < 1".into()),
                SpecialZero::InsideK => (k - abs_z0 >= DEGENERATE_GAP, format!("|z0| < k = {k}")),
                SpecialZero::Origin => (abs_z0 == 0.0, "z0 = 0".into()),
                SpecialZero::OutsideUnit => (abs_z0 - 1.0 >= DEGENERATE_GAP, "|z0| > 1".into()),
                SpecialZero::OutsideK => (abs_z0 - k >= DEGENERATE_GAP, format!("|z0| > k = {k}")),
            }
        };
        report.push("special_zero", ok, format!("{rule}, |z0| = {abs_z0}"));
    }

    if req.c0_nonzero {
        let zero_root = poly.all_roots().iter().any(|r| r.norm() == 0.0);
        report.push("c0_nonzero", !zero_root, if zero_root { "P(0) = 0" } else { "P(0) != 0" });
    }

    if let Some(regime) = req.polar {
        let (ok, detail) = match inst.polar {
            None => (false, format!("missing, need {regime:?}")),
            Some(b) => {
                let m = b.modulus();
                let modulus_ok = match regime {
                    PolarRegime::Outer => m >= 1.0,
                    PolarRegime::Inner => m <= 1.0,
                };
                (
                    b.regime() == regime && modulus_ok,
                    format!("{:?} with modulus {m}, need {regime:?}", b.regime()),
                )
            }
        };
        report.push("polar_regime", ok, detail);
    }
    report
}

/// Maps a failed report to the most specific error.
pub(crate) fn require(inst: &Instance, report: &HypothesisReport) -> Result<(), BoundError> {
    if report.ok() {
        return Ok(());
    }
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    if failed == ["polar_regime"] {
        let detail = report.clause("polar_regime").map(|c| c.detail.clone()).unwrap_or_default();
        return Err(BoundError::RegimeMismatch {
            bound: inst.bound_id,
            detail,
        });
    }
    if inst.bound_id == BoundId::SpecialZeroDerivative && failed == ["special_zero"] {
        return Err(BoundError::DegenerateZ0 {
            abs_z0: inst.poly.special_root.norm(),
        });
    }
    Err(BoundError::HypothesisViolated(report.clone()))
}
