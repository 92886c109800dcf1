//! Dense and factored complex polynomials.
//!
//! [`DensePolynomial`] stores coefficients in increasing powers and is what
//! every numerical routine consumes. [`FactoredPolynomial`] carries the root
//! data that zero-location hypotheses are stated in terms of, including one
//! distinguished zero `z0` of multiplicity `s`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative threshold below which a leading coefficient is treated as zero.
pub const TRIM_REL: f64 = 1e-12;

/// Largest total degree accepted by [`FactoredPolynomial::expand`].
pub const MAX_EXPAND_DEGREE: usize = 64;

/// Remainder tolerance for one synthetic division step, relative to the
/// largest coefficient of the dividend.
pub const DEFLATE_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("total degree {degree} exceeds the expansion cap of {max}")]
    DegreeOverflow { degree: usize, max: usize },
    #[error("{root} is not a root of multiplicity {multiplicity} (remainder {remainder:e} at step {step})")]
    NotARoot {
        root: Complex64,
        multiplicity: usize,
        step: usize,
        remainder: f64,
    },
    #[error("polar parameter {value} has modulus {modulus}, outside the {regime:?} regime")]
    RegimeMismatch {
        value: Complex64,
        modulus: f64,
        regime: PolarRegime,
    },
}

/// A polynomial `sum c_v z^v` with `c_n != 0` (or the zero polynomial `[0]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct DensePolynomial {
    coeffs: Vec<Complex64>,
}

impl From<Vec<Complex64>> for DensePolynomial {
    fn from(coeffs: Vec<Complex64>) -> Self {
        Self::new(coeffs)
    }
}

impl From<DensePolynomial> for Vec<Complex64> {
    fn from(p: DensePolynomial) -> Self {
        p.coeffs
    }
}

impl DensePolynomial {
    /// Builds a polynomial from coefficients in increasing powers, trimming
    /// leading coefficients smaller than `TRIM_REL` times the largest one.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let cutoff = TRIM_REL * scale;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() < cutoff || c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0)],
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex64::new(0.0, 0.0)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in a single Horner pass.
    pub fn evaluate_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut value = zero;
        let mut slope = zero;
        for &c in self.coeffs.iter().rev() {
            slope = slope * z + value;
            value = value * z + c;
        }
        (value, slope)
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(v, &c)| c * v as f64)
            .collect();
        Self::new(coeffs)
    }

    /// `Q(z) = z^n conj(P(1/conj(z)))`: conjugated coefficients in reverse order.
    pub fn conjugate_reciprocal(&self) -> Self {
        Self::new(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    /// Conjugate-reciprocal taken with respect to an explicit degree `n`,
    /// which matters when `c_0 = 0` and the dense form has already lost the
    /// leading zeros of `Q`.
    pub fn conjugate_reciprocal_deg(&self, n: usize) -> Self {
        let mut padded = self.coeffs.clone();
        padded.resize(n + 1, Complex64::new(0.0, 0.0));
        Self::new(padded.into_iter().rev().map(|c| c.conj()).collect())
    }

    /// Polar derivative `n P(z) + (beta - z) P'(z)`.
    ///
    /// The `z^n` terms cancel identically; the residual is checked against
    /// `TRIM_REL` and then dropped.
    pub fn polar_derivative(&self, beta: Complex64) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::zero();
        }
        let nf = n as f64;
        let c = &self.coeffs;
        let mut out = Vec::with_capacity(n + 1);
        for v in 0..=n {
            let mut term = c[v] * nf;
            if v < n {
                term += beta * c[v + 1] * (v + 1) as f64;
            }
            term -= c[v] * v as f64;
            out.push(term);
        }
        let residual = out[n].norm();
        debug_assert!(
            residual <= TRIM_REL * self.max_coeff_norm() * nf,
            "z^n term of the polar derivative did not cancel: {residual:e}"
        );
        out.pop();
        Self::new(out)
    }

    /// Polynomial product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }

    /// Divides by `(z - z0)` `s` times. Each step's remainder must stay
    /// below `DEFLATE_REL_TOL` times the dividend's largest coefficient.
    pub fn deflate(&self, z0: Complex64, s: usize) -> Result<Self, PolyError> {
        let mut current = self.coeffs.clone();
        for step in 0..s {
            if current.len() < 2 {
                return Err(PolyError::NotARoot {
                    root: z0,
                    multiplicity: s,
                    step,
                    remainder: current[0].norm(),
                });
            }
            let scale = current.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let (quotient, remainder) = synthetic_division(&current, z0);
            if remainder.norm() > DEFLATE_REL_TOL * scale {
                return Err(PolyError::NotARoot {
                    root: z0,
                    multiplicity: s,
                    step,
                    remainder: remainder.norm(),
                });
            }
            current = quotient;
        }
        Ok(Self::new(current))
    }
}

/// Returns the quotient and remainder of `p / (z - z0)`.
fn synthetic_division(coeffs: &[Complex64], z0: Complex64) -> (Vec<Complex64>, Complex64) {
    let n = coeffs.len() - 1;
    let mut quotient = vec![Complex64::new(0.0, 0.0); n];
    let mut carry = coeffs[n];
    for v in (0..n).rev() {
        quotient[v] = carry;
        carry = coeffs[v] + carry * z0;
    }
    (quotient, carry)
}

/// Product of `(z - r)` over `roots`, by repeated convolution.
fn monic_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = Vec::with_capacity(roots.len() + 1);
    coeffs.push(Complex64::new(1.0, 0.0));
    for &r in roots {
        coeffs.push(Complex64::new(0.0, 0.0));
        for v in (1..coeffs.len()).rev() {
            coeffs[v] = coeffs[v - 1] - r * coeffs[v];
        }
        coeffs[0] = -r * coeffs[0];
    }
    coeffs
}

/// `scale * (z - z0)^s * prod (z - r_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactoredPolynomial {
    pub leading_scale: Complex64,
    pub plain_roots: Vec<Complex64>,
    pub special_root: Complex64,
    pub special_multiplicity: usize,
}

impl FactoredPolynomial {
    pub fn new(
        leading_scale: Complex64,
        plain_roots: Vec<Complex64>,
        special_root: Complex64,
        special_multiplicity: usize,
    ) -> Self {
        Self {
            leading_scale,
            plain_roots,
            special_root,
            special_multiplicity,
        }
    }

    /// A polynomial with no distinguished zero.
    pub fn from_roots(leading_scale: Complex64, roots: Vec<Complex64>) -> Self {
        Self::new(leading_scale, roots, Complex64::new(0.0, 0.0), 0)
    }

    pub fn degree(&self) -> usize {
        self.special_multiplicity + self.plain_roots.len()
    }

    /// Every zero with multiplicity, the special zero repeated `s` times.
    pub fn all_roots(&self) -> Vec<Complex64> {
        let mut roots = Vec::with_capacity(self.degree());
        roots.extend(std::iter::repeat_n(self.special_root, self.special_multiplicity));
        roots.extend_from_slice(&self.plain_roots);
        roots
    }

    pub fn expand(&self) -> Result<DensePolynomial, PolyError> {
        let degree = self.degree();
        if degree > MAX_EXPAND_DEGREE {
            return Err(PolyError::DegreeOverflow {
                degree,
                max: MAX_EXPAND_DEGREE,
            });
        }
        let coeffs = monic_from_roots(&self.all_roots());
        Ok(DensePolynomial::new(
            coeffs.into_iter().map(|c| c * self.leading_scale).collect(),
        ))
    }

    /// The factor `H(z) = scale * prod (z - r_i)` left after removing `(z - z0)^s`.
    pub fn plain_part(&self) -> Result<DensePolynomial, PolyError> {
        let degree = self.plain_roots.len();
        if degree > MAX_EXPAND_DEGREE {
            return Err(PolyError::DegreeOverflow {
                degree,
                max: MAX_EXPAND_DEGREE,
            });
        }
        let coeffs = monic_from_roots(&self.plain_roots);
        Ok(DensePolynomial::new(
            coeffs.into_iter().map(|c| c * self.leading_scale).collect(),
        ))
    }

    /// Direct product form evaluation, independent of the dense expansion.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let special = (z - self.special_root).powu(self.special_multiplicity as u32);
        self.plain_roots
            .iter()
            .fold(self.leading_scale * special, |acc, &r| acc * (z - r))
    }
}

/// Which side of the unit circle a polar parameter must lie on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PolarRegime {
    /// `|beta| >= 1`.
    Outer,
    /// `|gamma| <= 1`.
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolar")]
pub struct PolarParameter {
    value: Complex64,
    regime: PolarRegime,
}

#[derive(Deserialize)]
struct RawPolar {
    value: Complex64,
    regime: PolarRegime,
}

impl TryFrom<RawPolar> for PolarParameter {
    type Error = PolyError;

    fn try_from(raw: RawPolar) -> Result<Self, Self::Error> {
        Self::new(raw.value, raw.regime)
    }
}

impl PolarParameter {
    pub fn new(value: Complex64, regime: PolarRegime) -> Result<Self, PolyError> {
        let modulus = value.norm();
        let ok = match regime {
            PolarRegime::Outer => modulus >= 1.0,
            PolarRegime::Inner => modulus <= 1.0,
        };
        if ok && modulus.is_finite() {
            Ok(Self { value, regime })
        } else {
            Err(PolyError::RegimeMismatch {
                value,
                modulus,
                regime,
            })
        }
    }

    pub fn outer(value: Complex64) -> Result<Self, PolyError> {
        Self::new(value, PolarRegime::Outer)
    }

    pub fn inner(value: Complex64) -> Result<Self, PolyError> {
        Self::new(value, PolarRegime::Inner)
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn regime(&self) -> PolarRegime {
        self.regime
    }

    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}
