//! State parameters and the Gaussian coefficients derived from them.
//!
//! A squeezed thermal state is fixed by its mean thermal photon number `n_c`
//! and squeezing parameter `r`. Photon addition or subtraction of order `m`
//! is carried alongside. Everything downstream is expressed through five
//! real coefficients:
//!
//! ```text
//! A = n_c² + (2n_c+1) cosh²r      B = n_c (n_c+1)
//! C = n_c² − (2n_c+1) sinh²r      D = n_c cosh 2r + cosh²r
//! E = [(2n_c+1) cosh 2r − 1] / 2
//! ```
//!
//! `C[e^{2f}] − 2B e^f + A` is the inverse square of `⟨e^{f a†a}⟩`, and
//! `D`, `E` enter the generating functions of the normalization constants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which photon operation is applied `m` times to the squeezed thermal state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `a†^m ρ a^m`
    #[serde(rename = "add")]
    Added,
    /// `a^m ρ a†^m`
    #[serde(rename = "sub")]
    Subtracted,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Added => "add",
            Variant::Subtracted => "sub",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "add" | "added" | "a" => Ok(Variant::Added),
            "sub" | "subtracted" | "s" => Ok(Variant::Subtracted),
            other => Err(Error::Domain(format!("unknown variant {other:?}"))),
        }
    }
}

/// Physical parameters of a photon-added or photon-subtracted squeezed
/// thermal state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    /// Mean thermal photon number.
    pub n_c: f64,
    /// Squeezing parameter.
    pub r: f64,
    /// Number of photons added or subtracted.
    pub m: u32,
    pub variant: Variant,
}

impl StateParams {
    /// Validated constructor.
    pub fn new(n_c: f64, r: f64, m: u32, variant: Variant) -> Result<Self> {
        let params = StateParams { n_c, r, m, variant };
        params.check()?;
        Ok(params)
    }

    /// The plain squeezed thermal state (`m = 0`).
    pub fn squeezed_thermal(n_c: f64, r: f64) -> Result<Self> {
        Self::new(n_c, r, 0, Variant::Added)
    }

    pub fn with_m(self, m: u32) -> Self {
        StateParams { m, ..self }
    }

    pub fn with_variant(self, variant: Variant) -> Self {
        StateParams { variant, ..self }
    }

    /// Hard domain check; the zero-norm warning of [`validate_params`] is
    /// not an error here.
    pub fn check(&self) -> Result<()> {
        if !self.n_c.is_finite() {
            return Err(Error::Domain(format!("n_c must be finite, got {}", self.n_c)));
        }
        if self.n_c < 0.0 {
            return Err(Error::Domain(format!(
                "mean thermal photon number must be non-negative, got {}",
                self.n_c
            )));
        }
        if !self.r.is_finite() {
            return Err(Error::Domain(format!("r must be finite, got {}", self.r)));
        }
        Ok(())
    }

    /// Photon subtraction from the bare vacuum (`n_c = 0`, `r = 0`, `m ≥ 1`).
    pub fn is_zero_norm(&self) -> bool {
        self.variant == Variant::Subtracted && self.m >= 1 && self.n_c == 0.0 && self.r == 0.0
    }
}

/// The derived coefficients `A, B, C, D, E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl CoefficientSet {
    /// Evaluates the coefficients for `(n_c, r)`.
    ///
    /// Only `sinh²r` is computed transcendentally; `cosh²r = 1 + sinh²r` and
    /// `cosh 2r = 1 + 2 sinh²r`, which keeps `A − 2B + C = 1` and `D − E = 1`
    /// free of cancellation between separately rounded hyperbolics.
    pub fn from_nc_r(n_c: f64, r: f64) -> Self {
        let sh2 = r.sinh().powi(2);
        let ch2 = 1.0 + sh2;
        let ch_2r = 1.0 + 2.0 * sh2;
        let g = 2.0 * n_c + 1.0;
        CoefficientSet {
            a: n_c * n_c + g * ch2,
            b: n_c * (n_c + 1.0),
            c: n_c * n_c - g * sh2,
            d: n_c * ch_2r + ch2,
            e: 0.5 * (g * ch_2r - 1.0),
        }
    }

    /// `C e^{2f} − 2B e^f + A`, the quantity whose inverse square root is
    /// `⟨e^{f a†a}⟩`.
    pub fn exp_number_quadratic(&self, f: f64) -> f64 {
        let ef = f.exp();
        self.c * ef * ef - 2.0 * self.b * ef + self.a
    }
}

/// Derived coefficients for a validated parameter set.
pub fn coefficients(params: &StateParams) -> Result<CoefficientSet> {
    params.check()?;
    Ok(CoefficientSet::from_nc_r(params.n_c, params.r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub severity: Severity,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// No errors (warnings allowed).
    pub fn is_valid(&self) -> bool {
        !self.violations.iter().any(|v| v.severity == Severity::Error)
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity == Severity::Warning)
    }

    fn push(&mut self, severity: Severity, message: impl Into<String>) {
        self.violations.push(Violation { severity, message: message.into() });
    }
}

/// Lists every problem with `params` instead of stopping at the first.
pub fn validate_params(params: &StateParams) -> ValidationReport {
    let mut report = ValidationReport::default();
    if params.n_c.is_nan() || params.n_c.is_infinite() {
        report.push(Severity::Error, format!("mean thermal photon number is not finite: {}", params.n_c));
    } else if params.n_c < 0.0 {
        report.push(Severity::Error, format!("negative mean photon number: {}", params.n_c));
    }
    if !params.r.is_finite() {
        report.push(Severity::Error, format!("squeezing parameter is not finite: {}", params.r));
    }
    if params.is_zero_norm() {
        report.push(
            Severity::Warning,
            format!(
                "zero-norm state: subtracting {} photon(s) from the vacuum (n_c = 0, r = 0)",
                params.m
            ),
        );
    }
    report
}
