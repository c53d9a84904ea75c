//! Cross-check suite behind the `verify` subcommand.
//!
//! Each check reports its largest deviation against a threshold. The
//! threshold is the check's own tolerance, tightened to the user's `--tol`
//! when that is smaller.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytics::{
    expectation_exp_number, norm_pasts, norm_pssts, pnd_table, NMax, PndEvaluator,
};
use crate::error::{Error, Result};
use crate::legendre::{genfun_closed_form, genfun_partial_sum, legendre_p};
use crate::oracle::{oracle_exp_number, tfd_purification_check, CertifiedOracle, FockOracle};
use crate::state::{CoefficientSet, StateParams, Variant};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 0x5eed_1e6e;

/// The oracle grid: `n_c × r × m × variant`, photon numbers `0..=GRID_N_MAX`.
pub const GRID_NC: [f64; 4] = [0.0, 0.1, 1.0, 3.0];
pub const GRID_R: [f64; 4] = [0.0, 0.2, 0.8, -0.5];
pub const GRID_M_MAX: u32 = 5;
pub const GRID_N_MAX: usize = 40;

pub const PURIFICATION_NC: [f64; 3] = [0.0, 0.5, 2.0];
pub const PURIFICATION_DIM: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Coefficients,
    GenfunNorms,
    GenfunSeries,
    SpecialCases,
    Distribution,
    Parity,
    ExpNumber,
    OracleNorms,
    OraclePnd,
    Exponent,
    Purification,
}

impl CheckKind {
    pub const ALL: [CheckKind; 11] = [
        CheckKind::Coefficients,
        CheckKind::GenfunNorms,
        CheckKind::GenfunSeries,
        CheckKind::SpecialCases,
        CheckKind::Distribution,
        CheckKind::Parity,
        CheckKind::ExpNumber,
        CheckKind::OracleNorms,
        CheckKind::OraclePnd,
        CheckKind::Exponent,
        CheckKind::Purification,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Coefficients => "coefficients",
            CheckKind::GenfunNorms => "genfun-norms",
            CheckKind::GenfunSeries => "genfun-series",
            CheckKind::SpecialCases => "special-cases",
            CheckKind::Distribution => "distribution",
            CheckKind::Parity => "parity",
            CheckKind::ExpNumber => "exp-number",
            CheckKind::OracleNorms => "oracle-norms",
            CheckKind::OraclePnd => "oracle-pnd",
            CheckKind::Exponent => "exponent",
            CheckKind::Purification => "purification",
        }
    }

    /// The check's own tolerance.
    pub fn base_threshold(self) -> f64 {
        match self {
            CheckKind::Coefficients => 1e-12,
            CheckKind::GenfunNorms => 1e-9,
            CheckKind::GenfunSeries => 1e-8,
            CheckKind::SpecialCases => 1e-12,
            CheckKind::Distribution => 1e-9,
            CheckKind::Parity => 1e-14,
            CheckKind::ExpNumber => 1e-9,
            CheckKind::OracleNorms => 1e-8,
            CheckKind::OraclePnd => 1e-9,
            CheckKind::Exponent => 1e-9,
            CheckKind::Purification => 1e-10,
        }
    }

    fn uses_oracle_grid(self) -> bool {
        matches!(self, CheckKind::OracleNorms | CheckKind::OraclePnd | CheckKind::Exponent)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown check {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: CheckKind,
    pub max_deviation: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tol: f64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub tol: f64,
    pub checks: Vec<CheckKind>,
    /// Overrides the purification `n_c` values.
    pub purification_nc: Option<Vec<f64>>,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { tol: DEFAULT_TOL, checks: CheckKind::ALL.to_vec(), purification_nc: None, seed: DEFAULT_SEED }
    }
}

/// Runs the configured checks in order.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    if !(config.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", config.tol)));
    }
    let grid = if config.checks.iter().any(|c| c.uses_oracle_grid()) {
        Some(OracleGrid::measure()?)
    } else {
        None
    };
    let mut checks = Vec::with_capacity(config.checks.len());
    for &kind in &config.checks {
        let threshold = kind.base_threshold().min(config.tol);
        let (max_deviation, passed, detail) = match kind {
            CheckKind::Coefficients => judge(coefficient_identities(1000, config.seed), threshold),
            CheckKind::GenfunNorms => judge(genfun_norms(config.seed)?, threshold),
            CheckKind::GenfunSeries => judge(genfun_series(config.seed)?, threshold),
            CheckKind::SpecialCases => judge(special_cases()?, threshold),
            CheckKind::Distribution => judge(distribution_axioms(200, config.seed)?, threshold),
            CheckKind::Parity => judge(parity()?, threshold),
            CheckKind::ExpNumber => judge(exp_number()?, threshold),
            CheckKind::OracleNorms => judge(grid.as_ref().expect("grid measured").norm_deviation()?, threshold),
            CheckKind::OraclePnd => judge(grid.as_ref().expect("grid measured").pnd_deviation()?, threshold),
            CheckKind::Exponent => {
                let e = grid.as_ref().expect("grid measured").exponent_readings()?;
                let passed = e.paired_deviation < threshold && e.literal_failures > 0;
                let detail = format!(
                    "(m+n)/2 reading max |diff| {:e}; literal m+n/2 reading fails at {} of {} points (max |diff| {:e}; {} table entries undefined for C<0)",
                    e.paired_deviation, e.literal_failures, e.points, e.literal_deviation, e.literal_undefined
                );
                (e.paired_deviation, passed, detail)
            }
            CheckKind::Purification => {
                let ncs = config.purification_nc.clone().unwrap_or_else(|| PURIFICATION_NC.to_vec());
                judge(purification(&ncs)?, threshold)
            }
        };
        checks.push(CheckResult { check: kind, max_deviation, threshold, passed, detail });
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { tol: config.tol, passed, checks })
}

/// A measured deviation and what it covers.
pub struct Measured {
    pub deviation: f64,
    pub detail: String,
}

fn judge(m: Measured, threshold: f64) -> (f64, bool, String) {
    // NaN never passes
    (m.deviation, m.deviation < threshold, m.detail)
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Residuals of `A − 2B + C = 1`, `D − E = 1`, `D + E = A − C` and
/// `B² − AC = [(2n_c+1) sinh 2r / 2]²`, each relative to the magnitude of
/// its terms.
pub fn coefficient_residual(n_c: f64, r: f64) -> f64 {
    let c = CoefficientSet::from_nc_r(n_c, r);
    let rel = |lhs: f64, rhs: f64, scale: f64| (lhs - rhs).abs() / scale.max(f64::MIN_POSITIVE);
    let disc = (0.5 * (2.0 * n_c + 1.0) * (2.0 * r).sinh()).powi(2);
    let bb = c.b * c.b;
    let ac = c.a * c.c;
    [
        rel(c.a - 2.0 * c.b + c.c, 1.0, c.a.abs().max(2.0 * c.b).max(c.c.abs()).max(1.0)),
        rel(c.d - c.e, 1.0, c.d.abs().max(c.e.abs()).max(1.0)),
        rel(c.d + c.e, c.a - c.c, c.a.abs().max(c.c.abs()).max(c.d.abs())),
        rel(bb - ac, disc, bb.max(ac.abs()).max(disc)),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

pub fn coefficient_identities(draws: usize, seed: u64) -> Measured {
    let mut rng = rng(seed, 1);
    let worst = (0..draws)
        .map(|_| coefficient_residual(rng.gen_range(0.0..=10.0), rng.gen_range(-2.0..=2.0)))
        .fold(0.0, f64::max);
    Measured { deviation: worst, detail: format!("{draws} draws, n_c in [0,10], r in [-2,2]") }
}

/// `[τ^k] (1 − 2pτ + qτ²)^{−1/2}` by a trapezoidal Cauchy integral on a
/// circle inside the radius of convergence.
///
/// Writes `1 − 2pτ + qτ² = (1 − λ₁τ)(1 − λ₂τ)` with `λ = p ± √(p² − q)`;
/// each factor has positive real part inside the disc `|τ| < 1/max|λ|`, so
/// the product of principal square roots is analytic there.
pub fn contour_coefficient(p: f64, q: f64, k: usize) -> f64 {
    let disc = Complex64::new(p * p - q, 0.0).sqrt();
    let l1 = Complex64::new(p, 0.0) + disc;
    let l2 = Complex64::new(p, 0.0) - disc;
    let lmax = l1.norm().max(l2.norm());
    if lmax == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let radius = (k as f64 + 1.0) / (k as f64 + 2.0) / lmax;
    const POINTS: usize = 4096;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..POINTS {
        let phase = std::f64::consts::TAU * j as f64 / POINTS as f64;
        let tau = Complex64::from_polar(radius, phase);
        let g = ((Complex64::new(1.0, 0.0) - l1 * tau).sqrt() * (Complex64::new(1.0, 0.0) - l2 * tau).sqrt()).inv();
        acc += g * Complex64::from_polar(1.0, -(k as f64) * phase);
    }
    acc.re / POINTS as f64 / radius.powi(k as i32)
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

/// `m!·[τ^m]` of the generating functions of both normalization constants
/// against the closed forms, `m ≤ 30`.
pub fn genfun_norms(seed: u64) -> Result<Measured> {
    let mut rng = rng(seed, 2);
    let mut samples: Vec<(f64, f64)> = vec![(0.0, 0.3), (1.0, 0.5), (2.0, 0.0), (3.0, -0.8)];
    samples.extend((0..16).map(|_| (rng.gen_range(0.0..=5.0), rng.gen_range(-1.5..=1.5))));
    let mut worst = 0.0f64;
    for &(n_c, r) in &samples {
        let c = CoefficientSet::from_nc_r(n_c, r);
        for m in 0..=30u32 {
            let params = StateParams::new(n_c, r, m, Variant::Added)?;
            let extracted = factorial(m as usize) * contour_coefficient(c.d, c.a, m as usize);
            let closed = norm_pasts(&params)?;
            worst = worst.max(((extracted - closed) / closed).abs());
            if params.with_variant(Variant::Subtracted).is_zero_norm() {
                continue;
            }
            let extracted = factorial(m as usize) * contour_coefficient(c.e, c.c, m as usize);
            let closed = norm_pssts(&params)?;
            worst = worst.max(((extracted - closed) / closed).abs());
        }
    }
    Ok(Measured {
        deviation: worst,
        detail: format!("{} parameter points, m in 0..=30, both generating functions", samples.len()),
    })
}

/// Partial sums of the Legendre generating function at `K = 200`.
pub fn genfun_series(seed: u64) -> Result<Measured> {
    let mut rng = rng(seed, 3);
    let mut worst = 0.0f64;
    let draws = 500;
    for _ in 0..draws {
        let p: f64 = rng.gen_range(-1.0..=1.0);
        let q: f64 = rng.gen_range(-1.0..=1.0);
        // keeps |t| at most 0.6 of the convergence radius 1/max|λ|
        let lmax = p.abs() + (p * p + q.abs()).sqrt();
        let t = rng.gen_range(-0.6..=0.6) / lmax.max(1.0);
        let exact = genfun_closed_form(p, q, t)?;
        worst = worst.max((genfun_partial_sum(p, q, t, 200)? - exact).abs());
    }
    Ok(Measured { deviation: worst, detail: format!("{draws} draws, K = 200") })
}

/// `C_{a,0} = 1` and the `r = 0` reductions `m!(n_c+1)^m`, `m!·n_c^m`.
pub fn special_cases() -> Result<Measured> {
    let mut worst = 0.0f64;
    for n_c in [0.1, 1.0, 3.0] {
        worst = worst.max((norm_pasts(&StateParams::new(n_c, 0.7, 0, Variant::Added)?)? - 1.0).abs());
        for m in 0..=10u32 {
            let p = StateParams::new(n_c, 0.0, m, Variant::Added)?;
            let fact = factorial(m as usize);
            let want = fact * (n_c + 1.0).powi(m as i32);
            worst = worst.max(((norm_pasts(&p)? - want) / want).abs());
            let want = fact * n_c.powi(m as i32);
            worst = worst.max(((norm_pssts(&p)? - want) / want).abs());
        }
    }
    Ok(Measured { deviation: worst, detail: "n_c in {0.1, 1, 3}, m <= 10".into() })
}

/// Normalization, nonnegativity and support over random parameter sets.
pub fn distribution_axioms(draws: usize, seed: u64) -> Result<Measured> {
    let mut rng = rng(seed, 4);
    let mut worst = 0.0f64;
    let mut min_raw = f64::INFINITY;
    let mut support_violations = 0usize;
    let mut done = 0usize;
    while done < draws {
        let variant = if rng.gen_bool(0.5) { Variant::Added } else { Variant::Subtracted };
        let params = StateParams::new(rng.gen_range(0.0..=5.0), rng.gen_range(-1.5..=1.5), rng.gen_range(0..=6), variant)?;
        if params.is_zero_norm() {
            continue;
        }
        let d = pnd_table(&params, NMax::Auto)?;
        let total = d.total();
        // sums above one by more than roundoff count as failures too
        worst = worst.max((1.0 - total).max(total - 1.0 - 1e-12).max(0.0));
        min_raw = min_raw.min(d.min_raw());
        if variant == Variant::Added {
            support_violations += d.raw().iter().take(params.m as usize).filter(|&&p| p != 0.0).count();
        }
        done += 1;
    }
    if min_raw < -1e-12 || support_violations > 0 {
        worst = f64::INFINITY;
    }
    Ok(Measured {
        deviation: worst,
        detail: format!("{draws} sets; min raw probability {min_raw:e}; support violations {support_violations}"),
    })
}

/// Odd photon numbers of squeezed vacuum, closed form and oracle.
pub fn parity() -> Result<Measured> {
    let oracle = FockOracle::new();
    let mut worst = 0.0f64;
    for r in [0.3, 0.9] {
        let params = StateParams::new(0.0, r, 0, Variant::Added)?;
        let closed = pnd_table(&params, NMax::Fixed(GRID_N_MAX))?;
        let measured = oracle.certified(&params, GRID_N_MAX)?;
        for n in (1..=GRID_N_MAX).step_by(2) {
            worst = worst.max(closed.raw()[n].abs()).max(measured.distribution.raw()[n].abs());
        }
    }
    Ok(Measured { deviation: worst, detail: format!("n_c = 0, r in {{0.3, 0.9}}, odd n <= {GRID_N_MAX}") })
}

/// `⟨e^{f a†a}⟩` closed form against the oracle.
pub fn exp_number() -> Result<Measured> {
    let mut worst = 0.0f64;
    for (n_c, r) in [(0.0, 0.5), (1.0, 0.5), (0.5, -0.3), (2.0, 0.2)] {
        let params = StateParams::squeezed_thermal(n_c, r)?;
        let dim = crate::oracle::recommended_dim(n_c, r, 0) * 2;
        for f in [f64::NEG_INFINITY, -10.0, -1.0, 0.5f64.ln(), -0.1, 0.0] {
            let closed = expectation_exp_number(f, &params)?;
            worst = worst.max((closed - oracle_exp_number(f, &params, dim)?).abs());
        }
    }
    Ok(Measured { deviation: worst, detail: "4 states, f in {-inf, -10, -1, ln 0.5, -0.1, 0}".into() })
}

/// Thermal-vacuum purification at `dim = 128`.
pub fn purification(n_cs: &[f64]) -> Result<Measured> {
    let mut worst = 0.0f64;
    for &n_c in n_cs {
        let dim = PURIFICATION_DIM.max(crate::oracle::thermal_min_dim(n_c));
        let rep = tfd_purification_check(n_c, dim)?;
        worst = worst.max(rep.max_deviation).max((rep.mean_photon_number - n_c).abs());
    }
    Ok(Measured { deviation: worst, detail: format!("n_c in {n_cs:?}: reduced state and mean photon number") })
}

/// One grid point: closed forms next to the certified oracle.
#[derive(Debug, Clone)]
pub struct GridPoint {
    pub oracle: CertifiedOracle,
    pub norm_closed: f64,
    pub pnd_closed: Vec<f64>,
}

/// The oracle grid, measured once and shared by several checks.
pub struct OracleGrid {
    pub points: Vec<GridPoint>,
    pub skipped: usize,
}

impl OracleGrid {
    pub fn grid_ops() -> Vec<(u32, Variant)> {
        (0..=GRID_M_MAX).flat_map(|m| [(m, Variant::Added), (m, Variant::Subtracted)]).collect()
    }

    pub fn measure() -> Result<Self> {
        let oracle = FockOracle::new();
        let ops = Self::grid_ops();
        let mut points = Vec::new();
        let mut skipped = 0;
        for &r in &GRID_R {
            for &n_c in &GRID_NC {
                for res in oracle.certify_family(n_c, r, &ops, GRID_N_MAX)? {
                    let oracle_point = match res {
                        Ok(c) => c,
                        Err(Error::ZeroNorm(_)) => {
                            skipped += 1;
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    let mut eval = PndEvaluator::new(&oracle_point.params)?;
                    let pnd_closed = eval.raw_range(GRID_N_MAX)?;
                    let norm_closed = crate::analytics::normalization(&oracle_point.params)?;
                    points.push(GridPoint { oracle: oracle_point, norm_closed, pnd_closed });
                }
            }
            // the squeeze operators for this r are not needed again
            oracle.clear_cache();
        }
        Ok(OracleGrid { points, skipped })
    }

    pub fn norm_deviation(&self) -> Result<Measured> {
        let worst = self
            .points
            .iter()
            .map(|p| ((p.norm_closed - p.oracle.norm) / p.oracle.norm).abs())
            .fold(0.0, f64::max);
        Ok(Measured {
            deviation: worst,
            detail: format!("{} grid points ({} zero-norm skipped), relative", self.points.len(), self.skipped),
        })
    }

    pub fn pnd_deviation(&self) -> Result<Measured> {
        let worst = self
            .points
            .iter()
            .flat_map(|p| p.pnd_closed.iter().zip(p.oracle.distribution.raw()).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        Ok(Measured {
            deviation: worst,
            detail: format!("{} grid points, n <= {GRID_N_MAX}, absolute", self.points.len()),
        })
    }

    /// Evaluates the photon-subtracted distribution under both readings of
    /// the power of `C/A` with direct Legendre evaluation.
    pub fn exponent_readings(&self) -> Result<ExponentReport> {
        let mut rep = ExponentReport::default();
        for p in self.points.iter().filter(|p| p.oracle.params.variant == Variant::Subtracted) {
            let params = p.oracle.params;
            rep.points += 1;
            let c = CoefficientSet::from_nc_r(params.n_c, params.r);
            let norm = norm_pssts(&params)?;
            let m = params.m as usize;
            let mut literal_bad = false;
            for n in 0..=GRID_N_MAX {
                let k = m + n;
                let observed = p.oracle.distribution.raw()[n];
                let prefactor = factorial(k) / factorial(n) / (norm * c.a.sqrt());
                let paired = prefactor * scaled_legendre_direct(c.b / c.a, c.c / c.a, k)?;
                rep.paired_deviation = rep.paired_deviation.max((paired - observed).abs());
                if c.c > 0.0 {
                    let x = c.b / (c.a * c.c).sqrt();
                    let literal = prefactor * (c.c / c.a).powf(m as f64 + n as f64 / 2.0) * legendre_p(k, x)?;
                    let dev = (literal - observed).abs();
                    rep.literal_deviation = rep.literal_deviation.max(dev);
                    literal_bad |= dev >= CheckKind::Exponent.base_threshold();
                } else if c.c < 0.0 && k > 0 {
                    // (C/A)^{m+n/2} with C < 0 is not real for general n
                    literal_bad = true;
                    rep.literal_undefined += 1;
                }
            }
            if literal_bad {
                rep.literal_failures += 1;
            }
        }
        Ok(rep)
    }
}

/// `q^{k/2} P_k(p/√q)` for `q ≥ 0` by direct Legendre evaluation, with the
/// `q → 0` limit taken from the leading coefficient; falls back to the
/// recurrence for `q < 0`.
fn scaled_legendre_direct(p: f64, q: f64, k: usize) -> Result<f64> {
    if q > 0.0 {
        Ok(q.powf(k as f64 / 2.0) * legendre_p(k, p / q.sqrt())?)
    } else {
        Ok(crate::legendre::scaled_sequence(p, q, k)?.value(k))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    /// Subtracted-state grid points examined.
    pub points: usize,
    /// Max |closed − oracle| with `(C/A)^{(m+n)/2}`.
    pub paired_deviation: f64,
    /// Max |closed − oracle| with `(C/A)^{m+n/2}` where that is real.
    pub literal_deviation: f64,
    /// Points where the literal reading misses the oracle or is undefined.
    pub literal_failures: usize,
    /// Table entries where the literal reading is not real (`C < 0`).
    pub literal_undefined: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre::scaled_sequence;

    #[test]
    fn contour_matches_known_series() {
        // (1 − τ)^{-1}: p = q = 1
        for k in 0..20 {
            assert!((contour_coefficient(1.0, 1.0, k) - 1.0).abs() < 1e-12);
        }
        // (1 − 2xτ + τ²)^{-1/2} at x = 0.3 gives P_k(0.3)
        for k in 0..20 {
            let want = legendre_p(k, 0.3).unwrap();
            assert!((contour_coefficient(0.3, 1.0, k) - want).abs() < 1e-12, "k = {k}");
        }
        // negative q, p = 0: (1 − τ²)^{-1/2} = 1 + τ²/2 + 3τ⁴/8 + …
        assert!((contour_coefficient(0.0, -1.0, 2) - 0.5).abs() < 1e-12);
        assert!((contour_coefficient(0.0, -1.0, 4) - 0.375).abs() < 1e-12);
        assert!(contour_coefficient(0.0, -1.0, 3).abs() < 1e-12);
        assert_eq!(contour_coefficient(0.0, 0.0, 0), 1.0);
        assert_eq!(contour_coefficient(0.0, 0.0, 4), 0.0);
    }

    #[test]
    fn contour_agrees_with_recurrence_on_negative_q() {
        let seq = scaled_sequence(1.8, -0.7, 25).unwrap();
        for k in 0..=25 {
            let c = contour_coefficient(1.8, -0.7, k);
            assert!((c - seq.value(k)).abs() <= 1e-11 * seq.value(k).abs().max(1.0), "k = {k}");
        }
    }

    #[test]
    fn cheap_checks_pass() {
        let cfg = VerifyConfig {
            checks: vec![
                CheckKind::Coefficients,
                CheckKind::GenfunNorms,
                CheckKind::GenfunSeries,
                CheckKind::SpecialCases,
                CheckKind::Purification,
            ],
            ..VerifyConfig::default()
        };
        let rep = run_verify(&cfg).unwrap();
        for c in &rep.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(rep.passed);
    }

    #[test]
    fn tiny_tolerance_fails() {
        let cfg = VerifyConfig { tol: 1e-15, checks: vec![CheckKind::GenfunNorms], ..VerifyConfig::default() };
        assert!(!run_verify(&cfg).unwrap().passed);
    }

    #[test]
    fn check_names_roundtrip() {
        for k in CheckKind::ALL {
            assert_eq!(k.name().parse::<CheckKind>().unwrap(), k);
        }
        assert!("nope".parse::<CheckKind>().is_err());
    }
}
