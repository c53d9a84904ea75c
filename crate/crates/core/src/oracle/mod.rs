//! Brute-force reference path: the states are built as dense density
//! matrices in a truncated Fock basis and measured directly. Nothing here
//! touches the Legendre machinery, so agreement with [`crate::analytics`]
//! is an independent check.

pub mod expm;
pub mod fock;
pub mod purification;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::analytics::{Distribution, Truncation};
use crate::error::{Error, Result};
use crate::state::{StateParams, Variant};

pub use fock::{
    annihilation_matrix, apply_photon_op, boundary_levels, squeeze_matrix, sts_density, sts_density_with,
    thermal_min_dim, thermal_state, DensityMatrix, SqueezeOperator,
};
pub use purification::{tfd_purification_check, PurificationReport, MAX_PURIFICATION_DIM};

/// Dimension-doubling stops here.
pub const MAX_CERTIFIED_DIM: usize = 4096;
/// A quantity is converged when doubling `dim` moves it by less than this
/// (relative for normalizations, absolute for probabilities).
pub const CERTIFICATE_TOL: f64 = 1e-10;

/// Starting truncation: `max(64, n_max + 16, ⌈12(2n_c+1)e^{2|r|}⌉)`,
/// raised to the thermal tail bound when that is larger.
pub fn recommended_dim(n_c: f64, r: f64, n_max: usize) -> usize {
    let spread = (12.0 * (2.0 * n_c + 1.0) * (2.0 * r.abs()).exp()).ceil() as usize;
    64.max(n_max + 16).max(spread).max(thermal_min_dim(n_c))
}

/// Builds the post-operation matrix `a†^m ρ_STS a^m` or `a^m ρ_STS a†^m`.
pub fn photon_operated_density(params: &StateParams, dim: usize) -> Result<DensityMatrix> {
    params.check()?;
    let rho = sts_density(params.n_c, params.r, dim)?;
    apply_photon_op(&rho, params.m, params.variant)
}

/// Trace of the unnormalized post-operation matrix, i.e. the normalization
/// constant measured directly.
pub fn oracle_norm(params: &StateParams, dim: usize) -> Result<f64> {
    Ok(photon_operated_density(params, dim)?.trace())
}

/// Normalized photon-number populations `0..=n_max`.
pub fn oracle_pnd(params: &StateParams, dim: usize, n_max: usize) -> Result<Distribution> {
    check_window(dim, n_max)?;
    let rho = photon_operated_density(params, dim)?;
    normalized_populations(params, &rho, n_max)
}

/// `Σ_n e^{fn} ⟨n|ρ_STS|n⟩`.
pub fn oracle_exp_number(f: f64, params: &StateParams, dim: usize) -> Result<f64> {
    if params.m != 0 {
        return Err(Error::Domain(format!("expected the squeezed thermal state (m = 0), got m = {}", params.m)));
    }
    let rho = sts_density(params.n_c, params.r, dim)?;
    // n = 0 separately so that f = -inf gives the vacuum population
    let weight = |n: usize| if n == 0 { 1.0 } else { (f * n as f64).exp() };
    if f > 0.0 {
        let last = rho.matrix()[(dim - 1, dim - 1)].abs() * weight(dim - 1);
        if last > 1e-12 {
            return Err(Error::Domain(format!("e^(f n) tail {last:e} is not negligible at dim {dim}")));
        }
    }
    Ok(rho.weighted_population(weight))
}

fn check_window(dim: usize, n_max: usize) -> Result<()> {
    let required = n_max + boundary_levels(dim) + 1;
    if dim < required {
        return Err(Error::InsufficientDimension { given: dim, required });
    }
    Ok(())
}

fn normalized_populations(params: &StateParams, rho: &DensityMatrix, n_max: usize) -> Result<Distribution> {
    let trace = rho.trace();
    if !(trace > 0.0) {
        return Err(zero_norm(params, trace));
    }
    let diag = rho.diagonal();
    let raw = (0..=n_max).map(|n| diag[n] / trace).collect();
    Ok(Distribution::from_raw(raw, Truncation::Fixed { n_max }))
}

fn zero_norm(params: &StateParams, trace: f64) -> Error {
    Error::ZeroNorm(format!(
        "oracle trace {trace} for the {} state with n_c = {}, r = {}, m = {}",
        params.variant, params.n_c, params.r, params.m
    ))
}

/// An oracle measurement whose truncation passed the doubling certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifiedOracle {
    pub params: StateParams,
    /// Dimension the reported values were taken at.
    pub dim: usize,
    pub norm: f64,
    pub distribution: Distribution,
    /// Relative change of the norm from `dim/2` to `dim`.
    pub norm_change: f64,
    /// Largest absolute change of a probability from `dim/2` to `dim`.
    pub pnd_change: f64,
}

struct Measurement {
    norm: f64,
    pnd: Vec<f64>,
}

/// Oracle evaluator that caches squeeze operators by `(r, dim)`.
///
/// Building `S(r)` dominates the cost, and sweeps typically revisit the same
/// squeezing parameter for many `(n_c, m, variant)` combinations.
#[derive(Default)]
pub struct FockOracle {
    cache: Mutex<HashMap<(u64, usize), Arc<SqueezeOperator>>>,
}

impl FockOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn squeeze(&self, r: f64, dim: usize) -> Result<Arc<SqueezeOperator>> {
        // -0.0 and 0.0 give the same operator
        let key = ((r + 0.0).to_bits(), dim);
        if let Some(op) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(op));
        }
        let op = Arc::new(SqueezeOperator::new(r, dim)?);
        self.cache.lock().expect("cache lock").insert(key, Arc::clone(&op));
        Ok(op)
    }

    pub fn clear_cache(&self) {
        self.cache.lock().expect("cache lock").clear();
    }

    pub fn sts(&self, n_c: f64, r: f64, dim: usize) -> Result<DensityMatrix> {
        sts_density_with(self.squeeze(r, dim)?.as_ref(), n_c)
    }

    pub fn norm(&self, params: &StateParams, dim: usize) -> Result<f64> {
        params.check()?;
        let rho = self.sts(params.n_c, params.r, dim)?;
        Ok(apply_photon_op(&rho, params.m, params.variant)?.trace())
    }

    pub fn pnd(&self, params: &StateParams, dim: usize, n_max: usize) -> Result<Distribution> {
        params.check()?;
        check_window(dim, n_max)?;
        let rho = self.sts(params.n_c, params.r, dim)?;
        normalized_populations(params, &apply_photon_op(&rho, params.m, params.variant)?, n_max)
    }

    /// Measures every `(m, variant)` in `ops` for one squeezed thermal state.
    ///
    /// The outer error means `dim` is unusable (leakage, headroom); the
    /// inner errors are per-operation (zero norm).
    fn measure_family(
        &self,
        n_c: f64,
        r: f64,
        ops: &[(u32, Variant)],
        dim: usize,
        n_max: usize,
    ) -> Result<Vec<Result<Measurement>>> {
        check_window(dim, n_max)?;
        let rho = self.sts(n_c, r, dim)?;
        let mut out = Vec::with_capacity(ops.len());
        for &(m, variant) in ops {
            let params = StateParams { n_c, r, m, variant };
            let post = apply_photon_op(&rho, m, variant)?;
            let trace = post.trace();
            if !(trace > 0.0) {
                out.push(Err(zero_norm(&params, trace)));
                continue;
            }
            let diag = post.diagonal();
            let pnd = (0..=n_max).map(|n| diag[n] / trace).collect();
            out.push(Ok(Measurement { norm: trace, pnd }));
        }
        Ok(out)
    }

    /// Certified measurements for several photon operations on the same
    /// squeezed thermal state.
    ///
    /// Starting from [`recommended_dim`], the dimension is doubled until
    /// every normalization changes by less than [`CERTIFICATE_TOL`]
    /// (relative) and every probability up to `n_max` by less than
    /// [`CERTIFICATE_TOL`] (absolute) between `dim` and `2·dim`.
    pub fn certify_family(
        &self,
        n_c: f64,
        r: f64,
        ops: &[(u32, Variant)],
        n_max: usize,
    ) -> Result<Vec<Result<CertifiedOracle>>> {
        StateParams { n_c, r, m: 0, variant: Variant::Added }.check()?;
        let max_m = ops.iter().map(|&(m, _)| m as usize).max().unwrap_or(0);
        let mut dim = recommended_dim(n_c, r, n_max + max_m);
        let mut lower: Option<(usize, Vec<Result<Measurement>>)> = None;
        loop {
            if dim > MAX_CERTIFIED_DIM {
                return Err(Error::NoConvergence(format!(
                    "oracle truncation for n_c = {n_c}, r = {r} not certified below dim {MAX_CERTIFIED_DIM}"
                )));
            }
            let current = match self.measure_family(n_c, r, ops, dim, n_max) {
                Ok(v) => v,
                Err(Error::Headroom { .. }) | Err(Error::InsufficientDimension { .. }) => {
                    lower = None;
                    dim *= 2;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if let Some((lower_dim, prev)) = lower.take() {
                if lower_dim * 2 == dim {
                    if let Some(done) = certified_if_stable(n_c, r, ops, dim, n_max, &prev, &current) {
                        return Ok(done);
                    }
                }
            }
            lower = Some((dim, current));
            dim *= 2;
        }
    }

    /// Certified measurement of a single state.
    pub fn certified(&self, params: &StateParams, n_max: usize) -> Result<CertifiedOracle> {
        self.certify_family(params.n_c, params.r, &[(params.m, params.variant)], n_max)?
            .pop()
            .expect("one result per operation")
    }
}

fn certified_if_stable(
    n_c: f64,
    r: f64,
    ops: &[(u32, Variant)],
    dim: usize,
    n_max: usize,
    lower: &[Result<Measurement>],
    upper: &[Result<Measurement>],
) -> Option<Vec<Result<CertifiedOracle>>> {
    let mut out = Vec::with_capacity(ops.len());
    for ((&(m, variant), lo), hi) in ops.iter().zip(lower).zip(upper) {
        let params = StateParams { n_c, r, m, variant };
        match (lo, hi) {
            (Ok(lo), Ok(hi)) => {
                let norm_change = ((hi.norm - lo.norm) / hi.norm).abs();
                let pnd_change = lo.pnd.iter().zip(&hi.pnd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                if !(norm_change < CERTIFICATE_TOL && pnd_change < CERTIFICATE_TOL) {
                    return None;
                }
                out.push(Ok(CertifiedOracle {
                    params,
                    dim,
                    norm: hi.norm,
                    distribution: Distribution::from_raw(hi.pnd.clone(), Truncation::Fixed { n_max }),
                    norm_change,
                    pnd_change,
                }));
            }
            (Err(_), Err(e)) => out.push(Err(e.clone())),
            // zero at one size but not the other: not converged
            _ => return None,
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::CoefficientSet;

    fn params(n_c: f64, r: f64, m: u32, variant: Variant) -> StateParams {
        StateParams::new(n_c, r, m, variant).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert!((oracle_norm(&params(1.0, 0.5, 0, Variant::Added), 200).unwrap() - 1.0).abs() < 1e-10);
        let n = oracle_norm(&params(2.0, 0.0, 3, Variant::Added), 400).unwrap();
        assert!((n - 162.0).abs() / 162.0 < 1e-8);
        let n = oracle_norm(&params(1.0, 0.5, 2, Variant::Added), 300).unwrap();
        assert!((n - 18.951652361852987511).abs() / n < 1e-8);
    }

    #[test]
    fn pnd_examples() {
        let vac = oracle_pnd(&params(0.0, 0.0, 0, Variant::Added), 64, 10).unwrap();
        assert_eq!(vac.raw()[0], 1.0);
        assert!(vac.raw()[1..].iter().all(|&p| p == 0.0));

        let sv = oracle_pnd(&params(0.0, 0.9, 0, Variant::Added), 256, 40).unwrap();
        for n in (1..=40).step_by(2) {
            assert!(sv.raw()[n].abs() < 1e-14);
        }

        let d = oracle_pnd(&params(1.0, 0.4, 1, Variant::Subtracted), 300, 10).unwrap();
        assert!((d.raw()[2] - 0.13663580264029346).abs() < 1e-9);
    }

    #[test]
    fn pnd_zero_norm() {
        assert!(matches!(
            oracle_pnd(&params(0.0, 0.0, 1, Variant::Subtracted), 64, 5),
            Err(Error::ZeroNorm(_))
        ));
    }

    #[test]
    fn pnd_window_guard() {
        assert!(matches!(
            oracle_pnd(&params(0.5, 0.2, 0, Variant::Added), 64, 60),
            Err(Error::InsufficientDimension { .. })
        ));
    }

    #[test]
    fn exp_number_examples() {
        let p = params(1.0, 0.5, 0, Variant::Added);
        assert!((oracle_exp_number(0.0, &p, 200).unwrap() - 1.0).abs() < 1e-10);
        let a = CoefficientSet::from_nc_r(1.0, 0.5).a;
        assert!((oracle_exp_number(f64::NEG_INFINITY, &p, 200).unwrap() - a.powf(-0.5)).abs() < 1e-9);
        assert!((oracle_exp_number(0.5f64.ln(), &p, 200).unwrap() - 0.5912125893133826058).abs() < 1e-9);
        assert!(oracle_exp_number(0.0, &p.with_m(1), 200).is_err());
    }

    #[test]
    fn certified_example() {
        let oracle = FockOracle::new();
        let c = oracle.certified(&params(1.0, 0.5, 2, Variant::Added), 20).unwrap();
        assert!(c.norm_change < CERTIFICATE_TOL && c.pnd_change < CERTIFICATE_TOL);
        assert!((c.norm - 18.951652361852987511).abs() / c.norm < 1e-8);
        assert!(c.dim >= recommended_dim(1.0, 0.5, 20));
    }

    #[test]
    fn certified_family_keeps_zero_norm_per_operation() {
        let oracle = FockOracle::new();
        let ops = [(0, Variant::Added), (1, Variant::Subtracted), (2, Variant::Added)];
        let res = oracle.certify_family(0.0, 0.0, &ops, 10).unwrap();
        assert!(res[0].is_ok());
        assert!(matches!(res[1], Err(Error::ZeroNorm(_))));
        let two = res[2].as_ref().unwrap();
        assert!((two.distribution.raw()[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn recommended_dim_heuristic() {
        assert_eq!(recommended_dim(0.0, 0.0, 10), 64);
        assert_eq!(recommended_dim(0.0, 0.0, 100), 116);
        assert_eq!(recommended_dim(3.0, 0.8, 40), (84.0 * 1.6f64.exp()).ceil() as usize);
    }
}
