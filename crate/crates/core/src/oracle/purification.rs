//! Thermal-vacuum purification of the thermal state.
//!
//! `|0(β)⟩ = sech θ Σ_n tanh^n θ |n, ñ⟩` with `sinh²θ = n_c` lives in the
//! doubled Fock space. Tracing out the tilde mode must give back the
//! thermal density matrix. The state is held as its `dim × dim` coefficient
//! matrix `Ψ[n, ñ]`, so the reduced state is `Ψ Ψᵀ` and the `dim²`-dimensional
//! projector is never formed.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::fock::{thermal_min_dim, thermal_state};

/// Largest truncation accepted for the doubled space.
pub const MAX_PURIFICATION_DIM: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PurificationReport {
    pub n_c: f64,
    pub dim: usize,
    /// Max elementwise `|Tr_ñ |0(β)⟩⟨0(β)| − ρ_th|`.
    pub max_deviation: f64,
    /// `⟨0(β)|a†a|0(β)⟩`
    pub mean_photon_number: f64,
    /// `⟨0(β)|0(β)⟩` in the truncated space.
    pub norm: f64,
}

/// Thermal vacuum amplitudes `Ψ[n, ñ] = δ_{nñ} sech θ tanh^n θ`.
pub fn thermal_vacuum(n_c: f64, dim: usize) -> Result<DMatrix<f64>> {
    if !n_c.is_finite() || n_c < 0.0 {
        return Err(Error::Domain(format!("n_c must be finite and non-negative, got {n_c}")));
    }
    let theta = n_c.sqrt().asinh();
    let (sech, tanh) = (1.0 / theta.cosh(), theta.tanh());
    let mut psi = DMatrix::zeros(dim, dim);
    let mut amp = sech;
    for n in 0..dim {
        psi[(n, n)] = amp;
        amp *= tanh;
    }
    Ok(psi)
}

/// Builds `|0(β)⟩`, traces out the tilde mode and compares with the thermal
/// state of the same `n_c`.
pub fn tfd_purification_check(n_c: f64, dim: usize) -> Result<PurificationReport> {
    if dim > MAX_PURIFICATION_DIM {
        return Err(Error::Domain(format!(
            "purification check limited to dim <= {MAX_PURIFICATION_DIM} (doubled space of dim^2), got {dim}"
        )));
    }
    let required = thermal_min_dim(n_c).max(2);
    if dim < required {
        return Err(Error::InsufficientDimension { given: dim, required });
    }
    let psi = thermal_vacuum(n_c, dim)?;
    // Tr_ñ |ψ⟩⟨ψ| has entries Σ_ñ Ψ[n, ñ] Ψ[n', ñ]
    let reduced = &psi * psi.transpose();
    let thermal = thermal_state(n_c, dim)?;
    let max_deviation = (&reduced - thermal.matrix()).abs().max();
    let norm = psi.iter().map(|x| x * x).sum();
    let mean_photon_number = psi
        .row_iter()
        .enumerate()
        .map(|(n, row)| n as f64 * row.iter().map(|x| x * x).sum::<f64>())
        .sum();
    Ok(PurificationReport { n_c, dim, max_deviation, mean_photon_number, norm })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_purifies_exactly() {
        let rep = tfd_purification_check(0.0, 16).unwrap();
        assert_eq!(rep.max_deviation, 0.0);
        assert_eq!(rep.mean_photon_number, 0.0);
        assert_eq!(rep.norm, 1.0);
    }

    #[test]
    fn thermal_examples() {
        let rep = tfd_purification_check(1.0, 64).unwrap();
        assert!(rep.max_deviation < 1e-10);
        for n_c in [0.5, 2.0] {
            let rep = tfd_purification_check(n_c, 128).unwrap();
            assert!(rep.max_deviation < 1e-10);
            assert!((rep.mean_photon_number - n_c).abs() < 1e-10, "{rep:?}");
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(tfd_purification_check(1.0, 513), Err(Error::Domain(_))));
        assert!(matches!(tfd_purification_check(5.0, 64), Err(Error::InsufficientDimension { .. })));
        assert!(tfd_purification_check(-1.0, 64).is_err());
    }
}
