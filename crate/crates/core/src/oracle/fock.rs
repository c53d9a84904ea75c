//! States and operators in a truncated Fock basis `|0⟩..|dim−1⟩`.
//!
//! The squeezing generator `(r/2)(a² − a†²)` is real antisymmetric, so every
//! matrix here is real and "Hermitian" means symmetric.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::state::Variant;

use super::expm::expm;

/// Thermal occupation beyond the truncation must stay below this.
pub const THERMAL_TAIL_TOL: f64 = 1e-12;
/// Relative mass allowed in the top eighth of a squeezed thermal state.
pub const STS_LEAK_TOL: f64 = 1e-12;
/// Relative mass allowed in the headroom levels before photon addition.
pub const HEADROOM_TOL: f64 = 1e-13;
/// Maximum elementwise asymmetry, relative to the largest entry.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Number of top Fock levels treated as truncation-corrupted for a given `dim`.
pub fn boundary_levels(dim: usize) -> usize {
    dim.div_ceil(8)
}

/// Annihilation operator: `⟨n−1|a|n⟩ = √n`.
pub fn annihilation_matrix(dim: usize) -> Result<DMatrix<f64>> {
    if dim < 2 {
        return Err(Error::InsufficientDimension { given: dim, required: 2 });
    }
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = (n as f64).sqrt();
    }
    Ok(a)
}

/// Smallest `dim` with `(n_c/(n_c+1))^dim < THERMAL_TAIL_TOL`.
pub fn thermal_min_dim(n_c: f64) -> usize {
    if n_c <= 0.0 {
        return 1;
    }
    let ratio = n_c / (n_c + 1.0);
    (THERMAL_TAIL_TOL.ln() / ratio.ln()).floor() as usize + 1
}

/// A real symmetric density matrix together with the trace it is declared
/// to have (1 for states, the normalization constant after a photon
/// operation).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<f64>,
    normalization: f64,
}

impl DensityMatrix {
    /// Wraps `matrix`, checking squareness and symmetry.
    pub fn new(matrix: DMatrix<f64>, normalization: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Domain(format!(
                "density matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let rho = DensityMatrix { matrix, normalization };
        let scale = rho.matrix.amax().max(f64::MIN_POSITIVE);
        let asym = rho.max_asymmetry();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::Domain(format!("density matrix asymmetric by {asym:e}")));
        }
        Ok(rho)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Declared trace.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Photon-number populations `⟨n|ρ|n⟩`.
    pub fn diagonal(&self) -> DVector<f64> {
        self.matrix.diagonal()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in (j + 1)..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
            }
        }
        worst
    }

    /// Smallest eigenvalue; `O(dim³)`.
    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.clone().symmetric_eigen().eigenvalues.min()
    }

    /// `Σ_n w(n) ⟨n|ρ|n⟩`
    pub fn weighted_population<F: Fn(usize) -> f64>(&self, weight: F) -> f64 {
        self.matrix.diagonal().iter().enumerate().map(|(n, &p)| weight(n) * p).sum()
    }

    /// Population of the top `levels` Fock states relative to the trace.
    pub fn top_mass(&self, levels: usize) -> f64 {
        let n = self.dim();
        let start = n.saturating_sub(levels);
        let top: f64 = (start..n).map(|i| self.matrix[(i, i)].abs()).sum();
        top / self.trace().abs().max(f64::MIN_POSITIVE)
    }
}

/// Thermal state `Σ n_c^n/(n_c+1)^{n+1} |n⟩⟨n|`.
pub fn thermal_state(n_c: f64, dim: usize) -> Result<DensityMatrix> {
    if !n_c.is_finite() || n_c < 0.0 {
        return Err(Error::Domain(format!("mean thermal photon number must be finite and non-negative, got {n_c}")));
    }
    let required = thermal_min_dim(n_c).max(1);
    if dim < required {
        return Err(Error::InsufficientDimension { given: dim, required });
    }
    let weights = thermal_weights(n_c, dim);
    Ok(DensityMatrix { matrix: DMatrix::from_diagonal(&weights), normalization: 1.0 })
}

fn thermal_weights(n_c: f64, dim: usize) -> DVector<f64> {
    let ratio = n_c / (n_c + 1.0);
    let mut w = DVector::zeros(dim);
    let mut cur = 1.0 / (n_c + 1.0);
    for n in 0..dim {
        w[n] = cur;
        cur *= ratio;
    }
    w
}

/// `S(r) = exp[r(a² − a†²)/2]` split into its even and odd parity blocks.
#[derive(Debug, Clone)]
pub struct SqueezeOperator {
    r: f64,
    dim: usize,
    /// Acts on `|0⟩, |2⟩, |4⟩, …`
    even: DMatrix<f64>,
    /// Acts on `|1⟩, |3⟩, |5⟩, …`
    odd: DMatrix<f64>,
}

impl SqueezeOperator {
    pub fn new(r: f64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InsufficientDimension { given: dim, required: 2 });
        }
        if !r.is_finite() {
            return Err(Error::Domain(format!("squeezing parameter must be finite, got {r}")));
        }
        Ok(SqueezeOperator { r, dim, even: parity_block(r, dim, 0), odd: parity_block(r, dim, 1) })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Full `dim × dim` matrix.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(self.dim, self.dim);
        for (parity, block) in [(0, &self.even), (1, &self.odd)] {
            for j in 0..block.ncols() {
                for i in 0..block.nrows() {
                    s[(2 * i + parity, 2 * j + parity)] = block[(i, j)];
                }
            }
        }
        s
    }

    /// `S diag(weights) Sᵀ`, assembled block by block.
    pub fn conjugate_diagonal(&self, weights: &DVector<f64>) -> DMatrix<f64> {
        assert_eq!(weights.len(), self.dim);
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (parity, block) in [(0, &self.even), (1, &self.odd)] {
            let w = DVector::from_iterator(block.ncols(), (0..block.ncols()).map(|j| weights[2 * j + parity]));
            let mut scaled = block.clone();
            for (j, mut col) in scaled.column_iter_mut().enumerate() {
                col *= w[j];
            }
            let prod = scaled * block.transpose();
            for j in 0..prod.ncols() {
                for i in 0..prod.nrows() {
                    out[(2 * i + parity, 2 * j + parity)] = prod[(i, j)];
                }
            }
        }
        out
    }
}

/// Exponential of the generator restricted to Fock states of one parity.
fn parity_block(r: f64, dim: usize, parity: usize) -> DMatrix<f64> {
    let size = (dim - parity).div_ceil(2);
    let mut gen = DMatrix::zeros(size, size);
    for i in 1..size {
        // ⟨n−2|a²|n⟩ = √(n(n−1)) with n = 2i + parity
        let n = (2 * i + parity) as f64;
        let amp = 0.5 * r * (n * (n - 1.0)).sqrt();
        gen[(i - 1, i)] = amp;
        gen[(i, i - 1)] = -amp;
    }
    expm(&gen)
}

/// Dense squeeze operator `exp[r(a² − a†²)/2]` in the truncated basis.
pub fn squeeze_matrix(r: f64, dim: usize) -> Result<DMatrix<f64>> {
    Ok(SqueezeOperator::new(r, dim)?.to_dense())
}

/// Squeezed thermal state `S ρ_th Sᵀ` using a prebuilt squeeze operator.
pub fn sts_density_with(squeeze: &SqueezeOperator, n_c: f64) -> Result<DensityMatrix> {
    let dim = squeeze.dim();
    let thermal = thermal_state(n_c, dim)?;
    let rho = DensityMatrix::new(squeeze.conjugate_diagonal(&thermal.diagonal()), 1.0)?;
    let levels = boundary_levels(dim);
    let leak = rho.top_mass(levels);
    if leak > STS_LEAK_TOL {
        return Err(Error::Headroom { mass: leak, levels, dim });
    }
    Ok(rho)
}

/// Squeezed thermal state `S(r) ρ_th S(r)ᵀ`.
pub fn sts_density(n_c: f64, r: f64, dim: usize) -> Result<DensityMatrix> {
    sts_density_with(&SqueezeOperator::new(r, dim)?, n_c)
}

/// `a†^m ρ a^m` (added) or `a^m ρ a†^m` (subtracted), unnormalized.
///
/// Uses `a^m|n⟩ = √(n!/(n−m)!) |n−m⟩` directly instead of matrix powers.
/// Photon addition requires the top `m + dim/8` levels of `rho` to be
/// empty to within [`HEADROOM_TOL`].
pub fn apply_photon_op(rho: &DensityMatrix, m: u32, variant: Variant) -> Result<DensityMatrix> {
    let dim = rho.dim();
    let m = m as usize;
    if m == 0 {
        return Ok(rho.clone());
    }
    if m >= dim {
        return Err(Error::InsufficientDimension { given: dim, required: m + 1 });
    }
    // lift[i] = √((i+1)(i+2)···(i+m))
    let lift: Vec<f64> = (0..dim - m)
        .map(|i| ((i + 1)..=(i + m)).map(|k| k as f64).product::<f64>().sqrt())
        .collect();
    let src = rho.matrix();
    let mut out = DMatrix::zeros(dim, dim);
    match variant {
        Variant::Added => {
            let levels = m + boundary_levels(dim);
            let mass = rho.top_mass(levels);
            if mass > HEADROOM_TOL {
                return Err(Error::Headroom { mass, levels, dim });
            }
            for j in 0..dim - m {
                for i in 0..dim - m {
                    out[(i + m, j + m)] = lift[i] * lift[j] * src[(i, j)];
                }
            }
        }
        Variant::Subtracted => {
            for j in 0..dim - m {
                for i in 0..dim - m {
                    out[(i, j)] = lift[i] * lift[j] * src[(i + m, j + m)];
                }
            }
        }
    }
    let trace = out.trace();
    DensityMatrix::new(out, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn annihilation_examples() {
        let a2 = annihilation_matrix(2).unwrap();
        assert_eq!(a2, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]));
        let a3 = annihilation_matrix(3).unwrap();
        assert_eq!(a3[(1, 2)], 2f64.sqrt());
        assert!(annihilation_matrix(1).is_err());
    }

    #[test]
    fn truncated_commutator() {
        let dim = 12;
        let a = annihilation_matrix(dim).unwrap();
        let ad = a.transpose();
        let comm = &a * &ad - &ad * &a;
        let mut want = DMatrix::<f64>::identity(dim, dim);
        // the corner picks up −(dim−1) instead of 1
        want[(dim - 1, dim - 1)] = -((dim - 1) as f64);
        assert!((comm - want).abs().max() < 1e-12);
    }

    #[test]
    fn thermal_examples() {
        let vac = thermal_state(0.0, 8).unwrap();
        assert_eq!(vac.matrix()[(0, 0)], 1.0);
        assert_eq!(vac.trace(), 1.0);

        let t = thermal_state(2.0, 200).unwrap();
        assert_relative_eq!(t.matrix()[(0, 0)], 1.0 / 3.0, max_relative = 1e-15);
        assert!((t.trace() - 1.0).abs() < THERMAL_TAIL_TOL);

        let t1 = thermal_state(1.0, 64).unwrap();
        assert_eq!(t1.matrix()[(3, 3)], 1.0 / 16.0);
    }

    #[test]
    fn thermal_rejects_small_dim() {
        let need = thermal_min_dim(2.0);
        match thermal_state(2.0, need - 1) {
            Err(Error::InsufficientDimension { required, .. }) => assert_eq!(required, need),
            other => panic!("unexpected {other:?}"),
        }
        assert!(thermal_state(2.0, need).is_ok());
        assert!((2.0f64 / 3.0).powi(need as i32) < THERMAL_TAIL_TOL);
    }

    #[test]
    fn squeeze_examples() {
        assert_eq!(squeeze_matrix(0.0, 10).unwrap(), DMatrix::identity(10, 10));

        let r = 0.5;
        let s = squeeze_matrix(r, 120).unwrap();
        let sech_half = (1.0 / r.cosh()).sqrt();
        assert!((s[(0, 0)] - sech_half).abs() < 1e-13);
        assert!((s[(2, 0)] + r.tanh() * sech_half / 2f64.sqrt()).abs() < 1e-13);
        // squeezed vacuum: ⟨2k|S|0⟩ = sech^{1/2} (−tanh/2)^k √((2k)!)/k!
        let mut coef = sech_half;
        for k in 1..15usize {
            let kf = k as f64;
            coef *= -0.5 * r.tanh() * ((2.0 * kf) * (2.0 * kf - 1.0)).sqrt() / kf;
            assert!((s[(2 * k, 0)] - coef).abs() < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn squeeze_parity_structure() {
        let s = squeeze_matrix(0.7, 31).unwrap();
        for i in 0..31 {
            for j in 0..31 {
                if (i + j) % 2 == 1 {
                    assert_eq!(s[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn squeeze_unitary_away_from_boundary() {
        for (r, dim) in [(0.3, 80), (-0.8, 160), (1.2, 240)] {
            let s = squeeze_matrix(r, dim).unwrap();
            let sts = s.transpose() * &s;
            let keep = dim - dim.div_ceil(4);
            let dev = (sts.view((0, 0), (keep, keep)) - DMatrix::<f64>::identity(keep, keep)).abs().max();
            assert!(dev < 1e-8, "r = {r}, dim = {dim}: {dev:e}");
        }
    }

    #[test]
    fn sts_examples() {
        let dim = 200;
        let thermal = thermal_state(1.5, dim).unwrap();
        let unsqueezed = sts_density(1.5, 0.0, dim).unwrap();
        assert!((unsqueezed.matrix() - thermal.matrix()).abs().max() < 1e-15);

        // pure squeezed vacuum: ρ = |ψ⟩⟨ψ| with ψ = S|0⟩
        let s = squeeze_matrix(0.6, dim).unwrap();
        let psi = s.column(0);
        let proj = &psi * psi.transpose();
        let sv = sts_density(0.0, 0.6, dim).unwrap();
        assert!((sv.matrix() - proj).abs().max() < 1e-14);

        let rho = sts_density(1.0, 0.5, dim).unwrap();
        let a = crate::state::CoefficientSet::from_nc_r(1.0, 0.5).a;
        assert!((rho.matrix()[(0, 0)] - a.powf(-0.5)).abs() < 1e-12);
        assert!((rho.trace() - 1.0).abs() < 1e-10);
        assert!(rho.max_asymmetry() < 1e-12);
        assert!(rho.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn sts_rejects_leaky_dimension() {
        assert!(matches!(sts_density(3.0, 0.8, 100), Err(Error::Headroom { .. })));
    }

    #[test]
    fn photon_op_examples() {
        let dim = 16;
        let vac = thermal_state(0.0, dim).unwrap();
        assert_eq!(apply_photon_op(&vac, 0, Variant::Added).unwrap(), vac);

        let one = apply_photon_op(&vac, 1, Variant::Added).unwrap();
        let mut want = DMatrix::zeros(dim, dim);
        want[(1, 1)] = 1.0;
        assert_eq!(one.matrix(), &want);
        assert_eq!(one.trace(), 1.0);

        let none = apply_photon_op(&vac, 1, Variant::Subtracted).unwrap();
        assert_eq!(none.matrix(), &DMatrix::<f64>::zeros(dim, dim));
        assert_eq!(none.trace(), 0.0);
    }

    #[test]
    fn photon_op_matches_matrix_powers() {
        let dim = 90;
        let rho = sts_density(0.4, 0.35, dim).unwrap();
        let a = annihilation_matrix(dim).unwrap();
        for m in 1..4u32 {
            let am = (0..m).fold(DMatrix::<f64>::identity(dim, dim), |acc, _| acc * &a);
            let adm = am.transpose();
            let added = apply_photon_op(&rho, m, Variant::Added).unwrap();
            let want = &adm * rho.matrix() * &am;
            assert!((added.matrix() - want).abs().max() < 1e-12);
            let sub = apply_photon_op(&rho, m, Variant::Subtracted).unwrap();
            let want = &am * rho.matrix() * &adm;
            assert!((sub.matrix() - want).abs().max() < 1e-12);
            assert!(sub.max_asymmetry() < 1e-12 * sub.matrix().amax());
        }
    }

    #[test]
    fn addition_needs_headroom() {
        let t = thermal_state(3.0, thermal_min_dim(3.0)).unwrap();
        assert!(matches!(apply_photon_op(&t, 2, Variant::Added), Err(Error::Headroom { .. })));
        assert!(apply_photon_op(&t, 2, Variant::Subtracted).is_ok());
    }
}
