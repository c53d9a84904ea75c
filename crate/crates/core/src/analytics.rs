//! Closed-form normalization constants and photon-number distributions.
//!
//! With `W_k(p, q)` the scaled Legendre sequence:
//!
//! ```text
//! ⟨e^{f a†a}⟩_STS = [C e^{2f} − 2B e^f + A]^{−1/2}
//! C_{a,m}         = m! · W_m(D, A)
//! C_{s,m}         = m! · W_m(E, C)
//! P_a(n)          = n! / [(n−m)! C_{a,m} √A] · W_{n−m}(B/A, C/A)      (n ≥ m)
//! P_s(n)          = (m+n)! / [n! C_{s,m} √A] · W_{m+n}(B/A, C/A)
//! ```
//!
//! `W_k(B/A, C/A)` carries the factor `(C/A)^{k/2}` of the Legendre form, so
//! the subtracted distribution pairs index `m+n` with `(C/A)^{(m+n)/2}`.
//! Factorial ratios are products of `m` terms and every large quantity is a
//! [`ScaledFloat`], which keeps distributions computable far past `171!`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre::{scaled_sequence, ScaledLegendreSequence};
use crate::scaled::ScaledFloat;
use crate::state::{coefficients, CoefficientSet, StateParams, Variant};

/// Auto truncation stops doubling here.
pub const AUTO_NMAX_LIMIT: usize = 1_000_000;
/// Minimum captured mass for auto truncation.
pub const AUTO_MASS_TARGET: f64 = 1e-10;
/// Mass allowed in the top tenth of an auto-truncated table.
pub const AUTO_LAST_DECADE_MASS: f64 = 1e-12;

const AUTO_NMAX_START: usize = 32;

/// `⟨e^{f a†a}⟩` in the squeezed thermal state (`m = 0`).
pub fn expectation_exp_number(f: f64, params: &StateParams) -> Result<f64> {
    if params.m != 0 {
        return Err(Error::Domain(format!(
            "exponential of the number operator is defined here for the squeezed thermal state (m = 0), got m = {}",
            params.m
        )));
    }
    if f.is_nan() || f == f64::INFINITY {
        return Err(Error::Domain(format!("f must be finite or -inf, got {f}")));
    }
    let coeffs = coefficients(params)?;
    let quad = coeffs.exp_number_quadratic(f);
    if !(quad > 0.0) {
        return Err(Error::Domain(format!(
            "C e^(2f) - 2B e^f + A = {quad} is not positive at f = {f}; the expectation diverges"
        )));
    }
    Ok(quad.powf(-0.5))
}

/// `C_{a,m}` as a scaled value.
pub fn norm_pasts_scaled(params: &StateParams) -> Result<ScaledFloat> {
    let c = coefficients(params)?;
    let seq = scaled_sequence(c.d, c.a, params.m as usize)?;
    Ok(ScaledFloat::factorial(params.m as u64) * seq.scaled(params.m as usize))
}

/// `C_{s,m}` as a scaled value. Exactly zero for subtraction from the vacuum.
pub fn norm_pssts_scaled(params: &StateParams) -> Result<ScaledFloat> {
    let c = coefficients(params)?;
    let seq = scaled_sequence(c.e, c.c, params.m as usize)?;
    Ok(ScaledFloat::factorial(params.m as u64) * seq.scaled(params.m as usize))
}

/// Normalization constant of the photon-added state, `m!·A^{m/2}·P_m(D/√A)`.
/// The variant field of `params` is ignored.
pub fn norm_pasts(params: &StateParams) -> Result<f64> {
    norm_pasts_scaled(params).map(|v| v.to_f64())
}

/// Normalization constant of the photon-subtracted state,
/// `m!·C^{m/2}·P_m(E/√C)`, real for either sign of `C`.
/// The variant field of `params` is ignored.
pub fn norm_pssts(params: &StateParams) -> Result<f64> {
    norm_pssts_scaled(params).map(|v| v.to_f64())
}

/// Normalization constant for `params.variant`.
pub fn normalization(params: &StateParams) -> Result<f64> {
    match params.variant {
        Variant::Added => norm_pasts(params),
        Variant::Subtracted => norm_pssts(params),
    }
}

/// Precomputed pieces of a photon-number distribution.
///
/// Holds `W_k(B/A, C/A)` up to the highest index needed so far; building a
/// table reuses one sequence instead of re-running the recurrence per `n`.
#[derive(Debug, Clone)]
pub struct PndEvaluator {
    params: StateParams,
    coeffs: CoefficientSet,
    /// `C_{·,m} · √A`
    denominator: ScaledFloat,
    seq: ScaledLegendreSequence,
}

impl PndEvaluator {
    pub fn new(params: &StateParams) -> Result<Self> {
        let coeffs = coefficients(params)?;
        let norm = match params.variant {
            Variant::Added => norm_pasts_scaled(params)?,
            Variant::Subtracted => norm_pssts_scaled(params)?,
        };
        if !(norm.signum() > 0.0) {
            return Err(Error::ZeroNorm(format!(
                "normalization constant of the {} state with n_c = {}, r = {}, m = {} is {}",
                params.variant,
                params.n_c,
                params.r,
                params.m,
                norm.to_f64()
            )));
        }
        let denominator = norm * ScaledFloat::from_f64(coeffs.a.sqrt());
        let seq = scaled_sequence(coeffs.b / coeffs.a, coeffs.c / coeffs.a, 0)?;
        Ok(PndEvaluator { params: *params, coeffs, denominator, seq })
    }

    pub fn params(&self) -> &StateParams {
        &self.params
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coeffs
    }

    /// Index into the Legendre sequence that `P(n)` needs, if any.
    fn order_for(&self, n: usize) -> Option<usize> {
        let m = self.params.m as usize;
        match self.params.variant {
            Variant::Added => n.checked_sub(m),
            Variant::Subtracted => Some(n + m),
        }
    }

    fn ensure(&mut self, order: usize) -> Result<()> {
        if order > self.seq.max_order() {
            let target = order.max(2 * self.seq.max_order());
            self.seq = scaled_sequence(self.seq.p(), self.seq.q(), target)?;
        }
        Ok(())
    }

    /// `P(n)` before clamping; may be a tiny negative number from roundoff.
    pub fn raw(&mut self, n: usize) -> Result<f64> {
        let Some(order) = self.order_for(n) else {
            return Ok(0.0);
        };
        self.ensure(order)?;
        let m = self.params.m as u64;
        let n64 = n as u64;
        let ratio = match self.params.variant {
            // n!/(n−m)!
            Variant::Added => ScaledFloat::rising(n64 - m + 1, m),
            // (m+n)!/n!
            Variant::Subtracted => ScaledFloat::rising(n64 + 1, m),
        };
        Ok((ratio * self.seq.scaled(order) / self.denominator).to_f64())
    }

    /// Raw values for `0..=n_max`.
    pub fn raw_range(&mut self, n_max: usize) -> Result<Vec<f64>> {
        if let Some(order) = self.order_for(n_max) {
            self.ensure(order)?;
        }
        (0..=n_max).map(|n| self.raw(n)).collect()
    }
}

/// Photon-added distribution `P_a(n)`; exactly zero for `n < m`.
pub fn pnd_pasts(params: &StateParams, n: usize) -> Result<f64> {
    let params = params.with_variant(Variant::Added);
    PndEvaluator::new(&params)?.raw(n).map(clamp)
}

/// Photon-subtracted distribution `P_s(n)`.
pub fn pnd_pssts(params: &StateParams, n: usize) -> Result<f64> {
    let params = params.with_variant(Variant::Subtracted);
    PndEvaluator::new(&params)?.raw(n).map(clamp)
}

fn clamp(p: f64) -> f64 {
    p.max(0.0)
}

/// How the table length was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Truncation {
    Fixed { n_max: usize },
    /// Chosen by doubling; `doublings` is how many times the start size was doubled.
    Auto { n_max: usize, doublings: u32 },
}

/// Requested table length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NMax {
    Fixed(usize),
    Auto,
}

/// A finite photon-number distribution `P(0..=n_max)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    raw: Vec<f64>,
    tail_bound: f64,
    truncation: Truncation,
}

impl Distribution {
    /// Wraps raw (unclamped) probabilities. `tail_bound` is the mass outside
    /// the table, `max(0, 1 − Σ raw)` for a normalized state.
    pub fn from_raw(raw: Vec<f64>, truncation: Truncation) -> Self {
        let total: f64 = raw.iter().sum();
        Distribution { raw, tail_bound: (1.0 - total).max(0.0), truncation }
    }

    pub fn n_max(&self) -> usize {
        self.raw.len() - 1
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    /// Probabilities clamped at zero.
    pub fn probabilities(&self) -> Vec<f64> {
        self.raw.iter().map(|&p| clamp(p)).collect()
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.raw.get(n).map(|&p| clamp(p))
    }

    /// Unclamped values as computed.
    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn min_raw(&self) -> f64 {
        self.raw.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Σ P(n)` over the table, using unclamped values.
    pub fn total(&self) -> f64 {
        self.raw.iter().sum()
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// `Σ n·P(n)` over the table.
    pub fn mean(&self) -> f64 {
        self.raw.iter().enumerate().map(|(n, &p)| n as f64 * p).sum()
    }
}

/// Distribution table for `params`, either of fixed length or with `n_max`
/// chosen by doubling until the top tenth of the table carries less than
/// [`AUTO_LAST_DECADE_MASS`] and at most [`AUTO_MASS_TARGET`] is missing.
pub fn pnd_table(params: &StateParams, n_max: NMax) -> Result<Distribution> {
    let mut eval = PndEvaluator::new(params)?;
    match n_max {
        NMax::Fixed(n_max) => {
            let raw = eval.raw_range(n_max)?;
            Ok(Distribution::from_raw(raw, Truncation::Fixed { n_max }))
        }
        NMax::Auto => auto_table(&mut eval),
    }
}

fn auto_table(eval: &mut PndEvaluator) -> Result<Distribution> {
    // support starts at m for photon addition
    let mut n_max = AUTO_NMAX_START.max(4 * eval.params().m as usize);
    let mut doublings = 0u32;
    loop {
        let raw = eval.raw_range(n_max)?;
        let total: f64 = raw.iter().sum();
        let decade_start = n_max - n_max / 10;
        let decade: f64 = raw[decade_start..].iter().map(|p| p.abs()).sum();
        if decade < AUTO_LAST_DECADE_MASS && total >= 1.0 - AUTO_MASS_TARGET {
            return Ok(Distribution::from_raw(raw, Truncation::Auto { n_max, doublings }));
        }
        if n_max >= AUTO_NMAX_LIMIT {
            return Err(Error::NoConvergence(format!(
                "auto truncation reached n_max = {n_max} with captured mass {total} and last-decade mass {decade:e}"
            )));
        }
        n_max = (2 * n_max).min(AUTO_NMAX_LIMIT);
        doublings += 1;
    }
}

/// `⟨a†a⟩` summed over the auto-truncated distribution.
pub fn mean_photon_number(params: &StateParams) -> Result<f64> {
    Ok(pnd_table(params, NMax::Auto)?.mean())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(n_c: f64, r: f64, m: u32, variant: Variant) -> StateParams {
        StateParams::new(n_c, r, m, variant).unwrap()
    }

    #[test]
    fn exp_number_examples() {
        for (n_c, r) in [(0.0, 0.0), (1.0, 0.5), (3.0, -1.2)] {
            let p = StateParams::squeezed_thermal(n_c, r).unwrap();
            assert_relative_eq!(expectation_exp_number(0.0, &p).unwrap(), 1.0, max_relative = 1e-14);
            let a = coefficients(&p).unwrap().a;
            assert_relative_eq!(
                expectation_exp_number(f64::NEG_INFINITY, &p).unwrap(),
                a.powf(-0.5),
                max_relative = 1e-15
            );
        }
        let p = StateParams::squeezed_thermal(1.0, 0.5).unwrap();
        // mpmath, 40 digits
        assert_relative_eq!(
            expectation_exp_number(0.5f64.ln(), &p).unwrap(),
            0.5912125893133826058,
            max_relative = 1e-14
        );
    }

    #[test]
    fn exp_number_domain() {
        // thermal n_c = 1: 1·e^{2f} − 4e^f + 4 = (e^f − 2)², zero at f = ln 2
        let p = StateParams::squeezed_thermal(1.0, 0.0).unwrap();
        assert!(matches!(expectation_exp_number(2f64.ln(), &p), Err(Error::Domain(_))));
        assert!(expectation_exp_number(0.1, &p).is_ok());
        assert!(expectation_exp_number(0.0, &p.with_m(1)).is_err());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm_pasts(&params(1.3, 0.7, 0, Variant::Added)).unwrap(), 1.0);
        assert_relative_eq!(norm_pasts(&params(2.0, 0.0, 3, Variant::Added)).unwrap(), 162.0, max_relative = 1e-14);
        // mpmath: 2!·(3D² − A)/2
        assert_relative_eq!(
            norm_pasts(&params(1.0, 0.5, 2, Variant::Added)).unwrap(),
            18.951652361852987511,
            max_relative = 1e-13
        );
        assert_relative_eq!(norm_pssts(&params(2.0, 0.0, 3, Variant::Subtracted)).unwrap(), 48.0, max_relative = 1e-14);
        assert_eq!(norm_pssts(&params(0.0, 0.0, 1, Variant::Subtracted)).unwrap(), 0.0);
        assert_relative_eq!(
            norm_pssts(&params(0.0, 0.5, 1, Variant::Subtracted)).unwrap(),
            0.27154031740762188924,
            max_relative = 1e-14
        );
    }

    #[test]
    fn norm_large_m_stays_finite_in_ratio() {
        let p = params(3.0, 1.0, 300, Variant::Added);
        let big = norm_pasts_scaled(&p).unwrap();
        assert!(norm_pasts(&p).unwrap().is_infinite());
        let next = norm_pasts_scaled(&p.with_m(301)).unwrap();
        // ratio C_{m+1}/C_m = ⟨(N+m+1)⟩ in the m-added state, i.e. a finite number > m
        let ratio = (next / big).to_f64();
        assert!(ratio.is_finite() && ratio > 301.0);
    }

    #[test]
    fn pnd_examples() {
        let vac = params(0.0, 0.0, 0, Variant::Added);
        assert_eq!(pnd_pasts(&vac, 0).unwrap(), 1.0);
        assert_eq!(pnd_pasts(&vac, 3).unwrap(), 0.0);

        let p = params(0.7, 0.4, 3, Variant::Added);
        for n in 0..3 {
            assert_eq!(pnd_pasts(&p, n).unwrap(), 0.0);
        }

        let sq = params(0.0, 0.8, 0, Variant::Added);
        for n in (1..40).step_by(2) {
            assert_eq!(pnd_pasts(&sq, n).unwrap(), 0.0);
        }

        // frozen from a scipy expm Fock-space oracle at dim 300 (agrees to ~1e-15)
        assert!((pnd_pasts(&params(0.5, 0.3, 1, Variant::Added), 3).unwrap() - 0.14712995371339247).abs() < 1e-12);
        assert!(
            (pnd_pssts(&params(1.0, 0.4, 1, Variant::Subtracted), 2).unwrap() - 0.13663580264029346).abs() < 1e-12
        );
        assert_eq!(pnd_pssts(&params(0.0, 0.0, 0, Variant::Subtracted), 0).unwrap(), 1.0);
    }

    #[test]
    fn m0_variants_coincide() {
        for (n_c, r) in [(0.0, 0.3), (1.5, -0.9), (4.0, 1.1)] {
            let p = params(n_c, r, 0, Variant::Added);
            for n in 0..30 {
                assert_eq!(pnd_pasts(&p, n).unwrap(), pnd_pssts(&p, n).unwrap());
            }
        }
    }

    #[test]
    fn zero_norm_subtraction_is_an_error() {
        let p = params(0.0, 0.0, 2, Variant::Subtracted);
        assert!(matches!(pnd_pssts(&p, 0), Err(Error::ZeroNorm(_))));
        assert!(matches!(pnd_table(&p, NMax::Auto), Err(Error::ZeroNorm(_))));
        assert!(matches!(mean_photon_number(&p), Err(Error::ZeroNorm(_))));
    }

    #[test]
    fn thermal_table() {
        let d = pnd_table(&params(2.0, 0.0, 0, Variant::Added), NMax::Fixed(2)).unwrap();
        let expected = [1.0 / 3.0, 2.0 / 9.0, 4.0 / 27.0];
        for (got, want) in d.probabilities().iter().zip(expected) {
            assert_relative_eq!(*got, want, max_relative = 1e-15);
        }
        assert_eq!(d.truncation(), Truncation::Fixed { n_max: 2 });

        let vac = pnd_table(&params(0.0, 0.0, 0, Variant::Added), NMax::Auto).unwrap();
        assert_eq!(vac.get(0), Some(1.0));
        assert!(vac.raw()[1..].iter().all(|&p| p == 0.0));
        assert_eq!(vac.tail_bound(), 0.0);
    }

    #[test]
    fn auto_table_sums_to_one() {
        let d = pnd_table(&params(1.0, 0.5, 2, Variant::Added), NMax::Auto).unwrap();
        assert!((d.total() + d.tail_bound() - 1.0).abs() < 1e-9);
        assert!((d.total() - 1.0).abs() < 1e-9);
        assert!(matches!(d.truncation(), Truncation::Auto { .. }));
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_photon_number(&params(0.0, 0.0, 0, Variant::Added)).unwrap(), 0.0);
        assert!((mean_photon_number(&params(2.0, 0.0, 0, Variant::Added)).unwrap() - 2.0).abs() < 1e-9);
        let m = mean_photon_number(&params(1.0, 0.5, 0, Variant::Added)).unwrap();
        assert!((m - 1.8146209522228656677).abs() < 1e-9);
    }

    #[test]
    fn mean_matches_norm_ratio() {
        // ⟨N⟩_add = C_{a,m+1}/C_{a,m} − 1, ⟨N⟩_sub = C_{s,m+1}/C_{s,m}
        for (n_c, r, m) in [(0.5, 0.3, 1u32), (2.0, -0.6, 3), (0.0, 0.9, 2)] {
            let add = params(n_c, r, m, Variant::Added);
            let want = norm_pasts(&add.with_m(m + 1)).unwrap() / norm_pasts(&add).unwrap() - 1.0;
            assert_relative_eq!(mean_photon_number(&add).unwrap(), want, max_relative = 1e-9);
            let sub = add.with_variant(Variant::Subtracted);
            let want = norm_pssts(&sub.with_m(m + 1)).unwrap() / norm_pssts(&sub).unwrap();
            assert_relative_eq!(mean_photon_number(&sub).unwrap(), want, max_relative = 1e-9);
        }
    }

    #[test]
    fn large_photon_numbers_do_not_overflow() {
        let p = params(3.0, 1.2, 5, Variant::Subtracted);
        let d = pnd_table(&p, NMax::Fixed(10_000)).unwrap();
        assert!(d.raw().iter().all(|x| x.is_finite()));
        assert!((d.total() - 1.0).abs() < 1e-9);
    }
}
