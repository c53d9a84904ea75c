//! Legendre polynomials and the scaled Legendre sequence.
//!
//! The closed forms need combinations `q^{k/2} P_k(p/√q)` where `q` can be
//! negative, which would make both factors complex while their product
//! stays real. Folding the scaling into Bonnet's recurrence gives
//!
//! ```text
//! W_0 = 1,  W_1 = p,  (k+1) W_{k+1} = (2k+1) p W_k − k q W_{k−1}
//! ```
//!
//! whose generating function is `(1 − 2pt + qt²)^{−1/2}` for every real
//! `p`, `q`. All intermediates are real.

use crate::error::{Error, Result};
use crate::scaled::{frexp, ldexp, ScaledFloat};

/// Rescaling kicks in once the recurrence pair leaves `[1e-150, 1e150]`.
const RESCALE_HIGH: f64 = 1e150;
const RESCALE_LOW: f64 = 1e-150;

/// `P_m(x)` by upward Bonnet recurrence. Any finite `x` is accepted,
/// including `|x| > 1`.
pub fn legendre_p(m: usize, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("Legendre argument must be finite, got {x}")));
    }
    if m == 0 {
        return Ok(1.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `W_0..=W_K` for a fixed `(p, q)`.
///
/// Each entry is held as a mantissa plus a base-2 exponent shared with its
/// neighbours at the time it was produced, so sequences whose magnitude
/// spans far beyond the `f64` range stay usable as long as only ratios are
/// needed.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledLegendreSequence {
    p: f64,
    q: f64,
    mantissas: Vec<f64>,
    exponents: Vec<i64>,
}

impl ScaledLegendreSequence {
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Highest index `K` held.
    pub fn max_order(&self) -> usize {
        self.mantissas.len() - 1
    }

    pub fn len(&self) -> usize {
        self.mantissas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mantissas.is_empty()
    }

    /// `W_k` with its extended exponent.
    pub fn scaled(&self, k: usize) -> ScaledFloat {
        ScaledFloat::new(self.mantissas[k], self.exponents[k])
    }

    /// `W_k` as a plain float; `±inf`/`0` when out of range.
    pub fn value(&self, k: usize) -> f64 {
        self.scaled(k).to_f64()
    }

    /// All entries as plain floats.
    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.value(k)).collect()
    }

    /// `true` if any exponent shift was applied.
    pub fn is_rescaled(&self) -> bool {
        self.exponents.iter().any(|&e| e != 0)
    }
}

/// Builds `W_0..=W_K` for real `(p, q)`; `q ≤ 0` is allowed.
pub fn scaled_sequence(p: f64, q: f64, k_max: usize) -> Result<ScaledLegendreSequence> {
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::Domain(format!("scaled Legendre sequence needs finite p, q (got {p}, {q})")));
    }
    let mut mantissas = Vec::with_capacity(k_max + 1);
    let mut exponents = Vec::with_capacity(k_max + 1);
    mantissas.push(1.0);
    exponents.push(0);
    if k_max == 0 {
        return Ok(ScaledLegendreSequence { p, q, mantissas, exponents });
    }

    let mut shift = 0i64;
    let (mut prev, mut cur) = (1.0f64, p);
    mantissas.push(cur);
    exponents.push(shift);
    for k in 1..k_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * p * cur - kf * q * prev) / (kf + 1.0);
        prev = cur;
        cur = next;

        let big = prev.abs().max(cur.abs());
        if big > RESCALE_HIGH || (big < RESCALE_LOW && big > 0.0) {
            // power-of-two shift keeps the rescaling exact
            let (_, e) = frexp(big);
            let factor = ldexp(1.0, -e);
            prev *= factor;
            cur *= factor;
            shift += e;
        }
        mantissas.push(cur);
        exponents.push(shift);
    }
    Ok(ScaledLegendreSequence { p, q, mantissas, exponents })
}

/// Partial sum `Σ_{k≤K} W_k t^k` of the generating function
/// `(1 − 2pt + qt²)^{−1/2}`.
///
/// Errors when `1 − 2pt + qt² ≤ 0`, where the closed form is undefined.
pub fn genfun_partial_sum(p: f64, q: f64, t: f64, k_max: usize) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("t must be finite, got {t}")));
    }
    let base = 1.0 - 2.0 * p * t + q * t * t;
    if !(base > 0.0) {
        return Err(Error::Domain(format!("1 - 2pt + qt^2 = {base} is not positive")));
    }
    let seq = scaled_sequence(p, q, k_max)?;
    let mut sum = 0.0;
    let mut tk = 1.0;
    for k in 0..=k_max {
        sum += seq.value(k) * tk;
        tk *= t;
    }
    Ok(sum)
}

/// Closed form of the generating function, `(1 − 2pt + qt²)^{−1/2}`.
pub fn genfun_closed_form(p: f64, q: f64, t: f64) -> Result<f64> {
    let base = 1.0 - 2.0 * p * t + q * t * t;
    if !(base > 0.0) {
        return Err(Error::Domain(format!("1 - 2pt + qt^2 = {base} is not positive")));
    }
    Ok(base.powf(-0.5))
}
