//! Floating-point values with an extended base-2 exponent.
//!
//! Normalization constants grow like `m!·A^{m/2}` and photon-number
//! probabilities are ratios of such quantities, so intermediate products
//! routinely leave the `f64` range even when the final ratio is of order one.

use std::cmp::Ordering;
use std::ops::{Div, Mul};

/// `mantissa · 2^exp2`, with `mantissa` kept in `[0.5, 1)` in magnitude
/// (or exactly zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledFloat {
    mantissa: f64,
    exp2: i64,
}

/// Splits a finite non-zero `x` into `(m, e)` with `x = m·2^e`, `|m| ∈ [0.5, 1)`.
pub(crate) fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = raw_exp - 1022;
    let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022 << 52));
    (m, e)
}

/// `x · 2^e` without overflowing intermediate powers.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl ScaledFloat {
    pub const ZERO: ScaledFloat = ScaledFloat { mantissa: 0.0, exp2: 0 };
    pub const ONE: ScaledFloat = ScaledFloat { mantissa: 0.5, exp2: 1 };

    pub fn new(mantissa: f64, exp2: i64) -> Self {
        let (m, e) = frexp(mantissa);
        if m == 0.0 {
            return Self::ZERO;
        }
        ScaledFloat { mantissa: m, exp2: e + exp2 }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn signum(&self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    /// Converts back; saturates to `±inf` or `0` outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        ldexp(self.mantissa, self.exp2)
    }

    /// `ln |x|`, `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.mantissa == 0.0 {
            return f64::NEG_INFINITY;
        }
        self.mantissa.abs().ln() + self.exp2 as f64 * std::f64::consts::LN_2
    }

    pub fn abs(&self) -> Self {
        ScaledFloat { mantissa: self.mantissa.abs(), exp2: self.exp2 }
    }

    pub fn sqrt(&self) -> Self {
        if self.mantissa <= 0.0 {
            return ScaledFloat::new(self.mantissa.sqrt(), 0);
        }
        if self.exp2 % 2 == 0 {
            ScaledFloat::new(self.mantissa.sqrt(), self.exp2 / 2)
        } else {
            ScaledFloat::new((2.0 * self.mantissa).sqrt(), (self.exp2 - 1) / 2)
        }
    }

    /// `n!` as a scaled product.
    pub fn factorial(n: u64) -> Self {
        Self::rising(1, n)
    }

    /// `start·(start+1)···(start+count−1)`, the empty product being one.
    pub fn rising(start: u64, count: u64) -> Self {
        let mut acc = ScaledFloat::ONE;
        let mut chunk = 1.0f64;
        for k in start..start + count {
            chunk *= k as f64;
            if chunk > 1e280 {
                acc = acc * ScaledFloat::from_f64(chunk);
                chunk = 1.0;
            }
        }
        acc * ScaledFloat::from_f64(chunk)
    }
}

impl Mul for ScaledFloat {
    type Output = ScaledFloat;

    fn mul(self, rhs: ScaledFloat) -> ScaledFloat {
        ScaledFloat::new(self.mantissa * rhs.mantissa, self.exp2 + rhs.exp2)
    }
}

impl Mul<f64> for ScaledFloat {
    type Output = ScaledFloat;

    fn mul(self, rhs: f64) -> ScaledFloat {
        self * ScaledFloat::from_f64(rhs)
    }
}

impl Div for ScaledFloat {
    type Output = ScaledFloat;

    fn div(self, rhs: ScaledFloat) -> ScaledFloat {
        ScaledFloat::new(self.mantissa / rhs.mantissa, self.exp2 - rhs.exp2)
    }
}

impl PartialOrd for ScaledFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (a, b) = (self.signum(), other.signum());
        if a != b || a == 0.0 {
            return a.partial_cmp(&b);
        }
        let mag = self.exp2.cmp(&other.exp2).then(
            self.mantissa.abs().partial_cmp(&other.mantissa.abs())?,
        );
        Some(if a > 0.0 { mag } else { mag.reverse() })
    }
}

impl From<f64> for ScaledFloat {
    fn from(x: f64) -> Self {
        ScaledFloat::from_f64(x)
    }
}
