//! Standard normal log-CDF and inverse Mills ratio, stable in both tails.

use std::f64::consts::SQRT_2;

/// ½·ln(2π)
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Below this argument `erfc` would underflow, so the asymptotic series takes over.
const ASYMPTOTIC_CUTOFF: f64 = -37.0;

/// Standard normal density φ(a).
#[inline]
pub fn pdf(a: f64) -> f64 {
    (-0.5 * a * a - HALF_LN_2PI).exp()
}

/// Standard normal CDF Φ(a).
#[inline]
pub fn cdf(a: f64) -> f64 {
    0.5 * libm::erfc(-a / SQRT_2)
}

/// Partial sum of the asymptotic Mills-ratio series
/// 1 − 1/a² + 3/a⁴ − 15/a⁶ + …, accurate to ~1e-15 for a ≤ −37.
#[inline]
fn tail_series(a: f64) -> f64 {
    let r = 1.0 / (a * a);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=6 {
        term *= -((2 * k - 1) as f64) * r;
        sum += term;
    }
    sum
}

/// ln Φ(a).
///
/// Uses `erfc` directly in the left tail, `ln_1p` of the complement on the
/// right, and the asymptotic expansion once `erfc` would underflow, so
/// `log_cdf(-40.0)` is finite. Only `a = -∞` (or an overflowing `a²`) yields
/// `-∞`.
pub fn log_cdf(a: f64) -> f64 {
    if a.is_nan() {
        return f64::NAN;
    }
    if a < ASYMPTOTIC_CUTOFF {
        -0.5 * a * a - (-a).ln() - HALF_LN_2PI + tail_series(a).ln()
    } else if a < -1.0 {
        (0.5 * libm::erfc(-a / SQRT_2)).ln()
    } else {
        (-0.5 * libm::erfc(a / SQRT_2)).ln_1p()
    }
}

/// Inverse Mills ratio φ(a)/Φ(a).
///
/// Behaves like `-a` as `a → -∞` and decays like φ(a) as `a → +∞`.
pub fn inverse_mills(a: f64) -> f64 {
    if a < ASYMPTOTIC_CUTOFF {
        -a / tail_series(a)
    } else {
        (-0.5 * a * a - HALF_LN_2PI - log_cdf(a)).exp()
    }
}
