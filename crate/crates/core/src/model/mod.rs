//! Heteroskedastic probit log-likelihood, its gradient, and the plateau
//! benchmarks.
//!
//! The model is `Pr(y = 1) = Φ(x'β / exp(z'γ))`. Every quantity here is a
//! pure function of its inputs.

mod dataset;
pub mod normal;

pub use dataset::{Dataset, ParamVector};

use ndarray::ArrayView1;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// Value returned in place of `-∞` when some term of the log-likelihood
/// cannot be represented.
pub const LOG_LIK_FLOOR: f64 = -1e300;

const MIN_SCALE: f64 = 1e-300;
const MAX_SCALE: f64 = 1e300;

/// True for the floor sentinel, anything below it, and NaN.
#[inline]
pub fn is_degenerate(value: f64) -> bool {
    !(value > LOG_LIK_FLOOR)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct LikelihoodEval {
    pub value: f64,
    pub normalized: f64,
    /// Set when at least one term underflowed and the value was floored.
    pub degenerate: bool,
}

#[inline]
fn dot(row: ArrayView1<'_, f64>, coef: &[f64]) -> f64 {
    row.iter().zip(coef).map(|(a, b)| a * b).sum()
}

/// `exp(z'γ)` clamped to `[1e-300, 1e300]`.
#[inline]
fn scale(d: &Dataset, i: usize, gamma: &[f64]) -> f64 {
    if gamma.is_empty() {
        return 1.0;
    }
    dot(d.z_row(i), gamma).exp().clamp(MIN_SCALE, MAX_SCALE)
}

/// Per-observation contribution `y ln Φ(a) + (1 − y) ln(1 − Φ(a))`.
#[inline]
pub fn log_term(y: u8, a: f64) -> f64 {
    if y == 1 {
        normal::log_cdf(a)
    } else {
        normal::log_cdf(-a)
    }
}

/// Index `aᵢ = xᵢ'β / exp(zᵢ'γ)` for every observation.
pub fn indices(d: &Dataset, beta: &[f64], gamma: &[f64]) -> Vec<f64> {
    (0..d.n())
        .map(|i| dot(d.x_row(i), beta) / scale(d, i, gamma))
        .collect()
}

/// Unchecked evaluation on a concatenated `(β, γ)` slice. Returns the
/// (possibly floored) value and the degeneracy flag.
pub(crate) fn log_likelihood_flat(d: &Dataset, flat: &[f64]) -> (f64, bool) {
    let (beta, gamma) = flat.split_at(d.k1());
    let mut sum = 0.0;
    let mut degenerate = false;
    for i in 0..d.n() {
        let a = dot(d.x_row(i), beta) / scale(d, i, gamma);
        let t = log_term(d.y()[i], a);
        if t.is_finite() {
            sum += t;
        } else {
            degenerate = true;
            sum += LOG_LIK_FLOOR;
        }
    }
    if !(sum > LOG_LIK_FLOOR) {
        return (LOG_LIK_FLOOR, true);
    }
    (sum, degenerate)
}

/// Log-likelihood `ℓ(β, γ | y, X, Z)`.
pub fn log_likelihood(d: &Dataset, p: &ParamVector) -> Result<LikelihoodEval> {
    d.check_params(p)?;
    let (value, degenerate) = log_likelihood_flat(d, &p.to_flat());
    Ok(LikelihoodEval {
        value,
        normalized: value / d.n() as f64,
        degenerate,
    })
}

pub(crate) fn gradient_flat(d: &Dataset, flat: &[f64], out: &mut [f64]) {
    let k1 = d.k1();
    let (beta, gamma) = flat.split_at(k1);
    out.iter_mut().for_each(|g| *g = 0.0);
    let (gb, gg) = out.split_at_mut(k1);
    for i in 0..d.n() {
        let s = scale(d, i, gamma);
        let a = dot(d.x_row(i), beta) / s;
        // φ(a)(y − Φ(a)) / (Φ(a)(1 − Φ(a))) without forming Φ.
        let w = if d.y()[i] == 1 {
            normal::inverse_mills(a)
        } else {
            -normal::inverse_mills(-a)
        };
        let wb = w / s;
        for (g, xv) in gb.iter_mut().zip(d.x_row(i)) {
            *g += wb * xv;
        }
        let wa = w * a;
        for (g, zv) in gg.iter_mut().zip(d.z_row(i)) {
            *g -= wa * zv;
        }
    }
}

/// Analytic gradient `(∂ℓ/∂β, ∂ℓ/∂γ)`, concatenated.
pub fn gradient(d: &Dataset, p: &ParamVector) -> Result<Vec<f64>> {
    d.check_params(p)?;
    let mut out = vec![0.0; d.dim()];
    gradient_flat(d, &p.to_flat(), &mut out);
    Ok(out)
}

/// Large-γ approximation of the log-likelihood.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PlateauApprox {
    pub value: f64,
    /// `z` has a negative entry, so the approximation's premise `Z ≥ 0` fails.
    pub negative_z: bool,
}

/// Probit fit on the rows with `zᵢ = 0`, plus `−ln 2` for every other row.
///
/// This is the level the log-likelihood flattens to once every component of
/// γ is large and positive and `Z ≥ 0`.
pub fn plateau_approximation(d: &Dataset, beta: &[f64]) -> Result<PlateauApprox> {
    if beta.len() != d.k1() {
        return Err(Error::DimensionMismatch {
            what: "beta",
            expected: d.k1(),
            found: beta.len(),
        });
    }
    if !beta.iter().all(|b| b.is_finite()) {
        return Err(Error::NonFinite("beta"));
    }
    let mut value = 0.0;
    let mut nonzero = 0usize;
    for i in 0..d.n() {
        if d.z_row(i).iter().all(|&v| v == 0.0) {
            value += log_term(d.y()[i], dot(d.x_row(i), beta));
        } else {
            nonzero += 1;
        }
    }
    value -= LN_2 * nonzero as f64;
    Ok(PlateauApprox {
        value,
        negative_z: d.z().iter().any(|&v| v < 0.0),
    })
}

/// The `−n ln 2` benchmark: the log-likelihood when every fitted
/// probability is ½.
pub fn benchmark_value(d: &Dataset) -> f64 {
    -(d.n() as f64) * LN_2
}

/// Share of observations whose outcome disagrees with `𝟙(xᵢ'β₀ ≥ 0)`.
pub fn crossover_fraction(d: &Dataset, beta0: &[f64]) -> Result<f64> {
    if beta0.len() != d.k1() {
        return Err(Error::DimensionMismatch {
            what: "beta0",
            expected: d.k1(),
            found: beta0.len(),
        });
    }
    let crossed = (0..d.n())
        .filter(|&i| {
            let predicted = u8::from(dot(d.x_row(i), beta0) >= 0.0);
            predicted != d.y()[i]
        })
        .count();
    Ok(crossed as f64 / d.n() as f64)
}

#[cfg(test)]
mod tests {
    #![allow(clippy::approx_constant)]
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use ndarray::{array, Array2};

    fn small_het() -> Dataset {
        Dataset::new(
            array![1, 0, 1, 0],
            array![[1.0, 0.0], [1.0, 1.0], [1.0, 1.0], [1.0, 0.0]],
            array![[0.0, 1.0], [1.0, 1.0], [0.0, 0.0], [1.0, 0.0]],
        )
        .unwrap()
    }

    #[test]
    fn zero_beta_gives_ln_half_per_row() {
        let d = small_het();
        let e = log_likelihood(&d, &ParamVector::from_slices(&[0.0, 0.0], &[3.0, -7.0])).unwrap();
        assert_relative_eq!(e.value, 4.0 * 0.5f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(e.normalized, -0.693_147_180_559_945_3, max_relative = 1e-15);
        assert!(!e.degenerate);
    }

    #[test]
    fn single_row_probit() {
        let d = Dataset::probit(array![1], array![[1.0]]).unwrap();
        let e = log_likelihood(&d, &ParamVector::from_slices(&[0.0], &[])).unwrap();
        assert_relative_eq!(e.value, -0.693_147_180_559_945_3, max_relative = 1e-15);
    }

    #[test]
    fn dimension_and_finiteness_errors() {
        let d = small_het();
        let err = log_likelihood(&d, &ParamVector::from_slices(&[0.0], &[0.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { what: "beta", .. }));
        let err = gradient(&d, &ParamVector::from_slices(&[0.0, f64::INFINITY], &[0.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
    }

    #[test]
    fn extreme_points_floor_instead_of_nan() {
        let d = small_het();
        // Row 2 has z = 0, so a misfit of -1e200 survives; a² overflows.
        let e = log_likelihood(&d, &ParamVector::from_slices(&[-1e200, 0.0], &[0.0, 0.0])).unwrap();
        assert_eq!(e.value, LOG_LIK_FLOOR);
        assert!(e.degenerate);
        assert!(is_degenerate(e.value));
        // Tiny scales only: still finite thanks to the asymptotic branch.
        let e = log_likelihood(&d, &ParamVector::from_slices(&[-1.0, 0.5], &[-30.0, -30.0])).unwrap();
        assert!(e.value.is_finite() && e.value <= 0.0);
    }

    #[test]
    fn gradient_at_zero_beta_is_closed_form() {
        let d = small_het();
        let gamma = [0.7, -1.3];
        let g = gradient(&d, &ParamVector::from_slices(&[0.0, 0.0], &gamma)).unwrap();
        let c = (2.0 / std::f64::consts::PI).sqrt();
        let mut expect = [0.0; 2];
        for i in 0..d.n() {
            let s = (d.z()[[i, 0]] * gamma[0] + d.z()[[i, 1]] * gamma[1]).exp();
            let sign = 2.0 * d.y()[i] as f64 - 1.0;
            for j in 0..2 {
                expect[j] += c * sign * d.x()[[i, j]] / s;
            }
        }
        assert_relative_eq!(g[0], expect[0], max_relative = 1e-14);
        assert_relative_eq!(g[1], expect[1], max_relative = 1e-14);
        assert_eq!(&g[2..], &[0.0, 0.0]);
    }

    #[test]
    fn symmetric_dataset_has_zero_beta_gradient() {
        // Every (y, x) row is paired with (1 - y, x), so ℓ is even in β.
        let d = Dataset::new(
            array![1, 0, 0, 1],
            array![[0.3, 1.0], [0.3, 1.0], [2.0, -0.5], [2.0, -0.5]],
            array![[1.0], [1.0], [0.0], [0.0]],
        )
        .unwrap();
        let g = gradient(&d, &ParamVector::from_slices(&[0.0, 0.0], &[0.4])).unwrap();
        assert_abs_diff_eq!(g[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn plateau_approximation_all_nonzero_z() {
        let n = 10;
        let d = Dataset::new(
            ndarray::Array1::from_elem(n, 1),
            Array2::from_elem((n, 1), 1.0),
            Array2::from_elem((n, 2), 1.0),
        )
        .unwrap();
        let a = plateau_approximation(&d, &[3.7]).unwrap();
        assert_relative_eq!(a.value, -6.931_471_805_599_453, max_relative = 1e-15);
        assert!(!a.negative_z);
    }

    #[test]
    fn plateau_approximation_flags_negative_z() {
        let d = Dataset::new(array![1], array![[1.0]], array![[-0.5]]).unwrap();
        assert!(plateau_approximation(&d, &[1.0]).unwrap().negative_z);
    }

    #[test]
    fn benchmark_closed_form() {
        let mk = |n: usize| {
            Dataset::probit(ndarray::Array1::zeros(n), Array2::from_elem((n, 1), 1.0)).unwrap()
        };
        assert_relative_eq!(benchmark_value(&mk(1000)), -693.147_180_559_945_3, max_relative = 1e-15);
        assert_relative_eq!(benchmark_value(&mk(1295)), -897.625_598_825_129, max_relative = 1e-14);
        assert_relative_eq!(benchmark_value(&mk(1)), -0.693_147_180_559_945_3, max_relative = 1e-15);
    }

    #[test]
    fn crossover_counts_disagreements() {
        let x = array![[1.0, 2.0], [1.0, -3.0], [1.0, -1.0]];
        let beta = [0.0, 1.0];
        // Indicators: 1, 0, 0.
        let clean = Dataset::probit(array![1, 0, 0], x.clone()).unwrap();
        assert_eq!(crossover_fraction(&clean, &beta).unwrap(), 0.0);
        let flipped = Dataset::probit(array![0, 1, 1], x.clone()).unwrap();
        assert_eq!(crossover_fraction(&flipped, &beta).unwrap(), 1.0);
        // x'β = 0 counts as a predicted 1.
        let edge = Dataset::probit(array![0], array![[0.0, 0.0]]).unwrap();
        assert_eq!(crossover_fraction(&edge, &beta).unwrap(), 1.0);
    }
}
