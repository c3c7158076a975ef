use ndarray::{Array1, Array2, ArrayView1};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary outcomes with a choice-model design `x` and a variance-model design `z`.
///
/// A dataset with zero `z` columns is the plain probit model.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: Array1<u8>,
    x: Array2<f64>,
    z: Array2<f64>,
}

impl Dataset {
    pub fn new(y: Array1<u8>, x: Array2<f64>, z: Array2<f64>) -> Result<Self> {
        let n = y.len();
        if n == 0 {
            return Err(Error::InvalidData("at least one observation is required".into()));
        }
        if x.nrows() != n {
            return Err(Error::DimensionMismatch {
                what: "rows of x",
                expected: n,
                found: x.nrows(),
            });
        }
        if z.nrows() != n {
            return Err(Error::DimensionMismatch {
                what: "rows of z",
                expected: n,
                found: z.nrows(),
            });
        }
        if x.ncols() == 0 {
            return Err(Error::InvalidData("x must have at least one column".into()));
        }
        if let Some(i) = y.iter().position(|&v| v > 1) {
            return Err(Error::InvalidData(format!(
                "outcome {} at row {i} is not 0 or 1",
                y[i]
            )));
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("x"));
        }
        if !z.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("z"));
        }
        Ok(Self { y, x, z })
    }

    /// Plain probit data: `z` has no columns.
    pub fn probit(y: Array1<u8>, x: Array2<f64>) -> Result<Self> {
        let n = y.len();
        Self::new(y, x, Array2::zeros((n, 0)))
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn k1(&self) -> usize {
        self.x.ncols()
    }

    pub fn k2(&self) -> usize {
        self.z.ncols()
    }

    pub fn dim(&self) -> usize {
        self.k1() + self.k2()
    }

    pub fn y(&self) -> &Array1<u8> {
        &self.y
    }

    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    pub fn z(&self) -> &Array2<f64> {
        &self.z
    }

    pub fn x_row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.x.row(i)
    }

    pub fn z_row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.z.row(i)
    }

    /// Checks that `p` has the shape this dataset expects and is finite.
    pub fn check_params(&self, p: &ParamVector) -> Result<()> {
        if p.beta.len() != self.k1() {
            return Err(Error::DimensionMismatch {
                what: "beta",
                expected: self.k1(),
                found: p.beta.len(),
            });
        }
        if p.gamma.len() != self.k2() {
            return Err(Error::DimensionMismatch {
                what: "gamma",
                expected: self.k2(),
                found: p.gamma.len(),
            });
        }
        if !p.is_finite() {
            return Err(Error::NonFinite("parameter vector"));
        }
        Ok(())
    }
}

/// A point (β, γ) in parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ParamVector {
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl ParamVector {
    pub fn new(beta: Vec<f64>, gamma: Vec<f64>) -> Self {
        Self { beta, gamma }
    }

    pub fn from_slices(beta: &[f64], gamma: &[f64]) -> Self {
        Self::new(beta.to_vec(), gamma.to_vec())
    }

    pub fn zeros(k1: usize, k2: usize) -> Self {
        Self::new(vec![0.0; k1], vec![0.0; k2])
    }

    /// Splits a concatenated `(β, γ)` vector after the first `k1` entries.
    pub fn from_flat(flat: &[f64], k1: usize) -> Self {
        Self::from_slices(&flat[..k1], &flat[k1..])
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.beta.iter().chain(self.gamma.iter()).copied().collect()
    }

    pub fn dim(&self) -> usize {
        self.beta.len() + self.gamma.len()
    }

    pub fn is_finite(&self) -> bool {
        self.beta.iter().chain(self.gamma.iter()).all(|v| v.is_finite())
    }

    /// Euclidean distance in the concatenated parameter space.
    pub fn distance(&self, other: &ParamVector) -> f64 {
        self.beta
            .iter()
            .chain(self.gamma.iter())
            .zip(other.beta.iter().chain(other.gamma.iter()))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}
