//! Seeded simulated datasets and the sign-balancing transformation of `z`.
//!
//! # Random streams
//!
//! Every draw comes from `ChaCha8Rng::seed_from_u64(seed)`. Stream 0 produces
//! the covariates `X` and `Z`, row by row. Attempt `k` of the rejection loop
//! (counting from 0) uses stream `k + 1` and draws, in order, β₀ components
//! 2..k1, γ₀, then one disturbance per observation in row order. Equal
//! configurations therefore give bitwise-identical datasets on every
//! platform.
//!
//! # Disturbance scale
//!
//! Disturbances are drawn with *standard deviation* `exp(zᵢ'γ₀)`, the same
//! convention the likelihood in [`crate::model`] uses.

use ndarray::{Array1, Array2};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{crossover_fraction, Dataset, ParamVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum ZKind {
    /// Independent Bernoulli(½) columns.
    #[default]
    BernoulliHalf,
    /// Independent U[0, 1) columns.
    ContinuousNonneg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct DgpConfig {
    #[serde(default = "defaults::n")]
    pub n: usize,
    #[serde(default = "defaults::k1")]
    pub k1: usize,
    #[serde(default = "defaults::k2")]
    pub k2: usize,
    /// Model parameters are drawn from U[−param_box, param_box].
    #[serde(default = "defaults::param_box")]
    pub param_box: f64,
    #[serde(default = "defaults::crossover_lo")]
    pub crossover_lo: f64,
    #[serde(default = "defaults::crossover_hi")]
    pub crossover_hi: f64,
    #[serde(default)]
    pub z_kind: ZKind,
    #[serde(default = "defaults::max_resamples")]
    pub max_resamples: usize,
    pub seed: u64,
    /// Holds γ₀ fixed instead of sampling it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma0: Option<Vec<f64>>,
}

mod defaults {
    pub fn n() -> usize {
        1000
    }
    pub fn k1() -> usize {
        3
    }
    pub fn k2() -> usize {
        2
    }
    pub fn param_box() -> f64 {
        5.0
    }
    pub fn crossover_lo() -> f64 {
        0.20
    }
    pub fn crossover_hi() -> f64 {
        0.30
    }
    pub fn max_resamples() -> usize {
        10_000
    }
}

/// γ₀ of the six-component variance-model variant.
pub const GAMMA6_PRESET: [f64; 6] = [-0.6, 0.84, -0.69, -0.15, -0.16, 0.42];

impl DgpConfig {
    /// 1000 observations, three `x` columns (intercept plus two Bernoulli),
    /// two Bernoulli `z` columns, crossover band [0.20, 0.30].
    pub fn het_paper(seed: u64) -> Self {
        Self {
            n: defaults::n(),
            k1: 3,
            k2: 2,
            param_box: defaults::param_box(),
            crossover_lo: defaults::crossover_lo(),
            crossover_hi: defaults::crossover_hi(),
            z_kind: ZKind::BernoulliHalf,
            max_resamples: defaults::max_resamples(),
            seed,
            gamma0: None,
        }
    }

    /// As [`DgpConfig::het_paper`] with six `z` columns and γ₀ fixed to
    /// [`GAMMA6_PRESET`].
    pub fn het_gamma6(seed: u64) -> Self {
        Self {
            k2: 6,
            gamma0: Some(GAMMA6_PRESET.to_vec()),
            ..Self::het_paper(seed)
        }
    }

    /// Plain probit with five `x` columns and no crossover requirement.
    pub fn probit_paper(seed: u64) -> Self {
        Self {
            k1: 5,
            k2: 0,
            crossover_lo: 0.0,
            crossover_hi: 1.0,
            ..Self::het_paper(seed)
        }
    }

    /// Looks up `het-paper`, `het-gamma6` or `probit-paper`.
    pub fn preset(name: &str, seed: u64) -> Option<Self> {
        match name {
            "het-paper" => Some(Self::het_paper(seed)),
            "het-gamma6" => Some(Self::het_gamma6(seed)),
            "probit-paper" => Some(Self::probit_paper(seed)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.k1 == 0 {
            return bad("k1 must be at least 1".into());
        }
        if !(self.param_box.is_finite() && self.param_box > 0.0) {
            return bad(format!("param_box must be positive, got {}", self.param_box));
        }
        if !(0.0 <= self.crossover_lo
            && self.crossover_lo <= self.crossover_hi
            && self.crossover_hi <= 1.0)
        {
            return bad(format!(
                "crossover band [{}, {}] must satisfy 0 <= lo <= hi <= 1",
                self.crossover_lo, self.crossover_hi
            ));
        }
        if self.max_resamples == 0 {
            return bad("max_resamples must be at least 1".into());
        }
        if let Some(g) = &self.gamma0 {
            if g.len() != self.k2 {
                return Err(Error::DimensionMismatch {
                    what: "gamma0",
                    expected: self.k2,
                    found: g.len(),
                });
            }
            if !g.iter().all(|v| v.is_finite()) {
                return Err(Error::NonFinite("gamma0"));
            }
        }
        Ok(())
    }
}

/// A simulated dataset together with the parameters that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedDataset {
    pub data: Dataset,
    pub beta0: Vec<f64>,
    pub gamma0: Vec<f64>,
    /// Realized crossover fraction at β₀.
    pub crossover: f64,
    /// Number of draws made, including the accepted one.
    pub resamples_used: usize,
}

impl SimulatedDataset {
    pub fn model_params(&self) -> ParamVector {
        ParamVector::from_slices(&self.beta0, &self.gamma0)
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn draw_covariates(cfg: &DgpConfig) -> (Array2<f64>, Array2<f64>) {
    let mut rng = stream(cfg.seed, 0);
    let mut x = Array2::zeros((cfg.n, cfg.k1));
    let mut z = Array2::zeros((cfg.n, cfg.k2));
    for i in 0..cfg.n {
        x[[i, 0]] = 1.0;
        for j in 1..cfg.k1 {
            x[[i, j]] = if rng.random_bool(0.5) { 1.0 } else { 0.0 };
        }
        for j in 0..cfg.k2 {
            z[[i, j]] = match cfg.z_kind {
                ZKind::BernoulliHalf => {
                    if rng.random_bool(0.5) {
                        1.0
                    } else {
                        0.0
                    }
                }
                ZKind::ContinuousNonneg => rng.random::<f64>(),
            };
        }
    }
    (x, z)
}

struct Draw {
    beta0: Vec<f64>,
    gamma0: Vec<f64>,
    y: Array1<u8>,
}

/// One attempt: β₀ (intercept centred), γ₀, and outcomes.
fn draw_attempt(cfg: &DgpConfig, x: &Array2<f64>, z: &Array2<f64>, attempt: usize) -> Draw {
    let mut rng = stream(cfg.seed, attempt as u64 + 1);
    let unif = Uniform::new_inclusive(-cfg.param_box, cfg.param_box).expect("validated box");

    let mut beta0 = vec![0.0; cfg.k1];
    for b in beta0.iter_mut().skip(1) {
        *b = unif.sample(&mut rng);
    }
    let gamma0 = match &cfg.gamma0 {
        Some(g) => g.clone(),
        None => (0..cfg.k2).map(|_| unif.sample(&mut rng)).collect(),
    };

    // Intercept chosen so that the sample mean of xᵢ'β₀ is exactly zero.
    let n = cfg.n as f64;
    let rest_mean: f64 = (0..cfg.n)
        .map(|i| (1..cfg.k1).map(|j| x[[i, j]] * beta0[j]).sum::<f64>())
        .sum::<f64>()
        / n;
    beta0[0] = -rest_mean;

    let y = (0..cfg.n)
        .map(|i| {
            let index: f64 = x.row(i).iter().zip(&beta0).map(|(a, b)| a * b).sum();
            let log_sd: f64 = z.row(i).iter().zip(&gamma0).map(|(a, b)| a * b).sum();
            let eps: f64 = StandardNormal.sample(&mut rng);
            u8::from(index + log_sd.exp() * eps >= 0.0)
        })
        .collect();
    Draw { beta0, gamma0, y }
}

/// Heteroskedastic draw, redrawn until the crossover fraction falls inside
/// `[crossover_lo, crossover_hi]`.
pub fn simulate_het(cfg: &DgpConfig) -> Result<SimulatedDataset> {
    cfg.validate()?;
    if cfg.k2 == 0 {
        return Err(Error::InvalidConfig(
            "heteroskedastic simulation needs k2 >= 1".into(),
        ));
    }
    let (x, z) = draw_covariates(cfg);
    let mut seen_min = f64::INFINITY;
    let mut seen_max = f64::NEG_INFINITY;
    for attempt in 0..cfg.max_resamples {
        let draw = draw_attempt(cfg, &x, &z, attempt);
        let data = Dataset::new(draw.y, x.clone(), z.clone())?;
        let crossover = crossover_fraction(&data, &draw.beta0)?;
        seen_min = seen_min.min(crossover);
        seen_max = seen_max.max(crossover);
        if (cfg.crossover_lo..=cfg.crossover_hi).contains(&crossover) {
            return Ok(SimulatedDataset {
                data,
                beta0: draw.beta0,
                gamma0: draw.gamma0,
                crossover,
                resamples_used: attempt + 1,
            });
        }
    }
    Err(Error::ResampleCapExceeded {
        lo: cfg.crossover_lo,
        hi: cfg.crossover_hi,
        attempts: cfg.max_resamples,
        seen_min,
        seen_max,
    })
}

/// Plain probit draw with unit-variance disturbances and no crossover
/// requirement.
pub fn simulate_probit(cfg: &DgpConfig) -> Result<SimulatedDataset> {
    cfg.validate()?;
    if cfg.k2 != 0 {
        return Err(Error::InvalidConfig(format!(
            "probit simulation needs k2 = 0, got {}",
            cfg.k2
        )));
    }
    let (x, z) = draw_covariates(cfg);
    let draw = draw_attempt(cfg, &x, &z, 0);
    let data = Dataset::new(draw.y, x, z)?;
    let crossover = crossover_fraction(&data, &draw.beta0)?;
    Ok(SimulatedDataset {
        data,
        beta0: draw.beta0,
        gamma0: draw.gamma0,
        crossover,
        resamples_used: 1,
    })
}

/// Dispatches on `k2`: probit when zero, heteroskedastic otherwise.
pub fn simulate(cfg: &DgpConfig) -> Result<SimulatedDataset> {
    if cfg.k2 == 0 {
        simulate_probit(cfg)
    } else {
        simulate_het(cfg)
    }
}

/// `exp(−½ Σⱼ γⱼ)`, the factor applied to β.
fn beta_scale(gamma: &[f64]) -> f64 {
    (-0.5 * gamma.iter().sum::<f64>()).exp()
}

/// Maps a parameter point to the shifted-`z` coordinates:
/// `(β, γ) ↦ (exp(−½ Σ γⱼ)·β, γ)`.
pub fn transform_point(p: &ParamVector) -> ParamVector {
    let s = beta_scale(&p.gamma);
    ParamVector::new(p.beta.iter().map(|b| s * b).collect(), p.gamma.clone())
}

/// Inverse of [`transform_point`].
pub fn inverse_transform_point(p: &ParamVector) -> ParamVector {
    let s = beta_scale(&p.gamma);
    ParamVector::new(p.beta.iter().map(|b| b / s).collect(), p.gamma.clone())
}

/// Shifts every `zᵢ` by `−½·1`, leaving `y` and `X` untouched.
pub fn transform_dataset(d: &Dataset) -> Result<Dataset> {
    if d.k2() == 0 {
        return Err(Error::InvalidData(
            "the transformation needs at least one z column".into(),
        ));
    }
    Dataset::new(d.y().clone(), d.x().clone(), d.z().mapv(|v| v - 0.5))
}

/// Inverse of [`transform_dataset`].
pub fn inverse_transform_dataset(d: &Dataset) -> Result<Dataset> {
    if d.k2() == 0 {
        return Err(Error::InvalidData(
            "the transformation needs at least one z column".into(),
        ));
    }
    Dataset::new(d.y().clone(), d.x().clone(), d.z().mapv(|v| v + 0.5))
}

/// Transforms a dataset and its reference point together. The
/// log-likelihood of the pair is unchanged.
pub fn transform(d: &Dataset, p0: &ParamVector) -> Result<(Dataset, ParamVector)> {
    d.check_params(p0)?;
    Ok((transform_dataset(d)?, transform_point(p0)))
}
