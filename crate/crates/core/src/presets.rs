//! Fixed seeds and reference points for the bundled experiments.
//!
//! The seeds were chosen by scanning candidate draws for datasets that show
//! each phenomenon clearly at 200 starts; changing any optimizer setting may
//! change which seeds qualify.

use crate::dgp::{simulate_het, simulate_probit, DgpConfig, SimulatedDataset};
use crate::error::Result;
use crate::harness::MultiStartConfig;
use crate::model::ParamVector;
use crate::optimize::OptimizerSpec;

/// Seed of the bundled heteroskedastic dataset (`het-paper` shape).
pub const HET_DATA_SEED: u64 = 931;
/// Seed of the bundled plain probit dataset (`probit-paper` shape).
pub const PROBIT_DATA_SEED: u64 = 0;
/// Seed for start sampling in the bundled multi-start experiments.
pub const MULTISTART_SEED: u64 = 1;
/// Starts per method in the bundled multi-start experiments.
pub const MULTISTART_RUNS: usize = 200;

/// Published estimates for the abortion-attitudes survey data (eight choice
/// and six variance coefficients).
pub const SURVEY_BETA: [f64; 8] = [-0.07, -0.15, -0.13, 0.05, -0.22, -0.79, 0.12, 0.51];
pub const SURVEY_GAMMA: [f64; 6] = [-0.22, -0.48, 0.22, -0.30, 0.68, 0.63];
/// ℓ/n at the published estimates on the 1295-row survey sample.
pub const SURVEY_NORMALIZED_VALUE: f64 = -0.59383;

pub fn het_dataset() -> Result<SimulatedDataset> {
    simulate_het(&DgpConfig::het_paper(HET_DATA_SEED))
}

pub fn probit_dataset() -> Result<SimulatedDataset> {
    simulate_probit(&DgpConfig::probit_paper(PROBIT_DATA_SEED))
}

pub fn survey_reference() -> ParamVector {
    ParamVector::from_slices(&SURVEY_BETA, &SURVEY_GAMMA)
}

/// BFGS multi-start scored against the dataset's model parameters.
pub fn bfgs_multistart(sim: &SimulatedDataset) -> MultiStartConfig {
    MultiStartConfig::new(
        MULTISTART_RUNS,
        MULTISTART_SEED,
        vec![OptimizerSpec::bfgs()],
        sim.model_params(),
    )
}
