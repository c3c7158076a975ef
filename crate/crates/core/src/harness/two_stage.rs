use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::{plateau_detect, PlateauThresholds};
use crate::error::{Error, Result};
use crate::model::{Dataset, ParamVector};
use crate::optimize::{maximize, maximize_likelihood, GammaProfile, OptimResult, OptimizerSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct TwoStageFit {
    pub joint: OptimResult,
    pub joint_plateau: bool,
    /// γ-only refit with β frozen at the joint estimate, run only when the
    /// joint estimate is plateau-flagged. Its `point` is the full `(β, γ)`.
    pub gamma_refit: Option<OptimResult>,
    /// Whichever of the two has the larger log-likelihood.
    pub best: OptimResult,
}

/// Joint fit from `start`; if it lands on the plateau, refits γ alone from
/// γ = 0 with β̂ held fixed and keeps the better result.
pub fn two_stage_fit(
    d: &Dataset,
    spec: &OptimizerSpec,
    start: &ParamVector,
    th: PlateauThresholds,
) -> Result<TwoStageFit> {
    if d.k2() == 0 {
        return Err(Error::InvalidData("a two-stage fit needs at least one z column".into()));
    }
    let joint = maximize_likelihood(d, spec, start)?;
    let joint_plateau = plateau_detect(d, &joint, th);
    if !joint_plateau {
        return Ok(TwoStageFit {
            best: joint.clone(),
            joint,
            joint_plateau,
            gamma_refit: None,
        });
    }
    let k1 = d.k1();
    let beta = joint.point[..k1].to_vec();
    let obj = GammaProfile { data: d, beta: beta.clone() };
    let mut refit = maximize(&obj, spec, &vec![0.0; d.k2()])?;
    refit.point = beta.into_iter().chain(refit.point).collect();
    let best = if refit.value > joint.value { refit.clone() } else { joint.clone() };
    Ok(TwoStageFit {
        joint,
        joint_plateau,
        gamma_refit: Some(refit),
        best,
    })
}
