use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{log_likelihood_flat, Dataset, ParamVector};

/// Default lower clip for plotted profile values.
pub const DEFAULT_CLIP_FLOOR: f64 = -10_000.0;

/// Log-likelihood over a rectangle in two γ coordinates, all other
/// coordinates held at `base`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ProfileGrid {
    /// γ indices varied along the rows and columns respectively.
    pub index_pair: (usize, usize),
    pub base: ParamVector,
    pub axis1: Vec<f64>,
    pub axis2: Vec<f64>,
    /// `values[i][j]` is ℓ at `γ[j1] = axis1[i]`, `γ[j2] = axis2[j]`, clipped
    /// to `clip_floor`.
    pub values: Vec<Vec<f64>>,
    pub clip_floor: f64,
    /// Cells whose true value fell below `clip_floor`.
    pub clipped: Vec<Vec<bool>>,
}

impl ProfileGrid {
    /// `(min, max)` over unclipped cells with both axis values in the given
    /// ranges.
    pub fn value_range(&self, r1: (f64, f64), r2: (f64, f64)) -> Option<(f64, f64)> {
        let mut out: Option<(f64, f64)> = None;
        for (i, &a) in self.axis1.iter().enumerate() {
            if a < r1.0 || a > r1.1 {
                continue;
            }
            for (j, &b) in self.axis2.iter().enumerate() {
                if b < r2.0 || b > r2.1 || self.clipped[i][j] {
                    continue;
                }
                let v = self.values[i][j];
                out = Some(out.map_or((v, v), |(lo, hi)| (lo.min(v), hi.max(v))));
            }
        }
        out
    }

    pub fn clipped_count(&self) -> usize {
        self.clipped.iter().flatten().filter(|&&c| c).count()
    }
}

fn axis(range: (f64, f64), resolution: usize) -> Vec<f64> {
    if resolution == 1 {
        return vec![range.0];
    }
    let step = (range.1 - range.0) / (resolution - 1) as f64;
    (0..resolution)
        .map(|i| if i + 1 == resolution { range.1 } else { range.0 + step * i as f64 })
        .collect()
}

/// Evaluates ℓ on a `resolution × resolution` grid spanning `range1` in
/// `γ[j1]` and `range2` in `γ[j2]`, endpoints included.
pub fn profile_grid(
    d: &Dataset,
    base: &ParamVector,
    j1: usize,
    j2: usize,
    range1: (f64, f64),
    range2: (f64, f64),
    resolution: usize,
    clip_floor: f64,
) -> Result<ProfileGrid> {
    d.check_params(base)?;
    let k2 = d.k2();
    if j1 == j2 || j1 >= k2 || j2 >= k2 {
        return Err(Error::InvalidConfig(format!(
            "profile indices must be distinct γ indices below {k2}, got ({j1}, {j2})"
        )));
    }
    if resolution == 0 {
        return Err(Error::InvalidConfig("profile resolution must be at least 1".into()));
    }
    for r in [range1, range2] {
        if !(r.0.is_finite() && r.1.is_finite() && r.0 <= r.1) {
            return Err(Error::InvalidConfig(format!("bad profile range [{}, {}]", r.0, r.1)));
        }
    }
    let axis1 = axis(range1, resolution);
    let axis2 = axis(range2, resolution);
    let k1 = d.k1();
    let rows: Vec<(Vec<f64>, Vec<bool>)> = {
        use rayon::prelude::*;
        axis1
            .par_iter()
            .map(|&a| {
                let mut flat = base.to_flat();
                flat[k1 + j1] = a;
                axis2
                    .iter()
                    .map(|&b| {
                        flat[k1 + j2] = b;
                        let v = log_likelihood_flat(d, &flat).0;
                        if v < clip_floor {
                            (clip_floor, true)
                        } else {
                            (v, false)
                        }
                    })
                    .unzip()
            })
            .collect()
    };
    let (values, clipped) = rows.into_iter().unzip();
    Ok(ProfileGrid {
        index_pair: (j1, j2),
        base: base.clone(),
        axis1,
        axis2,
        values,
        clip_floor,
        clipped,
    })
}
