//! Serialized outputs of the commands, their CSV layouts and JSON schemas.

use std::fmt::Write as _;
use std::path::Path;

use schemars::{schema_for, JsonSchema, Schema};
use serde::{Deserialize, Serialize};

use crate::dgp::DgpConfig;
use crate::error::{Error, Result};
use crate::harness::{Comparison, LogHistogram, MultiStartReport, ProfileGrid, TwoStageFit};
use crate::model::ParamVector;
use crate::optimize::{OptimResult, OptimizerSpec};

/// Written next to a simulated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SimulateSidecar {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub config: DgpConfig,
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    /// Model parameters used to generate the outcomes.
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub crossover: f64,
    pub resamples_used: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct FitOutput {
    pub spec: OptimizerSpec,
    pub start: ParamVector,
    /// The returned estimate; the better stage when `two_stage` is present.
    pub result: OptimResult,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub normalized: f64,
    pub benchmark_normalized: f64,
    pub plateau: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_stage: Option<TwoStageFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ProfileSidecar {
    pub index_pair: (usize, usize),
    pub base: ParamVector,
    pub base_value: f64,
    pub range1: (f64, f64),
    pub range2: (f64, f64),
    pub resolution: usize,
    pub clip_floor: f64,
    pub clipped_cells: usize,
    /// Extremes over unclipped cells; absent when every cell is clipped.
    pub value_min: Option<f64>,
    pub value_max: Option<f64>,
    /// `(value_max − value_min) / n`.
    pub normalized_range: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct TransformSidecar {
    /// Transformed parameters.
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub original: ParamVector,
    pub value_original: f64,
    pub value_transformed: f64,
    pub abs_difference: f64,
    pub tolerance: f64,
    pub check_passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct BenchmarkPoint {
    pub params: ParamVector,
    pub value: f64,
    pub normalized: f64,
    pub degenerate: bool,
    pub plateau_approximation: f64,
    /// Some variance covariate is negative, outside the approximation's
    /// assumptions.
    pub negative_z: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct BenchmarkOutput {
    pub n: usize,
    pub benchmark_value: f64,
    pub benchmark_normalized: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<BenchmarkPoint>,
}

/// Every JSON document the CLI writes, keyed by its schema file stem.
pub fn schemas() -> Vec<(&'static str, Schema)> {
    vec![
        ("simulate_sidecar", schema_for!(SimulateSidecar)),
        ("fit", schema_for!(FitOutput)),
        ("multistart_report", schema_for!(MultiStartReport)),
        ("compare_report", schema_for!(Comparison)),
        ("profile_sidecar", schema_for!(ProfileSidecar)),
        ("transform_sidecar", schema_for!(TransformSidecar)),
        ("benchmark", schema_for!(BenchmarkOutput)),
        ("experiment_config", schema_for!(super::config::ExperimentConfigFile)),
    ]
}

/// `bin_left,bin_right,count` rows: the `[0, 1e-12)` underflow bin, the log
/// bins, then (when `with_better`) a `better_than_reference` row.
pub fn histogram_csv(h: &LogHistogram, with_better: bool) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    writeln!(out, "0,{},{}", crate::harness::histogram::UNDERFLOW_FLOOR, h.underflow).unwrap();
    for b in &h.bins {
        writeln!(out, "{},{},{}", b.left, b.right, b.count).unwrap();
    }
    if with_better {
        writeln!(out, "better_than_reference,,{}", h.better_than_reference).unwrap();
    }
    out
}

/// Sum of the `count` column of a histogram CSV.
pub fn histogram_csv_total(text: &str) -> Result<usize> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut total = 0;
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::InvalidData(e.to_string()))?;
        total += rec[2]
            .parse::<usize>()
            .map_err(|e| Error::InvalidData(e.to_string()))?;
    }
    Ok(total)
}

/// The grid as a matrix: the header row holds the second axis, each later
/// row starts with its first-axis value. Clipped cells read `clipped`.
pub fn profile_csv(g: &ProfileGrid) -> String {
    let mut out = String::from("axis");
    for v in &g.axis2 {
        write!(out, ",{v}").unwrap();
    }
    out.push('\n');
    for ((a, row), mask) in g.axis1.iter().zip(&g.values).zip(&g.clipped) {
        write!(out, "{a}").unwrap();
        for (v, &c) in row.iter().zip(mask) {
            if c {
                out.push_str(",clipped");
            } else {
                write!(out, ",{v}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

/// Parsed [`profile_csv`] output: axes and cells, `None` where clipped.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub axis1: Vec<f64>,
    pub axis2: Vec<f64>,
    pub cells: Vec<Vec<Option<f64>>>,
}

pub fn parse_profile_csv(text: &str, path: &Path) -> Result<ProfileTable> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line: line as u64,
        message,
    };
    let num = |line: usize, s: &str| s.trim().parse::<f64>().map_err(|_| err(line, format!("`{s}` is not a number")));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let axis2 = header
        .split(',')
        .skip(1)
        .map(|s| num(1, s))
        .collect::<Result<Vec<_>>>()?;
    let mut axis1 = Vec::new();
    let mut cells = Vec::new();
    for (i, line) in lines.enumerate() {
        let no = i + 2;
        let mut fields = line.split(',');
        axis1.push(num(no, fields.next().unwrap_or(""))?);
        let row = fields
            .map(|s| if s == "clipped" { Ok(None) } else { num(no, s).map(Some) })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != axis2.len() {
            return Err(err(no, format!("expected {} cells, found {}", axis2.len(), row.len())));
        }
        cells.push(row);
    }
    Ok(ProfileTable { axis1, axis2, cells })
}
