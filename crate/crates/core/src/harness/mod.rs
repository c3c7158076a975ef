//! Multi-start experiments and the diagnostics built on them.
//!
//! A run draws `num_starts` points uniformly from `[−start_box, start_box]^dim`,
//! hands the same points to every configured method, and scores each
//! terminal estimate against a reference point by Euclidean distance and by
//! the normalized value gap `[ℓ(reference) − ℓ(estimate)] / n`.
//!
//! Start `i` is drawn from ChaCha8 stream `i` of `seed`, and SANN run `i`
//! uses [`run_seed`]`(spec.seed, i)`, so reports do not depend on how runs
//! are scheduled across threads.

pub mod cluster;
pub mod histogram;
mod profile;
mod two_stage;

pub use cluster::{cluster_labels, Cluster, Stability};
pub use histogram::{HistBin, LogHistogram, Quantiles};
pub use profile::{profile_grid, ProfileGrid, DEFAULT_CLIP_FLOOR};
pub use two_stage::{two_stage_fit, TwoStageFit};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Uniform};
use rayon::prelude::*;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use crate::dgp::transform_point;
use crate::error::{Error, Result};
use crate::model::{log_likelihood, Dataset, ParamVector};
use crate::optimize::{maximize_likelihood, Method, OptimResult, OptimizerSpec, Termination};

/// Distance from the reference beyond which an estimate counts as far off
/// (10^0.5).
pub const FAR_DISTANCE: f64 = 3.162_277_660_168_379_5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PlateauThresholds {
    /// Allowed distance of ℓ/n from −ln 2.
    #[serde(default = "defaults::delta")]
    pub delta: f64,
    /// Every γ̂ component must exceed this.
    #[serde(default = "defaults::tau")]
    pub tau: f64,
}

impl Default for PlateauThresholds {
    fn default() -> Self {
        Self {
            delta: defaults::delta(),
            tau: defaults::tau(),
        }
    }
}

mod defaults {
    pub fn delta() -> f64 {
        0.05
    }
    pub fn tau() -> f64 {
        2.0
    }
    pub fn start_box() -> f64 {
        5.0
    }
    pub fn cluster_radius() -> f64 {
        0.5
    }
}

/// Plateau test on a terminal estimate: ℓ/n within `delta` of −ln 2 and
/// every γ̂ component above `tau`. Always false without a variance model.
pub fn is_plateau(n: usize, value: f64, gamma: &[f64], th: PlateauThresholds) -> bool {
    if gamma.is_empty() {
        return false;
    }
    let near_benchmark = (value / n as f64 + LN_2).abs() < th.delta;
    let large_gamma = gamma.iter().all(|&g| g > th.tau);
    near_benchmark && large_gamma
}

/// [`is_plateau`] applied to an optimizer result on `d`.
pub fn plateau_detect(d: &Dataset, r: &OptimResult, th: PlateauThresholds) -> bool {
    is_plateau(d.n(), r.value, &r.point[d.k1()..], th)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MultiStartConfig {
    pub num_starts: usize,
    pub start_box: f64,
    pub seed: u64,
    pub methods: Vec<OptimizerSpec>,
    pub reference: ParamVector,
    pub plateau: PlateauThresholds,
    pub cluster_radius: f64,
}

impl MultiStartConfig {
    /// Defaults: box 5, plateau thresholds (0.05, 2), cluster radius 0.5.
    pub fn new(num_starts: usize, seed: u64, methods: Vec<OptimizerSpec>, reference: ParamVector) -> Self {
        Self {
            num_starts,
            start_box: defaults::start_box(),
            seed,
            methods,
            reference,
            plateau: PlateauThresholds::default(),
            cluster_radius: defaults::cluster_radius(),
        }
    }

    pub fn validate(&self, d: &Dataset) -> Result<()> {
        if self.num_starts == 0 {
            return Err(Error::InvalidConfig("num_starts must be at least 1".into()));
        }
        if !(self.start_box > 0.0 && self.start_box.is_finite()) {
            return Err(Error::InvalidConfig("start_box must be positive".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig("at least one method is required".into()));
        }
        if !(self.cluster_radius > 0.0) {
            return Err(Error::InvalidConfig("cluster_radius must be positive".into()));
        }
        for m in &self.methods {
            m.validate()?;
        }
        d.check_params(&self.reference)
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for run `index` of a method whose spec carries `base`.
pub fn run_seed(base: u64, index: usize) -> u64 {
    mix(base ^ mix(index as u64))
}

/// The start points for `cfg`, one ChaCha8 stream per start.
pub fn sample_starts(cfg: &MultiStartConfig, k1: usize, k2: usize) -> Vec<ParamVector> {
    let unif = Uniform::new_inclusive(-cfg.start_box, cfg.start_box).expect("positive box");
    (0..cfg.num_starts)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let flat: Vec<f64> = (0..k1 + k2).map(|_| unif.sample(&mut rng)).collect();
            ParamVector::from_flat(&flat, k1)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct RunRecord {
    pub start: ParamVector,
    pub result: OptimResult,
    /// ‖estimate − reference‖₂.
    pub distance: f64,
    /// [ℓ(reference) − ℓ(estimate)] / n.
    pub value_gap: f64,
    pub better_than_reference: bool,
    pub plateau: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MethodSummary {
    pub distance: Option<Quantiles>,
    pub value_gap: Option<Quantiles>,
    pub better_than_reference: usize,
    pub plateau: usize,
    /// Runs ending at least [`FAR_DISTANCE`] from the reference.
    pub far: usize,
    pub converged: usize,
    pub degenerate: usize,
    pub clusters: usize,
    pub stability_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MethodReport {
    pub spec: OptimizerSpec,
    pub records: Vec<RunRecord>,
    pub distance_hist: LogHistogram,
    pub value_gap_hist: LogHistogram,
    pub summary: MethodSummary,
}

impl MethodReport {
    pub fn method(&self) -> Method {
        self.spec.method
    }

    pub fn stability(&self, radius: f64) -> Stability {
        let points: Vec<Vec<f64>> = self.records.iter().map(|r| r.result.point.clone()).collect();
        let values: Vec<f64> = self.records.iter().map(|r| r.result.value).collect();
        Stability::from_points(&points, &values, radius)
    }

    fn distances(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.distance).collect()
    }

    fn value_gaps(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.value_gap).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MultiStartReport {
    pub n: usize,
    pub num_starts: usize,
    pub seed: u64,
    pub reference: ParamVector,
    pub reference_value: f64,
    pub reference_normalized: f64,
    /// −ln 2.
    pub benchmark_normalized: f64,
    pub methods: Vec<MethodReport>,
}

impl MultiStartReport {
    pub fn method(&self, m: Method) -> Option<&MethodReport> {
        self.methods.iter().find(|r| r.spec.method == m)
    }
}

/// Runs every method from every sampled start.
pub fn run_multistart(d: &Dataset, cfg: &MultiStartConfig) -> Result<MultiStartReport> {
    cfg.validate(d)?;
    let starts = sample_starts(cfg, d.k1(), d.k2());
    run_multistart_from(d, &starts, cfg)
}

/// As [`run_multistart`] with caller-supplied starts (`cfg.num_starts` and
/// `cfg.seed` are ignored for sampling).
pub fn run_multistart_from(
    d: &Dataset,
    starts: &[ParamVector],
    cfg: &MultiStartConfig,
) -> Result<MultiStartReport> {
    cfg.validate(d)?;
    for s in starts {
        d.check_params(s)?;
    }
    let reference_value = log_likelihood(d, &cfg.reference)?.value;
    let n = d.n();

    let per_start: Vec<Vec<RunRecord>> = starts
        .par_iter()
        .enumerate()
        .map(|(i, start)| {
            cfg.methods
                .iter()
                .map(|spec| {
                    let mut spec = spec.clone();
                    spec.seed = run_seed(spec.seed, i);
                    let result = maximize_likelihood(d, &spec, start)?;
                    Ok(score(d, cfg, reference_value, start.clone(), result))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let methods = cfg
        .methods
        .iter()
        .enumerate()
        .map(|(m, spec)| {
            let records: Vec<RunRecord> = per_start.iter().map(|row| row[m].clone()).collect();
            method_report(spec.clone(), records, cfg.cluster_radius, None)
        })
        .collect();

    Ok(MultiStartReport {
        n,
        num_starts: starts.len(),
        seed: cfg.seed,
        reference: cfg.reference.clone(),
        reference_value,
        reference_normalized: reference_value / n as f64,
        benchmark_normalized: -LN_2,
        methods,
    })
}

fn score(
    d: &Dataset,
    cfg: &MultiStartConfig,
    reference_value: f64,
    start: ParamVector,
    result: OptimResult,
) -> RunRecord {
    let estimate = result.params(d.k1());
    let distance = estimate.distance(&cfg.reference);
    let value_gap = (reference_value - result.value) / d.n() as f64;
    let plateau = plateau_detect(d, &result, cfg.plateau);
    RunRecord {
        start,
        result,
        distance,
        value_gap,
        better_than_reference: value_gap < 0.0,
        plateau,
    }
}

type Spans = (Option<(i64, i64)>, Option<(i64, i64)>);

fn method_report(spec: OptimizerSpec, records: Vec<RunRecord>, radius: f64, spans: Option<Spans>) -> MethodReport {
    let (dspan, vspan) = spans.unwrap_or((None, None));
    let distances: Vec<f64> = records.iter().map(|r| r.distance).collect();
    let gaps: Vec<f64> = records.iter().map(|r| r.value_gap).collect();
    let distance_hist = LogHistogram::build_on(&distances, histogram::DISTANCE_LOG10_WIDTH, dspan);
    let value_gap_hist = LogHistogram::build_on(&gaps, histogram::VALUE_GAP_LOG10_WIDTH, vspan);
    let points: Vec<Vec<f64>> = records.iter().map(|r| r.result.point.clone()).collect();
    let values: Vec<f64> = records.iter().map(|r| r.result.value).collect();
    let stability = Stability::from_points(&points, &values, radius);
    let summary = MethodSummary {
        distance: Quantiles::of(&distances),
        value_gap: Quantiles::of(&gaps),
        better_than_reference: records.iter().filter(|r| r.better_than_reference).count(),
        plateau: records.iter().filter(|r| r.plateau).count(),
        far: records.iter().filter(|r| r.distance >= FAR_DISTANCE).count(),
        converged: records
            .iter()
            .filter(|r| r.result.terminated == Termination::Converged)
            .count(),
        degenerate: records
            .iter()
            .filter(|r| r.result.terminated == Termination::Degenerate)
            .count(),
        clusters: stability.clusters.len(),
        stability_warning: stability.warning,
    };
    MethodReport {
        spec,
        records,
        distance_hist,
        value_gap_hist,
        summary,
    }
}

/// Clusters each method's terminal points at `cluster_radius` after a
/// multi-start run.
pub fn stability_check(d: &Dataset, cfg: &MultiStartConfig, cluster_radius: f64) -> Result<Vec<Stability>> {
    if cfg.num_starts < 2 {
        return Err(Error::InvalidConfig(
            "a stability check needs at least two starts".into(),
        ));
    }
    let report = run_multistart(d, cfg)?;
    Ok(report.methods.iter().map(|m| m.stability(cluster_radius)).collect())
}

/// The same experiment on the original data and on its shifted-`z`
/// transformation, with paired starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Comparison {
    pub original: MultiStartReport,
    pub transformed: MultiStartReport,
}

impl Comparison {
    /// Pooled spans so both legs' histograms share their axes.
    fn align(&mut self) {
        let union = |a: Option<(i64, i64)>, b: Option<(i64, i64)>| match (a, b) {
            (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
            (x, y) => x.or(y),
        };
        for m in 0..self.original.methods.len() {
            let (o, t) = (&self.original.methods[m], &self.transformed.methods[m]);
            let dspan = union(o.distance_hist.span(), t.distance_hist.span());
            let vspan = union(o.value_gap_hist.span(), t.value_gap_hist.span());
            for leg in [&mut self.original, &mut self.transformed] {
                let r = &mut leg.methods[m];
                r.distance_hist =
                    LogHistogram::build_on(&r.distances(), histogram::DISTANCE_LOG10_WIDTH, dspan);
                r.value_gap_hist =
                    LogHistogram::build_on(&r.value_gaps(), histogram::VALUE_GAP_LOG10_WIDTH, vspan);
            }
        }
    }
}

/// Runs `cfg` on `d` and on the transformed data, feeding start `i` of the
/// second leg through [`transform_point`] and scoring it against the
/// transformed reference. Distances in each leg are measured in that leg's
/// own coordinates, so they are not directly commensurable.
pub fn compare_transformed(d: &Dataset, cfg: &MultiStartConfig) -> Result<Comparison> {
    if d.k2() == 0 {
        return Err(Error::InvalidData(
            "the transformation comparison needs at least one z column".into(),
        ));
    }
    cfg.validate(d)?;
    let starts = sample_starts(cfg, d.k1(), d.k2());
    let (td, tref) = crate::dgp::transform(d, &cfg.reference)?;
    let tstarts: Vec<ParamVector> = starts.iter().map(transform_point).collect();
    let tcfg = MultiStartConfig {
        reference: tref,
        ..cfg.clone()
    };
    let mut out = Comparison {
        original: run_multistart_from(d, &starts, cfg)?,
        transformed: run_multistart_from(&td, &tstarts, &tcfg)?,
    };
    out.align();
    Ok(out)
}
