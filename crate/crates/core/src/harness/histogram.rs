//! Decadic log-scale histograms with a separate bar for negative values.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

/// Non-negative values below this land in the underflow bin `[0, floor)`.
pub const UNDERFLOW_FLOOR: f64 = 1e-12;

/// Bin width in log10 units for Euclidean distances.
pub const DISTANCE_LOG10_WIDTH: f64 = 0.05;
/// Bin width in log10 units for normalized value gaps.
pub const VALUE_GAP_LOG10_WIDTH: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct HistBin {
    pub left: f64,
    pub right: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct LogHistogram {
    pub log10_width: f64,
    /// Count of values in `[0, UNDERFLOW_FLOOR)`.
    pub underflow: usize,
    /// Contiguous bins `[10^(k·w), 10^((k+1)·w))`.
    pub bins: Vec<HistBin>,
    /// Count of strictly negative values, drawn as a separate bar.
    pub better_than_reference: usize,
}

fn edge(k: i64, w: f64) -> f64 {
    10f64.powf(k as f64 * w)
}

/// Index `k` with `10^(k·w) <= v < 10^((k+1)·w)`, robust to rounding in log10.
fn bin_index(v: f64, w: f64) -> i64 {
    let mut k = (v.log10().min(308.0) / w).floor() as i64;
    while v < edge(k, w) {
        k -= 1;
    }
    while v >= edge(k + 1, w) && edge(k + 1, w).is_finite() {
        k += 1;
    }
    k
}

impl LogHistogram {
    pub fn build(values: &[f64], log10_width: f64) -> Self {
        Self::build_on(values, log10_width, None)
    }

    /// Builds on the union of the data's bin range and `span`, so that two
    /// histograms can share their horizontal axis.
    pub fn build_on(values: &[f64], log10_width: f64, span: Option<(i64, i64)>) -> Self {
        let mut underflow = 0;
        let mut negative = 0;
        let mut ks = Vec::with_capacity(values.len());
        for &v in values {
            if v < 0.0 {
                negative += 1;
            } else if v < UNDERFLOW_FLOOR {
                underflow += 1;
            } else {
                ks.push(bin_index(v.min(f64::MAX), log10_width));
            }
        }
        let data_span = ks
            .iter()
            .fold(None, |acc: Option<(i64, i64)>, &k| match acc {
                None => Some((k, k)),
                Some((lo, hi)) => Some((lo.min(k), hi.max(k))),
            });
        let range = match (data_span, span) {
            (Some((a, b)), Some((c, d))) => Some((a.min(c), b.max(d))),
            (x, y) => x.or(y),
        };
        let bins = match range {
            None => Vec::new(),
            Some((lo, hi)) => {
                let mut bins: Vec<HistBin> = (lo..=hi)
                    .map(|k| HistBin {
                        left: edge(k, log10_width),
                        right: edge(k + 1, log10_width),
                        count: 0,
                    })
                    .collect();
                for k in ks {
                    bins[(k - lo) as usize].count += 1;
                }
                bins
            }
        };
        Self {
            log10_width,
            underflow,
            bins,
            better_than_reference: negative,
        }
    }

    /// Bin index range `(k_lo, k_hi)`, if any bin exists.
    pub fn span(&self) -> Option<(i64, i64)> {
        let first = self.bins.first()?;
        let last = self.bins.last()?;
        Some((
            bin_index(first.left, self.log10_width),
            bin_index(last.left, self.log10_width),
        ))
    }

    /// Every counted value, including underflow and the negative bar.
    pub fn total(&self) -> usize {
        self.underflow + self.better_than_reference + self.bins.iter().map(|b| b.count).sum::<usize>()
    }

    pub fn max_count(&self) -> usize {
        self.bins
            .iter()
            .map(|b| b.count)
            .chain([self.underflow, self.better_than_reference])
            .max()
            .unwrap_or(0)
    }
}

/// Five-number summary, using linear interpolation between order statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let q = |p: f64| {
            let h = p * (v.len() - 1) as f64;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            v[lo] + (h - lo as f64) * (v[hi] - v[lo])
        };
        Some(Self {
            min: v[0],
            q25: q(0.25),
            median: q(0.5),
            q75: q(0.75),
            max: v[v.len() - 1],
        })
    }
}
