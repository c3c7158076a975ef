//! Single-linkage clustering of terminal points.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

/// Share of runs a cluster must hold to count as a distinct outcome.
pub const MAJOR_CLUSTER_SHARE: f64 = 0.05;

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn within(a: &[f64], b: &[f64], radius: f64) -> bool {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() <= radius * radius
}

/// Labels points so that any two within `radius` share a label (transitively).
/// Labels are numbered in order of first appearance.
pub fn cluster_labels(points: &[Vec<f64>], radius: f64) -> Vec<usize> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if within(&points[i], &points[j], radius) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut label_of_root = vec![usize::MAX; n];
    let mut next = 0;
    (0..n)
        .map(|i| {
            let r = find(&mut parent, i);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = next;
                next += 1;
            }
            label_of_root[r]
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Cluster {
    pub size: usize,
    /// Highest objective value among members.
    pub best_value: f64,
    /// Member attaining `best_value`.
    pub representative: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Stability {
    pub num_runs: usize,
    pub radius: f64,
    /// Largest first; ties keep order of first appearance.
    pub clusters: Vec<Cluster>,
    /// Clusters holding at least 5% of runs.
    pub major_clusters: usize,
    /// More than one major cluster: the terminal estimates are not stable.
    pub warning: bool,
}

impl Stability {
    pub fn from_points(points: &[Vec<f64>], values: &[f64], radius: f64) -> Self {
        let labels = cluster_labels(points, radius);
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut clusters: Vec<Cluster> = (0..count)
            .map(|_| Cluster {
                size: 0,
                best_value: f64::NEG_INFINITY,
                representative: Vec::new(),
            })
            .collect();
        for ((label, p), &v) in labels.iter().zip(points).zip(values) {
            let c = &mut clusters[*label];
            c.size += 1;
            if c.representative.is_empty() || v > c.best_value {
                c.best_value = v;
                c.representative = p.clone();
            }
        }
        clusters.sort_by_key(|c| std::cmp::Reverse(c.size));
        let threshold = MAJOR_CLUSTER_SHARE * points.len() as f64;
        let major_clusters = clusters.iter().filter(|c| c.size as f64 >= threshold).count();
        Self {
            num_runs: points.len(),
            radius,
            clusters,
            major_clusters,
            warning: major_clusters > 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_points_form_one_cluster() {
        let pts = vec![vec![1.0, 2.0]; 10];
        let s = Stability::from_points(&pts, &[0.0; 10], 0.5);
        assert_eq!(s.clusters.len(), 1);
        assert!(!s.warning);
    }

    #[test]
    fn separated_groups_raise_the_warning() {
        let mut pts = vec![vec![0.0, 0.0]; 6];
        pts.extend(vec![vec![100.0, 0.0]; 4]);
        let s = Stability::from_points(&pts, &[1.0; 10], 0.5);
        assert_eq!(s.clusters.len(), 2);
        assert_eq!(s.clusters[0].size, 6);
        assert!(s.warning);
    }

    #[test]
    fn single_linkage_chains() {
        let pts: Vec<Vec<f64>> = (0..5).map(|i| vec![0.4 * i as f64]).collect();
        assert_eq!(cluster_labels(&pts, 0.5), vec![0; 5]);
        let pts = vec![vec![0.0], vec![10.0], vec![0.1], vec![10.2]];
        assert_eq!(cluster_labels(&pts, 0.5), vec![0, 1, 0, 1]);
    }

    #[test]
    fn small_outliers_do_not_count_as_major() {
        let mut pts = vec![vec![0.0]; 99];
        pts.push(vec![50.0]);
        let s = Stability::from_points(&pts, &[0.0; 100], 0.5);
        assert_eq!(s.clusters.len(), 2);
        assert_eq!(s.major_clusters, 1);
        assert!(!s.warning);
    }
}
