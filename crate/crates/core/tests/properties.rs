//! Property tests for the likelihood, the transformation and the generator.

use std::f64::consts::LN_2;

use hetprobit::dgp::{inverse_transform_point, transform, transform_dataset, transform_point};
use hetprobit::model::normal::log_cdf;
use hetprobit::model::{gradient, log_likelihood, plateau_approximation, Dataset, ParamVector};
use ndarray::{Array1, Array2};
use proptest::prelude::*;

/// `n × (1 + k1 − 1)` design with an intercept column.
fn design(n: usize, k: usize, lo: f64, hi: f64) -> impl Strategy<Value = Array2<f64>> {
    prop::collection::vec(lo..hi, n * k).prop_map(move |v| {
        let mut a = Array2::from_shape_vec((n, k), v).unwrap();
        a.column_mut(0).fill(1.0);
        a
    })
}

fn outcomes(n: usize) -> impl Strategy<Value = Array1<u8>> {
    prop::collection::vec(0u8..=1, n).prop_map(Array1::from)
}

fn vector(k: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, k)
}

/// Dataset with continuous `x` and `z`, plus a parameter point.
fn case(n: std::ops::Range<usize>, k1: usize, k2: usize, pbox: f64) -> impl Strategy<Value = (Dataset, ParamVector)> {
    n.prop_flat_map(move |n| {
        (
            outcomes(n),
            design(n, k1, -2.0, 2.0),
            prop::collection::vec(-1.0..1.0f64, n * k2),
            vector(k1, -pbox, pbox),
            vector(k2, -pbox, pbox),
        )
            .prop_map(move |(y, x, z, b, g)| {
                let z = Array2::from_shape_vec((n, k2), z).unwrap();
                (Dataset::new(y, x, z).unwrap(), ParamVector::new(b, g))
            })
    })
}

/// Scales β down so that every index satisfies `|a_i| <= limit`.
fn limit_indices(d: &Dataset, p: &ParamVector, limit: f64) -> ParamVector {
    let a_max = (0..d.n())
        .map(|i| {
            let xb: f64 = d.x_row(i).iter().zip(&p.beta).map(|(a, b)| a * b).sum();
            let zg: f64 = d.z_row(i).iter().zip(&p.gamma).map(|(a, b)| a * b).sum();
            (xb / zg.exp()).abs()
        })
        .fold(0.0, f64::max);
    let scale = if a_max > limit { limit / a_max } else { 1.0 };
    ParamVector::new(p.beta.iter().map(|b| b * scale).collect(), p.gamma.clone())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn log_likelihood_is_never_positive((d, p) in case(1..40, 3, 2, 60.0)) {
        let e = log_likelihood(&d, &p).unwrap();
        prop_assert!(e.value <= 0.0);
        prop_assert_eq!(e.normalized, e.value / d.n() as f64);
    }

    #[test]
    fn flat_point_identity((d, p) in case(1..200, 4, 3, 30.0)) {
        let flat = ParamVector::new(vec![0.0; d.k1()], p.gamma.clone());
        let v = log_likelihood(&d, &flat).unwrap().value;
        prop_assert!((v + d.n() as f64 * LN_2).abs() <= 1e-10);
    }

    #[test]
    fn gradient_matches_central_differences((d, p) in case(5..30, 3, 2, 2.0)) {
        let p = limit_indices(&d, &p, 6.0);
        let g = gradient(&d, &p).unwrap();
        let flat = p.to_flat();
        let h = 1e-5;
        for j in 0..flat.len() {
            let mut up = flat.clone();
            let mut dn = flat.clone();
            up[j] += h;
            dn[j] -= h;
            let fu = log_likelihood(&d, &ParamVector::from_flat(&up, d.k1())).unwrap().value;
            let fd = log_likelihood(&d, &ParamVector::from_flat(&dn, d.k1())).unwrap().value;
            let numeric = (fu - fd) / (2.0 * h);
            let err = (numeric - g[j]).abs();
            prop_assert!(err <= 1e-6 * g[j].abs() + 1e-8, "component {}: analytic {} numeric {}", j, g[j], numeric);
        }
    }

    #[test]
    fn plateau_limit(
        n in 5usize..60,
        seed_rows in prop::collection::vec((0u8..=1, -3.0..3.0f64, -3.0..3.0f64, 0u8..=2, 1.0..3.0f64), 60),
        beta in vector(3, -8.0, 8.0),
    ) {
        // z entries are 0 or at least 1; β is scaled so |x'β| ≤ 50.
        let rows = &seed_rows[..n];
        let y = Array1::from_iter(rows.iter().map(|r| r.0));
        let x = Array2::from_shape_fn((n, 3), |(i, j)| [1.0, rows[i].1, rows[i].2][j]);
        let z = Array2::from_shape_fn((n, 2), |(i, j)| match (rows[i].3, j) {
            (0, _) => 0.0,
            (1, 0) => rows[i].4,
            (1, _) => 0.0,
            _ => rows[i].4,
        });
        let d = Dataset::new(y, x, z).unwrap();
        let xb_max = (0..n)
            .map(|i| d.x_row(i).iter().zip(&beta).map(|(a, b)| a * b).sum::<f64>().abs())
            .fold(0.0, f64::max);
        let scale = if xb_max > 50.0 { 50.0 / xb_max } else { 1.0 };
        let beta: Vec<f64> = beta.iter().map(|b| b * scale).collect();
        let v = log_likelihood(&d, &ParamVector::new(beta.clone(), vec![20.0, 20.0])).unwrap().value;
        let approx = plateau_approximation(&d, &beta).unwrap();
        prop_assert!(!approx.negative_z);
        prop_assert!((v - approx.value).abs() < 1e-6, "{} vs {}", v, approx.value);
    }

    #[test]
    fn transformation_invariance((d, p) in case(1..80, 3, 2, 5.0)) {
        // Over the whole box the two evaluations agree up to rounding, which
        // grows like |ℓ| when indices are large.
        let (td, tp) = transform(&d, &p).unwrap();
        let v0 = log_likelihood(&d, &p).unwrap().value;
        let v1 = log_likelihood(&td, &tp).unwrap().value;
        prop_assert!((v0 - v1).abs() <= 1e-9f64.max(1e-12 * v0.abs()), "{} vs {}", v0, v1);

        // With moderate indices the absolute difference is below 1e-9.
        let p = limit_indices(&d, &p, 30.0);
        let (td, tp) = transform(&d, &p).unwrap();
        let v0 = log_likelihood(&d, &p).unwrap().value;
        let v1 = log_likelihood(&td, &tp).unwrap().value;
        prop_assert!((v0 - v1).abs() < 1e-9, "{} vs {}", v0, v1);
        // Pointwise, not just at the point the data was transformed for.
        let other = ParamVector::new(p.beta.iter().map(|b| b * 0.5).collect(), p.gamma.iter().map(|g| g + 1.0).collect());
        let w0 = log_likelihood(&d, &other).unwrap().value;
        let w1 = log_likelihood(&transform_dataset(&d).unwrap(), &transform_point(&other)).unwrap().value;
        prop_assert!((w0 - w1).abs() < 1e-9);
    }

    #[test]
    fn transform_point_round_trips(beta in vector(4, -5.0, 5.0), gamma in vector(3, -5.0, 5.0)) {
        let p = ParamVector::new(beta, gamma);
        let back = inverse_transform_point(&transform_point(&p));
        prop_assert_eq!(&back.gamma, &p.gamma);
        for (a, b) in back.beta.iter().zip(&p.beta) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn log_cdf_is_increasing(a in -1e4..1e2f64, step in 1e-6..10.0f64) {
        prop_assert!(log_cdf(a) < log_cdf(a + step) || log_cdf(a + step) == 0.0);
    }
}
