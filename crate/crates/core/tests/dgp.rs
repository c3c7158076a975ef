//! Simulated datasets against closed-form expectations.

use hetprobit::cli::data::dataset_to_csv;
use hetprobit::dgp::{
    inverse_transform_dataset, simulate, simulate_het, simulate_probit, transform_dataset, DgpConfig, ZKind,
};
use hetprobit::model::normal::cdf;
use hetprobit::model::{crossover_fraction, Dataset};
use hetprobit::Error;

fn index(d: &Dataset, beta: &[f64], i: usize) -> f64 {
    d.x_row(i).iter().zip(beta).map(|(a, b)| a * b).sum()
}

fn scale(d: &Dataset, gamma: &[f64], i: usize) -> f64 {
    d.z_row(i).iter().zip(gamma).map(|(a, b)| a * b).sum::<f64>().exp()
}

#[test]
fn accepted_het_draws_respect_the_band_and_centering() {
    for seed in 0..50 {
        let sim = simulate_het(&DgpConfig::het_paper(seed)).unwrap();
        let d = &sim.data;
        assert!((0.20..=0.30).contains(&sim.crossover), "seed {seed}: {}", sim.crossover);
        assert_eq!(crossover_fraction(d, &sim.beta0).unwrap(), sim.crossover);
        let mean = (0..d.n()).map(|i| index(d, &sim.beta0, i)).sum::<f64>() / d.n() as f64;
        assert!(mean.abs() < 1e-10, "seed {seed}: {mean}");
        assert!(sim.beta0[1..].iter().chain(&sim.gamma0).all(|v| v.abs() <= 5.0));
        assert_eq!((d.n(), d.k1(), d.k2()), (1000, 3, 2));
        assert!(d.x().column(0).iter().all(|&v| v == 1.0));
        assert!(d.x().iter().chain(d.z().iter()).all(|&v| v == 0.0 || v == 1.0));
    }
}

#[test]
fn draws_do_not_depend_on_the_thread_pool() {
    let draw = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| dataset_to_csv(&simulate_het(&DgpConfig::het_paper(17)).unwrap().data))
    };
    let one = draw(1);
    assert_eq!(one, draw(8));
    assert_eq!(one, draw(1));
}

#[test]
fn realized_crossover_matches_its_expectation() {
    // Without the band the draw is unconditioned, so each row crosses over
    // with probability Φ(−|xᵢ'β₀| / exp(zᵢ'γ₀)).
    for seed in 0..20 {
        let cfg = DgpConfig {
            crossover_lo: 0.0,
            crossover_hi: 1.0,
            ..DgpConfig::het_paper(seed)
        };
        let sim = simulate_het(&cfg).unwrap();
        let d = &sim.data;
        let probs: Vec<f64> = (0..d.n())
            .map(|i| {
                let a = index(d, &sim.beta0, i);
                let p = cdf(-a.abs() / scale(d, &sim.gamma0, i));
                // The outcome rule counts a zero index as predicting 1.
                if a == 0.0 { 0.5 } else { p }
            })
            .collect();
        let n = d.n() as f64;
        let expected = probs.iter().sum::<f64>() / n;
        let sd = probs.iter().map(|p| p * (1.0 - p)).sum::<f64>().sqrt() / n;
        assert!(
            (sim.crossover - expected).abs() <= 4.0 * sd,
            "seed {seed}: {} vs {expected} ± {sd}",
            sim.crossover
        );
    }
}

#[test]
fn probit_outcome_share_matches_its_expectation() {
    for seed in 0..20 {
        let sim = simulate_probit(&DgpConfig::probit_paper(seed)).unwrap();
        let d = &sim.data;
        assert_eq!((d.k1(), d.k2()), (5, 0));
        assert!(sim.gamma0.is_empty());
        let probs: Vec<f64> = (0..d.n()).map(|i| cdf(index(d, &sim.beta0, i))).collect();
        let n = d.n() as f64;
        let expected = probs.iter().sum::<f64>() / n;
        let sd = probs.iter().map(|p| p * (1.0 - p)).sum::<f64>().sqrt() / n;
        let share = d.y().iter().map(|&v| f64::from(v)).sum::<f64>() / n;
        assert!((share - expected).abs() <= 4.0 * sd, "seed {seed}: {share} vs {expected} ± {sd}");
    }
}

#[test]
fn continuous_z_stays_in_the_unit_interval() {
    let cfg = DgpConfig { z_kind: ZKind::ContinuousNonneg, ..DgpConfig::het_paper(3) };
    let sim = simulate_het(&cfg).unwrap();
    assert!(sim.data.z().iter().all(|&v| (0.0..1.0).contains(&v)));
    assert!(sim.data.z().iter().any(|&v| v != 0.0 && v != 1.0));
}

#[test]
fn transformed_z_takes_both_signs_and_inverts() {
    let sim = simulate_het(&DgpConfig::het_paper(2)).unwrap();
    let t = transform_dataset(&sim.data).unwrap();
    assert!(t.z().iter().any(|&v| v < 0.0));
    assert!(t.z().iter().any(|&v| v > 0.0));
    assert_eq!(t.y(), sim.data.y());
    assert_eq!(t.x(), sim.data.x());
    let back = inverse_transform_dataset(&t).unwrap();
    for (a, b) in back.z().iter().zip(sim.data.z()) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn same_config_same_bytes_different_seed_different_data() {
    let a = simulate(&DgpConfig::het_paper(5)).unwrap();
    let b = simulate(&DgpConfig::het_paper(5)).unwrap();
    let c = simulate(&DgpConfig::het_paper(6)).unwrap();
    assert_eq!(dataset_to_csv(&a.data), dataset_to_csv(&b.data));
    assert_eq!(a.beta0, b.beta0);
    assert_ne!(dataset_to_csv(&a.data), dataset_to_csv(&c.data));
}

#[test]
fn fixed_gamma_preset_is_used_verbatim() {
    let sim = simulate_het(&DgpConfig::het_gamma6(4)).unwrap();
    assert_eq!(sim.gamma0, hetprobit::dgp::GAMMA6_PRESET.to_vec());
    assert_eq!(sim.data.k2(), 6);
}

#[test]
fn impossible_band_reports_what_it_saw() {
    let cfg = DgpConfig {
        crossover_lo: 0.99,
        crossover_hi: 1.0,
        max_resamples: 5,
        ..DgpConfig::het_paper(1)
    };
    match simulate_het(&cfg) {
        Err(Error::ResampleCapExceeded { attempts, seen_min, seen_max, .. }) => {
            assert_eq!(attempts, 5);
            assert!(seen_min <= seen_max && seen_max < 0.99);
        }
        other => panic!("expected a resample failure, got {other:?}"),
    }
}

#[test]
fn bad_configs_are_rejected() {
    let het = DgpConfig::het_paper(0);
    assert!(simulate_het(&DgpConfig { k2: 0, ..het.clone() }).is_err());
    assert!(simulate_probit(&het).is_err());
    assert!(simulate(&DgpConfig { n: 0, ..het.clone() }).is_err());
    assert!(simulate(&DgpConfig { crossover_lo: 0.4, crossover_hi: 0.3, ..het.clone() }).is_err());
    assert!(simulate(&DgpConfig { max_resamples: 0, ..het }).is_err());
}
