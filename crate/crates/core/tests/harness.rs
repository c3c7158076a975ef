//! Multi-start runner, plateau flag, clustering, profiles and the
//! two-stage refit.

use std::sync::OnceLock;

use hetprobit::dgp::{simulate_het, simulate_probit, transform_point, DgpConfig, SimulatedDataset};
use hetprobit::harness::{
    compare_transformed, is_plateau, profile_grid, run_multistart, run_multistart_from, sample_starts,
    stability_check, two_stage_fit, MultiStartConfig, MultiStartReport, PlateauThresholds, Stability,
    DEFAULT_CLIP_FLOOR,
};
use hetprobit::model::{log_likelihood, ParamVector};
use hetprobit::optimize::{Method, OptimizerSpec};
use hetprobit::presets;

fn small_het(seed: u64) -> SimulatedDataset {
    simulate_het(&DgpConfig { n: 300, ..DgpConfig::het_paper(seed) }).unwrap()
}

fn committed() -> &'static (SimulatedDataset, MultiStartReport) {
    static CELL: OnceLock<(SimulatedDataset, MultiStartReport)> = OnceLock::new();
    CELL.get_or_init(|| {
        let sim = presets::het_dataset().unwrap();
        let report = run_multistart(&sim.data, &presets::bfgs_multistart(&sim)).unwrap();
        (sim, report)
    })
}

fn all_methods() -> Vec<OptimizerSpec> {
    vec![OptimizerSpec::bfgs(), OptimizerSpec::cg(), OptimizerSpec::nelder_mead(), OptimizerSpec::sann(11)]
}

#[test]
fn every_method_sees_every_start_and_histograms_conserve_mass() {
    let sim = small_het(3);
    let cfg = MultiStartConfig::new(12, 5, all_methods(), sim.model_params());
    let report = run_multistart(&sim.data, &cfg).unwrap();
    let starts = sample_starts(&cfg, 3, 2);
    assert_eq!(report.methods.len(), 4);
    for m in &report.methods {
        assert_eq!(m.records.len(), 12);
        for (r, s) in m.records.iter().zip(&starts) {
            assert_eq!(&r.start, s);
            assert!(r.distance >= 0.0);
            assert_eq!(r.better_than_reference, r.value_gap < 0.0);
        }
        assert_eq!(m.distance_hist.total(), 12);
        assert_eq!(m.value_gap_hist.total(), 12);
        assert_eq!(m.value_gap_hist.better_than_reference, m.summary.better_than_reference);
        assert_eq!(m.distance_hist.better_than_reference, 0);
    }
}

#[test]
fn starting_at_the_reference_cannot_lose_value() {
    let sim = small_het(8);
    let reference = sim.model_params();
    let cfg = MultiStartConfig::new(1, 0, all_methods(), reference.clone());
    let report = run_multistart_from(&sim.data, &[reference], &cfg).unwrap();
    for m in &report.methods {
        assert!(m.records[0].value_gap <= 0.0, "{}", m.method());
    }
}

#[test]
fn reference_scored_against_itself_has_zero_gap() {
    let sim = small_het(8);
    let reference = sim.model_params();
    // A gradient tolerance nothing can fail stops BFGS at its start.
    let spec = OptimizerSpec { g_tol: f64::MAX, ..OptimizerSpec::bfgs() };
    let cfg = MultiStartConfig::new(1, 0, vec![spec], reference.clone());
    let report = run_multistart_from(&sim.data, &[reference], &cfg).unwrap();
    let r = &report.methods[0].records[0];
    assert_eq!(r.value_gap, 0.0);
    assert_eq!(r.distance, 0.0);
    assert!(!r.better_than_reference);
}

#[test]
fn reports_repeat_exactly_and_ignore_the_thread_count() {
    let sim = small_het(4);
    let cfg = MultiStartConfig::new(16, 21, vec![OptimizerSpec::bfgs(), OptimizerSpec::sann(2)], sim.model_params());
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| serde_json::to_string(&run_multistart(&sim.data, &cfg).unwrap()).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(1));
    assert_eq!(one, run(8));
}

#[test]
fn plateau_flag_examples() {
    let th = PlateauThresholds::default();
    let n = 1000;
    assert!(is_plateau(n, -0.6930 * n as f64, &[10.0, 10.0], th));
    for v in [-0.693, -0.1, -5.0] {
        assert!(!is_plateau(n, v * n as f64, &[0.1, -0.2], th));
    }
    assert!(!is_plateau(1295, -0.5938 * 1295.0, &[-0.22, -0.48, 0.22, -0.30, 0.68, 0.63], th));
    assert!(!is_plateau(n, -0.6930 * n as f64, &[10.0, 1.9], th));
    assert!(!is_plateau(n, -0.80 * n as f64, &[10.0, 10.0], th));
    let loose = PlateauThresholds { delta: 0.2, tau: 1.0 };
    assert!(is_plateau(n, -0.80 * n as f64, &[10.0, 1.9], loose));
}

#[test]
fn identical_terminal_points_form_one_quiet_cluster() {
    let points = vec![vec![1.0, 2.0, 3.0]; 40];
    let s = Stability::from_points(&points, &vec![-5.0; 40], 0.5);
    assert_eq!(s.clusters.len(), 1);
    assert_eq!(s.clusters[0].size, 40);
    assert!(!s.warning);
}

#[test]
fn two_distant_groups_raise_the_warning() {
    let mut points = vec![vec![0.0, 0.0]; 20];
    points.extend(vec![vec![100.0, 0.0]; 20]);
    let values: Vec<f64> = (0..40).map(|i| -(i as f64)).collect();
    let s = Stability::from_points(&points, &values, 0.5);
    assert_eq!(s.clusters.len(), 2);
    assert_eq!(s.major_clusters, 2);
    assert!(s.warning);
}

#[test]
fn a_small_stray_group_does_not_warn() {
    let mut points = vec![vec![0.0, 0.0]; 99];
    points.push(vec![100.0, 0.0]);
    let s = Stability::from_points(&points, &vec![0.0; 100], 0.5);
    assert_eq!(s.clusters.len(), 2);
    assert_eq!(s.major_clusters, 1);
    assert!(!s.warning);
}

#[test]
fn stability_check_needs_two_starts() {
    let sim = small_het(3);
    let cfg = MultiStartConfig::new(1, 0, vec![OptimizerSpec::bfgs()], sim.model_params());
    assert!(stability_check(&sim.data, &cfg, 0.5).is_err());
}

#[test]
fn committed_probit_dataset_is_stable() {
    let sim = presets::probit_dataset().unwrap();
    let cfg = presets::bfgs_multistart(&sim);
    let s = stability_check(&sim.data, &cfg, 0.5).unwrap();
    assert_eq!(s[0].clusters.len(), 1);
    assert!(!s[0].warning);
}

#[test]
fn committed_het_dataset_warns() {
    let (_, report) = committed();
    let bfgs = report.method(Method::Bfgs).unwrap();
    assert!(bfgs.summary.stability_warning);
    assert!(bfgs.stability(0.5).warning);
}

#[test]
fn profile_cell_at_the_base_matches_the_likelihood() {
    let sim = small_het(6);
    let base = ParamVector::from_slices(&sim.beta0, &[1.0, -2.0]);
    let g = profile_grid(&sim.data, &base, 0, 1, (-3.0, 5.0), (-4.0, 4.0), 9, DEFAULT_CLIP_FLOOR).unwrap();
    // axis1 = −3, −2, …, 5 so 1 sits at index 4; axis2 = −4, …, 4 so −2 at index 2.
    assert_eq!(g.axis1[4], 1.0);
    assert_eq!(g.axis2[2], -2.0);
    assert_eq!(g.values[4][2], log_likelihood(&sim.data, &base).unwrap().value);
}

#[test]
fn profile_mask_marks_exactly_the_cells_below_the_floor() {
    let sim = small_het(6);
    let base = ParamVector::from_slices(&sim.beta0, &[0.0, 0.0]);
    let floor = -400.0;
    let g = profile_grid(&sim.data, &base, 1, 0, (-12.0, 12.0), (-12.0, 12.0), 25, floor).unwrap();
    assert!(g.clipped_count() > 0);
    for i in 0..25 {
        for j in 0..25 {
            let gamma = [g.axis2[j], g.axis1[i]];
            let v = log_likelihood(&sim.data, &ParamVector::from_slices(&sim.beta0, &gamma)).unwrap().value;
            assert_eq!(g.clipped[i][j], v < floor);
            if !g.clipped[i][j] {
                assert_eq!(g.values[i][j], v);
            } else {
                assert_eq!(g.values[i][j], floor);
            }
        }
    }
}

#[test]
fn profile_rejects_repeated_indices() {
    let sim = small_het(6);
    let base = sim.model_params();
    assert!(profile_grid(&sim.data, &base, 1, 1, (0.0, 1.0), (0.0, 1.0), 3, DEFAULT_CLIP_FLOOR).is_err());
    assert!(profile_grid(&sim.data, &base, 0, 2, (0.0, 1.0), (0.0, 1.0), 3, DEFAULT_CLIP_FLOOR).is_err());
}

#[test]
fn comparison_legs_are_paired_and_share_the_reference_value() {
    let sim = small_het(5);
    let cfg = MultiStartConfig::new(10, 3, vec![OptimizerSpec::bfgs()], sim.model_params());
    let c = compare_transformed(&sim.data, &cfg).unwrap();
    assert!((c.original.reference_value - c.transformed.reference_value).abs() < 1e-9);
    let (o, t) = (&c.original.methods[0], &c.transformed.methods[0]);
    for (a, b) in o.records.iter().zip(&t.records) {
        assert_eq!(b.start, transform_point(&a.start));
    }
    assert_eq!(o.distance_hist.span(), t.distance_hist.span());
    assert_eq!(o.value_gap_hist.span(), t.value_gap_hist.span());
    assert_eq!(c, compare_transformed(&sim.data, &cfg).unwrap());
}

#[test]
fn comparison_needs_a_variance_model() {
    let sim = simulate_probit(&DgpConfig { n: 100, ..DgpConfig::probit_paper(1) }).unwrap();
    let cfg = MultiStartConfig::new(2, 3, vec![OptimizerSpec::bfgs()], sim.model_params());
    assert!(compare_transformed(&sim.data, &cfg).is_err());
}

#[test]
fn two_stage_leaves_regular_fits_alone() {
    let sim = small_het(7);
    let th = PlateauThresholds::default();
    let spec = OptimizerSpec::bfgs();
    let start = sim.model_params();
    let fit = two_stage_fit(&sim.data, &spec, &start, th).unwrap();
    assert!(!fit.joint_plateau);
    assert!(fit.gamma_refit.is_none());
    assert_eq!(fit.best, fit.joint);
}

#[test]
fn two_stage_never_ends_below_its_first_stage() {
    let sim = small_het(7);
    let th = PlateauThresholds { delta: 10.0, tau: -100.0 };
    let cfg = MultiStartConfig::new(8, 2, vec![OptimizerSpec::bfgs()], sim.model_params());
    for start in sample_starts(&cfg, 3, 2) {
        let fit = two_stage_fit(&sim.data, &OptimizerSpec::bfgs(), &start, th).unwrap();
        assert!(fit.joint_plateau);
        let refit = fit.gamma_refit.as_ref().unwrap();
        assert_eq!(&refit.point[..3], &fit.joint.point[..3]);
        assert!(fit.best.value >= fit.joint.value);
        assert!(fit.best.value >= refit.value);
    }
}

#[test]
fn two_stage_moves_gamma_off_the_committed_plateau() {
    let (sim, report) = committed();
    let bfgs = report.method(Method::Bfgs).unwrap();
    let stuck = bfgs.records.iter().find(|r| r.plateau).expect("plateau run");
    let fit = two_stage_fit(&sim.data, &OptimizerSpec::bfgs(), &stuck.start, PlateauThresholds::default()).unwrap();
    assert!(fit.joint_plateau);
    let refit = fit.gamma_refit.as_ref().unwrap();
    let moved: f64 = refit.point[3..]
        .iter()
        .zip(&fit.joint.point[3..])
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    assert!(moved >= 1.0, "γ moved by {moved}");
    assert!(fit.best.value >= fit.joint.value);
}
