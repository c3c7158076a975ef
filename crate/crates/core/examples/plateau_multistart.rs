//! Multi-start BFGS on the bundled heteroskedastic dataset. Most runs stall
//! on the plateau near ℓ/n = −ln 2 with large variance coefficients.
//!
//!     cargo run --release --example plateau_multistart

use hetprobit::harness::{run_multistart, FAR_DISTANCE};
use hetprobit::optimize::OptimizerSpec;
use hetprobit::presets;

fn main() -> hetprobit::Result<()> {
    let sim = presets::het_dataset()?;
    let mut cfg = presets::bfgs_multistart(&sim);
    cfg.methods.push(OptimizerSpec::cg());
    let report = run_multistart(&sim.data, &cfg)?;

    println!(
        "reference ℓ/n {:.4}, benchmark {:.4}",
        report.reference_normalized, report.benchmark_normalized
    );
    for m in &report.methods {
        let s = &m.summary;
        println!("{}:", m.method().label());
        println!("  better than reference  {}/{}", s.better_than_reference, report.num_starts);
        println!("  plateau-flagged        {}", s.plateau);
        println!("  distance ≥ {FAR_DISTANCE:.2}        {}", s.far);
        println!("  clusters               {} (warning: {})", s.clusters, s.stability_warning);
        if let Some(q) = &s.value_gap {
            println!("  value gap quartiles    {:.4} {:.4} {:.4}", q.q25, q.median, q.q75);
        }
        for c in m.stability(cfg.cluster_radius).clusters.iter().take(3) {
            let n = (c.best_value / report.n as f64 * 1e4).round() / 1e4;
            println!("    cluster of {:>3}, best ℓ/n {n}", c.size);
        }
    }
    Ok(())
}
