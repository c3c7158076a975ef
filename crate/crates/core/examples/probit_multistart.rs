//! The homoskedastic control: every BFGS start on the bundled probit
//! dataset reaches the same maximum.
//!
//!     cargo run --release --example probit_multistart

use hetprobit::harness::run_multistart;
use hetprobit::presets;

fn main() -> hetprobit::Result<()> {
    let sim = presets::probit_dataset()?;
    let report = run_multistart(&sim.data, &presets::bfgs_multistart(&sim))?;
    let bfgs = &report.methods[0];
    let best = bfgs.records.iter().map(|r| r.result.value).fold(f64::NEG_INFINITY, f64::max);
    let worst = bfgs.records.iter().map(|r| r.result.value).fold(f64::INFINITY, f64::min);
    println!("{} starts", report.num_starts);
    println!("better than the model parameters: {}", bfgs.summary.better_than_reference);
    println!("terminal ℓ spans [{worst:.6}, {best:.6}]");
    println!("clusters: {}", bfgs.summary.clusters);
    Ok(())
}
