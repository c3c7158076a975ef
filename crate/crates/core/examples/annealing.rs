//! Simulated annealing on the heteroskedastic dataset: how the best-so-far
//! value grows with the evaluation budget.
//!
//!     cargo run --release --example annealing

use hetprobit::model::ParamVector;
use hetprobit::optimize::{maximize_likelihood, OptimizerSpec};
use hetprobit::presets;

fn main() -> hetprobit::Result<()> {
    let sim = presets::het_dataset()?;
    let n = sim.data.n() as f64;
    let mut spec = OptimizerSpec::sann(42).with_trace();
    spec.sann.eval_budget = 50_000;
    let r = maximize_likelihood(&sim.data, &spec, &ParamVector::zeros(3, 2))?;
    let trace = r.trace.as_deref().unwrap_or_default();
    for checkpoint in [100, 1_000, 10_000, 50_000] {
        if let Some((_, best)) = trace.iter().take_while(|(j, _)| *j <= checkpoint).last() {
            println!("after {checkpoint:>6} steps: best ℓ/n {:.4}", best / n);
        }
    }
    println!("final point {:.3?}", r.point);
    Ok(())
}
