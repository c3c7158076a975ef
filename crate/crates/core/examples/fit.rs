//! Fits the bundled probit dataset from the origin with each optimizer.
//!
//!     cargo run --release --example fit

use hetprobit::model::{log_likelihood, ParamVector};
use hetprobit::optimize::{maximize_likelihood, OptimizerSpec};
use hetprobit::presets;

fn main() -> hetprobit::Result<()> {
    let sim = presets::probit_dataset()?;
    let d = &sim.data;
    let truth = sim.model_params();
    println!("ℓ at the model parameters: {:.4}", log_likelihood(d, &truth)?.value);

    let start = ParamVector::zeros(d.k1(), 0);
    for spec in [OptimizerSpec::bfgs(), OptimizerSpec::cg(), OptimizerSpec::nelder_mead(), OptimizerSpec::sann(7)] {
        let r = maximize_likelihood(d, &spec, &start)?;
        println!(
            "{:<12} ℓ = {:.4}  {:?} after {} iterations, {} evaluations, distance to β0 {:.3}",
            spec.method.label(),
            r.value,
            r.terminated,
            r.iterations,
            r.evals,
            r.params(d.k1()).distance(&truth),
        );
    }
    Ok(())
}
