//! Compares ℓ/n at a parameter point with the −ln 2 benchmark. Pass a
//! dataset CSV with eight x and six z columns to score the published survey
//! estimates; without one, the bundled simulated dataset is used.
//!
//!     cargo run --release --example benchmark [data.csv]

use std::f64::consts::LN_2;

use hetprobit::cli::data::read_dataset;
use hetprobit::model::log_likelihood;
use hetprobit::presets;

fn main() -> hetprobit::Result<()> {
    let (data, point, label) = match std::env::args().nth(1) {
        Some(path) => (read_dataset(path.as_ref())?, presets::survey_reference(), "published estimates"),
        None => {
            let sim = presets::het_dataset()?;
            let p = sim.model_params();
            (sim.data, p, "model parameters")
        }
    };
    let v = log_likelihood(&data, &point)?.value / data.n() as f64;
    println!("ℓ/n at the {label}: {v:.5}");
    println!("benchmark −ln 2:        {:.5}", -LN_2);
    println!("gap to the benchmark:   {:.5}", v + LN_2);
    Ok(())
}
