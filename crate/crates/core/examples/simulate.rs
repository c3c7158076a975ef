//! Draws the bundled heteroskedastic and probit datasets and prints what
//! the generator recorded about them.
//!
//!     cargo run --release --example simulate [seed]

use hetprobit::dgp::{simulate, DgpConfig};
use hetprobit::model::benchmark_value;

fn main() -> hetprobit::Result<()> {
    let seed = std::env::args().nth(1).map_or(931, |s| s.parse().expect("seed must be an integer"));
    for cfg in [DgpConfig::het_paper(seed), DgpConfig::probit_paper(seed)] {
        let sim = simulate(&cfg)?;
        let d = &sim.data;
        let ones = d.y().iter().filter(|&&v| v == 1).count();
        println!("n = {}, k1 = {}, k2 = {}", d.n(), d.k1(), d.k2());
        println!("  beta0      {:?}", sim.beta0);
        println!("  gamma0     {:?}", sim.gamma0);
        println!("  crossover  {:.3} after {} draw(s)", sim.crossover, sim.resamples_used);
        println!("  y = 1 in   {ones} rows");
        println!("  benchmark  {:.3}", benchmark_value(d));
    }
    Ok(())
}
