//! Profiles ℓ over the two variance coefficients at a plateau estimate and
//! writes the grid as CSV and an SVG heatmap.
//!
//!     cargo run --release --example profile_surface [out-dir]

use std::path::PathBuf;

use hetprobit::cli::{outputs::profile_csv, svg::heatmap};
use hetprobit::harness::{run_multistart, profile_grid, DEFAULT_CLIP_FLOOR};
use hetprobit::presets;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "profile-out".into()));
    let sim = presets::het_dataset()?;
    let report = run_multistart(&sim.data, &presets::bfgs_multistart(&sim))?;
    let stuck = report.methods[0].records.iter().find(|r| r.plateau).ok_or("no plateau run")?;
    let base = stuck.result.params(sim.data.k1());
    println!("plateau estimate: beta {:?}, gamma {:?}", base.beta, base.gamma);

    let grid = profile_grid(&sim.data, &base, 0, 1, (-5.0, 15.0), (-5.0, 15.0), 81, DEFAULT_CLIP_FLOOR)?;
    if let Some((lo, hi)) = grid.value_range((5.0, 15.0), (5.0, 15.0)) {
        println!("ℓ over [5, 15]² stays within [{lo:.3}, {hi:.3}]");
    }
    println!("{} of {} cells fall below {}", grid.clipped_count(), 81 * 81, grid.clip_floor);

    std::fs::create_dir_all(&out)?;
    std::fs::write(out.join("profile.csv"), profile_csv(&grid))?;
    std::fs::write(out.join("profile.svg"), heatmap(&grid, "log-likelihood over (γ1, γ2)"))?;
    println!("wrote {}", out.display());
    Ok(())
}
