use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{Objective, OptimizerSpec, Outcome, Problem, Termination, Trace};

/// Simulated annealing with Gaussian proposals and a logarithmic cooling
/// schedule `T_j = T₀ / ln(j + e)`.
///
/// The walker follows Metropolis acceptance on the objective; the best
/// point ever evaluated is returned. `eval_budget` counts every objective
/// evaluation, the start included.
pub(crate) fn run<O: Objective + ?Sized>(
    p: &Problem<'_, O>,
    spec: &OptimizerSpec,
    start: &[f64],
    f0: f64,
) -> Outcome {
    let params = spec.sann;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut trace = Trace::new(spec.trace);

    let mut x = start.to_vec();
    let mut fx = f0;
    let mut best = (x.clone(), fx);
    trace.push(0, fx);

    let proposals = params.eval_budget.saturating_sub(1);
    for j in 0..proposals {
        let temp = params.initial_temp / (j as f64 + std::f64::consts::E).ln();
        let y: Vec<f64> = x
            .iter()
            .map(|xi| {
                let z: f64 = StandardNormal.sample(&mut rng);
                xi + params.proposal_scale * z
            })
            .collect();
        let fy = p.cost(&y);
        // Always draw so the stream does not depend on the comparison.
        let u: f64 = rng.random();
        let accept = fy.is_finite()
            && (fy <= fx || (temp > 0.0 && u < ((fx - fy) / temp).exp()));
        if accept {
            x = y;
            fx = fy;
            if fx < best.1 {
                best = (x.clone(), fx);
            }
        }
        trace.push(j + 1, best.1);
    }

    Outcome {
        point: best.0,
        cost: best.1,
        iterations: proposals,
        terminated: Termination::Budget,
        trace: trace.finish(),
    }
}
