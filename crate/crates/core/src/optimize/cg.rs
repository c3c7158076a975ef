use super::line_search::strong_wolfe;
use super::{dot, max_abs, Objective, OptimizerSpec, Outcome, Problem, Termination, Trace};

const C1: f64 = 1e-4;
// Fletcher–Reeves needs c2 < ½ for its directions to stay descent directions.
const C2: f64 = 0.1;

/// Fletcher–Reeves search direction for the minimization cost.
///
/// `since_restart` counts iterations since the last steepest-descent step.
/// Returns the direction and whether it was reset to `-g_new`; a reset
/// happens once `since_restart` reaches `dim` and whenever the conjugate
/// direction fails to descend.
pub fn next_direction(
    since_restart: usize,
    g_new: &[f64],
    g_old: &[f64],
    d_old: &[f64],
) -> (Vec<f64>, bool) {
    let steepest = || g_new.iter().map(|v| -v).collect::<Vec<_>>();
    if since_restart >= g_new.len() {
        return (steepest(), true);
    }
    let denom = dot(g_old, g_old);
    let beta = if denom > 0.0 { dot(g_new, g_new) / denom } else { 0.0 };
    let d: Vec<f64> = g_new
        .iter()
        .zip(d_old)
        .map(|(g, d)| -g + beta * d)
        .collect();
    if !(dot(g_new, &d) < 0.0) || !d.iter().all(|v| v.is_finite()) {
        (steepest(), true)
    } else {
        (d, false)
    }
}

pub(crate) fn run<O: Objective + ?Sized>(
    p: &Problem<'_, O>,
    spec: &OptimizerSpec,
    start: &[f64],
    f0: f64,
) -> Outcome {
    let n = p.dim();
    let mut x = start.to_vec();
    let mut f = f0;
    let mut g = vec![0.0; n];
    p.cost_gradient(&x, &mut g);
    let mut trace = Trace::new(spec.trace);
    trace.push(0, f);
    if !g.iter().all(|v| v.is_finite()) {
        return Outcome {
            point: x,
            cost: f,
            iterations: 0,
            terminated: Termination::Degenerate,
            trace: trace.finish(),
        };
    }

    let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut since_restart = 0usize;
    let mut alpha_prev = 1.0;
    let mut slope_prev = dot(&g, &d);
    let mut terminated = Termination::MaxIter;
    let mut iterations = 0;

    for iter in 1..=spec.max_iter() {
        if max_abs(&g) <= spec.g_tol {
            terminated = Termination::Converged;
            break;
        }
        iterations = iter;

        let slope = dot(&g, &d);
        // Carry the previous step's first-order decrease over to this one.
        let alpha0 = if iter == 1 {
            1.0
        } else {
            (alpha_prev * slope_prev / slope).clamp(1e-10, 1e10)
        };
        let step = match strong_wolfe(p, &x, f, &g, &d, alpha0, C1, C2) {
            Some(s) => s,
            None => {
                d = g.iter().map(|v| -v).collect();
                since_restart = 0;
                match strong_wolfe(p, &x, f, &g, &d, 1.0, C1, C2) {
                    Some(s) => s,
                    None => break,
                }
            }
        };
        alpha_prev = step.alpha;
        slope_prev = dot(&g, &d);

        let f_change = (f - step.f).abs();
        let f_scale = f.abs();
        let (d_new, restarted) = next_direction(since_restart + 1, &step.g, &g, &d);
        since_restart = if restarted { 0 } else { since_restart + 1 };
        x = step.x;
        f = step.f;
        g = step.g;
        d = d_new;
        trace.push(iter, f);

        if f_change <= spec.f_tol * (f_scale + spec.f_tol) {
            terminated = Termination::Converged;
            break;
        }
    }

    Outcome {
        point: x,
        cost: f,
        iterations,
        terminated,
        trace: trace.finish(),
    }
}
