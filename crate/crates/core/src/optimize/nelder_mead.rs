use super::{Objective, OptimizerSpec, Outcome, Problem, Termination, Trace};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn combine(c: &[f64], x: &[f64], t: f64) -> Vec<f64> {
    // c + t (x − c)
    c.iter().zip(x).map(|(ci, xi)| ci + t * (xi - ci)).collect()
}

pub(crate) fn run<O: Objective + ?Sized>(
    p: &Problem<'_, O>,
    spec: &OptimizerSpec,
    start: &[f64],
    f0: f64,
) -> Outcome {
    let n = p.dim();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), f0));
    for j in 0..n {
        let mut v = start.to_vec();
        v[j] += (0.1 * start[j].abs()).max(0.1);
        let fv = p.cost(&v);
        simplex.push((v, fv));
    }

    let mut trace = Trace::new(spec.trace);
    let order = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    order(&mut simplex);
    trace.push(0, simplex[0].1);

    let mut terminated = Termination::MaxIter;
    let mut iterations = 0;
    for iter in 1..=spec.max_iter() {
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if worst - best < spec.f_tol * (best.abs() + 1.0) {
            terminated = Termination::Converged;
            break;
        }
        iterations = iter;

        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, vi) in centroid.iter_mut().zip(v) {
                *c += vi / n as f64;
            }
        }

        let xr = combine(&centroid, &simplex[n].0, -REFLECT);
        let fr = p.cost(&xr);
        if fr < best {
            let xe = combine(&centroid, &xr, EXPAND);
            let fe = p.cost(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let outside = fr < worst;
            let xc = if outside {
                combine(&centroid, &xr, CONTRACT)
            } else {
                combine(&centroid, &simplex[n].0, CONTRACT)
            };
            let fc = p.cost(&xc);
            let accepted = if outside { fc <= fr } else { fc < worst };
            if accepted {
                simplex[n] = (xc, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for (v, fv) in simplex.iter_mut().skip(1) {
                    *v = combine(&anchor, v, SHRINK);
                    *fv = p.cost(v);
                }
            }
        }
        order(&mut simplex);
        trace.push(iter, simplex[0].1);
    }

    let (point, cost) = simplex.swap_remove(0);
    Outcome {
        point,
        cost,
        iterations,
        terminated,
        trace: trace.finish(),
    }
}

#[cfg(test)]
mod tests {
    use crate::optimize::{maximize, FnObjective, OptimizerSpec};

    #[test]
    fn never_prefers_a_degenerate_vertex() {
        // Finite only on x < 1; the optimum sits at the cliff edge.
        let obj = FnObjective::new(
            2,
            |x: &[f64]| {
                if x[0] < 1.0 {
                    x[0] - x[1] * x[1]
                } else {
                    crate::model::LOG_LIK_FLOOR
                }
            },
            |_: &[f64], g: &mut [f64]| g.fill(0.0),
        );
        let r = maximize(&obj, &OptimizerSpec::nelder_mead().with_trace(), &[0.0, 0.5]).unwrap();
        assert!(r.value.is_finite() && r.value > 0.5);
        assert!(r.point[0] < 1.0);
        let t = r.trace.unwrap();
        assert!(t.windows(2).all(|w| w[1].1 >= w[0].1));
    }
}
