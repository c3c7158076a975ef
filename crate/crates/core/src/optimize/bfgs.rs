use ndarray::{Array1, Array2};

use super::line_search::strong_wolfe;
use super::{max_abs, Objective, OptimizerSpec, Outcome, Problem, Termination, Trace};

const C1: f64 = 1e-4;
const C2: f64 = 0.9;

/// Inverse-Hessian BFGS from the identity, with a strong-Wolfe line search.
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

    let mut h = Array2::<f64>::eye(n);
    let mut terminated = Termination::MaxIter;
    let mut iterations = 0;
    for iter in 1..=spec.max_iter() {
        if max_abs(&g) <= spec.g_tol {
            terminated = Termination::Converged;
            break;
        }
        iterations = iter;

        let ga = Array1::from(g.clone());
        let mut d: Vec<f64> = (-h.dot(&ga)).to_vec();
        if !(super::dot(&g, &d) < 0.0) {
            h = Array2::eye(n);
            d = g.iter().map(|v| -v).collect();
        }
        let step = match strong_wolfe(p, &x, f, &g, &d, 1.0, C1, C2) {
            Some(s) => s,
            None => {
                // One steepest-descent attempt before giving up.
                h = Array2::eye(n);
                let sd: Vec<f64> = g.iter().map(|v| -v).collect();
                match strong_wolfe(p, &x, f, &g, &sd, 1.0, C1, C2) {
                    Some(s) => s,
                    None => break,
                }
            }
        };

        let s = Array1::from_iter(step.x.iter().zip(&x).map(|(a, b)| a - b));
        let y = Array1::from_iter(step.g.iter().zip(&g).map(|(a, b)| a - b));
        let f_change = (f - step.f).abs();
        let f_scale = f.abs();
        x = step.x;
        f = step.f;
        g = step.g;
        trace.push(iter, f);

        let sy = s.dot(&y);
        if sy > 1e-12 * s.dot(&s).sqrt() * y.dot(&y).sqrt() && sy.is_finite() {
            // H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ
            let rho = 1.0 / sy;
            let hy = h.dot(&y);
            let yhy = y.dot(&hy);
            for i in 0..n {
                for j in 0..n {
                    h[[i, j]] += -rho * (hy[i] * s[j] + s[i] * hy[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }

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

#[cfg(test)]
mod tests {
    use crate::optimize::{maximize, FnObjective, OptimizerSpec, Termination};

    fn neg_rosenbrock() -> impl crate::optimize::Objective {
        FnObjective::new(
            2,
            |x: &[f64]| -((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)),
            |x: &[f64], g: &mut [f64]| {
                g[0] = 2.0 * (1.0 - x[0]) + 400.0 * x[0] * (x[1] - x[0] * x[0]);
                g[1] = -200.0 * (x[1] - x[0] * x[0]);
            },
        )
    }

    #[test]
    fn rosenbrock_from_classic_start() {
        let spec = OptimizerSpec {
            f_tol: 1e-14,
            g_tol: 1e-9,
            ..OptimizerSpec::bfgs()
        };
        let r = maximize(&neg_rosenbrock(), &spec, &[-1.2, 1.0]).unwrap();
        assert!((r.point[0] - 1.0).abs() < 1e-5, "{:?}", r.point);
        assert!((r.point[1] - 1.0).abs() < 1e-5, "{:?}", r.point);
    }

    #[test]
    fn quadratic_converges_within_two_dim_iterations() {
        // -½ xᵀAx + bᵀx with A diagonally dominant and positive definite.
        let a = [
            [4.0, 1.0, 0.0, 0.0, 0.5],
            [1.0, 3.0, 0.5, 0.0, 0.0],
            [0.0, 0.5, 5.0, 1.0, 0.0],
            [0.0, 0.0, 1.0, 2.0, 0.3],
            [0.5, 0.0, 0.0, 0.3, 6.0],
        ];
        let b = [1.0, -2.0, 0.5, 3.0, -1.0];
        let obj = FnObjective::new(
            5,
            move |x: &[f64]| {
                let mut v = 0.0;
                for i in 0..5 {
                    v += b[i] * x[i];
                    for j in 0..5 {
                        v -= 0.5 * x[i] * a[i][j] * x[j];
                    }
                }
                v
            },
            move |x: &[f64], g: &mut [f64]| {
                for i in 0..5 {
                    g[i] = b[i] - (0..5).map(|j| a[i][j] * x[j]).sum::<f64>();
                }
            },
        );
        let r = maximize(&obj, &OptimizerSpec::bfgs().with_trace(), &[0.0; 5]).unwrap();
        assert_eq!(r.terminated, Termination::Converged);
        assert!(r.iterations <= 10, "took {} iterations", r.iterations);
        let trace = r.trace.unwrap();
        assert!(trace.windows(2).all(|w| w[1].1 >= w[0].1));
    }
}
