//! Strong-Wolfe line search (bracketing then zoom) on the minimization cost.

use super::{dot, Objective, Problem};

const MAX_BRACKET: usize = 25;
const MAX_ZOOM: usize = 40;
const MAX_STEP: f64 = 1e10;

pub(crate) struct Step {
    pub alpha: f64,
    pub x: Vec<f64>,
    pub f: f64,
    pub g: Vec<f64>,
}

struct Trial {
    alpha: f64,
    f: f64,
    slope: Option<f64>,
    x: Vec<f64>,
    g: Option<Vec<f64>>,
}

fn along(x: &[f64], d: &[f64], alpha: f64) -> Vec<f64> {
    x.iter().zip(d).map(|(xi, di)| xi + alpha * di).collect()
}

fn probe<O: Objective + ?Sized>(p: &Problem<'_, O>, x: &[f64], d: &[f64], alpha: f64) -> Trial {
    let xa = along(x, d, alpha);
    let f = p.cost(&xa);
    Trial {
        alpha,
        f,
        slope: None,
        x: xa,
        g: None,
    }
}

fn with_slope<O: Objective + ?Sized>(p: &Problem<'_, O>, t: &mut Trial, d: &[f64]) -> f64 {
    if let Some(s) = t.slope {
        return s;
    }
    let mut g = vec![0.0; p.dim()];
    p.cost_gradient(&t.x, &mut g);
    let s = dot(&g, d);
    t.g = Some(g);
    t.slope = Some(s);
    s
}

fn finish<O: Objective + ?Sized>(p: &Problem<'_, O>, mut t: Trial, d: &[f64]) -> Option<Step> {
    with_slope(p, &mut t, d);
    let g = t.g?;
    if !g.iter().all(|v| v.is_finite()) {
        return None;
    }
    Some(Step {
        alpha: t.alpha,
        x: t.x,
        f: t.f,
        g,
    })
}

/// Finds a step satisfying `f(x + αd) ≤ f + c1·α·g'd` and
/// `|∇f(x + αd)'d| ≤ c2·|g'd|`.
///
/// When zoom runs out of room but a sufficient-decrease point has been
/// found, that point is returned. `None` means no decrease was found.
pub(crate) fn strong_wolfe<O: Objective + ?Sized>(
    p: &Problem<'_, O>,
    x: &[f64],
    f0: f64,
    g0: &[f64],
    d: &[f64],
    alpha_init: f64,
    c1: f64,
    c2: f64,
) -> Option<Step> {
    let slope0 = dot(g0, d);
    if !(slope0 < 0.0) || !f0.is_finite() {
        return None;
    }
    let armijo = |alpha: f64, f: f64| f.is_finite() && f <= f0 + c1 * alpha * slope0;

    let mut prev = Trial {
        alpha: 0.0,
        f: f0,
        slope: Some(slope0),
        x: x.to_vec(),
        g: Some(g0.to_vec()),
    };
    let mut alpha = alpha_init.clamp(f64::MIN_POSITIVE, MAX_STEP);
    for i in 0..MAX_BRACKET {
        let mut cur = probe(p, x, d, alpha);
        if !armijo(alpha, cur.f) || (i > 0 && cur.f >= prev.f) {
            return zoom(p, x, d, f0, slope0, c1, c2, prev, cur);
        }
        let s = with_slope(p, &mut cur, d);
        if !s.is_finite() {
            return zoom(p, x, d, f0, slope0, c1, c2, prev, cur);
        }
        if s.abs() <= -c2 * slope0 {
            return finish(p, cur, d);
        }
        if s >= 0.0 {
            return zoom(p, x, d, f0, slope0, c1, c2, cur, prev);
        }
        if alpha >= MAX_STEP {
            return finish(p, cur, d);
        }
        alpha = (2.0 * alpha).min(MAX_STEP);
        prev = cur;
    }
    finish(p, prev, d).filter(|s| s.alpha > 0.0)
}

#[allow(clippy::too_many_arguments)]
fn zoom<O: Objective + ?Sized>(
    p: &Problem<'_, O>,
    x: &[f64],
    d: &[f64],
    f0: f64,
    slope0: f64,
    c1: f64,
    c2: f64,
    mut lo: Trial,
    mut hi: Trial,
) -> Option<Step> {
    for _ in 0..MAX_ZOOM {
        let (a_lo, a_hi) = (lo.alpha, hi.alpha);
        let width = (a_hi - a_lo).abs();
        if width <= 1e-14 * a_lo.abs().max(a_hi.abs()).max(1e-300) {
            break;
        }
        // Quadratic through (lo.f, lo.slope) and hi.f, safeguarded to the
        // inner 80% of the bracket; bisection otherwise.
        let mut alpha = 0.5 * (a_lo + a_hi);
        if let Some(s_lo) = lo.slope {
            if hi.f.is_finite() {
                let dx = a_hi - a_lo;
                let denom = 2.0 * (hi.f - lo.f - s_lo * dx);
                if denom.abs() > 0.0 {
                    let cand = a_lo - s_lo * dx * dx / denom;
                    let (a, b) = (a_lo.min(a_hi), a_lo.max(a_hi));
                    let margin = 0.1 * (b - a);
                    if cand.is_finite() && cand > a + margin && cand < b - margin {
                        alpha = cand;
                    }
                }
            }
        }

        let mut cur = probe(p, x, d, alpha);
        let sufficient = cur.f.is_finite() && cur.f <= f0 + c1 * alpha * slope0;
        if !sufficient || cur.f >= lo.f {
            hi = cur;
            continue;
        }
        let s = with_slope(p, &mut cur, d);
        if !s.is_finite() {
            hi = cur;
            continue;
        }
        if s.abs() <= -c2 * slope0 {
            return finish(p, cur, d);
        }
        if s * (hi.alpha - lo.alpha) >= 0.0 {
            hi = lo;
        }
        lo = cur;
    }
    if lo.alpha > 0.0 && lo.f < f0 {
        finish(p, lo, d)
    } else {
        None
    }
}
