//! Maximizers over a shared objective contract.
//!
//! Each method minimizes the negated objective internally. Points where the
//! objective is degenerate (see [`crate::model::is_degenerate`]) are treated
//! as `+∞` in the minimization, so they never replace a finite incumbent.

mod bfgs;
mod cg;
mod line_search;
mod nelder_mead;
mod sann;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use std::cell::Cell;

use crate::error::{Error, Result};
use crate::model::{self, is_degenerate, Dataset, ParamVector};

pub use cg::next_direction as cg_direction;

/// A smooth objective to be maximized.
pub trait Objective: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    /// Writes the gradient at `x` into `out`.
    fn gradient(&self, x: &[f64], out: &mut [f64]);
}

/// The heteroskedastic probit log-likelihood over concatenated `(β, γ)`.
#[derive(Debug, Clone, Copy)]
pub struct LogLikelihood<'a> {
    pub data: &'a Dataset,
}

impl<'a> LogLikelihood<'a> {
    pub fn new(data: &'a Dataset) -> Self {
        Self { data }
    }
}

impl Objective for LogLikelihood<'_> {
    fn dim(&self) -> usize {
        self.data.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        model::log_likelihood_flat(self.data, x).0
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        model::gradient_flat(self.data, x, out)
    }
}

/// The log-likelihood as a function of γ alone, with β held fixed.
#[derive(Debug, Clone)]
pub struct GammaProfile<'a> {
    pub data: &'a Dataset,
    pub beta: Vec<f64>,
}

impl Objective for GammaProfile<'_> {
    fn dim(&self) -> usize {
        self.data.k2()
    }

    fn value(&self, gamma: &[f64]) -> f64 {
        let flat: Vec<f64> = self.beta.iter().chain(gamma).copied().collect();
        model::log_likelihood_flat(self.data, &flat).0
    }

    fn gradient(&self, gamma: &[f64], out: &mut [f64]) {
        let flat: Vec<f64> = self.beta.iter().chain(gamma).copied().collect();
        let mut full = vec![0.0; flat.len()];
        model::gradient_flat(self.data, &flat, &mut full);
        out.copy_from_slice(&full[self.beta.len()..]);
    }
}

/// Adapts a pair of closures into an [`Objective`].
pub struct FnObjective<F, G> {
    dim: usize,
    f: F,
    g: G,
}

impl<F, G> FnObjective<F, G>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64], &mut [f64]) + Sync,
{
    pub fn new(dim: usize, f: F, g: G) -> Self {
        Self { dim, f, g }
    }
}

impl<F, G> Objective for FnObjective<F, G>
where
    F: Fn(&[f64]) -> f64 + Sync,
    G: Fn(&[f64], &mut [f64]) + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        (self.g)(x, out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Bfgs,
    Cg,
    NelderMead,
    Sann,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Bfgs => "bfgs",
            Method::Cg => "cg",
            Method::NelderMead => "nelder-mead",
            Method::Sann => "sann",
        }
    }

    pub fn default_max_iter(self) -> usize {
        match self {
            Method::Bfgs | Method::Cg => 500,
            Method::NelderMead => 2000,
            Method::Sann => 10_000,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bfgs" => Ok(Method::Bfgs),
            "cg" => Ok(Method::Cg),
            "nelder-mead" | "neldermead" | "nm" => Ok(Method::NelderMead),
            "sann" => Ok(Method::Sann),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SannParams {
    #[serde(default = "defaults::initial_temp")]
    pub initial_temp: f64,
    #[serde(default = "defaults::proposal_scale")]
    pub proposal_scale: f64,
    #[serde(default = "defaults::eval_budget")]
    pub eval_budget: usize,
}

impl Default for SannParams {
    fn default() -> Self {
        Self {
            initial_temp: defaults::initial_temp(),
            proposal_scale: defaults::proposal_scale(),
            eval_budget: defaults::eval_budget(),
        }
    }
}

mod defaults {
    pub fn f_tol() -> f64 {
        1e-8
    }
    pub fn g_tol() -> f64 {
        1e-6
    }
    pub fn initial_temp() -> f64 {
        10.0
    }
    pub fn proposal_scale() -> f64 {
        1.0
    }
    pub fn eval_budget() -> usize {
        10_000
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSpec {
    pub method: Method,
    /// Falls back to [`Method::default_max_iter`] when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    /// Relative change in objective below which a gradient method stops.
    #[serde(default = "defaults::f_tol")]
    pub f_tol: f64,
    /// Max-norm of the gradient below which a gradient method stops.
    #[serde(default = "defaults::g_tol")]
    pub g_tol: f64,
    #[serde(default)]
    pub sann: SannParams,
    /// Random seed; only SANN consumes it.
    #[serde(default)]
    pub seed: u64,
    /// Record `(iteration, best value so far)` pairs.
    #[serde(default)]
    pub trace: bool,
}

impl OptimizerSpec {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            max_iter: None,
            f_tol: defaults::f_tol(),
            g_tol: defaults::g_tol(),
            sann: SannParams::default(),
            seed: 0,
            trace: false,
        }
    }

    pub fn bfgs() -> Self {
        Self::new(Method::Bfgs)
    }

    pub fn cg() -> Self {
        Self::new(Method::Cg)
    }

    pub fn nelder_mead() -> Self {
        Self::new(Method::NelderMead)
    }

    pub fn sann(seed: u64) -> Self {
        Self {
            seed,
            ..Self::new(Method::Sann)
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = true;
        self
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter.unwrap_or(self.method.default_max_iter())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.f_tol > 0.0) || !(self.g_tol > 0.0) {
            return bad("f_tol and g_tol must be positive");
        }
        if self.max_iter() == 0 {
            return bad("max_iter must be at least 1");
        }
        if self.method == Method::Sann {
            let s = &self.sann;
            if s.eval_budget == 0 {
                return bad("sann.eval_budget must be at least 1");
            }
            if !(s.initial_temp >= 0.0 && s.initial_temp.is_finite()) {
                return bad("sann.initial_temp must be finite and non-negative");
            }
            if !(s.proposal_scale > 0.0 && s.proposal_scale.is_finite()) {
                return bad("sann.proposal_scale must be finite and positive");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Converged,
    MaxIter,
    Budget,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct OptimResult {
    pub point: Vec<f64>,
    /// Objective at `point` (the maximized value).
    pub value: f64,
    pub iterations: usize,
    pub evals: usize,
    pub grad_evals: usize,
    pub terminated: Termination,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<(usize, f64)>>,
}

impl OptimResult {
    /// Splits the terminal point into `(β, γ)`.
    pub fn params(&self, k1: usize) -> ParamVector {
        ParamVector::from_flat(&self.point, k1)
    }
}

/// Counts evaluations and presents the objective as a minimization with
/// degenerate values mapped to `+∞`.
pub(crate) struct Problem<'a, O: ?Sized> {
    obj: &'a O,
    evals: Cell<usize>,
    grad_evals: Cell<usize>,
}

impl<'a, O: Objective + ?Sized> Problem<'a, O> {
    fn new(obj: &'a O) -> Self {
        Self {
            obj,
            evals: Cell::new(0),
            grad_evals: Cell::new(0),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.obj.dim()
    }

    /// Raw (maximization) objective value.
    pub(crate) fn objective(&self, x: &[f64]) -> f64 {
        self.evals.set(self.evals.get() + 1);
        self.obj.value(x)
    }

    /// Negated objective; degenerate points become `+∞`.
    pub(crate) fn cost(&self, x: &[f64]) -> f64 {
        to_cost(self.objective(x))
    }

    /// Gradient of the cost.
    pub(crate) fn cost_gradient(&self, x: &[f64], out: &mut [f64]) {
        self.grad_evals.set(self.grad_evals.get() + 1);
        self.obj.gradient(x, out);
        out.iter_mut().for_each(|g| *g = -*g);
    }
}

#[inline]
pub(crate) fn to_cost(value: f64) -> f64 {
    if is_degenerate(value) {
        f64::INFINITY
    } else {
        -value
    }
}

/// What a method kernel hands back before counts are attached.
pub(crate) struct Outcome {
    pub point: Vec<f64>,
    pub cost: f64,
    pub iterations: usize,
    pub terminated: Termination,
    pub trace: Option<Vec<(usize, f64)>>,
}

/// Running best-so-far trace, recorded in objective (maximization) units.
pub(crate) struct Trace(Option<Vec<(usize, f64)>>);

impl Trace {
    pub(crate) fn new(enabled: bool) -> Self {
        Trace(enabled.then(Vec::new))
    }

    pub(crate) fn push(&mut self, iteration: usize, best_cost: f64) {
        if let Some(t) = &mut self.0 {
            let value = -best_cost;
            let best = t.last().map_or(value, |&(_, v): &(usize, f64)| v.max(value));
            t.push((iteration, best));
        }
    }

    pub(crate) fn finish(self) -> Option<Vec<(usize, f64)>> {
        self.0
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Maximizes `objective` from `start` with the method named in `spec`.
///
/// Fails only on malformed input. A start where the objective is degenerate
/// yields a result with [`Termination::Degenerate`] and no iterations.
pub fn maximize<O: Objective + ?Sized>(
    objective: &O,
    spec: &OptimizerSpec,
    start: &[f64],
) -> Result<OptimResult> {
    spec.validate()?;
    if start.len() != objective.dim() {
        return Err(Error::DimensionMismatch {
            what: "start point",
            expected: objective.dim(),
            found: start.len(),
        });
    }
    if !start.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("start point"));
    }

    let problem = Problem::new(objective);
    let start_value = problem.objective(start);
    let outcome = if is_degenerate(start_value) {
        Outcome {
            point: start.to_vec(),
            cost: f64::INFINITY,
            iterations: 0,
            terminated: Termination::Degenerate,
            trace: spec.trace.then(Vec::new),
        }
    } else {
        let f0 = -start_value;
        match spec.method {
            Method::Bfgs => bfgs::run(&problem, spec, start, f0),
            Method::Cg => cg::run(&problem, spec, start, f0),
            Method::NelderMead => nelder_mead::run(&problem, spec, start, f0),
            Method::Sann => sann::run(&problem, spec, start, f0),
        }
    };

    let value = if outcome.cost.is_finite() {
        -outcome.cost
    } else {
        start_value.min(model::LOG_LIK_FLOOR)
    };
    Ok(OptimResult {
        point: outcome.point,
        value,
        iterations: outcome.iterations,
        evals: problem.evals.get(),
        grad_evals: problem.grad_evals.get(),
        terminated: outcome.terminated,
        trace: outcome.trace,
    })
}

/// Maximizes the log-likelihood of `data` from `start`.
pub fn maximize_likelihood(
    data: &Dataset,
    spec: &OptimizerSpec,
    start: &ParamVector,
) -> Result<OptimResult> {
    data.check_params(start)?;
    maximize(&LogLikelihood::new(data), spec, &start.to_flat())
}
