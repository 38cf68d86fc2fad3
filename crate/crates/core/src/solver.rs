//! Symmetric equilibrium search.
//!
//! A full-support symmetric equilibrium makes every pure choice equally good
//! for a deviator. The unknowns are `p_1..p_(n-1)` with `p_n = 1 - sum`, and a
//! damped Newton iteration with a forward-difference Jacobian drives the
//! indifference residual of the chosen payoff model to zero.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{LupiError, Result};
use crate::exec::Execution;
use crate::game::{GameSpec, MixedStrategy};
use crate::model::{closed_form_gradient, closed_form_values, geometric_strategy, max_norm};
use crate::oracle::identical_opponent_values;

pub const MIN_SOLVER_PLAYERS: usize = 3;
pub const MAX_SOLVER_PLAYERS: usize = 12;

/// Iterates stay at least this far from the simplex boundary.
const CLAMP_MARGIN: f64 = 1e-12;
/// A converged strategy with an entry at or below this is reported as a
/// boundary point.
const INTERIOR_FLOOR: f64 = 1e-9;
const SINGULAR_CUTOFF: f64 = 1e-10;
const GRID_LEVELS: [f64; 3] = [0.1, 0.3, 0.5];

/// Which payoff model the residual is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Closed-form deviator payoffs; residual is their gradient.
    Paper,
    /// Exact enumeration; residual is the difference between consecutive
    /// pure-choice payoffs.
    Exact,
}

impl Model {
    pub fn default_tolerance(self) -> f64 {
        match self {
            Model::Paper => 1e-12,
            Model::Exact => 1e-10,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Model::Paper => "paper",
            Model::Exact => "exact",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(Model::Paper),
            "exact" => Ok(Model::Exact),
            other => Err(format!("unknown model '{other}', expected 'paper' or 'exact'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Residual max-norm accepted as converged; `None` uses the model default.
    pub tolerance: Option<f64>,
    pub max_iterations: usize,
    pub fd_step: f64,
    pub max_halvings: u32,
    pub execution: Execution,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: None,
            max_iterations: 100,
            fd_step: 1e-7,
            max_halvings: 40,
            execution: Execution::default(),
        }
    }
}

/// Outcome of one symmetric solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub model: Model,
    /// Common strategy. When `converged` is false this is the best iterate
    /// seen, not an equilibrium.
    pub strategy: MixedStrategy,
    /// Per-player payoff when everyone adopts `strategy`.
    pub payoff: f64,
    pub residual_norm: f64,
    /// Max minus min of the deviator's pure-choice payoffs under `model`.
    pub spread: f64,
    pub iterations: usize,
    pub converged: bool,
    /// All entries strictly inside the simplex.
    pub interior: bool,
    pub tolerance: f64,
    /// 0 for the geometric start, `k` for the `k`-th grid point.
    pub start: usize,
}

/// Solve for roots of the closed-form gradient.
pub fn solve_paper_symmetric(spec: GameSpec, options: &SolverOptions) -> Result<SolveResult> {
    solve_symmetric(spec, Model::Paper, options)
}

/// Solve for equal exact pure-choice payoffs.
pub fn solve_exact_symmetric(spec: GameSpec, options: &SolverOptions) -> Result<SolveResult> {
    solve_symmetric(spec, Model::Exact, options)
}

/// Tries the geometric start, then the restart grid, and returns the first
/// interior root. Falls back to the first boundary root, and then to the
/// attempt with the smallest residual (reported as not converged).
pub fn solve_symmetric(spec: GameSpec, model: Model, options: &SolverOptions) -> Result<SolveResult> {
    check_range(spec)?;
    let mut boundary: Option<SolveResult> = None;
    let mut best: Option<SolveResult> = None;
    for (start, x0) in starts(spec.n()).enumerate() {
        let result = newton(spec, model, x0, start, options);
        if result.converged && result.interior {
            return Ok(result);
        }
        if result.converged {
            boundary.get_or_insert(result);
        } else if best.as_ref().is_none_or(|b| result.residual_norm < b.residual_norm) {
            best = Some(result);
        }
    }
    Ok(boundary.or(best).expect("the geometric start is always attempted"))
}

/// Runs Newton from every start and returns all attempts in start order.
pub fn solve_from_all_starts(
    spec: GameSpec,
    model: Model,
    options: &SolverOptions,
) -> Result<Vec<SolveResult>> {
    check_range(spec)?;
    Ok(starts(spec.n()).enumerate().map(|(start, x0)| newton(spec, model, x0, start, options)).collect())
}

/// Converged attempts that belong to different roots, keeping the first of
/// each cluster.
///
/// Two converged points are the same root when they are within `radius` in
/// max-norm, or when their midpoint also meets the convergence test. The
/// second rule matters for larger `n`: the residual depends on the tail
/// probabilities only through powers like `p^(n-1)`, so a whole valley of
/// points around one root passes the tolerance.
pub fn distinct_roots(results: &[SolveResult], radius: f64) -> Vec<&SolveResult> {
    let mut roots: Vec<&SolveResult> = Vec::new();
    for r in results.iter().filter(|r| r.converged) {
        let seen = roots.iter().any(|q| {
            let (a, b) = (q.strategy.probs(), r.strategy.probs());
            a.iter().zip(b).all(|(x, y)| (x - y).abs() <= radius) || midpoint_converged(q, r)
        });
        if !seen {
            roots.push(r);
        }
    }
    roots
}

fn midpoint_converged(a: &SolveResult, b: &SolveResult) -> bool {
    let (pa, pb) = (a.strategy.probs(), b.strategy.probs());
    if a.model != b.model || pa.len() != pb.len() {
        return false;
    }
    let n = pa.len();
    let tol = a.tolerance.max(b.tolerance);
    let x: Vec<f64> = pa[..n - 1].iter().zip(&pb[..n - 1]).map(|(u, v)| 0.5 * (u + v)).collect();
    let exec = Execution::default();
    if max_norm(&residual(n, a.model, &x, exec)) > tol {
        return false;
    }
    a.model == Model::Paper || spread_of(&pure_values(n, a.model, &full_strategy(&x), exec)) <= tol
}

fn check_range(spec: GameSpec) -> Result<()> {
    let n = spec.n();
    if !(MIN_SOLVER_PLAYERS..=MAX_SOLVER_PLAYERS).contains(&n) {
        return Err(LupiError::UnsupportedPlayerCount {
            n,
            min: MIN_SOLVER_PLAYERS,
            max: MAX_SOLVER_PLAYERS,
        });
    }
    Ok(())
}

/// Geometric start followed by grid points over `{0.1, 0.3, 0.5}^(n-1)` with
/// sum below one, in lexicographic order.
fn starts(n: usize) -> impl Iterator<Item = Vec<f64>> {
    let geometric = geometric_strategy(GameSpec::new(n).expect("n >= 3"));
    let first = geometric.probs()[..n - 1].to_vec();
    std::iter::once(first).chain(restart_grid(n - 1))
}

fn restart_grid(dim: usize) -> impl Iterator<Item = Vec<f64>> {
    let mut digits = vec![0usize; dim];
    let mut done = false;
    std::iter::from_fn(move || {
        while !done {
            let point: Vec<f64> = digits.iter().map(|&d| GRID_LEVELS[d]).collect();
            // odometer, last coordinate fastest
            done = true;
            for d in digits.iter_mut().rev() {
                if *d + 1 < GRID_LEVELS.len() {
                    *d += 1;
                    done = false;
                    break;
                }
                *d = 0;
            }
            if point.iter().sum::<f64>() < 1.0 {
                return Some(point);
            }
        }
        None
    })
}

/// Coordinates into `[margin, 1 - margin]`, each one leaving room for the
/// rest so that the implied `p_n` is at least `margin`.
fn clamp_to_simplex(x: &mut [f64]) {
    let dim = x.len();
    let mut used = 0.0;
    for (i, xi) in x.iter_mut().enumerate() {
        let reserve = (dim - i) as f64 * CLAMP_MARGIN;
        let hi = (1.0 - used - reserve).max(CLAMP_MARGIN);
        *xi = xi.clamp(CLAMP_MARGIN, hi);
        used += *xi;
    }
}

fn full_strategy(x: &[f64]) -> Vec<f64> {
    let mut p = x.to_vec();
    p.push(1.0 - x.iter().sum::<f64>());
    p
}

fn pure_values(n: usize, model: Model, p: &[f64], exec: Execution) -> Vec<f64> {
    match model {
        Model::Paper => closed_form_values(n, p),
        Model::Exact => identical_opponent_values(n, p, exec),
    }
}

fn residual(n: usize, model: Model, x: &[f64], exec: Execution) -> Vec<f64> {
    let p = full_strategy(x);
    match model {
        Model::Paper => closed_form_gradient(n, &p),
        Model::Exact => {
            let v = identical_opponent_values(n, &p, exec);
            v.windows(2).map(|w| w[0] - w[1]).collect()
        }
    }
}

/// Least-squares solution of `J d = -r` that drops directions whose singular
/// value is below `SINGULAR_CUTOFF` relative to the largest. Tail
/// probabilities enter the residual through powers like `p^(n-1)`, which
/// leaves the Jacobian nearly rank deficient for larger `n`.
fn newton_step(jac: DMatrix<f64>, r: &[f64]) -> Option<DVector<f64>> {
    let rhs = -DVector::from_column_slice(r);
    let svd = jac.svd(true, true);
    let largest = svd.singular_values.max();
    if !(largest.is_finite() && largest > 0.0) {
        return None;
    }
    let step = svd.solve(&rhs, largest * SINGULAR_CUTOFF).ok()?;
    step.iter().all(|d| d.is_finite()).then_some(step)
}

fn spread_of(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

fn newton(spec: GameSpec, model: Model, x0: Vec<f64>, start: usize, options: &SolverOptions) -> SolveResult {
    let n = spec.n();
    let dim = n - 1;
    let exec = options.execution;
    let tol = options.tolerance.unwrap_or_else(|| model.default_tolerance());
    let done = |r: &[f64], x: &[f64]| -> bool {
        if max_norm(r) > tol {
            return false;
        }
        model == Model::Paper || spread_of(&pure_values(n, model, &full_strategy(x), exec)) <= tol
    };

    let mut x = x0;
    clamp_to_simplex(&mut x);
    let mut r = residual(n, model, &x, exec);
    let mut norm = max_norm(&r);
    let mut iterations = 0;
    let mut converged = done(&r, &x);

    while !converged && iterations < options.max_iterations {
        iterations += 1;
        let mut jac = DMatrix::<f64>::zeros(dim, dim);
        for j in 0..dim {
            let mut xh = x.clone();
            xh[j] += options.fd_step;
            let rh = residual(n, model, &xh, exec);
            for i in 0..dim {
                jac[(i, j)] = (rh[i] - r[i]) / options.fd_step;
            }
        }
        let Some(step) = newton_step(jac, &r) else {
            break;
        };

        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..=options.max_halvings {
            let mut trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + scale * d).collect();
            clamp_to_simplex(&mut trial);
            let rt = residual(n, model, &trial, exec);
            let nt = max_norm(&rt);
            if nt < norm {
                accepted = Some((trial, rt, nt));
                break;
            }
            scale *= 0.5;
        }
        let Some((trial, rt, nt)) = accepted else {
            break;
        };
        x = trial;
        r = rt;
        norm = nt;
        converged = done(&r, &x);
    }

    let p = full_strategy(&x);
    let values = pure_values(n, model, &p, exec);
    let payoff = p.iter().zip(&values).map(|(a, b)| a * b).sum();
    let interior = p.iter().all(|&v| v > INTERIOR_FLOOR);
    let strategy = MixedStrategy::new(p).expect("clamped iterates lie on the simplex");
    SolveResult {
        model,
        strategy,
        payoff,
        residual_norm: norm,
        spread: spread_of(&values),
        iterations,
        converged,
        interior,
        tolerance: tol,
        start,
    }
}
