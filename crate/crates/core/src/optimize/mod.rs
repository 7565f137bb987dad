//! The extremal problem for the last corner ratio.
//!
//! The corner objective is `F(λ) = λ_{n+1} Π_{i≤n} λ_i / (1 - λ_i)` on the
//! open simplex. On the symmetric slice `(x, ..., x, 1 - nx)` it reduces to
//! `f(x) = (x / (1 - x))^n (1 - nx)` on `(0, 1/n)`, whose unique maximizer is
//! θ_n. Both problems are solved numerically here without using θ_n.

mod nelder_mead;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Schedule};
use crate::ratios::corner_ratio;
use crate::simplex::BarycentricPoint;
use crate::stream::{substream, Purpose};

/// Iteration cap per search (per restart for the simplex problem).
pub const MAX_ITERATIONS: usize = 10_000;

/// Default number of multi-start restarts.
pub const DEFAULT_RESTARTS: usize = 16;

/// Distance kept from the ends of `(0, 1/n)` by the 1-D search.
pub const DOMAIN_MARGIN: f64 = 1e-12;

/// A result counts as converged only if the gradient of the log-objective
/// is at most this large at the reported argmax.
pub const STATIONARITY_TOL: f64 = 1e-6;

/// Optima closer than this in every coordinate are reported once.
const DISTINCT_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerResult<P> {
    pub argmax: P,
    pub value: f64,
    pub iterations: usize,
    pub restarts_used: usize,
    pub converged: bool,
    /// Gradient norm (sup) of the log-objective at `argmax`.
    pub first_order_residual: f64,
    /// Every distinct converged local maximizer found, best first.
    pub stationary_points: Vec<P>,
}

fn check_slice_domain(x: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let nf = n as f64;
    if !(x > 0.0 && x < 1.0 / nf) {
        return Err(Error::OutOfDomain { x, n });
    }
    Ok(nf)
}

/// `f(x) = (x / (1 - x))^n (1 - nx)` on `0 < x < 1/n`.
pub fn slice_objective(x: f64, n: usize) -> Result<f64> {
    let nf = check_slice_domain(x, n)?;
    Ok((x / (1.0 - x)).powi(n as i32) * (1.0 - nf * x))
}

/// `f'(x) = (x / (1 - x))^n · n (x² - (n+1)x + 1) / (x (1 - x))`.
pub fn slice_objective_derivative(x: f64, n: usize) -> Result<f64> {
    let nf = check_slice_domain(x, n)?;
    let quadratic = x * x - (nf + 1.0) * x + 1.0;
    Ok((x / (1.0 - x)).powi(n as i32) * nf * quadratic / (x * (1.0 - x)))
}

/// The corner objective `F`; the same quantity as the last corner ratio.
pub fn corner_objective(m: &BarycentricPoint) -> f64 {
    corner_ratio(m, m.dim()).expect("last index is always in range")
}

/// `∂ ln F / ∂u_j` for `j < n`, where `λ = softmax(u_1, ..., u_n, 0)`.
pub fn corner_log_gradient(m: &BarycentricPoint) -> Vec<f64> {
    let w = m.weights();
    let n = m.dim();
    let partial: Vec<f64> = w
        .iter()
        .enumerate()
        .map(|(i, &l)| if i < n { 1.0 / l + 1.0 / (1.0 - l) } else { 1.0 / l })
        .collect();
    let mean: f64 = w.iter().zip(&partial).map(|(l, g)| l * g).sum();
    (0..n).map(|j| w[j] * (partial[j] - mean)).collect()
}

/// Golden-section search for the maximum of `f` on `(0, 1/n)`, finished by
/// bisection on the sign of `f'` until the bracket is narrower than `tol`.
pub fn maximize_slice(n: usize, tol: f64) -> Result<OptimizerResult<f64>> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidPlan(format!("tolerance must be positive, got {tol}")));
    }
    let f = |x: f64| slice_objective(x, n).unwrap_or(0.0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;

    let (mut lo, mut hi) = (DOMAIN_MARGIN, 1.0 / n as f64 - DOMAIN_MARGIN);
    let coarse = 1e-6 * (hi - lo);
    let mut iterations = 0;
    let mut left = hi - inv_phi * (hi - lo);
    let mut right = lo + inv_phi * (hi - lo);
    let (mut f_left, mut f_right) = (f(left), f(right));
    while hi - lo > coarse && iterations < MAX_ITERATIONS {
        iterations += 1;
        if f_left < f_right {
            lo = left;
            left = right;
            f_left = f_right;
            right = lo + inv_phi * (hi - lo);
            f_right = f(right);
        } else {
            hi = right;
            right = left;
            f_right = f_left;
            left = hi - inv_phi * (hi - lo);
            f_left = f(left);
        }
    }

    let slope = |x: f64| slice_objective_derivative(x, n).unwrap_or(f64::NAN);
    if !(slope(lo) > 0.0 && slope(hi) < 0.0) {
        lo = DOMAIN_MARGIN;
        hi = 1.0 / n as f64 - DOMAIN_MARGIN;
    }
    while hi - lo > tol && iterations < MAX_ITERATIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let s = slope(mid);
        if s > 0.0 {
            lo = mid;
        } else if s < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            hi = mid;
        }
    }
    if hi - lo > tol {
        return Err(Error::ConvergenceFailure(format!(
            "bracket width {:e} above tolerance {tol:e} after {iterations} iterations",
            hi - lo
        )));
    }
    let x = 0.5 * (lo + hi);
    let value = slice_objective(x, n)?;
    let residual = (slice_objective_derivative(x, n)? / value).abs();
    Ok(OptimizerResult {
        argmax: x,
        value,
        iterations,
        restarts_used: 1,
        converged: residual <= STATIONARITY_TOL,
        first_order_residual: residual,
        stationary_points: vec![x],
    })
}

/// Per-restart outcome of [`maximize_corner`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartOutcome {
    pub restart: usize,
    pub argmax: BarycentricPoint,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub first_order_residual: f64,
}

fn softmax_tail_fixed(u: &[f64]) -> Vec<f64> {
    let top = u.iter().copied().fold(0.0, f64::max);
    let mut w: Vec<f64> = u
        .iter()
        .copied()
        .chain(std::iter::once(0.0))
        .map(|v| (v - top).exp())
        .collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// `-ln F(softmax(u, 0))`, infinite where a weight underflows.
fn negative_log_corner(u: &[f64]) -> f64 {
    let w = softmax_tail_fixed(u);
    let n = u.len();
    if w.iter().any(|&l| !(l > f64::MIN_POSITIVE) || !(l < 1.0)) {
        return f64::INFINITY;
    }
    let ln: f64 = w
        .iter()
        .enumerate()
        .map(|(i, &l)| if i < n { l.ln() - (-l).ln_1p() } else { l.ln() })
        .sum();
    -ln
}

fn single_restart(n: usize, tol: f64, seed: u64, restart: usize) -> Option<RestartOutcome> {
    let mut rng = substream(seed, Purpose::Restart, restart as u64);
    let mut u: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();

    let mut iterations = 0;
    let mut step = 1.0;
    let mut best = f64::INFINITY;
    let mut nm_converged = false;
    while iterations < MAX_ITERATIONS {
        let run = nelder_mead::minimize(negative_log_corner, &u, step, tol, MAX_ITERATIONS - iterations);
        iterations += run.iterations;
        nm_converged = run.converged;
        let improved = best - run.fx > 4.0 * f64::EPSILON * (1.0 + run.fx.abs());
        u = run.x;
        best = best.min(run.fx);
        // Restarting the simplex around the incumbent guards against collapse.
        if !improved || !nm_converged {
            break;
        }
        step = 0.1;
    }

    let argmax = BarycentricPoint::with_margin(softmax_tail_fixed(&u), f64::MIN_POSITIVE).ok()?;
    let residual = corner_log_gradient(&argmax)
        .into_iter()
        .fold(0.0, |acc: f64, g| acc.max(g.abs()));
    Some(RestartOutcome {
        restart,
        value: corner_objective(&argmax),
        argmax,
        iterations,
        converged: nm_converged && residual <= STATIONARITY_TOL,
        first_order_residual: residual,
    })
}

/// Multi-start direct search for the maximum of `F` over the open simplex.
///
/// The simplex constraint is removed by writing `λ = softmax(u_1, ..., u_n, 0)`
/// and each restart minimizes `-ln F` with Nelder-Mead from a seeded random
/// start. Restart `r` draws from the stream keyed by `(seed, r)`, so the
/// result does not depend on the schedule. The best converged restart wins;
/// ties go to the lower restart index.
pub fn maximize_corner(
    n: usize,
    restarts: usize,
    tol: f64,
    seed: u64,
) -> Result<OptimizerResult<BarycentricPoint>> {
    maximize_corner_with(n, restarts, tol, seed, Schedule::default())
}

pub fn maximize_corner_with(
    n: usize,
    restarts: usize,
    tol: f64,
    seed: u64,
    schedule: Schedule,
) -> Result<OptimizerResult<BarycentricPoint>> {
    Ok(corner_search(n, restarts, tol, seed, schedule)?.0)
}

/// Like [`maximize_corner_with`], also returning every restart's outcome.
pub fn corner_search(
    n: usize,
    restarts: usize,
    tol: f64,
    seed: u64,
    schedule: Schedule,
) -> Result<(OptimizerResult<BarycentricPoint>, Vec<RestartOutcome>)> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if restarts == 0 {
        return Err(Error::InvalidPlan("at least one restart is required".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidPlan(format!("tolerance must be positive, got {tol}")));
    }
    let outcomes: Vec<RestartOutcome> =
        map_indexed(restarts as u64, schedule, |r| single_restart(n, tol, seed, r as usize))
            .into_iter()
            .flatten()
            .collect();

    let mut best: Option<&RestartOutcome> = None;
    for o in outcomes.iter().filter(|o| o.converged) {
        if best.is_none_or(|b| o.value > b.value) {
            best = Some(o);
        }
    }
    let best = best.ok_or_else(|| {
        Error::ConvergenceFailure(format!("none of {restarts} restarts reached a stationary point"))
    })?;

    let mut ranked: Vec<&RestartOutcome> = outcomes.iter().filter(|o| o.converged).collect();
    ranked.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.restart.cmp(&b.restart)));
    let mut stationary_points: Vec<BarycentricPoint> = Vec::new();
    for o in ranked {
        let seen = stationary_points.iter().any(|p| {
            p.weights()
                .iter()
                .zip(o.argmax.weights())
                .all(|(a, b)| (a - b).abs() <= DISTINCT_TOL)
        });
        if !seen {
            stationary_points.push(o.argmax.clone());
        }
    }

    let result = OptimizerResult {
        argmax: best.argmax.clone(),
        value: best.value,
        iterations: outcomes.iter().map(|o| o.iterations).sum(),
        restarts_used: restarts,
        converged: true,
        first_order_residual: best.first_order_residual,
        stationary_points,
    };
    Ok((result, outcomes))
}
