//! Seeded randomized suites that confront the closed-form ratios with
//! Cartesian determinant volumes.
//!
//! Trial `i` of a plan draws everything it needs from the stream keyed by
//! `(seed, i)`, so a report depends only on the plan and never on the
//! schedule. Reports are assembled from per-trial outcomes in trial order.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Schedule};
use crate::optimize::corner_objective;
use crate::ratios::{
    cevian_ratio, corner_ratio, moebius_residual, theorem1_bound, theorem2_value, MoebiusAreas,
};
use crate::simplex::{
    build_configuration, distance, factorial, BarycentricPoint, CartesianSimplex,
    CevianConfiguration, EPS_BOUNDARY,
};
use crate::stream::{substream, Purpose, Stream};

/// Consecutive rejections after which [`random_simplex`] gives up.
pub const MAX_REJECTIONS: usize = 1_000;

/// Harness draws keep `n! · volume / (max edge)^n` at least this fraction of
/// the regular simplex's value; thinner draws are resampled.
pub const CONDITIONING_FLOOR: f64 = 1e-2;

/// Harness configurations keep every barycentric weight at least this
/// large; closer to the boundary some cevian feet sit within rounding
/// distance of `M` and the determinant oracle loses its relative accuracy.
pub const WEIGHT_FLOOR: f64 = 1e-4;

/// Fixed tolerance for the algebraic identity Σ corners = cevian ratio.
pub const DECOMPOSITION_IDENTITY_TOL: f64 = 1e-12;

/// Random affine maps must have `|det| >= MIN_AFFINE_DET`.
pub const MIN_AFFINE_DET: f64 = 1e-6;

/// Random affine maps must have condition number at most this.
pub const MAX_AFFINE_CONDITION: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Theorem1,
    Theorem2,
    Eq2,
    Decomposition,
    Moebius,
    Affine,
    SegmentRatio,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Eq2,
        Suite::Decomposition,
        Suite::Moebius,
        Suite::Affine,
        Suite::SegmentRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Eq2 => "eq2",
            Suite::Decomposition => "decomposition",
            Suite::Moebius => "moebius",
            Suite::Affine => "affine",
            Suite::SegmentRatio => "segment_ratio",
        }
    }

    /// Inequality suites compare against a bound with an absolute slack;
    /// the others compare two computations with a relative tolerance.
    pub fn is_inequality(self) -> bool {
        matches!(self, Suite::Theorem1 | Suite::Theorem2)
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Suite::Theorem1 | Suite::Theorem2 => 1e-12,
            Suite::Moebius => 1e-10,
            _ => 1e-9,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidPlan(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialPlan {
    pub suite: Suite,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
}

impl TrialPlan {
    /// A plan with the suite's default tolerance.
    pub fn new(suite: Suite, n: usize, trials: u64, seed: u64) -> Self {
        Self {
            suite,
            n,
            trials,
            seed,
            tol: suite.default_tol(),
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidPlan("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::InvalidPlan(format!("tol must be positive, got {}", self.tol)));
        }
        if self.n < 2 {
            return Err(Error::UnsupportedDimension(self.n));
        }
        if self.suite == Suite::Moebius && self.n != 2 {
            return Err(Error::InvalidPlan("the moebius suite requires n = 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub trial: u64,
    /// Hash of the trial's sampled inputs; the inputs themselves are
    /// regenerated from `(seed, trial)`.
    pub digest: String,
    /// Allowed minus observed; negative for a violation.
    pub margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    #[serde(flatten)]
    pub plan: TrialPlan,
    pub violations: Vec<Violation>,
    /// Smallest margin over all trials (allowed minus observed).
    pub worst_margin: f64,
    /// Inequality suites: largest ratio seen. Other suites: largest
    /// relative discrepancy seen.
    pub max_ratio_observed: f64,
    /// Inequality suites: the theoretical ceiling. Other suites: `tol`.
    pub bound: f64,
    pub passed: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    /// Equality ignoring the wall-clock field.
    pub fn same_outcome(&self, other: &Self) -> bool {
        Self {
            elapsed: Duration::ZERO,
            ..self.clone()
        } == Self {
            elapsed: Duration::ZERO,
            ..other.clone()
        }
    }
}

/// A uniform draw from the open standard simplex: normalized standard
/// exponentials, redrawn while any weight is below the boundary margin.
pub fn sample_interior(n: usize, stream: &mut Stream) -> Result<BarycentricPoint> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    loop {
        let draws: Vec<f64> = (0..=n).map(|_| stream.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        if draws.iter().all(|d| d / total >= EPS_BOUNDARY) {
            return BarycentricPoint::new(draws);
        }
    }
}

/// Vertices uniform in `[-1, 1]^n`, redrawn until the degeneracy guard passes.
pub fn random_simplex(n: usize, stream: &mut Stream) -> Result<CartesianSimplex> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    for _ in 0..MAX_REJECTIONS {
        let vertices = (0..=n)
            .map(|_| (0..n).map(|_| stream.random_range(-1.0..=1.0)).collect())
            .collect();
        if let Ok(s) = CartesianSimplex::new(vertices) {
            return Ok(s);
        }
    }
    Err(Error::SamplingFailure(MAX_REJECTIONS))
}

/// `n! · volume / (max edge)^n` relative to the regular simplex; 1 for a
/// regular simplex, near 0 for a flat one.
pub fn shape_quality(s: &CartesianSimplex) -> f64 {
    let n = s.dim();
    let regular = ((n + 1) as f64).sqrt() / 2f64.powf(n as f64 / 2.0);
    factorial(n) * s.volume() / s.max_edge_length().powi(n as i32) / regular
}

/// [`random_simplex`] restricted to draws with [`shape_quality`] at least
/// [`CONDITIONING_FLOOR`].
pub fn well_conditioned_simplex(n: usize, stream: &mut Stream) -> Result<CartesianSimplex> {
    for _ in 0..MAX_REJECTIONS {
        let s = random_simplex(n, stream)?;
        if shape_quality(&s) >= CONDITIONING_FLOOR {
            return Ok(s);
        }
    }
    Err(Error::SamplingFailure(MAX_REJECTIONS))
}

/// [`sample_interior`] restricted to draws with every weight at least
/// [`WEIGHT_FLOOR`].
pub fn well_conditioned_point(n: usize, stream: &mut Stream) -> Result<BarycentricPoint> {
    for _ in 0..MAX_REJECTIONS {
        let m = sample_interior(n, stream)?;
        if m.weights().iter().all(|&w| w >= WEIGHT_FLOOR) {
            return Ok(m);
        }
    }
    Err(Error::SamplingFailure(MAX_REJECTIONS))
}

struct TrialOutcome {
    observed: f64,
    margin: f64,
    digest: String,
    error: Option<String>,
}

fn digest(plan: &TrialPlan, trial: u64, inputs: &[f64]) -> String {
    let mut h = Sha256::new();
    h.update(plan.suite.name().as_bytes());
    h.update(plan.n.to_le_bytes());
    h.update(plan.seed.to_le_bytes());
    h.update(trial.to_le_bytes());
    for x in inputs {
        h.update(x.to_bits().to_le_bytes());
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn volume_ratios(cfg: &CevianConfiguration) -> Result<(f64, Vec<f64>)> {
    let base = cfg.simplex().volume();
    let corners = (0..=cfg.dim())
        .map(|k| cfg.corner_volume(k).map(|v| v / base))
        .collect::<Result<Vec<_>>>()?;
    Ok((cfg.cevian_volume() / base, corners))
}

/// A random affine map with bounded conditioning under which `simplex`
/// stays nondegenerate, as (row-major linear, offset).
fn random_affine(
    simplex: &CartesianSimplex,
    stream: &mut Stream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = simplex.dim();
    for _ in 0..MAX_REJECTIONS {
        let linear: Vec<f64> = (0..n * n).map(|_| stream.random_range(-1.0..=1.0)).collect();
        let offset: Vec<f64> = (0..n).map(|_| stream.random_range(-1.0..=1.0)).collect();
        let m = nalgebra::DMatrix::from_row_slice(n, n, &linear);
        if m.determinant().abs() < MIN_AFFINE_DET {
            continue;
        }
        let sv = m.singular_values();
        let condition = sv.max() / sv.min();
        if condition <= MAX_AFFINE_CONDITION && simplex.transformed(&linear, &offset).is_ok() {
            return Ok((linear, offset));
        }
    }
    Err(Error::SamplingFailure(MAX_REJECTIONS))
}

fn run_trial(plan: &TrialPlan, trial: u64, bound: f64) -> TrialOutcome {
    let mut stream = substream(plan.seed, Purpose::Trial, trial);
    let mut inputs = Vec::new();
    match measure_trial(plan, &mut stream, &mut inputs, bound) {
        Ok((observed, margin)) => TrialOutcome {
            observed,
            margin,
            digest: digest(plan, trial, &inputs),
            error: None,
        },
        Err(e) => TrialOutcome {
            observed: f64::NAN,
            margin: f64::NEG_INFINITY,
            digest: digest(plan, trial, &inputs),
            error: Some(e.to_string()),
        },
    }
}

/// Returns `(observed, margin)` for one trial.
fn measure_trial(
    plan: &TrialPlan,
    stream: &mut Stream,
    inputs: &mut Vec<f64>,
    bound: f64,
) -> Result<(f64, f64)> {
    let n = plan.n;
    let tol = plan.tol;
    let simplex = well_conditioned_simplex(n, stream)?;
    let m = well_conditioned_point(n, stream)?;
    inputs.extend(simplex.vertices().iter().flatten());
    inputs.extend(m.weights());
    let cfg = build_configuration(&simplex, &m)?;

    Ok(match plan.suite {
        Suite::Theorem1 => {
            let (det_ratio, _) = volume_ratios(&cfg)?;
            let observed = det_ratio.max(cevian_ratio(&m));
            (observed, bound + tol - observed)
        }
        Suite::Theorem2 => {
            let (_, corners) = volume_ratios(&cfg)?;
            let observed = corners[n].max(corner_objective(&m));
            (observed, bound + tol - observed)
        }
        Suite::Eq2 => {
            let (_, corners) = volume_ratios(&cfg)?;
            let worst = corners
                .iter()
                .enumerate()
                .map(|(k, det)| corner_ratio(&m, k).map(|c| rel_err(*det, c)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            (worst, tol - worst)
        }
        Suite::Decomposition => {
            let closed: f64 = (0..=n)
                .map(|k| corner_ratio(&m, k))
                .sum::<Result<f64>>()?;
            let closed_err = rel_err(closed, cevian_ratio(&m));
            let (det_cevian, det_corners) = volume_ratios(&cfg)?;
            let det_err = rel_err(det_corners.iter().sum(), det_cevian);
            let margin = (DECOMPOSITION_IDENTITY_TOL - closed_err).min(tol - det_err);
            (closed_err.max(det_err), margin)
        }
        Suite::Moebius => {
            let areas = MoebiusAreas::from_configuration(&cfg)?;
            let scaled = moebius_residual(&areas).abs() / areas.total.powi(3);
            (scaled, tol - scaled)
        }
        Suite::SegmentRatio => {
            let scale = simplex.max_edge_length();
            let mut worst = 0.0_f64;
            for i in 0..=n {
                let l = m.weights()[i];
                worst = worst.max(rel_err(cfg.s()[i] / cfg.r()[i], l / (1.0 - l)));
                worst = worst.max(
                    line_offset(simplex.vertex(i), cfg.m_cart(), &cfg.feet_cart()[i]) / scale,
                );
            }
            (worst, tol - worst)
        }
        Suite::Affine => {
            let (linear, offset) = random_affine(&simplex, stream)?;
            inputs.extend(&linear);
            inputs.extend(&offset);
            let image = simplex.transformed(&linear, &offset)?;
            let moved = build_configuration(&image, &m)?;
            let (c0, k0) = volume_ratios(&cfg)?;
            let (c1, k1) = volume_ratios(&moved)?;
            let worst = k0
                .iter()
                .zip(&k1)
                .map(|(a, b)| rel_err(*b, *a))
                .fold(rel_err(c1, c0), f64::max);
            (worst, tol - worst)
        }
    })
}

/// Distance from `p` to the line through `a` and `b`.
fn line_offset(a: &[f64], b: &[f64], p: &[f64]) -> f64 {
    let dir: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let rel: Vec<f64> = p.iter().zip(a).map(|(x, y)| x - y).collect();
    let dd: f64 = dir.iter().map(|x| x * x).sum();
    let t = dir.iter().zip(&rel).map(|(x, y)| x * y).sum::<f64>() / dd;
    let foot: Vec<f64> = a.iter().zip(&dir).map(|(x, d)| x + t * d).collect();
    distance(&foot, p)
}

fn suite_bound(plan: &TrialPlan) -> Result<f64> {
    Ok(match plan.suite {
        Suite::Theorem1 => theorem1_bound(plan.n)?.value,
        Suite::Theorem2 => theorem2_value(plan.n)?.value,
        _ => plan.tol,
    })
}

/// Runs `plan` on the default schedule.
pub fn run_suite(plan: &TrialPlan) -> Result<VerificationReport> {
    run_suite_with(plan, Schedule::default())
}

pub fn run_suite_with(plan: &TrialPlan, schedule: Schedule) -> Result<VerificationReport> {
    plan.validate()?;
    let started = Instant::now();
    let bound = suite_bound(plan)?;
    let outcomes = map_indexed(plan.trials, schedule, |t| run_trial(plan, t, bound));

    let mut violations = Vec::new();
    let mut worst_margin = f64::INFINITY;
    let mut max_observed = f64::NEG_INFINITY;
    for (trial, o) in (0u64..).zip(outcomes) {
        worst_margin = worst_margin.min(o.margin);
        if !o.observed.is_nan() {
            max_observed = max_observed.max(o.observed);
        }
        if !(o.margin >= 0.0) {
            violations.push(Violation {
                trial,
                digest: o.digest,
                margin: o.margin,
                error: o.error,
            });
        }
    }
    Ok(VerificationReport {
        plan: plan.clone(),
        passed: violations.is_empty(),
        violations,
        worst_margin,
        max_ratio_observed: max_observed,
        bound,
        elapsed: started.elapsed(),
    })
}
