//! The extremal weight θ_n, the smaller root of `x² - (n+1)x + 1`, and the
//! metallic means φ_n, the positive root of `x² - nx - 1`, each in closed,
//! continued-fraction and hyperbolic form.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratios::{audit_bound, theorem2_value};

/// Default continued-fraction depth for reports.
pub const DEFAULT_CF_DEPTH: usize = 40;

fn check_theta_dim(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(n as f64)
}

/// `(n + 1 - √(n² + 2n - 3)) / 2`, evaluated as `2 / (n + 1 + √((n+3)(n-1)))`
/// so no digits are lost to cancellation for large `n`.
pub fn theta(n: usize) -> Result<f64> {
    let nf = check_theta_dim(n)?;
    Ok(2.0 / (nf + 1.0 + ((nf + 3.0) * (nf - 1.0)).sqrt()))
}

/// Truncation of `1 / (n+1 - 1 / (n+1 - ...))` with `depth` levels, built
/// innermost first from a zero tail.
pub fn theta_cf(n: usize, depth: usize) -> Result<f64> {
    let nf = check_theta_dim(n)?;
    if depth == 0 {
        return Err(Error::NonPositiveDepth);
    }
    Ok((0..depth).fold(0.0, |x, _| 1.0 / (nf + 1.0 - x)))
}

/// `exp(-arccosh((n + 1) / 2))`.
pub fn theta_hyperbolic(n: usize) -> Result<f64> {
    let nf = check_theta_dim(n)?;
    Ok((-((nf + 1.0) / 2.0).acosh()).exp())
}

fn check_metallic_dim(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::UnsupportedDimension(n));
    }
    Ok(n as f64)
}

/// `(n + √(n² + 4)) / 2`; `metallic(1)` is the golden ratio.
pub fn metallic(n: usize) -> Result<f64> {
    let nf = check_metallic_dim(n)?;
    Ok((nf + (nf * nf + 4.0).sqrt()) / 2.0)
}

/// Truncation of `n + 1 / (n + 1 / (n + ...))`. Depth 1 is the bare
/// innermost term `n`; each further level applies `x -> n + 1/x`.
pub fn metallic_cf(n: usize, depth: usize) -> Result<f64> {
    let nf = check_metallic_dim(n)?;
    if depth == 0 {
        return Err(Error::NonPositiveDepth);
    }
    Ok((1..depth).fold(nf, |x, _| nf + 1.0 / x))
}

/// `exp(arcsinh(n / 2))`.
pub fn metallic_hyperbolic(n: usize) -> Result<f64> {
    let nf = check_metallic_dim(n)?;
    Ok((nf / 2.0).asinh().exp())
}

/// One row of the constants table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantsRow {
    pub n: usize,
    pub theta: f64,
    pub theta_cf: f64,
    pub theta_hyp: f64,
    pub f_theta: f64,
    pub log_f_theta: f64,
    pub paper_eq3_value: f64,
    pub metallic: f64,
    pub metallic_cf: f64,
    pub metallic_hyp: f64,
}

impl ConstantsRow {
    pub fn new(n: usize, depth: usize) -> Result<Self> {
        let f_theta = theorem2_value(n)?;
        Ok(Self {
            n,
            theta: theta(n)?,
            theta_cf: theta_cf(n, depth)?,
            theta_hyp: theta_hyperbolic(n)?,
            f_theta: f_theta.value,
            log_f_theta: f_theta.ln,
            paper_eq3_value: audit_bound(n)?.paper_value,
            metallic: metallic(n)?,
            metallic_cf: metallic_cf(n, depth)?,
            metallic_hyp: metallic_hyperbolic(n)?,
        })
    }
}

/// Rows for `n_min..=n_max`.
pub fn constants_table(n_min: usize, n_max: usize, depth: usize) -> Result<Vec<ConstantsRow>> {
    if n_min < 2 {
        return Err(Error::UnsupportedDimension(n_min));
    }
    if n_max < n_min {
        return Err(Error::UnsupportedDimension(n_max));
    }
    (n_min..=n_max).map(|n| ConstantsRow::new(n, depth)).collect()
}
