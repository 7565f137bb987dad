//! Closed-form volume ratios of cevian simplices, written purely in the
//! barycentric weights of the interior point.
//!
//! Every ratio here is relative to the volume of the base simplex. Corner
//! `k` (0-based) is the simplex with apex `M` and all cevian feet except
//! `N_k`; the cevian simplex is the one spanned by all feet.

use serde::Serialize;

use crate::constants::theta;
use crate::error::{Error, Result};
use crate::simplex::{simplex_volume, BarycentricPoint, CevianConfiguration};

/// A quantity together with its natural logarithm, for dimensions where the
/// linear value underflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Magnitude {
    pub value: f64,
    pub ln: f64,
}

/// `λ_k · Π_{i≠k} λ_i / (1 - λ_i)`.
pub fn corner_ratio(m: &BarycentricPoint, k: usize) -> Result<f64> {
    let w = m.weights();
    if k >= w.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: w.len(),
        });
    }
    Ok(w.iter()
        .enumerate()
        .map(|(i, &l)| if i == k { l } else { l / (1.0 - l) })
        .product())
}

/// `n · Π λ_i / Π (1 - λ_i)`.
///
/// Derived as the absolute determinant of the feet's barycentric matrix;
/// the harness checks it against Cartesian determinants.
pub fn cevian_ratio(m: &BarycentricPoint) -> f64 {
    let n = m.dim() as f64;
    n * m.weights().iter().map(|&l| l / (1.0 - l)).product::<f64>()
}

/// `n^{-n}`, the largest possible cevian-simplex ratio.
pub fn theorem1_bound(n: usize) -> Result<Magnitude> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let nf = n as f64;
    let ln = -nf * nf.ln();
    let value = if n <= i32::MAX as usize {
        nf.powi(-(n as i32))
    } else {
        ln.exp()
    };
    Ok(Magnitude { value, ln })
}

/// Maximum of the last corner ratio, `f(θ_n) = (θ/(1-θ))^n (1 - nθ)`.
///
/// The log form uses `1 - nθ = θ(1 - θ)`, which holds because θ is a root of
/// `x² - (n+1)x + 1`, and avoids the cancellation in `1 - nθ` for large `n`.
pub fn theorem2_value(n: usize) -> Result<Magnitude> {
    let t = theta(n)?;
    let nf = n as f64;
    let odds = t / (1.0 - t);
    let value = odds.powi(n as i32) * (1.0 - nf * t);
    let ln = nf * odds.ln() + t.ln() + (-t).ln_1p();
    Ok(Magnitude { value, ln })
}

/// The printed general bound `(n+1)² / (n - θ)^{n+3}` next to the directly
/// evaluated maximum, with no verdict attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundAudit {
    pub n: usize,
    pub paper_value: f64,
    pub direct_value: f64,
    pub ratio: f64,
}

impl BoundAudit {
    /// `f(θ_n) · (n - θ_n)^{n+3}`; comes out as `(n - 1)²`.
    pub fn direct_times_power(&self) -> f64 {
        let t = theta(self.n).expect("audit rows are built for n >= 2");
        self.direct_value * (self.n as f64 - t).powi(self.n as i32 + 3)
    }
}

pub fn audit_bound(n: usize) -> Result<BoundAudit> {
    let t = theta(n)?;
    let nf = n as f64;
    let paper_value = (nf + 1.0).powi(2) / (nf - t).powi(n as i32 + 3);
    let direct_value = theorem2_value(n)?.value;
    Ok(BoundAudit {
        n,
        paper_value,
        direct_value,
        ratio: paper_value / direct_value,
    })
}

/// All closed-form ratios for one interior point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioBreakdown {
    pub n: usize,
    pub corner_ratios: Vec<f64>,
    pub cevian_ratio: f64,
    pub theorem1_bound: f64,
    pub theorem2_value: f64,
}

impl RatioBreakdown {
    pub fn new(m: &BarycentricPoint) -> Result<Self> {
        let n = m.dim();
        let corner_ratios = (0..=n)
            .map(|k| corner_ratio(m, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            corner_ratios,
            cevian_ratio: cevian_ratio(m),
            theorem1_bound: theorem1_bound(n)?.value,
            theorem2_value: theorem2_value(n)?.value,
        })
    }

    /// Relative gap between the summed corners and the cevian ratio.
    pub fn decomposition_error(&self) -> f64 {
        let sum: f64 = self.corner_ratios.iter().sum();
        (sum - self.cevian_ratio).abs() / self.cevian_ratio
    }
}

/// Areas cut from a triangle by three concurrent cevians: the corner
/// triangles `A_1N_2N_3`, `A_2N_3N_1`, `A_3N_1N_2`, the cevian triangle, and
/// the whole triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoebiusAreas {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub x: f64,
    pub total: f64,
}

impl MoebiusAreas {
    pub fn new(p: f64, q: f64, r: f64, x: f64, total: f64) -> Result<Self> {
        if [p, q, r, x, total].iter().any(|a| !(*a > 0.0)) {
            return Err(Error::InvalidPlan("areas must be positive".into()));
        }
        if ((p + q + r + x) - total).abs() > 1e-9 * total {
            return Err(Error::InvalidPlan(format!(
                "areas do not tile the triangle: {} vs {total}",
                p + q + r + x
            )));
        }
        Ok(Self { p, q, r, x, total })
    }

    /// Measures the four pieces of a triangle configuration by determinants.
    pub fn from_configuration(cfg: &CevianConfiguration) -> Result<Self> {
        if cfg.dim() != 2 {
            return Err(Error::UnsupportedDimension(cfg.dim()));
        }
        let a = cfg.simplex().vertices();
        let feet = cfg.feet_cart();
        let corner = |i: usize| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            simplex_volume(&[a[i].clone(), feet[j].clone(), feet[k].clone()])
        };
        Self::new(
            corner(0)?,
            corner(1)?,
            corner(2)?,
            cfg.cevian_volume(),
            cfg.simplex().volume(),
        )
    }
}

/// `4pqr - x²(p + q + r + x)`, which vanishes for any cevian configuration.
pub fn moebius_residual(a: &MoebiusAreas) -> f64 {
    4.0 * a.p * a.q * a.r - a.x * a.x * (a.p + a.q + a.r + a.x)
}
