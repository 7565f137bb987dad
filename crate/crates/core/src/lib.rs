//! Volume ratios of cevian simplices.
//!
//! For a point `M` inside an `n`-simplex `A_1 ... A_{n+1}`, the cevian from
//! `A_i` through `M` meets the opposite facet at `N_i`. This crate computes
//! the volumes of the simplices cut out by these feet, in closed form from
//! the barycentric coordinates of `M` and by Cartesian determinants, along
//! with the extremal constants θ_n, the optimizers that recover them, and
//! seeded Monte Carlo suites that cross-check everything.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod exec;
pub mod harness;
pub mod optimize;
pub mod ratios;
pub mod simplex;
pub mod stream;

pub use error::{Error, Result};
pub use exec::Schedule;
pub use harness::{run_suite, run_suite_with, Suite, TrialPlan, VerificationReport};
pub use ratios::{BoundAudit, Magnitude, MoebiusAreas, RatioBreakdown};
pub use simplex::{BarycentricPoint, CartesianSimplex, CevianConfiguration, FacetPoint};
