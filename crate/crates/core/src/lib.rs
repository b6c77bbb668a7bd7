//! Generalized Struve series, the Hadamard operator family built on them, and
//! numerical tooling for third-order differential subordination on the unit
//! disk.
//!
//! Layering, bottom-up:
//!
//! * [`analytic`]: complex gamma, Pochhammer symbols, truncated Taylor series
//!   with certified tails, disk grids.
//! * [`struve`]: the normalized Struve kernel `U_{a,c}`, the operator
//!   `S_{a,c} f = U_{a,c} * f`, its shift recurrence and closed forms.
//! * [`admissibility`]: jet transforms and admissibility-class evaluators.
//! * [`subordination`]: majorants, subordination verdicts and seeded
//!   Monte-Carlo implication campaigns.
//! * [`harness`]: verification suites and report assembly for the CLI.

pub mod admissibility;
pub mod analytic;
pub mod error;
pub mod harness;
pub mod struve;
pub mod subordination;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Numerical margin applied wherever a strict inequality is tested.
pub const EPS_STRICT: f64 = 1e-9;
/// Distance from a nonpositive integer below which an argument counts as a pole.
pub const POLE_RADIUS: f64 = 1e-8;
/// Default truncation order for series.
pub const DEFAULT_ORDER: usize = 64;
/// Default radius on which tails are certified.
pub const DEFAULT_R_CERT: f64 = 0.999;
