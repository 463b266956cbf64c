//! Estimation after selection for exponential hazard rates.
//!
//! `k` independent exponential populations with hazard rates `σ_1..σ_k` each
//! contribute a sample of size `n`. The population with the largest sample
//! sum `Y_J` is selected and its hazard rate `σ_J` is estimated under the
//! entropy loss `d/σ_J − ln(d/σ_J) − 1`.
//!
//! The crate is `no_std` (it needs `alloc`) and is split into:
//!
//! - [`numerics`]: ln-gamma, digamma, incomplete beta, gamma CDF and adaptive
//!   Gauss–Kronrod quadrature.
//! - [`model`]: populations, the counter-based random streams, the selection
//!   rule and the geometric-mean statistic.
//! - [`estimators`]: the `c / Y_J` family, the improved estimators and the
//!   admissible interval `[c_*, c*]` for two populations.
//! - [`risk`]: entropy loss, closed-form risk quantities, exact two-population
//!   risk by quadrature and the seeded Monte Carlo engine.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod estimators;
pub mod model;
pub mod numerics;
pub mod risk;

pub use error::{Error, Result};
pub use estimators::{
    AdmissibleRange, Admissibility, EstimatorSpec, NamedEstimator, Violation,
};
pub use model::{PopulationSet, RngSpec, SelectionOutcome};
pub use numerics::QuadratureSpec;
pub use risk::{BayesPrior, PairedComparison, RiskEstimate};
