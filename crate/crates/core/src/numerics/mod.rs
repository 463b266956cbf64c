//! Special functions and one-dimensional quadrature.
//!
//! Everything here is a pure function of its arguments and runs in double
//! precision. Integer-parameter fast paths (Erlang CDF, binomial-sum
//! incomplete beta) are used where they apply; the general continued
//! fraction and series forms are exported as well so they can be checked
//! against each other.

pub(crate) mod quad;
pub(crate) mod special;

pub use quad::{adaptive_quad, integrate, QuadEstimate, QuadratureSpec};
pub use special::{
    beta_fn, digamma, gamma_cdf, inc_beta_continued_fraction, ln_beta, ln_gamma,
    reg_inc_beta, reg_lower_gamma, EULER_GAMMA,
};
