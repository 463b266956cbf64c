//! Estimators of the selected hazard rate `σ_J`.
//!
//! Two families are supported:
//!
//! - `δ_c = c / Y_J` ([`EstimatorSpec::ScaleInverse`]). The named members are
//!   `δ_ML` (`c = n`), `δ_N1` (`c = n − 2`) and `δ_N2` (`c = n − 1`).
//! - the improved form `c / Y_J + α(n·h − 1) / (h·X)`
//!   ([`EstimatorSpec::Improved`]), i.e. `c / Y_J + n[w(X) + X w'(X)/(n h)]`
//!   with `w(t) = α / t` and `X` the geometric mean of the `h` largest sums.
//!   The correction is admissible for `0 < α <= ((n − c)h + 1) / (n h + 1)`.
//!
//! For two populations the `c / Y_J` class is admissible exactly on
//! `[c_*, c*]`, see [`admissible_range`].

use core::fmt;
use core::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::model::{geometric_mean_top, PopulationSet, SelectionOutcome};
use crate::numerics::reg_inc_beta;

/// Relative slack when comparing `α` against its upper bound, so that a
/// bound recomputed by the caller still validates.
const ALPHA_BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorSpec {
    /// `c / Y_J`.
    ScaleInverse { c: f64 },
    /// `c / Y_J + α(n·h − 1) / (h·X)`.
    Improved { c: f64, alpha: f64, h_count: usize },
}

impl EstimatorSpec {
    pub fn scale_inverse(c: f64) -> Self {
        Self::ScaleInverse { c }
    }

    pub fn improved(c: f64, alpha: f64, h_count: usize) -> Self {
        Self::Improved { c, alpha, h_count }
    }

    /// `δ_ML = n / Y_J`.
    pub fn ml(n: u32) -> Self {
        Self::scale_inverse(f64::from(n))
    }

    /// `δ_N1 = (n − 2) / Y_J`; needs `n >= 3` to stay positive.
    pub fn n1(n: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidEstimator(Violation::N1NeedsThreeObservations { n }));
        }
        Ok(Self::scale_inverse(f64::from(n) - 2.0))
    }

    /// `δ_N2 = (n − 1) / Y_J`.
    pub fn n2(n: u32) -> Self {
        Self::scale_inverse(f64::from(n) - 1.0)
    }

    /// Improved estimator over `c / Y_J` with `α` at its upper bound.
    pub fn improved_at_bound(n: u32, h_count: usize, c: f64) -> Result<Self> {
        let alpha = alpha_upper_bound(n, h_count, c)?;
        Ok(Self::improved(c, alpha, h_count))
    }

    pub fn c(&self) -> f64 {
        match *self {
            Self::ScaleInverse { c } | Self::Improved { c, .. } => c,
        }
    }

    /// Checks the spec against a problem with sample size `n` and `k` populations.
    pub fn validate(&self, n: u32, k: usize) -> Result<()> {
        match *self {
            Self::ScaleInverse { c } => {
                if c > 0.0 && c.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidEstimator(Violation::CNotPositive { c }))
                }
            }
            Self::Improved { .. } => validate_improved(self, n, k).map_err(Error::InvalidEstimator),
        }
    }
}

impl fmt::Display for EstimatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::ScaleInverse { c } => write!(f, "inv:{c}"),
            Self::Improved { c, alpha, h_count } => write!(f, "imp:{c}:{alpha}:{h_count}"),
        }
    }
}

/// The five estimators compared in the risk tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedEstimator {
    Ml,
    N1,
    N2,
    N2Improved,
    MlImproved,
}

impl NamedEstimator {
    pub const ALL: [NamedEstimator; 5] = [Self::N1, Self::N2, Self::N2Improved, Self::Ml, Self::MlImproved];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ml => "ML",
            Self::N1 => "N1",
            Self::N2 => "N2",
            Self::N2Improved => "N2I",
            Self::MlImproved => "MLI",
        }
    }

    /// Resolves the name for `(n, k)` with `α` at its bound and `h = k`.
    pub fn spec(self, n: u32, k: usize) -> Result<EstimatorSpec> {
        self.spec_with(n, k, None, None)
    }

    /// Like [`NamedEstimator::spec`] but with optional `α` / `h` overrides for
    /// the improved estimators. Overrides are ignored by the `c / Y_J` names.
    pub fn spec_with(
        self,
        n: u32,
        k: usize,
        alpha: Option<f64>,
        h_count: Option<usize>,
    ) -> Result<EstimatorSpec> {
        let improve = |c: f64| -> Result<EstimatorSpec> {
            let h = h_count.unwrap_or(k);
            let spec = match alpha {
                Some(a) => EstimatorSpec::improved(c, a, h),
                None => EstimatorSpec::improved_at_bound(n, h, c)?,
            };
            spec.validate(n, k)?;
            Ok(spec)
        };
        match self {
            Self::Ml => Ok(EstimatorSpec::ml(n)),
            Self::N1 => EstimatorSpec::n1(n),
            Self::N2 => Ok(EstimatorSpec::n2(n)),
            Self::N2Improved => improve(f64::from(n) - 1.0),
            Self::MlImproved => improve(f64::from(n)),
        }
    }
}

impl fmt::Display for NamedEstimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedEstimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s.trim()))
            .ok_or(Error::InvalidEstimator(Violation::UnknownName))
    }
}

/// Why an estimator spec was rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    NotImproved,
    UnknownName,
    CNotPositive { c: f64 },
    /// The improved form requires `c <= n`.
    CAboveN { c: f64, n: u32 },
    AlphaNotPositive { alpha: f64 },
    AlphaAboveBound { alpha: f64, bound: f64 },
    HCountOutOfRange { h_count: usize, k: usize },
    N1NeedsThreeObservations { n: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::NotImproved => f.write_str("not an improved estimator"),
            Self::UnknownName => f.write_str("unknown estimator name (expected ML, N1, N2, N2I or MLI)"),
            Self::CNotPositive { c } => write!(f, "c = {c} must be > 0"),
            Self::CAboveN { c, n } => write!(f, "c = {c} exceeds n = {n}"),
            Self::AlphaNotPositive { alpha } => write!(f, "alpha = {alpha} must be > 0"),
            Self::AlphaAboveBound { alpha, bound } => {
                write!(f, "alpha = {alpha} exceeds the upper bound {bound}")
            }
            Self::HCountOutOfRange { h_count, k } => {
                write!(f, "h = {h_count} must satisfy 2 <= h <= k = {k}")
            }
            Self::N1NeedsThreeObservations { n } => write!(f, "N1 needs n >= 3, got n = {n}"),
        }
    }
}

/// Upper bound `((n − c)h + 1) / (n h + 1)` on `α` for the improved form.
pub fn alpha_upper_bound(n: u32, h_count: usize, c: f64) -> Result<f64> {
    let nf = f64::from(n);
    if !(c > 0.0) || c > nf {
        return Err(domain("c", c, "must satisfy 0 < c <= n"));
    }
    if h_count < 2 {
        return Err(domain("h", h_count as f64, "must be >= 2"));
    }
    let h = h_count as f64;
    Ok(((nf - c) * h + 1.0) / (nf * h + 1.0))
}

/// Checks the conditions under which the improved form dominates `c / Y_J`.
///
/// `w(t) = α / t` is nonincreasing for every `α > 0`, so only the bound on
/// `α`, the range of `c` and `h` are checked.
pub fn validate_improved(spec: &EstimatorSpec, n: u32, k: usize) -> core::result::Result<(), Violation> {
    let EstimatorSpec::Improved { c, alpha, h_count } = *spec else {
        return Err(Violation::NotImproved);
    };
    if !(c > 0.0 && c.is_finite()) {
        return Err(Violation::CNotPositive { c });
    }
    if c > f64::from(n) {
        return Err(Violation::CAboveN { c, n });
    }
    if h_count < 2 || h_count > k {
        return Err(Violation::HCountOutOfRange { h_count, k });
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Violation::AlphaNotPositive { alpha });
    }
    let bound = alpha_upper_bound(n, h_count, c).map_err(|_| Violation::CAboveN { c, n })?;
    if alpha > bound * (1.0 + ALPHA_BOUND_SLACK) {
        return Err(Violation::AlphaAboveBound { alpha, bound });
    }
    Ok(())
}

/// Value of the estimator on one selection outcome.
pub fn evaluate(spec: &EstimatorSpec, outcome: &SelectionOutcome, pop: &PopulationSet) -> Result<f64> {
    spec.validate(pop.n(), pop.k())?;
    if outcome.sums.len() != pop.k() {
        return Err(Error::LengthMismatch {
            expected: pop.k(),
            actual: outcome.sums.len(),
        });
    }
    Ok(estimate(spec, pop.n(), &outcome.sums, outcome.y_selected))
}

/// Unchecked evaluation on raw sums; `spec` must already be validated.
pub(crate) fn estimate(spec: &EstimatorSpec, n: u32, sums: &[f64], y_selected: f64) -> f64 {
    match *spec {
        EstimatorSpec::ScaleInverse { c } => c / y_selected,
        EstimatorSpec::Improved { c, alpha, h_count } => {
            let h = h_count as f64;
            let x = geometric_mean_top(sums, h_count);
            c / y_selected + alpha * (f64::from(n) * h - 1.0) / (h * x)
        }
    }
}

/// Admissible interval `[c_*, c*]` of the `c / Y_J` class for two populations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleRange {
    /// `c_* = n − 1`.
    pub c_lower: f64,
    /// `c* = (n − 1) / (2 I_{1/2}(n, n − 1))`.
    pub c_upper: f64,
}

impl AdmissibleRange {
    pub fn contains(&self, c: f64) -> bool {
        self.c_lower <= c && c <= self.c_upper
    }
}

/// `c* = 1 / h(1)` is the supremum over the rate ratio of
/// `1 / E[1/(σ_J Y_J)]`; `c_* = n − 1` is its infimum (the `q → ∞` limit).
pub fn admissible_range(n: u32) -> Result<AdmissibleRange> {
    if n < 2 {
        return Err(domain("n", f64::from(n), "must be >= 2"));
    }
    let nf = f64::from(n);
    let half_mass = reg_inc_beta(0.5, nf, nf - 1.0)?;
    Ok(AdmissibleRange {
        c_lower: nf - 1.0,
        c_upper: (nf - 1.0) / (2.0 * half_mass),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Admissibility {
    /// `c < c_*`; `c / Y_J` is improved by `c_* / Y_J`.
    InadmissibleLow { dominator: f64 },
    Admissible,
    /// `c > c*`; `c / Y_J` is improved by `c* / Y_J`.
    InadmissibleHigh { dominator: f64 },
}

/// Places `c` relative to `[c_*, c*]` for two populations.
pub fn classify_c(n: u32, c: f64) -> Result<Admissibility> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain("c", c, "must be finite and > 0"));
    }
    let range = admissible_range(n)?;
    Ok(if c < range.c_lower {
        Admissibility::InadmissibleLow {
            dominator: range.c_lower,
        }
    } else if c > range.c_upper {
        Admissibility::InadmissibleHigh {
            dominator: range.c_upper,
        }
    } else {
        Admissibility::Admissible
    })
}
