//! Seeded Monte Carlo risk.
//!
//! Losses are computed per replication into a row-major buffer
//! (`replications × estimators`) and then reduced in replication order. A
//! row depends only on `(rng, replication)`, so any partition of the rows
//! across workers reproduces the serial result bit for bit as long as the
//! reduction runs over the whole buffer in order.

use alloc::vec;
use alloc::vec::Vec;
use libm::sqrt;

use super::loss::loss_unchecked;
use crate::error::{domain, Error, Result};
use crate::estimators::{estimate, EstimatorSpec};
use crate::model::{argmax, draw_gamma_sum, fill_sums, PopulationSet, RngSpec};

/// Monte Carlo estimate of a risk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskEstimate {
    pub mean: f64,
    /// Sample standard deviation of the losses divided by `√replications`.
    pub std_error: f64,
    pub replications: u64,
    pub seed: u64,
}

/// Risk difference `R(A) − R(B)` under common random numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedComparison {
    pub mean_diff: f64,
    pub std_error_diff: f64,
    pub replications: u64,
}

impl PairedComparison {
    /// `mean_diff / std_error_diff`, or 0 when both are zero.
    pub fn z_score(&self) -> f64 {
        if self.std_error_diff > 0.0 {
            self.mean_diff / self.std_error_diff
        } else if self.mean_diff == 0.0 {
            0.0
        } else {
            self.mean_diff.signum() * f64::INFINITY
        }
    }
}

fn mean_and_se<I>(values: I) -> (f64, f64, u64)
where
    I: Iterator<Item = f64> + Clone,
{
    let mut count = 0u64;
    let mut total = 0.0;
    for v in values.clone() {
        total += v;
        count += 1;
    }
    if count == 0 {
        return (f64::NAN, f64::NAN, 0);
    }
    let mean = total / count as f64;
    if count == 1 {
        return (mean, 0.0, 1);
    }
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    let sd = sqrt(ss / (count - 1) as f64);
    (mean, sd / sqrt(count as f64), count)
}

/// Reduces one column of a row-major loss buffer with `stride` columns.
pub fn summarize_risk(losses: &[f64], stride: usize, column: usize, seed: u64) -> RiskEstimate {
    let (mean, std_error, replications) = mean_and_se(losses.iter().skip(column).step_by(stride).copied());
    RiskEstimate {
        mean,
        std_error,
        replications,
        seed,
    }
}

/// Paired reduction of columns `a − b` of a row-major loss buffer.
pub fn summarize_paired(losses: &[f64], stride: usize, a: usize, b: usize) -> PairedComparison {
    let diffs = losses.chunks_exact(stride).map(|row| row[a] - row[b]);
    let (mean_diff, std_error_diff, replications) = mean_and_se(diffs);
    PairedComparison {
        mean_diff,
        std_error_diff,
        replications,
    }
}

fn validate_all(specs: &[EstimatorSpec], pop: &PopulationSet) -> Result<()> {
    if specs.is_empty() {
        return Err(domain("estimators", 0.0, "at least one estimator is required"));
    }
    specs.iter().try_for_each(|s| s.validate(pop.n(), pop.k()))
}

/// Fills `out` with entropy losses for replications `first_replication..`,
/// one row per replication and one column per spec.
pub fn simulate_losses(
    specs: &[EstimatorSpec],
    pop: &PopulationSet,
    rng: &RngSpec,
    first_replication: u64,
    out: &mut [f64],
) -> Result<()> {
    validate_all(specs, pop)?;
    let stride = specs.len();
    if out.len() % stride != 0 {
        return Err(Error::LengthMismatch {
            expected: (out.len() / stride + 1) * stride,
            actual: out.len(),
        });
    }
    let n = pop.n();
    let mut sums = vec![0.0; pop.k()];
    for (offset, row) in out.chunks_exact_mut(stride).enumerate() {
        fill_sums(pop, rng, first_replication + offset as u64, &mut sums);
        let j = argmax(&sums);
        let (y_selected, sigma_selected) = (sums[j], pop.rates()[j]);
        for (slot, spec) in row.iter_mut().zip(specs) {
            *slot = loss_unchecked(estimate(spec, n, &sums, y_selected), sigma_selected);
        }
    }
    Ok(())
}

fn check_replications(replications: u64) -> Result<usize> {
    if replications == 0 {
        return Err(domain("replications", 0.0, "must be >= 1"));
    }
    usize::try_from(replications).map_err(|_| domain("replications", replications as f64, "too large"))
}

/// Risks of several estimators on common draws.
pub fn mc_risks(
    specs: &[EstimatorSpec],
    pop: &PopulationSet,
    replications: u64,
    rng: &RngSpec,
) -> Result<Vec<RiskEstimate>> {
    let reps = check_replications(replications)?;
    validate_all(specs, pop)?;
    let mut losses = vec![0.0; reps * specs.len()];
    simulate_losses(specs, pop, rng, 0, &mut losses)?;
    Ok((0..specs.len())
        .map(|col| summarize_risk(&losses, specs.len(), col, rng.seed))
        .collect())
}

/// Risk of one estimator.
pub fn mc_risk(
    spec: &EstimatorSpec,
    pop: &PopulationSet,
    replications: u64,
    rng: &RngSpec,
) -> Result<RiskEstimate> {
    Ok(mc_risks(core::slice::from_ref(spec), pop, replications, rng)?[0])
}

/// `R(A) − R(B)` estimated on identical draws.
pub fn mc_dominance(
    spec_a: &EstimatorSpec,
    spec_b: &EstimatorSpec,
    pop: &PopulationSet,
    replications: u64,
    rng: &RngSpec,
) -> Result<PairedComparison> {
    let reps = check_replications(replications)?;
    let specs = [*spec_a, *spec_b];
    let mut losses = vec![0.0; reps * 2];
    simulate_losses(&specs, pop, rng, 0, &mut losses)?;
    Ok(summarize_paired(&losses, 2, 0, 1))
}

/// Risk of `c / Y` for a single population (no selection), `Y ~ Gamma(rate, n)`.
pub fn mc_component_risk(
    c: f64,
    n: u32,
    rate: f64,
    replications: u64,
    rng: &RngSpec,
) -> Result<RiskEstimate> {
    let reps = check_replications(replications)?;
    let pop = PopulationSet::component(n, rate)?;
    EstimatorSpec::scale_inverse(c).validate(n, 1)?;
    let losses: Vec<f64> = (0..reps as u64)
        .map(|r| loss_unchecked(c / draw_gamma_sum(rng, r, 0, pop.rates()[0], n), rate))
        .collect();
    Ok(summarize_risk(&losses, 1, 0, rng.seed))
}
