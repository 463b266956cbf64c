//! Multi-threaded Monte Carlo driver.
//!
//! Rows of the loss buffer are split into contiguous blocks, one per worker,
//! and filled by [`simulate_losses`]. The reduction then runs serially over
//! the whole buffer, so every worker count gives the same bits as one.

use std::num::NonZeroUsize;
use std::thread;

use hazsel_core::risk::{simulate_losses, summarize_paired, summarize_risk};
use hazsel_core::{EstimatorSpec, PairedComparison, PopulationSet, RiskEstimate, RngSpec};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy)]
pub struct Engine {
    workers: NonZeroUsize,
}

impl Default for Engine {
    fn default() -> Self {
        Self {
            workers: thread::available_parallelism().unwrap_or(NonZeroUsize::MIN),
        }
    }
}

impl Engine {
    pub fn new(workers: usize) -> Result<Self> {
        NonZeroUsize::new(workers)
            .map(|workers| Self { workers })
            .ok_or_else(|| CliError::invalid("workers", "must be >= 1"))
    }

    pub fn workers(&self) -> usize {
        self.workers.get()
    }

    /// Row-major `replications × specs.len()` loss buffer.
    pub fn losses(
        &self,
        specs: &[EstimatorSpec],
        pop: &PopulationSet,
        replications: u64,
        rng: &RngSpec,
    ) -> Result<Vec<f64>> {
        if replications == 0 {
            return Err(CliError::invalid("reps", "must be >= 1"));
        }
        if specs.is_empty() {
            return Err(CliError::invalid("estimators", "list is empty"));
        }
        let stride = specs.len();
        let reps = usize::try_from(replications).map_err(|_| CliError::invalid("reps", "too large"))?;
        let mut buf = vec![0.0; reps * stride];
        let workers = self.workers.get().min(reps);
        let rows_per = reps.div_ceil(workers);
        thread::scope(|s| {
            let handles: Vec<_> = buf
                .chunks_mut(rows_per * stride)
                .enumerate()
                .map(|(i, chunk)| {
                    let first = (i * rows_per) as u64;
                    s.spawn(move || simulate_losses(specs, pop, rng, first, chunk))
                })
                .collect();
            handles
                .into_iter()
                .try_for_each(|h| h.join().expect("worker panicked"))
        })?;
        Ok(buf)
    }

    pub fn risks(
        &self,
        specs: &[EstimatorSpec],
        pop: &PopulationSet,
        replications: u64,
        rng: &RngSpec,
    ) -> Result<Vec<RiskEstimate>> {
        let buf = self.losses(specs, pop, replications, rng)?;
        Ok((0..specs.len())
            .map(|col| summarize_risk(&buf, specs.len(), col, rng.seed))
            .collect())
    }

    /// `R(a) − R(b)` on common random numbers.
    pub fn paired(
        &self,
        a: &EstimatorSpec,
        b: &EstimatorSpec,
        pop: &PopulationSet,
        replications: u64,
        rng: &RngSpec,
    ) -> Result<PairedComparison> {
        let buf = self.losses(&[*a, *b], pop, replications, rng)?;
        Ok(summarize_paired(&buf, 2, 0, 1))
    }
}
