//! Populations, reproducible random streams and the natural selection rule.
//!
//! Only the sufficient sums `Y_i = Σ_j Y_ij` are ever materialized. Each sum
//! is drawn as `Σ_{j=1}^n −ln(U_j) / σ_i`, an exact `Gamma(σ_i, n)` variate.
//!
//! Randomness is counter-based: the uniforms feeding population `i` in
//! replication `r` come from a ChaCha8 keystream addressed by
//! `(seed, stream_id, r, i)`, so any replication can be regenerated on its
//! own and the split of replications across workers never changes a draw.

use alloc::vec;
use alloc::vec::Vec;
use libm::{exp, log};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{domain, Error, Result};

/// `k` exponential populations sampled `n` times each.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSet {
    n: u32,
    rates: Vec<f64>,
}

impl PopulationSet {
    /// Builds a set from hazard rates `σ_1..σ_k`. Requires `k >= 2`, `n >= 2`.
    pub fn new(n: u32, rates: Vec<f64>) -> Result<Self> {
        if rates.len() < 2 {
            return Err(Error::InvalidPopulation("at least two populations are required"));
        }
        Self::checked(n, rates)
    }

    /// Builds a set from scale parameters `σ_i^{-1}`, the parameterization
    /// used by the risk tables.
    pub fn from_scales(n: u32, scales: &[f64]) -> Result<Self> {
        for &s in scales {
            if !(s > 0.0 && s.is_finite()) {
                return Err(domain("scale", s, "must be finite and > 0"));
            }
        }
        Self::new(n, scales.iter().map(|s| 1.0 / s).collect())
    }

    /// Single-population set for the component (no selection) problem.
    pub(crate) fn component(n: u32, rate: f64) -> Result<Self> {
        Self::checked(n, vec![rate])
    }

    fn checked(n: u32, rates: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidPopulation("sample size n must be at least 2"));
        }
        for &r in &rates {
            if !(r > 0.0 && r.is_finite()) {
                return Err(domain("rate", r, "must be finite and > 0"));
            }
        }
        Ok(Self { n, rates })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rates.len()
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn scales(&self) -> Vec<f64> {
        self.rates.iter().map(|r| 1.0 / r).collect()
    }
}

/// Seed plus stream identifier for the counter-based generator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RngSpec {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream_id: 0 }
    }

    pub fn with_stream(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }
}

const KEY_TAG: &[u8; 16] = b"hazsel.sums.v1\0\0";

fn population_stream(rng: &RngSpec, replication: u64, population: u32) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&rng.seed.to_le_bytes());
    key[8..16].copy_from_slice(&rng.stream_id.to_le_bytes());
    key[16..].copy_from_slice(KEY_TAG);
    let mut stream = ChaCha8Rng::from_seed(key);
    stream.set_stream(replication);
    // 2^32 words per population: far more than any sample size consumes.
    stream.set_word_pos(u128::from(population) << 32);
    stream
}

/// Uniform on `(0, 1]` with 53 random bits.
fn open_unit(stream: &mut ChaCha8Rng) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    ((stream.next_u64() >> 11) + 1) as f64 * SCALE
}

/// One `Gamma(rate, n)` draw for population `population` of replication
/// `replication`, built as a sum of `n` exponentials.
pub fn draw_gamma_sum(rng: &RngSpec, replication: u64, population: u32, rate: f64, n: u32) -> f64 {
    let mut stream = population_stream(rng, replication, population);
    let total: f64 = (0..n).map(|_| -log(open_unit(&mut stream))).sum();
    total / rate
}

/// Draws the `k` sufficient sums for one replication.
pub fn draw_sums(pop: &PopulationSet, rng: &RngSpec, replication: u64) -> Vec<f64> {
    let mut out = vec![0.0; pop.k()];
    fill_sums(pop, rng, replication, &mut out);
    out
}

/// In-place variant of [`draw_sums`]; `out.len()` must equal `k`.
pub fn draw_sums_into(
    pop: &PopulationSet,
    rng: &RngSpec,
    replication: u64,
    out: &mut [f64],
) -> Result<()> {
    if out.len() != pop.k() {
        return Err(Error::LengthMismatch {
            expected: pop.k(),
            actual: out.len(),
        });
    }
    fill_sums(pop, rng, replication, out);
    Ok(())
}

pub(crate) fn fill_sums(pop: &PopulationSet, rng: &RngSpec, replication: u64, out: &mut [f64]) {
    for (i, (slot, &rate)) in out.iter_mut().zip(pop.rates()).enumerate() {
        *slot = draw_gamma_sum(rng, replication, i as u32, rate, pop.n);
    }
}

/// Result of applying the natural selection rule to one set of sums.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome {
    pub sums: Vec<f64>,
    /// Zero-based index `J` of the selected population.
    pub selected: usize,
    /// `Y_J = max_i Y_i`.
    pub y_selected: f64,
    /// `σ_J`, the hazard rate of the selected population.
    pub sigma_selected: f64,
}

/// Index of the largest sum; ties go to the lowest index.
pub(crate) fn argmax(sums: &[f64]) -> usize {
    let mut best = 0;
    for (i, &y) in sums.iter().enumerate().skip(1) {
        if y > sums[best] {
            best = i;
        }
    }
    best
}

fn check_sums(sums: &[f64]) -> Result<()> {
    for &y in sums {
        if !(y > 0.0 && y.is_finite()) {
            return Err(domain("sum", y, "must be finite and > 0"));
        }
    }
    Ok(())
}

/// Selects the population with the largest sum.
pub fn select(pop: &PopulationSet, sums: &[f64]) -> Result<SelectionOutcome> {
    if sums.len() != pop.k() {
        return Err(Error::LengthMismatch {
            expected: pop.k(),
            actual: sums.len(),
        });
    }
    check_sums(sums)?;
    let selected = argmax(sums);
    Ok(SelectionOutcome {
        sums: sums.to_vec(),
        selected,
        y_selected: sums[selected],
        sigma_selected: pop.rates()[selected],
    })
}

/// Geometric mean of the `h` largest sums, `2 <= h <= k`.
pub fn geometric_mean_stat(sums: &[f64], h: usize) -> Result<f64> {
    check_sums(sums)?;
    if h < 2 || h > sums.len() {
        return Err(domain("h", h as f64, "must satisfy 2 <= h <= k"));
    }
    Ok(geometric_mean_top(sums, h))
}

pub(crate) fn geometric_mean_top(sums: &[f64], h: usize) -> f64 {
    let ln_sum: f64 = if h == sums.len() {
        sums.iter().map(|&y| log(y)).sum()
    } else {
        let mut sorted = sums.to_vec();
        sorted.sort_unstable_by(|a, b| b.total_cmp(a));
        sorted[..h].iter().map(|&y| log(y)).sum()
    };
    exp(ln_sum / h as f64)
}
