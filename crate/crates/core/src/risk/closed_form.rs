//! Closed-form risk quantities.
//!
//! With two populations and `q = max(σ_1, σ_2) / min(σ_1, σ_2)`,
//! `E[1/(σ_J Y_J)] = h(q)` where
//!
//! ```text
//! h(q) = [I_{q/(1+q)}(n, n−1) + I_{1/(1+q)}(n, n−1)] / (n − 1)
//! ```
//!
//! so the risk of `c / Y_J` is `c·h(q) − ln c + E[ln(σ_J Y_J)] − 1`.

use libm::log;

use crate::error::{domain, Error, Result};
use crate::numerics::special::{digamma_pos, erlang_cdf, ln_gamma_pos};
use crate::numerics::{adaptive_quad, reg_inc_beta, QuadratureSpec};

/// Conjugate `Gamma(shape, rate)` prior on a component hazard rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BayesPrior {
    pub shape: f64,
    pub rate: f64,
}

impl BayesPrior {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(domain("shape", shape, "must be finite and > 0"));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(domain("rate", rate, "must be finite and > 0"));
        }
        Ok(Self { shape, rate })
    }
}

fn check_n(n: u32) -> Result<f64> {
    if n < 2 {
        Err(domain("n", f64::from(n), "must be >= 2"))
    } else {
        Ok(f64::from(n))
    }
}

/// `E[1/(σ_J Y_J)]` for two populations at rate ratio `q >= 1`.
pub fn h_of_q(q: f64, n: u32) -> Result<f64> {
    let nf = check_n(n)?;
    if !(q >= 1.0) {
        return Err(domain("q", q, "must be >= 1"));
    }
    if q.is_infinite() {
        return Ok(1.0 / (nf - 1.0));
    }
    // I_{q/(1+q)}(n, n−1) = 1 − I_{1/(1+q)}(n−1, n), which avoids forming
    // 1 − 1/(1+q) for large q.
    let x = 1.0 / (1.0 + q);
    let upper = 1.0 - reg_inc_beta(x, nf - 1.0, nf)?;
    let lower = reg_inc_beta(x, nf, nf - 1.0)?;
    Ok((upper + lower) / (nf - 1.0))
}

/// Risk `Ψ(n) − ln(n − 1)` of `(n − 1)/Y` in the component problem; this is
/// also the minimax value of the selection problem.
pub fn gb_component_risk(n: u32) -> Result<f64> {
    let nf = check_n(n)?;
    Ok(digamma_pos(nf) - log(nf - 1.0))
}

/// Bayes risk `Ψ(n + a) − ln(n + a − 1)` under a `Gamma(a, γ)` prior; `γ`
/// does not enter.
pub fn bayes_risk(n: u32, prior: &BayesPrior) -> Result<f64> {
    let shifted = f64::from(n) + prior.shape;
    if !(shifted > 1.0) {
        return Err(domain("n + shape", shifted, "must be > 1"));
    }
    Ok(digamma_pos(shifted) - log(shifted - 1.0))
}

/// `sup_q` of the risk bound `c·h(q) − ln c + Ψ(n) − 1`, reached as `q → ∞`:
/// `c/(n − 1) − ln c + Ψ(n) − 1`.
pub fn sup_risk_scaleinv(c: f64, n: u32) -> Result<f64> {
    let nf = check_n(n)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain("c", c, "must be finite and > 0"));
    }
    Ok(c / (nf - 1.0) - log(c) + digamma_pos(nf) - 1.0)
}

fn check_two_rates(rates: &[f64]) -> Result<(f64, f64)> {
    if rates.len() != 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            actual: rates.len(),
        });
    }
    for &r in rates {
        if !(r > 0.0 && r.is_finite()) {
            return Err(domain("rate", r, "must be finite and > 0"));
        }
    }
    Ok((rates[0], rates[1]))
}

/// `E[ln(σ_J Y_J)]` for two populations by quadrature:
/// `Σ_i ∫ ln(σ_i y) g(y; σ_i, n) F(y; σ_other, n) dy`.
pub fn expected_log_selected_k2(rates: &[f64], n: u32, quad: &QuadratureSpec) -> Result<f64> {
    let nf = check_n(n)?;
    let (s1, s2) = check_two_rates(rates)?;
    let ln_gamma_n = ln_gamma_pos(nf);
    let term = |own: f64, other: f64| -> Result<f64> {
        // Standardized t = σ_own · y, so Y_other < y  ⇔  σ_other Y_other < t·σ_other/σ_own.
        let ratio = other / own;
        adaptive_quad(
            |t| {
                if t <= 0.0 {
                    return 0.0;
                }
                let ln_t = log(t);
                let density = libm::exp((nf - 1.0) * ln_t - t - ln_gamma_n);
                if density == 0.0 {
                    return 0.0;
                }
                ln_t * density * erlang_cdf(t * ratio, n)
            },
            0.0,
            f64::INFINITY,
            quad,
        )
    };
    Ok(term(s1, s2)? + term(s2, s1)?)
}

/// Exact risk of `c / Y_J` for two populations.
pub fn exact_risk_scaleinv_k2(c: f64, rates: &[f64], n: u32, quad: &QuadratureSpec) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(domain("c", c, "must be finite and > 0"));
    }
    let (s1, s2) = check_two_rates(rates)?;
    let q = s1.max(s2) / s1.min(s2);
    let inverse_moment = h_of_q(q, n)?;
    let log_moment = expected_log_selected_k2(rates, n, quad)?;
    Ok(c * inverse_moment - log(c) + log_moment - 1.0)
}
