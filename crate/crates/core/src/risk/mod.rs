//! Entropy loss, closed-form risk quantities and Monte Carlo risk.

mod closed_form;
mod loss;
mod monte_carlo;

pub use closed_form::{
    bayes_risk, exact_risk_scaleinv_k2, expected_log_selected_k2, gb_component_risk, h_of_q,
    sup_risk_scaleinv, BayesPrior,
};
pub use loss::entropy_loss;
pub use monte_carlo::{
    mc_component_risk, mc_dominance, mc_risk, mc_risks, simulate_losses, summarize_paired,
    summarize_risk, PairedComparison, RiskEstimate,
};
