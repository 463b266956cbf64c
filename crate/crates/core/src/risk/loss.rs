use libm::log1p;

use crate::error::{domain, Result};

/// Entropy loss `d/σ − ln(d/σ) − 1` of estimate `d` for the selected rate `σ`.
pub fn entropy_loss(d: f64, sigma_selected: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(domain("d", d, "estimate must be finite and > 0"));
    }
    if !(sigma_selected > 0.0 && sigma_selected.is_finite()) {
        return Err(domain("sigma", sigma_selected, "must be finite and > 0"));
    }
    Ok(loss_unchecked(d, sigma_selected))
}

pub(crate) fn loss_unchecked(d: f64, sigma: f64) -> f64 {
    // u − ln(1 + u) with u = d/σ − 1 keeps precision near the minimum.
    let u = d / sigma - 1.0;
    (u - log1p(u)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn zero_at_truth() {
        assert_eq!(entropy_loss(2.5, 2.5).unwrap(), 0.0);
    }

    #[test]
    fn value_at_e() {
        let e = core::f64::consts::E;
        assert_abs_diff_eq!(entropy_loss(e * 3.0, 3.0).unwrap(), e - 2.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(entropy_loss(0.0, 1.0).is_err());
        assert!(entropy_loss(1.0, -1.0).is_err());
        assert!(entropy_loss(f64::INFINITY, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn nonnegative_and_ratio_invariant(d in 1e-6f64..1e6, s in 1e-6f64..1e6, lambda in 1e-3f64..1e3) {
            let a = entropy_loss(d, s).unwrap();
            prop_assert!(a >= 0.0);
            let b = entropy_loss(lambda * d, lambda * s).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
        }
    }
}
