use hazsel_core::estimators::{admissible_range, classify_c, Admissibility};
use hazsel_core::numerics::{digamma, gamma_cdf, integrate, ln_gamma, reg_inc_beta};
use hazsel_core::risk::{h_of_q, simulate_losses};
use hazsel_core::{EstimatorSpec, PopulationSet, QuadratureSpec, RngSpec};
use proptest::prelude::*;

fn binomial_tail(x: f64, a: u32, b: u32) -> f64 {
    // I_x(a, b) = P(Binomial(a + b − 1, x) ≥ a), summed term by term.
    let m = a + b - 1;
    let mut term = (1.0 - x).powi(m as i32);
    let mut total = 0.0;
    for j in 0..=m {
        if j >= a {
            total += term;
        }
        term *= f64::from(m - j) / f64::from(j + 1) * x / (1.0 - x);
    }
    total
}

proptest! {
    #[test]
    fn digamma_recurrence(a in 0.1f64..100.0) {
        let gap = digamma(a + 1.0).unwrap() - digamma(a).unwrap() - 1.0 / a;
        prop_assert!(gap.abs() <= 1e-10, "a={a} gap={gap}");
    }

    #[test]
    fn inc_beta_complement(x in 0.0f64..=1.0, a in 0.1f64..50.0, b in 0.1f64..50.0) {
        let s = reg_inc_beta(x, a, b).unwrap() + reg_inc_beta(1.0 - x, b, a).unwrap();
        prop_assert!((s - 1.0).abs() <= 1e-10, "x={x} a={a} b={b} sum={s}");
    }

    #[test]
    fn inc_beta_integer_matches_binomial(x in 0.01f64..0.99, a in 1u32..40, b in 1u32..40) {
        let got = reg_inc_beta(x, f64::from(a), f64::from(b)).unwrap();
        let want = binomial_tail(x, a, b);
        prop_assert!((got - want).abs() <= 1e-10, "x={x} a={a} b={b}: {got} vs {want}");
    }

    #[test]
    fn inc_beta_monotone_in_x(x in 0.0f64..1.0, dx in 0.0f64..0.1, a in 0.2f64..30.0, b in 0.2f64..30.0) {
        let hi = (x + dx).min(1.0);
        prop_assert!(reg_inc_beta(hi, a, b).unwrap() >= reg_inc_beta(x, a, b).unwrap() - 1e-15);
    }

    #[test]
    fn gamma_cdf_matches_integrated_density(y in 0.01f64..30.0, rate in 0.2f64..5.0, n in 1u32..15) {
        let nf = f64::from(n);
        let lg = ln_gamma(nf).unwrap();
        let density = |t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            (nf * rate.ln() + (nf - 1.0) * t.ln() - rate * t - lg).exp()
        };
        let quad = QuadratureSpec::new(1e-12, 1e-12, 400).unwrap();
        let want = integrate(density, 0.0, y, &quad).unwrap().value;
        let got = gamma_cdf(y, rate, n).unwrap();
        prop_assert!((got - want).abs() <= 1e-8, "y={y} rate={rate} n={n}: {got} vs {want}");
    }

    #[test]
    fn losses_do_not_depend_on_partition(seed in any::<u64>(), split in 0usize..200, s2 in 0.1f64..3.0) {
        let pop = PopulationSet::from_scales(5, &[1.0, s2]).unwrap();
        let rng = RngSpec::new(seed);
        let specs = [EstimatorSpec::n2(5), EstimatorSpec::ml(5), EstimatorSpec::improved(4.0, 0.1, 2)];
        let mut whole = vec![0.0; 200 * 3];
        simulate_losses(&specs, &pop, &rng, 0, &mut whole).unwrap();
        let mut parts = vec![0.0; 200 * 3];
        let (a, b) = parts.split_at_mut(split * 3);
        simulate_losses(&specs, &pop, &rng, 0, a).unwrap();
        simulate_losses(&specs, &pop, &rng, split as u64, b).unwrap();
        prop_assert_eq!(whole, parts);
    }
}

#[test]
fn admissible_range_is_nondegenerate() {
    for n in 2..=50u32 {
        let r = admissible_range(n).unwrap();
        assert_eq!(r.c_lower, f64::from(n - 1));
        assert!(r.c_upper > r.c_lower, "n={n}");
        assert!((1.0 / h_of_q(1.0, n).unwrap() - r.c_upper).abs() <= 1e-10 * r.c_upper, "n={n}");
    }
}

#[test]
fn classification_agrees_with_endpoints() {
    for n in 2..=30u32 {
        let r = admissible_range(n).unwrap();
        assert_eq!(classify_c(n, r.c_lower).unwrap(), Admissibility::Admissible);
        assert_eq!(classify_c(n, r.c_upper).unwrap(), Admissibility::Admissible);
        assert!(matches!(classify_c(n, r.c_lower * 0.999).unwrap(), Admissibility::InadmissibleLow { .. }));
        assert!(matches!(classify_c(n, r.c_upper * 1.001).unwrap(), Admissibility::InadmissibleHigh { .. }));
    }
}
