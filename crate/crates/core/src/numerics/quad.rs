//! Adaptive Gauss–Kronrod (7/15) quadrature with global bisection.
//!
//! Error estimates follow the QUADPACK `qk15` heuristic. An infinite upper
//! limit is mapped onto `[0, 1)` by `x = lo + u / (1 − u)`.

use alloc::vec::Vec;
use libm::{fabs, pow};

use crate::error::{domain, Error, Result};

/// Tolerances and subdivision budget for [`adaptive_quad`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of subintervals kept at any time.
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(domain("abs_tol", abs_tol, "must be > 0"));
        }
        if !(rel_tol > 0.0) {
            return Err(domain("rel_tol", rel_tol, "must be > 0"));
        }
        if max_subdivisions == 0 {
            return Err(domain("max_subdivisions", 0.0, "must be >= 1"));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 200,
        }
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub subintervals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(domain("integrand", y, "must be finite on the interval"))
    }
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = eval(f, center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fabs(res_k);
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (fabs(f1) + fabs(f2));
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * fabs(fc - mean);
    for j in 0..7 {
        res_asc += WGK[j] * (fabs(fv1[j] - mean) + fabs(fv2[j] - mean));
    }
    let value = res_k * half;
    res_abs *= fabs(half);
    res_asc *= fabs(half);
    let mut error = fabs((res_k - res_g) * half);
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * pow(200.0 * error / res_asc, 1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment {
        lo,
        hi,
        value,
        error,
    })
}

/// Integrates `f` over `[lo, hi]`; `hi` may be `f64::INFINITY`.
///
/// Stops once the summed error estimate is at most
/// `max(abs_tol, rel_tol · |result|)`.
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<QuadEstimate>
where
    F: FnMut(f64) -> f64,
{
    if !lo.is_finite() {
        return Err(domain("lo", lo, "lower limit must be finite"));
    }
    if hi.is_nan() || hi == f64::NEG_INFINITY {
        return Err(domain("hi", hi, "upper limit must be finite or +inf"));
    }
    if hi == f64::INFINITY {
        let mapped = move |u: f64| {
            let t = 1.0 - u;
            let y = f(lo + u / t);
            // e^{-x}-type tails underflow to zero before 1/t^2 overflows.
            if y == 0.0 {
                0.0
            } else {
                y / (t * t)
            }
        };
        return bisect(mapped, 0.0, 1.0, spec);
    }
    if hi < lo {
        let est = bisect(f, hi, lo, spec)?;
        return Ok(QuadEstimate {
            value: -est.value,
            ..est
        });
    }
    if hi == lo {
        return Ok(QuadEstimate {
            value: 0.0,
            error: 0.0,
            subintervals: 0,
        });
    }
    bisect(f, lo, hi, spec)
}

/// Value-only form of [`integrate`].
pub fn adaptive_quad<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate(f, lo, hi, spec).map(|e| e.value)
}

fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<QuadEstimate> {
    let mut segments: Vec<Segment> = Vec::with_capacity(spec.max_subdivisions.min(1024));
    segments.push(gauss_kronrod(&mut f, lo, hi)?);
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let tolerance = spec.abs_tol.max(spec.rel_tol * fabs(value));
        if error <= tolerance {
            return Ok(QuadEstimate {
                value,
                error,
                subintervals: segments.len(),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let seg = segments[worst];
        let mid = 0.5 * (seg.lo + seg.hi);
        if segments.len() >= spec.max_subdivisions || !(seg.lo < mid && mid < seg.hi) {
            return Err(Error::NoConvergence {
                subdivisions: segments.len(),
                error_estimate: error,
                tolerance,
            });
        }
        segments[worst] = gauss_kronrod(&mut f, seg.lo, mid)?;
        segments.push(gauss_kronrod(&mut f, mid, seg.hi)?);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::{digamma, ln_gamma};
    use approx::assert_abs_diff_eq;
    use libm::{exp, log};

    #[test]
    fn constant_and_exponential() {
        let spec = QuadratureSpec::default();
        assert_abs_diff_eq!(adaptive_quad(|_| 1.0, 0.0, 1.0, &spec).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            adaptive_quad(|t| exp(-t), 0.0, f64::INFINITY, &spec).unwrap(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn log_moment_matches_digamma() {
        let spec = QuadratureSpec::default();
        let got = adaptive_quad(|t| if t > 0.0 { log(t) * exp(-t) } else { 0.0 }, 0.0, f64::INFINITY, &spec)
            .unwrap();
        assert_abs_diff_eq!(got, -0.577_215_664_9, epsilon = 1e-9);
        assert_abs_diff_eq!(got, digamma(1.0).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn gamma_integral_at_half() {
        // Γ(1/2) = ∫ t^{-1/2} e^{-t} dt; the endpoint singularity needs many bisections.
        let spec = QuadratureSpec::new(1e-9, 1e-9, 400).unwrap();
        let got = adaptive_quad(|t| exp(-t) / libm::sqrt(t), 0.0, f64::INFINITY, &spec).unwrap();
        assert_abs_diff_eq!(log(got), ln_gamma(0.5).unwrap(), epsilon = 1e-8);
    }

    #[test]
    fn polynomials_are_exact() {
        let spec = QuadratureSpec::default();
        for degree in 0..=6i32 {
            let got = adaptive_quad(|x| libm::pow(x, f64::from(degree)), 0.0, 1.0, &spec).unwrap();
            assert_abs_diff_eq!(got, 1.0 / f64::from(degree + 1), epsilon = 1e-12);
        }
    }

    #[test]
    fn reversed_and_empty_interval() {
        let spec = QuadratureSpec::default();
        assert_abs_diff_eq!(adaptive_quad(|x| x, 1.0, 0.0, &spec).unwrap(), -0.5, epsilon = 1e-14);
        assert_eq!(adaptive_quad(|x| x, 2.0, 2.0, &spec).unwrap(), 0.0);
    }

    #[test]
    fn exhausted_budget_is_an_error() {
        let spec = QuadratureSpec::new(1e-14, 1e-14, 2).unwrap();
        let err = integrate(|x| libm::sin(1.0 / x), 1e-6, 1.0, &spec).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn rejects_bad_limits_and_spec() {
        let spec = QuadratureSpec::default();
        assert!(adaptive_quad(|x| x, f64::NEG_INFINITY, 0.0, &spec).is_err());
        assert!(adaptive_quad(|x| x, 0.0, f64::NAN, &spec).is_err());
        // Divergent integrand: the budget runs out instead of returning garbage.
        assert!(adaptive_quad(|x| 1.0 / x, 0.0, 1.0, &spec).is_err());
        assert!(QuadratureSpec::new(0.0, 1e-10, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, -1.0, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-10, 0).is_err());
    }
}
