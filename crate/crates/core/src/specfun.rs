//! Special functions behind the stationary profiles: the Gauss
//! hypergeometric family `2F1(1/2, k; 3/2; z)` and the Beta function.
//!
//! With `c = 3/2` and one upper parameter `1/2` the Euler integral collapses to
//!
//! ```text
//! 2F1(1/2, k; 3/2; z) = ∫_0^1 (1 - z s²)^(-k) ds
//! ```
//!
//! which is what the quadrature branch integrates. The power series is used
//! below `z = 0.75`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;
use crate::scalar::Scalar;

/// Switch point between power series and quadrature.
pub const SERIES_LIMIT: f64 = 0.75;

const MAX_SERIES_TERMS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypMethod {
    Series,
    Quadrature,
    /// Closed-form value at `z = 1` (Gauss summation).
    GaussSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypEvalReport<T> {
    pub value: T,
    pub terms_used: usize,
    pub method: HypMethod,
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, with reflection below 1/2).
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    if x < T::half() {
        // Γ(x) Γ(1-x) = π / sin(πx)
        let pi = T::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::from_usize_lossy(i));
    }
    let t = x + T::lit(LANCZOS_G) + T::half();
    T::half() * (T::two() * T::PI()).ln() + (x + T::half()) * t.ln() - t + acc.ln()
}

/// `B(a, b) = Γ(a) Γ(b) / Γ(a + b)` through log-Gamma.
///
/// Arguments must be positive. When an argument is so close to zero that the
/// value overflows the result is `+inf`; callers test `is_infinite()`.
pub fn beta_fn<T: Scalar>(a: T, b: T) -> Result<T> {
    if !(a > T::zero()) || !(b > T::zero()) {
        return Err(Error::Domain(format!("Beta needs positive arguments, got ({a}, {b})")));
    }
    Ok((ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp())
}

/// `2F1(1/2, k2; 3/2; z)` for `0 <= z <= 1` (`z = 1` only when `k2 < 1`).
pub fn hyp2f1_half<T: Scalar>(k2: T, z: T) -> Result<HypEvalReport<T>> {
    if z.is_nan() || z < T::zero() {
        return Err(Error::Domain(format!("hyp2f1_half needs z >= 0, got {z}")));
    }
    if z > T::one() {
        return Err(Error::Domain(format!("hyp2f1_half needs z <= 1, got {z}")));
    }
    hyp2f1_half_complement(k2, T::one() - z)
}

/// Same function parameterized by `w = 1 - z`, which keeps full relative
/// precision in `w` when `z` is within rounding of 1.
pub fn hyp2f1_half_complement<T: Scalar>(k2: T, w: T) -> Result<HypEvalReport<T>> {
    if w.is_nan() || w < T::zero() || w > T::one() {
        return Err(Error::Domain(format!("complement 1 - z must lie in [0, 1], got {w}")));
    }
    if w == T::zero() {
        if k2 >= T::one() {
            return Err(Error::Domain(format!("2F1(1/2, {k2}; 3/2; 1) diverges for k2 >= 1")));
        }
        // ∫_0^1 (1 - s²)^(-k2) ds = B(1/2, 1 - k2) / 2
        let value = beta_fn(T::half(), T::one() - k2)? * T::half();
        return Ok(HypEvalReport { value, terms_used: 1, method: HypMethod::GaussSum });
    }
    if w > T::one() - T::lit(SERIES_LIMIT) {
        hyp2f1_half_series(k2, T::one() - w)
    } else {
        Ok(hyp2f1_half_quadrature(k2, w))
    }
}

/// Power series `Σ (k2)_n / n! · z^n / (2n + 1)`.
pub fn hyp2f1_half_series<T: Scalar>(k2: T, z: T) -> Result<HypEvalReport<T>> {
    if z.is_nan() || z < T::zero() || z >= T::one() {
        return Err(Error::Domain(format!("series needs 0 <= z < 1, got {z}")));
    }
    let mut coeff = T::one();
    let mut sum = T::one();
    if z == T::zero() {
        return Ok(HypEvalReport { value: sum, terms_used: 1, method: HypMethod::Series });
    }
    for n in 0..MAX_SERIES_TERMS {
        let nf = T::from_usize_lossy(n);
        coeff = coeff * (k2 + nf) * z / (nf + T::one());
        let term = coeff / (T::two() * nf + T::lit(3.0));
        sum = sum + term;
        if coeff == T::zero() {
            return Ok(HypEvalReport { value: sum, terms_used: n + 2, method: HypMethod::Series });
        }
        // Once n exceeds k2 the coefficients shrink geometrically; bound the
        // tail by a geometric series with ratio z.
        if nf > k2.abs() + T::one() && term.abs() <= T::epsilon() * T::half() * sum.abs() * (T::one() - z) {
            return Ok(HypEvalReport { value: sum, terms_used: n + 2, method: HypMethod::Series });
        }
    }
    Err(Error::NoConvergence { lo: 0.0, hi: z.to_f64_lossy() })
}

/// Euler integral on geometrically graded panels towards `s = 1`, where
/// `1 - z s²` is smallest. With `τ = 1 - s` the integrand is
/// `(τ (2 - τ) + w (1 - τ)²)^(-k2)`.
pub fn hyp2f1_half_quadrature<T: Scalar>(k2: T, w: T) -> HypEvalReport<T> {
    let integrand = |tau: T| {
        let s = T::one() - tau;
        (tau * (T::two() - tau) + w * s * s).powf(-k2)
    };
    let mut hi = T::one();
    let mut total = T::zero();
    let mut panels = 0usize;
    loop {
        let lo = hi * T::half();
        if hi <= w || panels >= 1100 {
            total = total + gauss_legendre(T::zero(), hi, integrand);
            panels += 1;
            break;
        }
        total = total + gauss_legendre(lo, hi, integrand);
        panels += 1;
        hi = lo;
    }
    HypEvalReport { value: total, terms_used: panels * 20, method: HypMethod::Quadrature }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn beta_known_values() {
        assert!(rel(beta_fn(1.0f64, 0.5).unwrap(), 2.0) < 1e-12);
        assert!(rel(beta_fn(0.5, 0.5).unwrap(), PI) < 1e-12);
        assert!(rel(beta_fn(0.5, 1.5).unwrap(), PI / 2.0) < 1e-12);
        assert!(rel(beta_fn(2.0, 3.0).unwrap(), 1.0 / 12.0) < 1e-12);
        assert!(beta_fn(0.0, 1.0).is_err());
        assert!(beta_fn(1.0, -2.0).is_err());
        assert!(beta_fn(f64::NAN, 1.0).is_err());
        assert!(beta_fn(1e-320f64, 0.5).unwrap().is_infinite());
    }

    #[test]
    fn beta_near_pole_is_large_not_error() {
        let b = beta_fn(1e-9f64, 0.5).unwrap();
        assert!(b > 9.9e8 && b.is_finite());
    }

    #[test]
    fn ln_gamma_reference() {
        // Γ(1/3) = 2.6789385347077476337
        assert!(rel(ln_gamma(1.0 / 3.0f64).exp(), 2.678_938_534_707_747_6) < 1e-13);
        assert!(rel(ln_gamma(10.0f64), (362_880.0f64).ln()) < 1e-14);
    }

    #[test]
    fn hyp_examples() {
        for k2 in [-0.7, 0.0, 0.3, 1.0, 2.5] {
            assert_eq!(hyp2f1_half(k2, 0.0f64).unwrap().value, 1.0);
        }
        assert!(rel(hyp2f1_half(1.0, 0.25f64).unwrap().value, 0.5f64.atanh() / 0.5) < 1e-14);
        assert!(rel(hyp2f1_half(0.5, 0.25f64).unwrap().value, 0.5f64.asin() / 0.5) < 1e-14);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn hyp_mpmath_reference() {
        // mpmath.hyp2f1(0.5, k2, 1.5, z) at 30 digits.
        let cases = [
            (0.25, 0.9, 1.135_171_946_394_576_7),
            (0.25, 0.3, 1.028_373_267_991_878_2),
            (0.25, 1.0 - 1e-12, 1.198_140_234_069_524_6),
            (0.75, 0.9, 1.565_992_017_793_204),
            (0.75, 0.3, 1.089_797_256_481_215_9),
            (0.75, 1.0 - 1e-12, 2.620_057_554_293_429_6),
            (1.3, 0.9, 2.547_308_015_859_359_5),
            (1.3, 0.3, 1.165_409_725_107_149_9),
            (1.3, 1.0 - 1e-12, 6_634.284_244_034_736),
        ];
        for (k2, z, want) in cases {
            let got = if z > 0.999 {
                hyp2f1_half_complement(k2, 1e-12f64).unwrap().value
            } else {
                hyp2f1_half(k2, z).unwrap().value
            };
            assert!(rel(got, want) < 1e-10, "k2={k2} z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn hyp_rejects_out_of_range() {
        assert!(hyp2f1_half(0.5, -0.1f64).is_err());
        assert!(hyp2f1_half(0.5, 1.1f64).is_err());
        assert!(hyp2f1_half(1.0, 1.0f64).is_err());
        assert!(hyp2f1_half(1.7, 1.0f64).is_err());
        let at_one = hyp2f1_half(0.5, 1.0f64).unwrap();
        assert_eq!(at_one.method, HypMethod::GaussSum);
        assert!(rel(at_one.value, PI / 2.0) < 1e-13);
    }

    #[test]
    fn method_switch() {
        assert_eq!(hyp2f1_half(0.3, 0.5f64).unwrap().method, HypMethod::Series);
        assert_eq!(hyp2f1_half(0.3, 0.8f64).unwrap().method, HypMethod::Quadrature);
        let r = hyp2f1_half(0.3, 0.8f64).unwrap();
        assert!(r.terms_used >= 1 && r.value.is_finite());
    }

    #[test]
    fn closed_forms_on_dense_grid() {
        for i in 0..=990 {
            let z = i as f64 / 1000.0;
            let r = z.sqrt();
            let checks = [
                (0.0, 1.0),
                (0.5, if z == 0.0 { 1.0 } else { r.asin() / r }),
                (1.0, if z == 0.0 { 1.0 } else { r.atanh() / r }),
                (1.5, 1.0 / (1.0 - z).sqrt()),
            ];
            for (k2, want) in checks {
                let got = hyp2f1_half(k2, z).unwrap().value;
                assert!(rel(got, want) < 1e-10, "k2={k2} z={z}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn single_precision_works() {
        let v = hyp2f1_half(1.0f32, 0.25).unwrap().value;
        assert!((v - 1.098_612_3).abs() < 1e-5);
        assert!((beta_fn(0.5f32, 0.5).unwrap() - std::f32::consts::PI).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn beta_symmetric(a in 0.01f64..20.0, b in 0.01f64..20.0) {
            prop_assert_eq!(beta_fn(a, b).unwrap(), beta_fn(b, a).unwrap());
        }

        #[test]
        fn series_and_quadrature_agree(k2 in -1.5f64..2.5, z in 0.5f64..0.9) {
            let s = hyp2f1_half_series(k2, z).unwrap().value;
            let q = hyp2f1_half_quadrature(k2, 1.0 - z).value;
            prop_assert!(((s - q) / s).abs() < 1e-9, "{} vs {}", s, q);
        }
    }
}
