//! Stationary separatrix profiles.
//!
//! A stationary solution `f` of the canonical equation is written through
//! `g = (m+q)/(m+p) · f^(p-q)`, which satisfies `g' = ±k1 g^k2 sqrt(1-g)`
//! with maximum `g = 1` at the center. Integrating from the center gives the
//! implicit relation
//!
//! ```text
//! k1 |x - c| = 2 sqrt(1-g) 2F1(1/2, k2; 3/2; 1-g)
//! ```
//!
//! which [`StationaryProfile::g_value_implicit`] inverts by root finding.
//! For `k2 ∈ {0, 1/2, 1, 3/2}` closed forms are available and used by
//! [`StationaryProfile::g_value`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{same, ModelParams};
use crate::numerics::{brent, dopri_step};
use crate::scalar::Scalar;
use crate::specfun::{beta_fn, hyp2f1_half_complement};

/// Lower end of the root bracket for profiles without compact support.
pub const G_FLOOR: f64 = 1e-300;

/// Below this value of `g` the ODE oracle switches to the edge asymptotics.
pub const ORACLE_EDGE_G: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Support<T> {
    Compact { half_width: T },
    FullLine,
}

/// Values of `k2` with elementary closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedForm {
    /// `k2 = 0`: `g = 1 - (k1 x / 2)²`.
    Parabola,
    /// `k2 = 1/2`: `g = (cos(k1 x) + 1) / 2`.
    Cosine,
    /// `k2 = 1`: `g = 1 - tanh²(k1 x / 2)`.
    Sech2,
    /// `k2 = 3/2`: `g = 4 / ((k1 x)² + 4)`.
    Lorentzian,
}

impl ClosedForm {
    pub fn detect<T: Scalar>(k2: T) -> Option<Self> {
        let tol = T::lit(1e-12);
        [
            (0.0, ClosedForm::Parabola),
            (0.5, ClosedForm::Cosine),
            (1.0, ClosedForm::Sech2),
            (1.5, ClosedForm::Lorentzian),
        ]
        .into_iter()
        .find(|&(v, _)| (k2 - T::lit(v)).abs() <= tol)
        .map(|(_, c)| c)
    }

    /// `g` at distance `s >= 0` from the center, for a given `k1`.
    pub fn g<T: Scalar>(self, k1: T, s: T) -> T {
        let r = k1 * s;
        let zero = T::zero();
        match self {
            ClosedForm::Parabola => {
                if r >= T::two() {
                    zero
                } else {
                    T::one() - (r * T::half()).powi(2)
                }
            }
            ClosedForm::Cosine => {
                if r >= T::PI() {
                    zero
                } else {
                    (r.cos() + T::one()) * T::half()
                }
            }
            ClosedForm::Sech2 => {
                let c = (r * T::half()).cosh();
                T::one() / (c * c)
            }
            ClosedForm::Lorentzian => T::lit(4.0) / (r * r + T::lit(4.0)),
        }
    }
}

/// A stationary profile `E(x)` centered at `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryProfile<T> {
    pub params: ModelParams<T>,
    pub k1: T,
    pub k2: T,
    pub f_max: T,
    pub center: T,
    pub support: Support<T>,
    pub closed_form: Option<ClosedForm>,
}

/// Builds the profile with its maximum at `center`.
pub fn build_profile<T: Scalar>(params: ModelParams<T>, center: T) -> Result<StationaryProfile<T>> {
    params.validate()?;
    let ModelParams { m, p, q } = params;
    let ratio = (m + p) / (m + q);
    let k1 = (p - q) * (T::two() / (m + q)).sqrt() * ratio.powf((q - m) / (T::two() * (p - q)));
    let k2 = T::one() + (q - m) / (T::two() * (p - q));
    let f_max = ratio.powf(T::one() / (p - q));
    let support = if m > q && !same(m, q) {
        Support::Compact { half_width: beta_fn(T::one() - k2, T::half())? / k1 }
    } else {
        Support::FullLine
    };
    if !center.is_finite() {
        return Err(Error::InvalidParams(format!("center must be finite, got {center}")));
    }
    Ok(StationaryProfile { params, k1, k2, f_max, center, support, closed_form: ClosedForm::detect(k2) })
}

impl<T: Scalar> StationaryProfile<T> {
    pub fn translated(&self, center: T) -> Self {
        Self { center, ..*self }
    }

    /// `(m+p)/(m+q)`, the factor between `g` and `f^(p-q)`.
    fn amplitude_ratio(&self) -> T {
        let ModelParams { m, p, q } = self.params;
        (m + p) / (m + q)
    }

    pub fn half_width(&self) -> Option<T> {
        match self.support {
            Support::Compact { half_width } => Some(half_width),
            Support::FullLine => None,
        }
    }

    /// Total length of the support, `(2/k1) B(1-k2, 1/2)`, or `+inf`.
    pub fn support_width(&self) -> T {
        self.half_width().map_or(T::infinity(), |h| h * T::two())
    }

    pub fn in_support(&self, x: T) -> bool {
        self.half_width().is_none_or(|h| (x - self.center).abs() < h)
    }

    /// `k1 |x - c|` as a function of `g`: `2 sqrt(1-g) 2F1(1/2, k2; 3/2; 1-g)`.
    pub fn implicit_distance(&self, g: T) -> Result<T> {
        let f = hyp2f1_half_complement(self.k2, g)?;
        Ok(T::two() * (T::one() - g).sqrt() * f.value)
    }

    /// Closed form when one exists, root finding otherwise.
    pub fn g_value(&self, x: T) -> Result<T> {
        match self.closed_form {
            Some(form) => Ok(form.g(self.k1, (x - self.center).abs())),
            None => self.g_value_implicit(x),
        }
    }

    /// Inverts the implicit relation regardless of closed forms.
    pub fn g_value_implicit(&self, x: T) -> Result<T> {
        let s = (x - self.center).abs();
        if s == T::zero() {
            return Ok(T::one());
        }
        let target = self.k1 * s;
        let lo = match self.support {
            Support::Compact { half_width } => {
                if s >= half_width {
                    return Ok(T::zero());
                }
                T::zero()
            }
            Support::FullLine => {
                let floor = T::lit(G_FLOOR).max(T::min_positive_value());
                if self.implicit_distance(floor)? <= target {
                    return Ok(T::zero());
                }
                floor
            }
        };
        let mut failure = None;
        let root = brent(
            |g| match self.implicit_distance(g) {
                Ok(d) => d - target,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::nan()
                }
            },
            lo,
            T::one(),
            T::min_positive_value(),
            T::epsilon() * T::two(),
            400,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        root
    }

    /// The stationary solution `f(x) = ((m+p)/(m+q) g(x))^(1/(p-q))`.
    pub fn e_value(&self, x: T) -> Result<T> {
        let g = self.g_value(x)?;
        Ok(self.f_from_g(g))
    }

    pub fn f_from_g(&self, g: T) -> T {
        if g <= T::zero() {
            return T::zero();
        }
        let ModelParams { p, q, .. } = self.params;
        (self.amplitude_ratio() * g).powf(T::one() / (p - q))
    }

    /// Defect of the first integral
    /// `(f^(m-2) f')² - 2 f^(m+q-2)/(m+q) + 2 f^(m+p-2)/(m+p)` at `x`,
    /// with `f'` from a central difference.
    pub fn stationary_residual(&self, x: T) -> Result<T> {
        let h = residual_step(x);
        if let Some(hw) = self.half_width() {
            if (x - self.center).abs() + h >= hw {
                return Err(Error::Domain(format!(
                    "residual needs an interior point, |x - c| + h = {} reaches the edge {hw}",
                    (x - self.center).abs() + h
                )));
            }
        }
        let residual = residual_of(&self.params, |y| self.e_value(y), x, h)?;
        Ok(residual)
    }

    /// Tabulates `(x, g, E)` on `n` equispaced points of `[x_min, x_max]`.
    pub fn tabulate(&self, x_min: T, x_max: T, n: usize) -> Result<Vec<[T; 3]>> {
        if n < 2 {
            return Err(Error::Domain("tabulation needs at least two points".into()));
        }
        let dx = (x_max - x_min) / T::from_usize_lossy(n - 1);
        (0..n)
            .map(|i| {
                let x = x_min + dx * T::from_usize_lossy(i);
                let g = self.g_value(x)?;
                Ok([x, g, self.f_from_g(g)])
            })
            .collect()
    }
}

/// Finite-difference step for [`StationaryProfile::stationary_residual`].
pub fn residual_step<T: Scalar>(x: T) -> T {
    let h = T::lit(1e-6);
    h.max(h * x.abs())
}

/// First-integral defect of an arbitrary profile `f` at `x`.
pub fn residual_of<T: Scalar>(
    params: &ModelParams<T>,
    f: impl Fn(T) -> Result<T>,
    x: T,
    h: T,
) -> Result<T> {
    let ModelParams { m, p, q } = *params;
    let fx = f(x)?;
    if !(fx > T::zero()) {
        return Err(Error::Domain(format!("residual needs f(x) > 0, got {fx} at x = {x}")));
    }
    let slope = (f(x + h)? - f(x - h)?) / (T::two() * h);
    let two = T::two();
    let kinetic = (fx.powf(m - two) * slope).powi(2);
    Ok(kinetic - two * fx.powf(m + q - two) / (m + q) + two * fx.powf(m + p - two) / (m + p))
}

/// Integrates `g' = -k1 g^k2 sqrt(1-g)` outward from the maximum `g(0) = 1`
/// and returns `g` at the requested offsets from the center.
///
/// The integration runs in `v = sqrt(1-g)`, for which the equation
/// `v' = (k1/2)(1 - v²)^k2` is regular at the maximum. Near a compact
/// support edge (`g < 1e-10`) the local form
/// `g ≈ (k1 (1-k2) d)^(1/(1-k2))` with `d` the distance to the edge is used.
pub fn ode_oracle<T: Scalar>(params: &ModelParams<T>, x_samples: &[T]) -> Result<Vec<T>> {
    let profile = build_profile(*params, T::zero())?;
    let (k1, k2) = (profile.k1, profile.k2);
    let half_k1 = k1 * T::half();
    let rhs = move |_s: T, v: T| {
        let base = (T::one() - v * v).max(T::zero());
        half_k1 * base.powf(k2)
    };
    let compact = matches!(profile.support, Support::Compact { .. });
    let rtol = T::lit(1e-13);
    let atol = T::lit(1e-15);
    let h_min = T::lit(1e-14);
    let edge_g = T::lit(ORACLE_EDGE_G);
    let one_minus_k2 = T::one() - k2;

    let mut order: Vec<usize> = (0..x_samples.len()).collect();
    order.sort_by(|&a, &b| {
        x_samples[a].abs().partial_cmp(&x_samples[b].abs()).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut out = vec![T::zero(); x_samples.len()];

    let (mut s, mut v) = (T::zero(), T::zero());
    let mut h = T::lit(1e-3) / k1.max(T::lit(1e-3));
    // Edge location once the asymptotic regime has been entered.
    let mut edge: Option<T> = None;

    for idx in order {
        let target = x_samples[idx].abs();
        if !target.is_finite() {
            return Err(Error::Domain(format!("oracle sample must be finite, got {target}")));
        }
        while edge.is_none() && s < target {
            let step = h.min(target - s);
            let (v_new, err) = dopri_step(&rhs, s, v, step);
            let scale = atol + rtol * v.abs().max(v_new.abs());
            let ratio = (err / scale).abs();
            if ratio <= T::one() && v_new <= T::one() {
                s = s + step;
                v = v_new;
                let g = (T::one() - v) * (T::one() + v);
                if compact && g < edge_g {
                    let g = g.max(T::min_positive_value());
                    edge = Some(s + g.powf(one_minus_k2) / (k1 * one_minus_k2));
                }
                let grow = if ratio == T::zero() {
                    T::lit(5.0)
                } else {
                    (T::lit(0.9) * ratio.powf(T::lit(-0.2))).min(T::lit(5.0))
                };
                h = (step * grow).max(h_min);
            } else {
                let shrink = if ratio <= T::one() {
                    // overshoot past the edge v = 1
                    T::half()
                } else if ratio.is_finite() {
                    (T::lit(0.9) * ratio.powf(T::lit(-0.25))).max(T::lit(0.1))
                } else {
                    T::lit(0.1)
                };
                h = step * shrink;
                if h < h_min {
                    let g = (T::one() - v) * (T::one() + v);
                    return Err(Error::StepUnderflow { x: s.to_f64_lossy(), g: g.to_f64_lossy() });
                }
            }
        }
        out[idx] = match edge {
            Some(x_edge) if target > s => {
                let d = (x_edge - target).max(T::zero());
                (k1 * one_minus_k2 * d).powf(T::one() / one_minus_k2)
            }
            _ => (T::one() - v) * (T::one() + v),
        };
    }
    Ok(out)
}
