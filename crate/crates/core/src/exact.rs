//! Exact separable solutions `u(x, t) = φ(t) θ(x)`.
//!
//! Two families are available:
//!
//! * [`Family::Sg`], `p = m > 1`, `q = 1`, with compactly supported `θ`.
//!   Stationary for `C0 = 0`, decaying for `C0 > 0`, blowing up for `C0 < 0`.
//! * [`Family::Sv`], `q = m`, `p = 1`, restricted to `0 < m < 1` so that
//!   `p > q`. Stationary for `C = 0`, growing for `C < 0`, extinct at
//!   `T = ln(C)/(m-1)` for `0 < C < 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Sg,
    Sv,
}

/// Behavior implied by the sign of the family constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Behavior<T> {
    Stationary,
    BlowUp { t: T },
    Growth,
    Extinction { t: T },
    Vanishing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparableSolution<T> {
    pub family: Family,
    pub m: T,
    /// `C0` for [`Family::Sg`], `C` for [`Family::Sv`].
    pub constant: T,
}

/// Amplitude of the SG family.
pub fn sg_phi<T: Scalar>(m: T, c0: T, t: T) -> Result<T> {
    if !(m > T::one()) {
        return Err(Error::InvalidParams(format!("SG family needs m > 1, got {m}")));
    }
    let k = m - T::one();
    let bracket = (-k * t).exp() / k + c0;
    if !(bracket > T::zero()) {
        return Err(Error::Domain(format!("t = {t} is at or past the SG blow-up time")));
    }
    Ok((-t).exp() * bracket.powf(-T::one() / k))
}

/// Blow-up time `-ln(-C0 (m-1)) / (m-1)` of the SG family, when `C0 < 0`.
pub fn sg_blow_up_time<T: Scalar>(m: T, c0: T) -> Option<T> {
    let k = m - T::one();
    (c0 < T::zero()).then(|| -(-c0 * k).ln() / k)
}

/// Spatial factor of the SG family, supported on `|x| < L/2` with
/// `L = 2π sqrt(m) / (m-1)`.
pub fn sg_theta<T: Scalar>(m: T, x: T) -> T {
    let length = sg_period(m);
    if x.abs() >= length * T::half() {
        return T::zero();
    }
    let c = (T::PI() * x / length).cos();
    (T::two() * m / (m * m - T::one()) * c * c).powf(T::one() / (m - T::one()))
}

/// `L = 2π sqrt(m) / (m-1)`.
pub fn sg_period<T: Scalar>(m: T) -> T {
    T::two() * T::PI() * m.sqrt() / (m - T::one())
}

/// Amplitude of the SV family in the simplified form
/// `(1 - C e^((1-m) t))^(1/(1-m))`.
pub fn sv_phi<T: Scalar>(m: T, c: T, t: T) -> Result<T> {
    check_sv_m(m)?;
    let k = T::one() - m;
    let base = T::one() - c * (k * t).exp();
    if base < T::zero() || base.is_nan() {
        return Err(Error::Domain(format!("t = {t} is past the SV extinction time")));
    }
    Ok(base.powf(T::one() / k))
}

/// The SV amplitude as `e^t (e^(-(1-m) t) - C)^(1/(1-m))`.
pub fn sv_phi_unsimplified<T: Scalar>(m: T, c: T, t: T) -> Result<T> {
    check_sv_m(m)?;
    let k = T::one() - m;
    let base = (-k * t).exp() - c;
    if base < T::zero() || base.is_nan() {
        return Err(Error::Domain(format!("t = {t} is past the SV extinction time")));
    }
    Ok(t.exp() * base.powf(T::one() / k))
}

/// Extinction time `ln(C) / (m-1)` of the SV family, when `0 < C < 1`.
pub fn sv_extinction_time<T: Scalar>(m: T, c: T) -> Option<T> {
    (c > T::zero() && c < T::one()).then(|| c.ln() / (m - T::one()))
}

/// Spatial factor of the SV family,
/// `((m+1)/(2m) (1 - tanh²(k1 x/2)))^(1/(1-m))` with `k1 = (1-m)/sqrt(m)`.
pub fn sv_theta<T: Scalar>(m: T, x: T) -> T {
    let k1 = (T::one() - m) / m.sqrt();
    let c = (k1 * x * T::half()).cosh();
    let sech2 = T::one() / (c * c);
    ((m + T::one()) / (T::two() * m) * sech2).powf(T::one() / (T::one() - m))
}

fn check_sv_m<T: Scalar>(m: T) -> Result<()> {
    if m > T::zero() && m < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("SV family needs 0 < m < 1, got {m}")))
    }
}

impl<T: Scalar> SeparableSolution<T> {
    pub fn new(family: Family, m: T, constant: T) -> Result<Self> {
        match family {
            Family::Sg => {
                if !(m > T::one()) {
                    return Err(Error::InvalidParams(format!("SG family needs m > 1, got {m}")));
                }
                if !(T::one() / (m - T::one()) + constant > T::zero()) {
                    return Err(Error::InvalidParams(format!(
                        "C0 = {constant} makes the SG amplitude undefined at t = 0"
                    )));
                }
            }
            Family::Sv => {
                check_sv_m(m)?;
                if !(constant < T::one()) {
                    return Err(Error::InvalidParams(format!(
                        "C = {constant} makes the SV amplitude vanish at t = 0"
                    )));
                }
            }
        }
        if !constant.is_finite() {
            return Err(Error::InvalidParams("family constant must be finite".into()));
        }
        Ok(Self { family, m, constant })
    }

    /// Exponents `(m, p, q)` of the equation this family solves.
    pub fn params(&self) -> ModelParams<T> {
        match self.family {
            Family::Sg => ModelParams { m: self.m, p: self.m, q: T::one() },
            Family::Sv => ModelParams { m: self.m, p: T::one(), q: self.m },
        }
    }

    pub fn behavior(&self) -> Behavior<T> {
        let c = self.constant;
        match self.family {
            Family::Sg if c == T::zero() => Behavior::Stationary,
            Family::Sg if c > T::zero() => Behavior::Vanishing,
            Family::Sg => Behavior::BlowUp { t: sg_blow_up_time(self.m, c).expect("C0 < 0") },
            Family::Sv if c == T::zero() => Behavior::Stationary,
            Family::Sv if c < T::zero() => Behavior::Growth,
            Family::Sv => Behavior::Extinction { t: sv_extinction_time(self.m, c).expect("0 < C < 1") },
        }
    }

    /// Closed-form blow-up or extinction time, if finite.
    pub fn event_time(&self) -> Option<T> {
        match self.behavior() {
            Behavior::BlowUp { t } | Behavior::Extinction { t } => Some(t),
            _ => None,
        }
    }

    /// The bracket whose zero is the event time: positive before it.
    fn bracket(&self, t: T) -> T {
        let (m, c) = (self.m, self.constant);
        match self.family {
            Family::Sg => (-(m - T::one()) * t).exp() / (m - T::one()) + c,
            Family::Sv => T::one() - c * ((T::one() - m) * t).exp(),
        }
    }

    /// Event time located by bisection on the bracket zero.
    pub fn event_time_bisection(&self) -> Option<T> {
        self.event_time()?;
        let mut lo = T::zero();
        let mut hi = T::one();
        while self.bracket(hi) > T::zero() {
            lo = hi;
            hi = hi * T::two();
        }
        for _ in 0..200 {
            let mid = (lo + hi) * T::half();
            if mid <= lo || mid >= hi {
                break;
            }
            if self.bracket(mid) > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }

    pub fn phi(&self, t: T) -> Result<T> {
        match self.family {
            Family::Sg => sg_phi(self.m, self.constant, t),
            Family::Sv => sv_phi(self.m, self.constant, t),
        }
    }

    pub fn theta(&self, x: T) -> T {
        match self.family {
            Family::Sg => sg_theta(self.m, x),
            Family::Sv => sv_theta(self.m, x),
        }
    }

    pub fn value(&self, x: T, t: T) -> Result<T> {
        Ok(self.phi(t)? * self.theta(x))
    }

    /// Half-width of the spatial support (`+inf` for SV).
    pub fn support_half_width(&self) -> T {
        match self.family {
            Family::Sg => sg_period(self.m) * T::half(),
            Family::Sv => T::infinity(),
        }
    }

    /// `u_t - (u^(m-1) u_x)_x - u^p + u^q` by central differences with
    /// step `h` in both `x` and `t`. The diffusion term is evaluated as
    /// `(1/m)(u^m)_xx`.
    pub fn separable_residual(&self, x: T, t: T, h: T) -> Result<T> {
        if x.abs() + h >= self.support_half_width() {
            return Err(Error::Domain(format!("x = {x} is not an interior point of the support")));
        }
        if t < h {
            return Err(Error::Domain(format!("t = {t} is too close to the initial time for step {h}")));
        }
        let ModelParams { m, p, q } = self.params();
        let u = |x: T, t: T| self.value(x, t);
        let u0 = u(x, t)?;
        let u_t = (u(x, t + h)? - u(x, t - h)?) / (T::two() * h);
        let w = |x: T| -> Result<T> { Ok(u(x, t)?.powf(m)) };
        let diffusion = (w(x + h)? - T::two() * w(x)? + w(x - h)?) / (h * h * m);
        Ok(u_t - diffusion - u0.powf(p) + u0.powf(q))
    }
}
