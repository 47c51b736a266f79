//! Model parameters, the canonicalizing change of variables, the reaction
//! term and the trajectory outcome taxonomy.
//!
//! The canonical equation is
//!
//! ```text
//! u_t = (u^(m-1) u_x)_x + u^p - u^q,    p > q > 0, m > 0
//! ```
//!
//! obtained from `u_t = κ (u^(m-1) u_x)_x + α u^p - β u^q` by rescaling
//! `x -> a x`, `t -> b t`, `u -> l u`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative tolerance used when deciding whether two exponents coincide
/// (`p = m`, `q = 1`, ...).
pub const EXPONENT_TOL: f64 = 1e-12;

pub(crate) fn same<T: Scalar>(a: T, b: T) -> bool {
    (a - b).abs() <= T::lit(EXPONENT_TOL) * T::one().max(a.abs()).max(b.abs())
}

/// Exponents of the canonical equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    pub m: T,
    pub p: T,
    pub q: T,
}

/// Which of the classical hypothesis sets a parameter triple satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    /// `m > 1`, the slow-diffusion range of the Cauchy problem.
    pub slow_diffusion: bool,
    /// `m + q > 0`: stationary profiles exist.
    pub stationary_profile: bool,
    /// `p >= m > q`, `p >= 1`, `q <= 1`: the stationary profile separates
    /// blow-up/growth from extinction/vanishing.
    pub separatrix: bool,
    /// `p > 1`: a self-similar blow-up subsolution exists.
    pub self_similar_blow_up: bool,
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(m: T, p: T, q: T) -> Result<Self> {
        let params = Self { m, p, q };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { m, p, q } = *self;
        if !(m.is_finite() && p.is_finite() && q.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "exponents must be finite (m = {m}, p = {p}, q = {q})"
            )));
        }
        if m <= T::zero() {
            return Err(Error::InvalidParams(format!("m must be positive, got {m}")));
        }
        if q <= T::zero() {
            return Err(Error::InvalidParams(format!("q must be positive, got {q}")));
        }
        if p <= q || same(p, q) {
            return Err(Error::InvalidParams(format!(
                "source exponent must exceed sink exponent (p = {p}, q = {q})"
            )));
        }
        if m + q <= T::zero() {
            return Err(Error::InvalidParams("m + q must be positive".into()));
        }
        Ok(())
    }

    pub fn hypotheses(&self) -> Hypotheses {
        let Self { m, p, q } = *self;
        let one = T::one();
        let p_ge_m = p > m || same(p, m);
        let p_ge_1 = p > one || same(p, one);
        let q_le_1 = q < one || same(q, one);
        Hypotheses {
            slow_diffusion: m > one,
            stationary_profile: m + q > T::zero(),
            separatrix: p_ge_m && m > q && !same(m, q) && p_ge_1 && q_le_1,
            self_similar_blow_up: p > one && !same(p, one),
        }
    }

    /// `u^p - u^q` for `u >= 0`; exactly zero at `u = 0`.
    #[inline]
    pub fn reaction_term(&self, u: T) -> T {
        if u == T::zero() {
            T::zero()
        } else {
            u.powf(self.p) - u.powf(self.q)
        }
    }
}

/// The reaction term `u^p - u^q`.
pub fn reaction<T: Scalar>(u: T, params: &ModelParams<T>) -> Result<T> {
    if u.is_nan() || u < T::zero() {
        return Err(Error::Domain(format!("reaction needs u >= 0, got {u}")));
    }
    Ok(params.reaction_term(u))
}

/// Coefficients of the unscaled equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawParams<T> {
    pub alpha: T,
    pub beta: T,
    pub kappa: T,
    pub m: T,
    pub p: T,
    pub q: T,
}

/// Space, time and amplitude scales of the change of variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFactors<T> {
    pub a: T,
    pub b: T,
    pub l: T,
}

/// Scales mapping the coefficient form onto the canonical equation.
pub fn rescale_to_canonical<T: Scalar>(raw: &RawParams<T>) -> Result<ScalingFactors<T>> {
    let RawParams { alpha, beta, kappa, m, p, q } = *raw;
    for (name, v) in [("alpha", alpha), ("beta", beta), ("kappa", kappa), ("m", m)] {
        if !(v > T::zero()) || !v.is_finite() {
            return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
        }
    }
    if same(p, q) {
        return Err(Error::InvalidParams(format!(
            "amplitude scale undefined for p = q = {p}"
        )));
    }
    let l = (beta / alpha).powf(T::one() / (p - q));
    let b = l.powf(T::one() - p) / alpha;
    let a = (kappa * l.powf(m - p) / alpha).sqrt();
    Ok(ScalingFactors { a, b, l })
}

impl<T: Scalar> ScalingFactors<T> {
    /// Inverse of [`rescale_to_canonical`]: recovers the coefficients that
    /// these scales canonicalize.
    pub fn to_raw(&self, m: T, p: T, q: T) -> RawParams<T> {
        let alpha = self.l.powf(T::one() - p) / self.b;
        let beta = alpha * self.l.powf(p - q);
        let kappa = self.a * self.a * alpha * self.l.powf(p - m);
        RawParams { alpha, beta, kappa, m, p, q }
    }
}

/// Classification of a trajectory by the behavior of its sup norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome<T> {
    /// Finite-time blow-up; `t` is when the sup norm crossed the threshold.
    BlowUp { t: T },
    /// Finite-time extinction; `t` is when the sup norm fell below the threshold.
    Extinction { t: T },
    /// Divergence without step-size collapse by the horizon.
    Growth,
    /// Monotone decay without reaching the extinction threshold.
    Vanishing,
    Undecided { t_end: T, sup_norm: T },
}

impl<T> Outcome<T> {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::BlowUp { .. } => "blow_up",
            Outcome::Extinction { .. } => "extinction",
            Outcome::Growth => "growth",
            Outcome::Vanishing => "vanishing",
            Outcome::Undecided { .. } => "undecided",
        }
    }

    pub fn is_event(&self) -> bool {
        matches!(self, Outcome::BlowUp { .. } | Outcome::Extinction { .. })
    }
}

impl<T: Copy> Outcome<T> {
    pub fn event_time(&self) -> Option<T> {
        match *self {
            Outcome::BlowUp { t } | Outcome::Extinction { t } => Some(t),
            _ => None,
        }
    }
}

/// Detection thresholds for [`classify_trajectory`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds<T> {
    pub blow_up_norm: T,
    pub extinction_norm: T,
    pub dt_floor: T,
    /// Ratio between final and initial sup norm required to call a
    /// monotone trend growth or vanishing.
    pub trend_factor: T,
}

impl<T: Scalar> Default for Thresholds<T> {
    fn default() -> Self {
        Self {
            blow_up_norm: T::lit(1e6),
            extinction_norm: T::lit(1e-8),
            dt_floor: T::lit(1e-12),
            trend_factor: T::lit(10.0),
        }
    }
}

/// One entry of a sup-norm history. `dt` is the step that produced the
/// state (`+inf` for the initial state).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSample<T> {
    pub t: T,
    pub sup_norm: T,
    pub dt: T,
}

/// Classifies a sup-norm history. The first event in time order wins, so
/// anything appended after an event leaves the result unchanged.
pub fn classify_trajectory<T: Scalar>(history: &[NormSample<T>], th: &Thresholds<T>) -> Outcome<T> {
    let Some(first) = history.first() else {
        return Outcome::Undecided { t_end: T::zero(), sup_norm: T::zero() };
    };
    let t0 = first.t;
    let can_go_extinct = first.sup_norm > th.extinction_norm;
    let mut crossed: Option<T> = None;

    for s in history {
        let diverged = !s.sup_norm.is_finite() || s.sup_norm >= th.blow_up_norm;
        if can_go_extinct && s.t > t0 && s.sup_norm <= th.extinction_norm {
            return Outcome::Extinction { t: s.t };
        }
        if diverged && crossed.is_none() && s.t > t0 {
            crossed = Some(s.t);
        }
        if let Some(tc) = crossed {
            if s.dt < th.dt_floor || !s.sup_norm.is_finite() {
                return Outcome::BlowUp { t: tc };
            }
        }
    }

    let last = history[history.len() - 1];
    let t_mid = t0 + (last.t - t0) * T::half();
    let tail: Vec<T> = history.iter().filter(|s| s.t >= t_mid).map(|s| s.sup_norm).collect();
    let slack = T::lit(1e-12);
    let rising = tail.windows(2).all(|w| w[1] >= w[0] * (T::one() - slack));
    let falling = tail.windows(2).all(|w| w[1] <= w[0] * (T::one() + slack));
    let initial = first.sup_norm;

    if tail.len() >= 2 && rising && (crossed.is_some() || last.sup_norm >= initial * th.trend_factor) {
        return Outcome::Growth;
    }
    if tail.len() >= 2 && falling && initial > T::zero() && last.sup_norm * th.trend_factor <= initial {
        return Outcome::Vanishing;
    }
    Outcome::Undecided { t_end: last.t, sup_norm: last.sup_norm }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn raw(alpha: f64, beta: f64, kappa: f64) -> RawParams<f64> {
        RawParams { alpha, beta, kappa, m: 2.0, p: 2.0, q: 1.0 }
    }

    #[test]
    fn identity_scaling() {
        let s = rescale_to_canonical(&raw(1.0, 1.0, 1.0)).unwrap();
        assert_eq!((s.a, s.b, s.l), (1.0, 1.0, 1.0));
    }

    #[test]
    fn scaling_examples() {
        let s = rescale_to_canonical(&raw(4.0, 1.0, 1.0)).unwrap();
        assert!((s.l - 0.25).abs() < 1e-15 && (s.b - 1.0).abs() < 1e-15 && (s.a - 0.5).abs() < 1e-15);
        let s = rescale_to_canonical(&raw(1.0, 4.0, 1.0)).unwrap();
        assert!((s.l - 4.0).abs() < 1e-15 && (s.b - 0.25).abs() < 1e-15 && (s.a - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scaling_rejects_degenerate_input() {
        let mut r = raw(1.0, 1.0, 1.0);
        r.q = 2.0;
        assert!(matches!(rescale_to_canonical(&r), Err(Error::InvalidParams(_))));
        assert!(rescale_to_canonical(&raw(0.0, 1.0, 1.0)).is_err());
        assert!(rescale_to_canonical(&raw(1.0, -1.0, 1.0)).is_err());
        assert!(rescale_to_canonical(&raw(1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn scales_cancel_all_coefficients() {
        // l v(x/a, t/b) solves the raw equation iff these three products are 1.
        let r = RawParams { alpha: 3.0f64, beta: 0.7, kappa: 2.5, m: 1.7, p: 2.3, q: 0.4 };
        let s = rescale_to_canonical(&r).unwrap();
        let diffusion = r.kappa * s.l.powf(r.m - 1.0) * s.b / (s.a * s.a);
        let source = r.alpha * s.l.powf(r.p - 1.0) * s.b;
        let sink = r.beta * s.l.powf(r.q - 1.0) * s.b;
        for v in [diffusion, source, sink] {
            assert!((v - 1.0).abs() < 1e-13, "{v}");
        }
    }

    #[test]
    fn reaction_values() {
        let pm = ModelParams::new(2.0f64, 2.0, 0.9).unwrap();
        assert_eq!(reaction(1.0, &pm).unwrap(), 0.0);
        assert_eq!(reaction(0.0, &pm).unwrap(), 0.0);
        // 4 - 2^0.9, evaluated with 30-digit arithmetic.
        assert!((reaction(2.0, &pm).unwrap() - 2.133_934_016_926_385).abs() < 1e-14);
        assert!(reaction(-1e-3, &pm).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(2.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(2.0, 0.5, 1.0).is_err());
        assert!(ModelParams::new(0.0, 2.0, 1.0).is_err());
        assert!(ModelParams::new(2.0, 2.0, 0.0).is_err());
        let h = ModelParams::new(2.0, 2.0, 0.9).unwrap().hypotheses();
        assert!(h.slow_diffusion && h.separatrix && h.self_similar_blow_up && h.stationary_profile);
        let h = ModelParams::new(0.8, 2.0, 0.5).unwrap().hypotheses();
        assert!(!h.slow_diffusion && h.self_similar_blow_up);
        let h = ModelParams::new(2.0, 2.0, 1.5).unwrap().hypotheses();
        assert!(!h.separatrix);
    }

    fn hist(samples: &[(f64, f64, f64)]) -> Vec<NormSample<f64>> {
        samples.iter().map(|&(t, sup_norm, dt)| NormSample { t, sup_norm, dt }).collect()
    }

    #[test]
    fn classify_blow_up() {
        let h = hist(&[(0.0, 1.0, f64::INFINITY), (0.5, 1e3, 1e-4), (0.6, 2e6, 1e-9), (0.61, 1e7, 1e-13)]);
        assert_eq!(classify_trajectory(&h, &Thresholds::default()), Outcome::BlowUp { t: 0.6 });
    }

    #[test]
    fn classify_extinction() {
        let h = hist(&[(0.0, 1.0, f64::INFINITY), (1.0, 1e-3, 0.1), (1.5, 1e-9, 0.1)]);
        assert_eq!(classify_trajectory(&h, &Thresholds::default()), Outcome::Extinction { t: 1.5 });
    }

    #[test]
    fn classify_equilibrium_is_undecided() {
        let h: Vec<_> = (0..=10).map(|i| NormSample { t: i as f64 * 0.1, sup_norm: 1.0, dt: 0.1 }).collect();
        assert_eq!(
            classify_trajectory(&h, &Thresholds::default()),
            Outcome::Undecided { t_end: 1.0, sup_norm: 1.0 }
        );
    }

    #[test]
    fn classify_trends() {
        let th = Thresholds::default();
        let up: Vec<_> = (0..=20).map(|i| NormSample { t: i as f64, sup_norm: (i as f64 * 0.3).exp(), dt: 0.1 }).collect();
        assert_eq!(classify_trajectory(&up, &th), Outcome::Growth);
        let down: Vec<_> = (0..=20).map(|i| NormSample { t: i as f64, sup_norm: (-(i as f64) * 0.3).exp(), dt: 0.1 }).collect();
        assert_eq!(classify_trajectory(&down, &th), Outcome::Vanishing);
        // A norm threshold without dt collapse is not blow-up.
        let fast = hist(&[(0.0, 1.0, f64::INFINITY), (1.0, 2e6, 1e-6), (2.0, 4e6, 1e-6)]);
        assert_eq!(classify_trajectory(&fast, &th), Outcome::Growth);
    }

    #[test]
    fn zero_history_is_undecided() {
        let h = hist(&[(0.0, 0.0, f64::INFINITY), (1.0, 0.0, 1.0)]);
        assert_eq!(
            classify_trajectory(&h, &Thresholds::default()),
            Outcome::Undecided { t_end: 1.0, sup_norm: 0.0 }
        );
        assert!(matches!(classify_trajectory::<f64>(&[], &Thresholds::default()), Outcome::Undecided { .. }));
    }

    proptest! {
        #[test]
        fn rescale_round_trip(alpha in 0.05f64..20.0, beta in 0.05f64..20.0, kappa in 0.05f64..20.0,
                              m in 0.2f64..4.0, q in 0.1f64..2.0, gap in 0.1f64..3.0) {
            let r = RawParams { alpha, beta, kappa, m, p: q + gap, q };
            let back = rescale_to_canonical(&r).unwrap().to_raw(m, q + gap, q);
            for (x, y) in [(r.alpha, back.alpha), (r.beta, back.beta), (r.kappa, back.kappa)] {
                prop_assert!(((x - y) / x).abs() < 1e-12);
            }
        }

        #[test]
        fn reaction_sign_structure(u in 1e-6f64..50.0, q in 0.05f64..2.0, gap in 0.05f64..3.0) {
            let pm = ModelParams::new(1.5, q + gap, q).unwrap();
            let r = reaction(u, &pm).unwrap();
            if u > 1.0 + 1e-9 { prop_assert!(r > 0.0); }
            if u < 1.0 - 1e-9 { prop_assert!(r < 0.0); }
        }

        #[test]
        fn events_survive_trailing_padding(pad in proptest::collection::vec((0.0f64..1e8, 1e-15f64..1.0), 0..20)) {
            let th = Thresholds::default();
            for base in [
                hist(&[(0.0, 1.0, f64::INFINITY), (0.5, 2e6, 1e-9), (0.6, 1e9, 1e-13)]),
                hist(&[(0.0, 1.0, f64::INFINITY), (0.5, 1e-2, 1e-2), (0.9, 1e-9, 1e-2)]),
            ] {
                let expected = classify_trajectory(&base, &th);
                let mut padded = base.clone();
                let mut t = base.last().unwrap().t;
                for &(norm, dt) in &pad {
                    t += dt;
                    padded.push(NormSample { t, sup_norm: norm, dt });
                }
                prop_assert_eq!(classify_trajectory(&padded, &th), expected);
                prop_assert_eq!(classify_trajectory(&padded, &th), classify_trajectory(&padded, &th));
            }
        }
    }
}
