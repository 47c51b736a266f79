//! Numerical certification of comparison functions: scaled stationary
//! profiles `(T ∓ a t)^(∓α) E(x)`, the self-similar blow-up subsolution
//! `(T-t)^(-α) A (1 - (ξ/a)²)_+^b`, and the porous-medium supersolution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{same, ModelParams, Outcome};
use crate::pde::{GridField, SimConfig, Solver};
use crate::scalar::Scalar;
use crate::stationary::StationaryProfile;

/// Slack allowed on analytically nonnegative quantities.
pub const CERT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaledVariant {
    /// `(T - a t)^(-α) E`, `T < 1`, subsolution for `p > 1`.
    GBlowUp,
    /// `(T + a t)^α E`, `T > 1`, subsolution for `p = 1`.
    GGrowth,
    /// `(T - a t)^α E`, `T < 1`, supersolution for `q < 1`.
    HExtinction,
    /// `(T + a t)^(-α) E`, `T > 1`, supersolution for `q = 1`.
    HVanishing,
}

impl ScaledVariant {
    /// The variant for data above (`above = true`) or below the profile.
    pub fn select<T: Scalar>(params: &ModelParams<T>, above: bool) -> Self {
        match (above, same(params.p, T::one()), same(params.q, T::one())) {
            (true, false, _) => ScaledVariant::GBlowUp,
            (true, true, _) => ScaledVariant::GGrowth,
            (false, _, false) => ScaledVariant::HExtinction,
            (false, _, true) => ScaledVariant::HVanishing,
        }
    }

    pub fn is_sub(self) -> bool {
        matches!(self, ScaledVariant::GBlowUp | ScaledVariant::GGrowth)
    }

    /// Whether the comparison function reaches its event at `t = T/a`.
    pub fn is_finite_time(self) -> bool {
        matches!(self, ScaledVariant::GBlowUp | ScaledVariant::HExtinction)
    }

    /// Default exponent for this variant.
    ///
    /// For `H` with `p = m` the exponent must satisfy `α (1-q) >= 1`,
    /// otherwise `H_t` dominates the sink as `t -> T/a`; the larger of
    /// `1/(m-1)` and `1/(1-q)` is used.
    pub fn default_alpha<T: Scalar>(self, params: &ModelParams<T>) -> Result<T> {
        let ModelParams { m, p, q } = *params;
        let one = T::one();
        let p_eq_m = same(p, m);
        let alpha = match self {
            ScaledVariant::GBlowUp if !p_eq_m && q < one && !same(q, one) => (p - q) / ((m - q) * (p - one)),
            ScaledVariant::GBlowUp => one / (m - one),
            ScaledVariant::GGrowth => one,
            ScaledVariant::HExtinction if !p_eq_m => (p - q) / ((p - m) * (one - q)),
            ScaledVariant::HExtinction => {
                let a = one / (one - q);
                if m > one { a.max(one / (m - one)) } else { a }
            }
            ScaledVariant::HVanishing => one / (m - one),
        };
        if alpha > T::zero() && alpha.is_finite() {
            Ok(alpha)
        } else {
            Err(Error::InvalidParams(format!("no valid exponent for {self:?} with m = {m}, p = {p}, q = {q}")))
        }
    }
}

/// Scaled stationary profile used as a sub- or supersolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledProfileSub<T> {
    pub profile: StationaryProfile<T>,
    pub big_t: T,
    pub a_speed: T,
    pub alpha: T,
    pub variant: ScaledVariant,
}

/// Sampling of `(x, t)` for [`verify_scaled_sub`]. Times cover the fraction
/// `[0, 1 - end_gap]` of `T/a` for the finite-time variants and
/// `t = τ/(1-τ) · T/a` with the same `τ` range otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledGrid {
    pub nx: usize,
    pub nt: usize,
    pub end_gap: f64,
}

impl Default for ScaledGrid {
    fn default() -> Self {
        Self { nx: 200, nt: 200, end_gap: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledReport<T> {
    pub min_defect: T,
    pub worst_x: T,
    pub worst_t: T,
    pub certified: bool,
}

impl<T: Scalar> ScaledProfileSub<T> {
    /// `T/a` for the finite-time variants, `+inf` otherwise.
    pub fn horizon(&self) -> T {
        if self.variant.is_finite_time() {
            self.big_t / self.a_speed
        } else {
            T::infinity()
        }
    }

    /// The time factor multiplying `E(x)`.
    pub fn amplitude(&self, t: T) -> T {
        let (tt, a, al) = (self.big_t, self.a_speed, self.alpha);
        match self.variant {
            ScaledVariant::GBlowUp => (tt - a * t).powf(-al),
            ScaledVariant::GGrowth => (tt + a * t).powf(al),
            ScaledVariant::HExtinction => (tt - a * t).max(T::zero()).powf(al),
            ScaledVariant::HVanishing => (tt + a * t).powf(-al),
        }
    }

    pub fn value(&self, x: T, t: T) -> Result<T> {
        Ok(self.amplitude(t) * self.profile.e_value(x)?)
    }

    /// `RHS - G_t` for the subsolutions, `H_t - RHS` for the
    /// supersolutions, with `(E^(m-1)E')'` replaced by `E^q - E^p`.
    pub fn defect_at(&self, e: T, t: T) -> T {
        if e <= T::zero() {
            return T::zero();
        }
        let ModelParams { m, p, q } = self.profile.params;
        let (tt, a, al) = (self.big_t, self.a_speed, self.alpha);
        let s = self.amplitude(t);
        let (eq, ep) = (e.powf(q), e.powf(p));
        let rhs = s.powf(m) * (eq - ep) + s.powf(p) * ep - s.powf(q) * eq;
        let rate = al * a * e;
        match self.variant {
            ScaledVariant::GBlowUp => rhs - rate * (tt - a * t).powf(-al - T::one()),
            ScaledVariant::GGrowth => rhs - rate * (tt + a * t).powf(al - T::one()),
            ScaledVariant::HExtinction => -rate * (tt - a * t).powf(al - T::one()) - rhs,
            ScaledVariant::HVanishing => -rate * (tt + a * t).powf(-al - T::one()) - rhs,
        }
    }

    fn sample_times(&self, grid: &ScaledGrid) -> Vec<T> {
        let scale = self.big_t / self.a_speed;
        let top = T::one() - T::lit(grid.end_gap);
        (0..grid.nt)
            .map(|j| {
                let tau = top * T::from_usize_lossy(j) / T::from_usize_lossy(grid.nt.max(2) - 1);
                if self.variant.is_finite_time() { tau * scale } else { tau / (T::one() - tau) * scale }
            })
            .collect()
    }
}

/// Builds the scaled comparison function for `u0` with the default
/// exponent and sample grid.
pub fn build_scaled_sub<T: Scalar>(
    profile: &StationaryProfile<T>,
    u0: &GridField<T>,
    variant: ScaledVariant,
) -> Result<ScaledProfileSub<T>> {
    let alpha = variant.default_alpha(&profile.params)?;
    build_scaled_sub_with(profile, u0, variant, alpha, &ScaledGrid::default())
}

/// As [`build_scaled_sub`] with an explicit exponent and sample grid.
pub fn build_scaled_sub_with<T: Scalar>(
    profile: &StationaryProfile<T>,
    u0: &GridField<T>,
    variant: ScaledVariant,
    alpha: T,
    grid: &ScaledGrid,
) -> Result<ScaledProfileSub<T>> {
    if !(alpha > T::zero() && alpha.is_finite()) {
        return Err(Error::InvalidParams(format!("alpha must be positive, got {alpha}")));
    }
    let mut ratio_max = T::zero();
    let mut ratio_min = T::infinity();
    let mut count = 0usize;
    for (i, &u) in u0.values.iter().enumerate() {
        let e = profile.e_value(u0.x(i))?;
        // G compares on the support of E, H on the support of u0.
        let r = if variant.is_sub() {
            if e <= T::zero() {
                continue;
            }
            u / e
        } else {
            if u <= T::zero() {
                continue;
            }
            if e <= T::zero() { T::infinity() } else { u / e }
        };
        count += 1;
        ratio_max = ratio_max.max(r);
        ratio_min = ratio_min.min(r);
    }
    if count == 0 {
        return Err(Error::Certification("no sample points on the comparison support".into()));
    }
    let inv = T::one() / alpha;
    let big_t = match variant {
        ScaledVariant::GBlowUp => (T::one() / ratio_min).powf(inv),
        ScaledVariant::GGrowth => ratio_min.powf(inv),
        ScaledVariant::HExtinction => ratio_max.powf(inv),
        ScaledVariant::HVanishing => (T::one() / ratio_max).powf(inv),
    };
    let ok = if variant.is_finite_time() { big_t < T::one() } else { big_t > T::one() && big_t.is_finite() };
    if !ok || big_t.is_nan() || big_t <= T::zero() {
        return Err(Error::Certification(format!(
            "initial data not strictly ordered against the profile (T = {big_t})"
        )));
    }

    let mut sub = ScaledProfileSub { profile: *profile, big_t, a_speed: T::one(), alpha, variant };
    let mut passes = |a: T| {
        sub.a_speed = a;
        verify_scaled_sub(&sub, grid).map(|r| r.certified)
    };
    let mut lo = T::one();
    let mut hi = T::zero();
    let mut halvings = 0;
    while !passes(lo)? {
        hi = lo;
        lo = lo * T::half();
        halvings += 1;
        if halvings > 60 {
            return Err(Error::Certification("no admissible speed found down to 2^-60".into()));
        }
    }
    if hi > T::zero() {
        for _ in 0..30 {
            let mid = (lo + hi) * T::half();
            if passes(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    sub.a_speed = lo;
    Ok(sub)
}

/// Minimum of the defect over the sample grid; certified when it is at
/// least `-CERT_SLACK`.
pub fn verify_scaled_sub<T: Scalar>(sub: &ScaledProfileSub<T>, grid: &ScaledGrid) -> Result<ScaledReport<T>> {
    let profile = &sub.profile;
    let (lo, hi) = match profile.half_width() {
        Some(h) => (profile.center - h, profile.center + h),
        None => {
            return Err(Error::InvalidParams("scaled comparison needs a compactly supported profile".into()));
        }
    };
    let nx = grid.nx.max(2);
    let mut xs = Vec::with_capacity(nx);
    for i in 0..nx {
        let x = lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(nx - 1);
        xs.push((x, profile.e_value(x)?));
    }
    let times = sub.sample_times(grid);
    let mut report = ScaledReport { min_defect: T::infinity(), worst_x: lo, worst_t: T::zero(), certified: false };
    for &t in &times {
        for &(x, e) in &xs {
            let d = sub.defect_at(e, t);
            if d < report.min_defect || d.is_nan() {
                report.min_defect = d;
                report.worst_x = x;
                report.worst_t = t;
            }
        }
    }
    report.certified = report.min_defect >= -T::lit(CERT_SLACK);
    Ok(report)
}

/// Co-evolves the PDE from `u0` and returns the largest `G - u` over all
/// nodes and steps before `(1 - end_gap) T/a`. Only meaningful for the
/// subsolution variants.
pub fn scaled_sub_dominance<T: Scalar>(
    sub: &ScaledProfileSub<T>,
    u0: &GridField<T>,
    config: &SimConfig<T>,
    end_gap: T,
) -> Result<T> {
    let mut solver = Solver::new(sub.profile.params, config.clone())?;
    let e: Vec<T> = u0.xs().into_iter().map(|x| sub.profile.e_value(x)).collect::<Result<_>>()?;
    let t_stop = config.t_max.min(sub.horizon() * (T::one() - end_gap));
    let mut field = u0.clone();
    let mut worst = T::neg_infinity();
    loop {
        let s = sub.amplitude(field.t);
        for (u, e) in field.values.iter().zip(&e) {
            worst = worst.max(s * *e - *u);
        }
        if field.t >= t_stop || field.sup_norm() >= config.thresholds.blow_up_norm {
            break;
        }
        let dt = solver.stable_dt(&field).min(t_stop - field.t);
        solver.apply(&mut field, dt);
    }
    Ok(worst)
}

/// Self-similar blow-up subsolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarSub<T> {
    pub params: ModelParams<T>,
    pub amplitude: T,
    pub a_width: T,
    pub b: T,
    pub big_t: T,
    pub alpha: T,
    pub beta: T,
    pub kappa: T,
}

/// Profile exponent: midpoint of `(1/m, 1/κ)`, or `1/m + 1` when `κ = 0`.
pub fn profile_exponent<T: Scalar>(params: &ModelParams<T>) -> (T, T) {
    let ModelParams { m, q, .. } = *params;
    let kappa = (m - q).max(m - T::one()).max(T::zero());
    let b = if kappa > T::zero() {
        (T::one() / m + T::one() / kappa) * T::half()
    } else {
        T::one() / m + T::one()
    };
    (kappa, b)
}

impl<T: Scalar> SelfSimilarSub<T> {
    pub fn with_amplitude(params: ModelParams<T>, amplitude: T) -> Result<Self> {
        params.validate()?;
        let ModelParams { m, p, q } = params;
        let one = T::one();
        if !(p > one) || same(p, one) {
            return Err(Error::InvalidParams(format!("self-similar subsolution needs p > 1, got {p}")));
        }
        if !(amplitude > T::zero() && amplitude.is_finite()) {
            return Err(Error::InvalidParams(format!("amplitude must be positive, got {amplitude}")));
        }
        let alpha = one / (p - one);
        let beta = alpha * (p - m) * T::half();
        let (kappa, b) = profile_exponent(&params);
        let a_width = amplitude.powf(m - one - (p - one) * T::half()).sqrt();
        let big_t = amplitude.powf(-(p - one) * (p - one) / (T::two() * (p - q)));
        Ok(Self { params, amplitude, a_width, b, big_t, alpha, beta, kappa })
    }

    /// `A^(m-1)/a²`.
    pub fn b_coeff(&self) -> T {
        self.amplitude.powf(self.params.m - T::one()) / (self.a_width * self.a_width)
    }

    pub fn value(&self, x: T, t: T) -> T {
        let tau = self.big_t - t;
        if tau <= T::zero() {
            return T::infinity();
        }
        let xi = x * tau.powf(-self.beta);
        let y = (xi / self.a_width).powi(2);
        if y >= T::one() {
            return T::zero();
        }
        tau.powf(-self.alpha) * self.amplitude * (T::one() - y).powf(self.b)
    }

    pub fn initial(&self, x: T) -> T {
        self.value(x, T::zero())
    }

    /// Half-width of the support at time `t`.
    pub fn support_half_width(&self, t: T) -> T {
        self.a_width * (self.big_t - t).powf(self.beta)
    }

    /// `I1..I6` at `y = (ξ/a)²` and time `t`; all zero outside the support.
    pub fn terms(&self, y: T, t: T) -> [T; 6] {
        let yy = T::one() - y;
        if yy <= T::zero() {
            return [T::zero(); 6];
        }
        let ModelParams { m, p, q } = self.params;
        let (b, bb) = (self.b, self.b_coeff());
        let a = self.amplitude;
        let two = T::two();
        let i1 = self.alpha * yy.powf(b);
        let i2 = two * b * self.beta * y * yy.powf(b - T::one());
        let i3 = T::lit(4.0) * bb * b * (m * b - T::one()) * y * yy.powf(m * b - two);
        let i4 = two * bb * b * yy.powf(m * b - T::one());
        let i5 = a.powf(p - T::one()) * yy.powf(b * p);
        let i6 = (self.big_t - t).powf(self.alpha * (p - q)) * a.powf(q - T::one()) * yy.powf(b * q);
        [i1, i2, i3, i4, i5, i6]
    }

    /// The four grouped inequalities and the combined one, each `>= 0`
    /// when satisfied.
    pub fn inequalities(&self, y: T, t: T) -> [T; 5] {
        let [i1, i2, i3, i4, i5, i6] = self.terms(y, t);
        let quarter = T::lit(0.25);
        let shared = (i3 + i5) * quarter;
        [shared - i1, shared - i4, shared - i6, i2 + i3 * quarter, i2 - i1 + i3 - i4 + i5 - i6]
    }

    /// `C1..C6`: thresholds in `(ξ/a)²` beyond or below which the grouped
    /// inequalities hold term by term.
    pub fn constants(&self) -> [T; 6] {
        let ModelParams { m, p, q } = self.params;
        let (b, bb, a, al) = (self.b, self.b_coeff(), self.amplitude, self.alpha);
        let one = T::one();
        let k = bb * b * (m * b - one);
        [
            al / k,
            one - (T::lit(4.0) * al).powf(one / (b * (p - one))) * a.powf(-one / b),
            T::two() / (m * b + one),
            one - (T::lit(8.0) * b * a.powf(-(p - one) * T::half())).powf(one / (b * (p - m) + one)),
            one - T::lit(4.0).powf(one / (b * (p - q))) * a.powf(-one / b) * self.big_t.powf(al / b),
            self.big_t.powf(al * (p - q)) * a.powf(q - one) / k,
        ]
    }
}

/// Sampling for [`verify_selfsimilar`]: `nx` values of `ξ/a` on `[0, 1]`
/// and `nt` times `T j / nt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarGrid {
    pub nx: usize,
    pub nt: usize,
    /// Add samples at `sqrt(C_i)` for the constants inside `(0, 1)`.
    pub refine: bool,
}

impl Default for SelfSimilarGrid {
    fn default() -> Self {
        Self { nx: 300, nt: 100, refine: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstSample<T> {
    pub xi_over_a: T,
    pub t: T,
    /// Index into [`InequalityReport::minima`].
    pub inequality: usize,
    pub terms: [T; 6],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport<T> {
    /// Minima of the four grouped inequalities and of the combined one.
    pub minima: [T; 5],
    pub worst: WorstSample<T>,
    pub constants: [T; 6],
    pub samples: usize,
    pub certified: bool,
}

pub fn verify_selfsimilar<T: Scalar>(sub: &SelfSimilarSub<T>, grid: &SelfSimilarGrid) -> InequalityReport<T> {
    let nx = grid.nx.max(2);
    let mut xis: Vec<T> = (0..nx).map(|i| T::from_usize_lossy(i) / T::from_usize_lossy(nx - 1)).collect();
    let constants = sub.constants();
    if grid.refine {
        let h = T::lit(1e-6);
        for c in constants {
            if c > T::zero() && c < T::one() {
                let r = c.sqrt();
                xis.extend([r - h, r, r + h].into_iter().filter(|v| *v >= T::zero() && *v <= T::one()));
            }
        }
    }
    let times: Vec<T> =
        (0..grid.nt.max(1)).map(|j| sub.big_t * T::from_usize_lossy(j) / T::from_usize_lossy(grid.nt.max(1))).collect();

    let mut minima = [T::infinity(); 5];
    let mut worst = WorstSample { xi_over_a: T::zero(), t: T::zero(), inequality: 0, terms: [T::zero(); 6] };
    let mut worst_value = T::infinity();
    for &t in &times {
        for &xi in &xis {
            let y = xi * xi;
            let v = sub.inequalities(y, t);
            for k in 0..5 {
                minima[k] = minima[k].min(v[k]);
                if k < 4 && v[k] < worst_value {
                    worst_value = v[k];
                    worst = WorstSample { xi_over_a: xi, t, inequality: k, terms: sub.terms(y, t) };
                }
            }
        }
    }
    let slack = -T::lit(CERT_SLACK);
    let certified = minima.iter().all(|&v| v >= slack);
    InequalityReport { minima, worst, constants, samples: xis.len() * times.len(), certified }
}

/// Doubles `A` from 4 until [`verify_selfsimilar`] certifies the
/// subsolution, giving up past `2^60`.
pub fn build_selfsimilar_sub<T: Scalar>(
    params: ModelParams<T>,
    grid: &SelfSimilarGrid,
) -> Result<(SelfSimilarSub<T>, InequalityReport<T>)> {
    let limit = T::lit(2f64.powi(60));
    let mut amplitude = T::lit(4.0);
    while amplitude <= limit {
        let sub = SelfSimilarSub::with_amplitude(params, amplitude)?;
        let report = verify_selfsimilar(&sub, grid);
        if report.certified {
            return Ok((sub, report));
        }
        amplitude = amplitude * T::two();
    }
    Err(Error::Certification("amplitude search exceeded 2^60".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PorousReport<T> {
    /// `max(u_full - u_diffusion)` over nodes and steps, floored at 0.
    pub max_excess: T,
    /// `(t, sup)` of the full equation.
    pub full_history: Vec<(T, T)>,
    /// `(t, sup)` of the diffusion-only equation.
    pub diffusion_history: Vec<(T, T)>,
    pub t_end: T,
    pub steps: usize,
    /// Full sup norm non-increasing from the first step on.
    pub decays_monotonically: bool,
}

/// Co-evolves the full equation and the porous-medium equation from `u0`
/// on shared steps.
pub fn porous_supersolution_check<T: Scalar>(
    params: ModelParams<T>,
    u0: &GridField<T>,
    config: &SimConfig<T>,
) -> Result<PorousReport<T>> {
    let sup0 = u0.sup_norm();
    if !(sup0 <= T::one()) {
        return Err(Error::InitialData(format!("sup norm {sup0} exceeds 1")));
    }
    let mut full = Solver::new(params, SimConfig { reaction_enabled: true, ..config.clone() })?;
    let mut diff = Solver::new(params, SimConfig { reaction_enabled: false, ..config.clone() })?;
    let (mut u, mut v) = (u0.clone(), u0.clone());
    let ext = config.thresholds.extinction_norm;
    let mut report = PorousReport {
        max_excess: T::zero(),
        full_history: vec![(u.t, sup0)],
        diffusion_history: vec![(v.t, sup0)],
        t_end: u.t,
        steps: 0,
        decays_monotonically: true,
    };
    while u.t < config.t_max && report.steps < config.max_steps {
        let su = u.sup_norm();
        if sup0 > ext && su <= ext {
            break;
        }
        let dt = full.stable_dt(&u).min(diff.stable_dt(&v)).min(config.t_max - u.t);
        full.apply(&mut u, dt);
        diff.apply(&mut v, dt);
        v.t = u.t;
        report.steps += 1;
        for (a, b) in u.values.iter().zip(&v.values) {
            report.max_excess = report.max_excess.max(*a - *b);
        }
        report.full_history.push((u.t, u.sup_norm()));
        report.diffusion_history.push((v.t, v.sup_norm()));
    }
    report.t_end = u.t;
    report.decays_monotonically = report.full_history.windows(2).skip(1).all(|w| w[1].1 <= w[0].1);
    Ok(report)
}

/// Prediction from comparing initial data with the stationary profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    BlowUp,
    Growth,
    Extinction,
    Vanishing,
    NotComparable,
    OutsideHypotheses,
}

impl Prediction {
    /// Whether a simulated outcome agrees with the prediction.
    pub fn agrees_with<T>(self, outcome: &Outcome<T>) -> bool {
        matches!(
            (self, outcome),
            (Prediction::BlowUp, Outcome::BlowUp { .. })
                | (Prediction::Growth, Outcome::Growth)
                | (Prediction::Extinction, Outcome::Extinction { .. })
                | (Prediction::Vanishing, Outcome::Vanishing)
        )
    }
}

/// Above `E` on the support of `E`: blow-up (`p > 1`) or growth. Below
/// `E` on the support of `u0`: extinction (`q < 1`) or vanishing.
pub fn classify_by_separatrix<T: Scalar>(u0: &GridField<T>, profile: &StationaryProfile<T>) -> Result<Prediction> {
    let params = profile.params;
    if !params.hypotheses().separatrix {
        return Ok(Prediction::OutsideHypotheses);
    }
    let mut above = true;
    let mut below = true;
    let mut any_e = false;
    let mut any_u = false;
    for (i, &u) in u0.values.iter().enumerate() {
        let e = profile.e_value(u0.x(i))?;
        if e > T::zero() {
            any_e = true;
            above &= u > e;
        }
        if u > T::zero() {
            any_u = true;
            below &= u < e;
        }
    }
    let one = T::one();
    Ok(if any_e && above {
        if same(params.p, one) { Prediction::Growth } else { Prediction::BlowUp }
    } else if any_u && below {
        if same(params.q, one) { Prediction::Vanishing } else { Prediction::Extinction }
    } else {
        Prediction::NotComparable
    })
}
