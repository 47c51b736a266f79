//! Explicit finite-difference solver for `u_t = (1/m)(u^m)_xx + u^p - u^q`
//! on `[-L, L]` with adaptive time steps and event detection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{classify_trajectory, ModelParams, NormSample, Outcome, Thresholds};
use crate::scalar::Scalar;

/// Nodal values on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField<T> {
    pub x_left: T,
    pub dx: T,
    pub values: Vec<T>,
    pub t: T,
}

impl<T: Scalar> GridField<T> {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn x(&self, i: usize) -> T {
        self.x_left + self.dx * T::from_usize_lossy(i)
    }

    pub fn xs(&self) -> Vec<T> {
        (0..self.n()).map(|i| self.x(i)).collect()
    }

    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| if v > acc || v.is_nan() { v } else { acc })
    }

    /// Trapezoidal `∫ u dx`.
    pub fn mass(&self) -> T {
        let n = self.n();
        if n < 2 {
            return T::zero();
        }
        let inner = self.values[1..n - 1].iter().fold(T::zero(), |a, &v| a + v);
        (inner + (self.values[0] + self.values[n - 1]) * T::half()) * self.dx
    }

    /// Index of the node with the largest value.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Dirichlet0,
    NeumannReflect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct SimConfig<T> {
    pub half_length: T,
    pub n: usize,
    pub t_max: T,
    pub cfl_safety: T,
    pub boundary: Boundary,
    pub thresholds: Thresholds<T>,
    pub snapshot_times: Vec<T>,
    /// Switches off `u^p - u^q`, leaving the porous-medium equation.
    pub reaction_enabled: bool,
    pub max_steps: usize,
}

impl<T: Scalar> Default for SimConfig<T> {
    fn default() -> Self {
        Self {
            half_length: T::lit(12.5),
            n: 1001,
            t_max: T::lit(10.0),
            cfl_safety: T::lit(0.9),
            boundary: Boundary::Dirichlet0,
            thresholds: Thresholds::default(),
            snapshot_times: Vec::new(),
            reaction_enabled: true,
            max_steps: 50_000_000,
        }
    }
}

impl<T: Scalar> SimConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.half_length > T::zero() && self.half_length.is_finite()) {
            return bad(format!("half_length must be positive, got {}", self.half_length));
        }
        if self.n < 3 {
            return bad(format!("need at least 3 nodes, got {}", self.n));
        }
        if !(self.t_max >= T::zero() && self.t_max.is_finite()) {
            return bad(format!("t_max must be finite and nonnegative, got {}", self.t_max));
        }
        if !(self.cfl_safety > T::zero() && self.cfl_safety < T::one()) {
            return bad(format!("cfl_safety must lie in (0, 1), got {}", self.cfl_safety));
        }
        let th = &self.thresholds;
        if !(th.blow_up_norm > T::zero() && th.extinction_norm >= T::zero() && th.dt_floor > T::zero()) {
            return bad("thresholds must be positive".into());
        }
        if th.extinction_norm >= th.blow_up_norm {
            return bad("extinction threshold must lie below the blow-up threshold".into());
        }
        if self.snapshot_times.iter().any(|t| !(t.is_finite() && *t >= T::zero())) {
            return bad("snapshot times must be finite and nonnegative".into());
        }
        Ok(())
    }

    pub fn dx(&self) -> T {
        T::two() * self.half_length / T::from_usize_lossy(self.n - 1)
    }

    pub fn x_left(&self) -> T {
        -self.half_length
    }
}

/// Samples `f` at the grid nodes at `t = 0`.
pub fn sample<T: Scalar>(f: impl Fn(T) -> T, config: &SimConfig<T>) -> Result<GridField<T>> {
    config.validate()?;
    let dx = config.dx();
    let x_left = config.x_left();
    let mut values = Vec::with_capacity(config.n);
    for i in 0..config.n {
        let x = x_left + dx * T::from_usize_lossy(i);
        let v = f(x);
        if !(v >= T::zero() && v.is_finite()) {
            return Err(Error::InitialData(format!("initial value {v} at x = {x}")));
        }
        values.push(v);
    }
    Ok(GridField { x_left, dx, values, t: T::zero() })
}

/// `u^e` with shortcuts for the common small exponents.
#[derive(Debug, Clone, Copy)]
enum Power<T> {
    One,
    Two,
    Int(i32),
    Real(T),
}

impl<T: Scalar> Power<T> {
    fn new(e: T) -> Self {
        let r = e.round();
        if (e - r).abs() <= T::lit(1e-14) && r.abs() <= T::lit(8.0) {
            match r.to_i32() {
                Some(1) => Power::One,
                Some(2) => Power::Two,
                Some(k) => Power::Int(k),
                None => Power::Real(e),
            }
        } else {
            Power::Real(e)
        }
    }

    #[inline]
    fn eval(self, u: T) -> T {
        match self {
            Power::One => u,
            Power::Two => u * u,
            Power::Int(k) => u.powi(k),
            Power::Real(e) => u.powf(e),
        }
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Horizon,
    Extinction,
    BlowUp,
    MaxSteps,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunStats<T> {
    pub steps: usize,
    /// Largest negative excursion removed by clipping in a single step.
    pub max_clip: T,
    pub min_dt: T,
    pub stop: StopReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult<T> {
    pub outcome: Outcome<T>,
    pub snapshots: Vec<GridField<T>>,
    pub history: Vec<NormSample<T>>,
    pub stats: RunStats<T>,
    pub final_field: GridField<T>,
}

/// Explicit stepper. [`Solver::stable_dt`] caches `u^m` and the reaction
/// for the field it was given; [`Solver::apply`] then advances that field.
#[derive(Debug, Clone)]
pub struct Solver<T> {
    pub params: ModelParams<T>,
    pub config: SimConfig<T>,
    pow_m: Power<T>,
    pow_p: Power<T>,
    pow_q: Power<T>,
    w: Vec<T>,
    react: Vec<T>,
}

impl<T: Scalar> Solver<T> {
    pub fn new(params: ModelParams<T>, config: SimConfig<T>) -> Result<Self> {
        params.validate()?;
        config.validate()?;
        Ok(Self {
            pow_m: Power::new(params.m),
            pow_p: Power::new(params.p),
            pow_q: Power::new(params.q),
            params,
            w: vec![T::zero(); config.n],
            react: vec![T::zero(); config.n],
            config,
        })
    }

    fn check(&self, field: &GridField<T>) -> Result<()> {
        if field.n() != self.config.n {
            return Err(Error::Config(format!(
                "field has {} nodes, configuration expects {}",
                field.n(),
                self.config.n
            )));
        }
        Ok(())
    }

    /// Largest admissible step for `field`, before any cap for snapshots or
    /// the horizon. `+inf` for a state that does not move.
    pub fn stable_dt(&mut self, field: &GridField<T>) -> T {
        let ext = self.config.thresholds.extinction_norm;
        let m = self.params.m;
        let reaction_on = self.config.reaction_enabled;
        let mut u_max = T::zero();
        let mut u_min_pos = T::infinity();
        let mut react_dt = T::infinity();
        for (i, &u) in field.values.iter().enumerate() {
            self.w[i] = self.pow_m.eval(u);
            let f = if reaction_on && u > T::zero() { self.pow_p.eval(u) - self.pow_q.eval(u) } else { T::zero() };
            self.react[i] = f;
            if u > T::zero() {
                u_max = u_max.max(u);
                u_min_pos = u_min_pos.min(u);
                if f != T::zero() {
                    react_dt = react_dt.min(T::lit(0.1) * u.max(ext) / f.abs());
                }
            }
        }
        let diff_dt = if u_max > T::zero() {
            // Largest diffusivity u^(m-1) over the nonzero nodes.
            let u_ref = if m >= T::one() { u_max } else { u_min_pos };
            let d = u_ref.max(ext).powf(m - T::one());
            self.config.dx().powi(2) * m.min(T::one()) / (T::two() * d)
        } else {
            T::infinity()
        };
        self.config.cfl_safety * diff_dt.min(react_dt)
    }

    /// Advances the field last passed to [`Solver::stable_dt`] by `dt` and
    /// returns the magnitude removed by clipping negatives.
    pub fn apply(&self, field: &mut GridField<T>, dt: T) -> T {
        let n = field.n();
        let inv = dt / (self.params.m * field.dx * field.dx);
        let w = &self.w;
        let mut clip = T::zero();
        let mut update = |i: usize, lap: T, u: &mut T| {
            let v = *u + inv * lap + dt * self.react[i];
            if v < T::zero() {
                clip = clip.max(-v);
                *u = T::zero();
            } else {
                *u = v;
            }
        };
        match self.config.boundary {
            Boundary::Dirichlet0 => {
                field.values[0] = T::zero();
                field.values[n - 1] = T::zero();
            }
            Boundary::NeumannReflect => {
                let two = T::two();
                let l0 = two * (w[1] - w[0]);
                let ln = two * (w[n - 2] - w[n - 1]);
                update(0, l0, &mut field.values[0]);
                update(n - 1, ln, &mut field.values[n - 1]);
            }
        }
        for i in 1..n - 1 {
            let lap = w[i + 1] - T::two() * w[i] + w[i - 1];
            update(i, lap, &mut field.values[i]);
        }
        field.t = field.t + dt;
        clip
    }

    /// One step, capped at the horizon.
    pub fn step(&mut self, field: &GridField<T>) -> Result<(GridField<T>, T)> {
        self.check(field)?;
        let mut next = field.clone();
        let remaining = self.config.t_max - field.t;
        let dt = self.stable_dt(field).min(remaining.max(T::zero()));
        self.apply(&mut next, dt);
        Ok((next, dt))
    }

    /// Advances until an event, the horizon, or the step budget.
    pub fn run(&mut self, u0: &GridField<T>) -> Result<RunResult<T>> {
        self.check(u0)?;
        let th = self.config.thresholds;
        let t_max = self.config.t_max;
        let mut snaps: Vec<T> = self.config.snapshot_times.iter().copied().filter(|&t| t >= u0.t && t <= t_max).collect();
        snaps.sort_by(|a, b| a.partial_cmp(b).expect("finite snapshot times"));
        let mut next_snap = 0;
        let mut snapshots = Vec::new();

        let mut field = u0.clone();
        let initial = field.sup_norm();
        let mut history = vec![NormSample { t: field.t, sup_norm: initial, dt: T::infinity() }];
        let mut stats = RunStats { steps: 0, max_clip: T::zero(), min_dt: T::infinity(), stop: StopReason::Horizon };
        let can_go_extinct = initial > th.extinction_norm;
        let mut crossed = false;

        loop {
            while next_snap < snaps.len() && snaps[next_snap] <= field.t {
                snapshots.push(field.clone());
                next_snap += 1;
            }
            if field.t >= t_max {
                stats.stop = StopReason::Horizon;
                break;
            }
            if stats.steps >= self.config.max_steps {
                stats.stop = StopReason::MaxSteps;
                break;
            }
            let stable = self.stable_dt(&field);
            let target = if next_snap < snaps.len() { snaps[next_snap] } else { t_max };
            let (dt, land) = if stable >= target - field.t { (target - field.t, true) } else { (stable, false) };
            let clip = self.apply(&mut field, dt);
            if land {
                field.t = target;
            }
            stats.steps += 1;
            stats.max_clip = stats.max_clip.max(clip);
            stats.min_dt = stats.min_dt.min(stable);
            let sup = field.sup_norm();
            history.push(NormSample { t: field.t, sup_norm: sup, dt: stable });

            if can_go_extinct && sup <= th.extinction_norm {
                stats.stop = StopReason::Extinction;
                break;
            }
            if !sup.is_finite() {
                stats.stop = StopReason::BlowUp;
                break;
            }
            crossed |= sup >= th.blow_up_norm;
            if crossed && stable < th.dt_floor {
                stats.stop = StopReason::BlowUp;
                break;
            }
        }
        let outcome = classify_trajectory(&history, &th);
        Ok(RunResult { outcome, snapshots, history, stats, final_field: field })
    }
}

/// Runs `u0` under `params` and `config`.
pub fn run<T: Scalar>(params: ModelParams<T>, u0: &GridField<T>, config: &SimConfig<T>) -> Result<RunResult<T>> {
    Solver::new(params, config.clone())?.run(u0)
}

/// Result of co-evolving two ordered initial fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairReport<T> {
    /// `max(u_low - u_high)` over all nodes and steps, floored at 0.
    pub max_violation: T,
    pub t_end: T,
    pub steps: usize,
    pub stop: StopReason,
}

/// Co-evolves `low <= high` with a shared step and tracks ordering.
pub fn ordered_pair_test<T: Scalar>(
    params: ModelParams<T>,
    low: &GridField<T>,
    high: &GridField<T>,
    config: &SimConfig<T>,
) -> Result<PairReport<T>> {
    let mut a = Solver::new(params, config.clone())?;
    let mut b = Solver::new(params, config.clone())?;
    a.check(low)?;
    b.check(high)?;
    if low.values.iter().zip(&high.values).any(|(l, h)| l > h) {
        return Err(Error::InitialData("fields are not ordered".into()));
    }
    let th = config.thresholds;
    let (mut lo, mut hi) = (low.clone(), high.clone());
    let violation = |lo: &GridField<T>, hi: &GridField<T>| {
        lo.values.iter().zip(&hi.values).fold(T::zero(), |acc, (&l, &h)| acc.max(l - h))
    };
    let mut report = PairReport { max_violation: T::zero(), t_end: lo.t, steps: 0, stop: StopReason::Horizon };
    let low_alive = lo.sup_norm() > th.extinction_norm;
    let high_alive = hi.sup_norm() > th.extinction_norm;
    while lo.t < config.t_max {
        if report.steps >= config.max_steps {
            report.stop = StopReason::MaxSteps;
            break;
        }
        let dt = a.stable_dt(&lo).min(b.stable_dt(&hi)).min(config.t_max - lo.t);
        a.apply(&mut lo, dt);
        b.apply(&mut hi, dt);
        hi.t = lo.t;
        report.steps += 1;
        report.max_violation = report.max_violation.max(violation(&lo, &hi));
        let (sl, sh) = (lo.sup_norm(), hi.sup_norm());
        if (low_alive && sl <= th.extinction_norm) || (high_alive && sh <= th.extinction_norm) {
            report.stop = StopReason::Extinction;
            break;
        }
        if !(sl < th.blow_up_norm && sh < th.blow_up_norm) {
            report.stop = StopReason::BlowUp;
            break;
        }
    }
    report.t_end = lo.t;
    Ok(report)
}
