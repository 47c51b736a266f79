//! Small numerical kernels: Gauss-Legendre panels, a bracketed root finder
//! and an embedded Runge-Kutta step.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const GL_ORDER: usize = 20;

fn gauss_legendre_f64() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes.push((x, w));
        }
        nodes
    })
}

/// 20-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss_legendre<T: Scalar>(a: T, b: T, f: impl Fn(T) -> T) -> T {
    let mid = (a + b) * T::half();
    let half = (b - a) * T::half();
    gauss_legendre_f64()
        .iter()
        .fold(T::zero(), |acc, &(x, w)| acc + T::lit(w) * f(mid + half * T::lit(x)))
        * half
}

/// Brent's method on a sign-changing bracket `[a, b]`. Terminates when the
/// bracket is narrower than `abs_tol + rel_tol * |x|`.
pub fn brent<T: Scalar>(
    mut f: impl FnMut(T) -> T,
    lo: T,
    hi: T,
    abs_tol: T,
    rel_tol: T,
    max_iter: usize,
) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoConvergence { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    let two = T::two();
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::epsilon() * b.abs() + (abs_tol + rel_tol * b.abs()) * T::half();
        let m = (c - b) * T::half();
        if m.abs() <= tol || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (T::lit(3.0) * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol { b + d } else { b + tol * m.signum() };
        fb = f(b);
    }
    Err(Error::NoConvergence { lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() })
}

/// One Dormand-Prince 5(4) step for a scalar autonomous-or-not ODE.
/// Returns the fifth-order solution and the embedded error estimate.
pub fn dopri_step<T: Scalar>(f: &impl Fn(T, T) -> T, x: T, y: T, h: T) -> (T, T) {
    let l = T::lit;
    let k1 = f(x, y);
    let k2 = f(x + h * l(1.0 / 5.0), y + h * (l(1.0 / 5.0) * k1));
    let k3 = f(x + h * l(3.0 / 10.0), y + h * (l(3.0 / 40.0) * k1 + l(9.0 / 40.0) * k2));
    let k4 = f(
        x + h * l(4.0 / 5.0),
        y + h * (l(44.0 / 45.0) * k1 - l(56.0 / 15.0) * k2 + l(32.0 / 9.0) * k3),
    );
    let k5 = f(
        x + h * l(8.0 / 9.0),
        y + h * (l(19372.0 / 6561.0) * k1 - l(25360.0 / 2187.0) * k2 + l(64448.0 / 6561.0) * k3
            - l(212.0 / 729.0) * k4),
    );
    let k6 = f(
        x + h,
        y + h * (l(9017.0 / 3168.0) * k1 - l(355.0 / 33.0) * k2 + l(46732.0 / 5247.0) * k3
            + l(49.0 / 176.0) * k4
            - l(5103.0 / 18656.0) * k5),
    );
    let y5 = y + h
        * (l(35.0 / 384.0) * k1 + l(500.0 / 1113.0) * k3 + l(125.0 / 192.0) * k4
            - l(2187.0 / 6784.0) * k5
            + l(11.0 / 84.0) * k6);
    let k7 = f(x + h, y5);
    let err = h
        * (l(71.0 / 57600.0) * k1 - l(71.0 / 16695.0) * k3 + l(71.0 / 1920.0) * k4
            - l(17253.0 / 339200.0) * k5
            + l(22.0 / 525.0) * k6
            - l(1.0 / 40.0) * k7);
    (y5, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let v = gauss_legendre(0.0f64, 2.0, |x| x.powi(39));
        assert!((v - 2f64.powi(40) / 40.0).abs() / v < 1e-13);
        let s = gauss_legendre(0.0f64, std::f64::consts::PI, f64::sin);
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn brent_finds_roots() {
        let r = brent(|x: f64| x * x - 2.0, 0.0, 2.0, 0.0, 0.0, 200).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-15);
        let r = brent(|x: f64| x.powi(3), -1.0, 0.5, 1e-12, 0.0, 500).unwrap();
        assert!(r.abs() < 1e-5);
        assert!(brent(|x: f64| x * x + 1.0, -1.0, 1.0, 0.0, 0.0, 50).is_err());
    }

    #[test]
    fn dopri_exponential() {
        let f = |_x: f64, y: f64| y;
        let (mut x, mut y) = (0.0, 1.0);
        let h = 0.01;
        for _ in 0..100 {
            let (y5, err) = dopri_step(&f, x, y, h);
            assert!(err.abs() < 1e-12);
            y = y5;
            x += h;
        }
        assert!((y - 1f64.exp()).abs() < 1e-12);
    }
}
