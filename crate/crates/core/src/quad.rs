//! Gauss–Legendre quadrature: fixed rules and an adaptive driver.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadError {
    #[error("quadrature failed to reach tolerance {tol:e} on [{a}, {b}] (best error estimate {err:e})")]
    QuadratureFailure { a: f64, b: f64, tol: f64, err: f64 },
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre polynomial; accurate to ~1e-15 for the
/// orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Cached node tables for the rule sizes in active use. The leak is bounded
/// by the number of distinct sizes ever requested.
pub fn gauss_legendre_cached(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    use std::collections::HashMap;
    use std::sync::{LazyLock, Mutex};
    static CACHE: LazyLock<Mutex<HashMap<usize, &'static (Vec<f64>, Vec<f64>)>>> =
        LazyLock::new(|| Mutex::new(HashMap::new()));
    let mut cache = CACHE.lock().unwrap();
    cache.entry(n).or_insert_with(|| Box::leak(Box::new(gauss_legendre(n))))
}

/// Integrate `f` over [a, b] with a fixed n-point Gauss–Legendre rule.
pub fn fixed_gl<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in xs.iter().zip(ws.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Same as [`fixed_gl`] but with caller-supplied nodes/weights, for hot loops.
pub fn fixed_gl_with<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    xs: &[f64],
    ws: &[f64],
) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in xs.iter().zip(ws.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

struct Adaptive<'a, F> {
    f: &'a mut F,
    tol: f64,
    max_depth: u32,
    lo_x: Vec<f64>,
    lo_w: Vec<f64>,
    hi_x: Vec<f64>,
    hi_w: Vec<f64>,
}

impl<F: FnMut(f64) -> f64> Adaptive<'_, F> {
    fn panel(&mut self, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64, QuadError> {
        let lo = {
            let f = &mut self.f;
            fixed_gl_with(|x| f(x), a, b, &self.lo_x, &self.lo_w)
        };
        let hi = {
            let f = &mut self.f;
            fixed_gl_with(|x| f(x), a, b, &self.hi_x, &self.hi_w)
        };
        let err = (hi - lo).abs();
        // the requested tolerance is absolute, but it cannot beat rounding:
        // accept once the discrepancy reaches the f64 floor of the values
        let floor = 1e-15 * (1.0 + hi.abs());
        if hi.is_finite() && err.is_finite() {
            if err <= tol.max(floor) {
                return Ok(hi);
            }
            // a panel too narrow to subdivide meaningfully is done
            if (b - a) <= 1e-12 * (1.0 + a.abs() + b.abs()) {
                return Ok(hi);
            }
        }
        if depth >= self.max_depth {
            return Err(QuadError::QuadratureFailure { a, b, tol: self.tol, err });
        }
        let mid = 0.5 * (a + b);
        let child_tol = if floor.is_finite() { (0.5 * tol).max(floor) } else { 0.5 * tol };
        let left = self.panel(a, mid, child_tol, depth + 1)?;
        let right = self.panel(mid, b, child_tol, depth + 1)?;
        Ok(left + right)
    }
}

/// Adaptive Gauss–Legendre integration of `f` over [a, b] to absolute
/// tolerance `tol`. The interval may be given in either order; the result is
/// antisymmetric under swapping the endpoints.
pub fn adaptive_gl<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64, QuadError> {
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (lo_x, lo_w) = gauss_legendre(10);
    let (hi_x, hi_w) = gauss_legendre(21);
    let mut ad = Adaptive { f: &mut f, tol, max_depth, lo_x, lo_w, hi_x, hi_w };
    let v = ad.panel(lo, hi, tol, 0)?;
    Ok(if a < b { v } else { -v })
}
