//! Second-order truncated Taylor (hyper-dual) arithmetic.
//!
//! A [`Jet2`] carries a value, a gradient and a symmetric Hessian with
//! respect to a fixed variable list. Arithmetic propagates both derivative
//! orders exactly (to machine rounding), which is what the flatness residuals
//! need: they must distinguish an exact zero from a small number.

use super::ast::{int_exponent, Expr};
use super::{lookup, Env, ExprError, Func};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    /// Partial derivatives, one entry per differentiation variable.
    pub grad: Vec<f64>,
    /// Dense symmetric Hessian, row-major `n x n`.
    pub hess: Vec<f64>,
}

impl Jet2 {
    fn constant(v: f64, n: usize) -> Jet2 {
        Jet2 { value: v, grad: vec![0.0; n], hess: vec![0.0; n * n] }
    }

    fn variable(v: f64, idx: usize, n: usize) -> Jet2 {
        let mut jet = Jet2::constant(v, n);
        jet.grad[idx] = 1.0;
        jet
    }

    pub fn nvars(&self) -> usize {
        self.grad.len()
    }

    pub fn hess_at(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.nvars() + j]
    }

    fn zip(a: &Jet2, b: &Jet2, f: impl Fn(f64, f64) -> f64) -> Jet2 {
        Jet2 {
            value: f(a.value, b.value),
            grad: a.grad.iter().zip(&b.grad).map(|(x, y)| f(*x, *y)).collect(),
            hess: a.hess.iter().zip(&b.hess).map(|(x, y)| f(*x, *y)).collect(),
        }
    }

    fn add(a: &Jet2, b: &Jet2) -> Jet2 {
        Jet2::zip(a, b, |x, y| x + y)
    }

    fn sub(a: &Jet2, b: &Jet2) -> Jet2 {
        Jet2::zip(a, b, |x, y| x - y)
    }

    fn mul(a: &Jet2, b: &Jet2) -> Jet2 {
        let n = a.nvars();
        let mut out = Jet2::constant(a.value * b.value, n);
        for i in 0..n {
            out.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
        }
        for i in 0..n {
            for j in 0..n {
                out.hess[i * n + j] = a.hess[i * n + j] * b.value
                    + a.grad[i] * b.grad[j]
                    + a.grad[j] * b.grad[i]
                    + a.value * b.hess[i * n + j];
            }
        }
        out
    }

    /// Chain rule through a scalar function with derivatives `d1 = phi'(v)`,
    /// `d2 = phi''(v)`.
    fn chain(a: &Jet2, value: f64, d1: f64, d2: f64) -> Jet2 {
        let n = a.nvars();
        let mut out = Jet2::constant(value, n);
        for i in 0..n {
            out.grad[i] = d1 * a.grad[i];
        }
        for i in 0..n {
            for j in 0..n {
                out.hess[i * n + j] = d2 * a.grad[i] * a.grad[j] + d1 * a.hess[i * n + j];
            }
        }
        out
    }

    fn recip(a: &Jet2) -> Result<Jet2, ExprError> {
        if a.value == 0.0 {
            return Err(ExprError::Domain { context: "division".into(), arg: 0.0 });
        }
        let inv = 1.0 / a.value;
        Ok(Jet2::chain(a, inv, -inv * inv, 2.0 * inv * inv * inv))
    }

    fn scale(a: &Jet2, c: f64) -> Jet2 {
        Jet2 {
            value: c * a.value,
            grad: a.grad.iter().map(|g| c * g).collect(),
            hess: a.hess.iter().map(|h| c * h).collect(),
        }
    }
}

fn apply_func(f: Func, a: &Jet2) -> Result<Jet2, ExprError> {
    let x = a.value;
    let bad = |ctx: &str| ExprError::Domain { context: ctx.to_string(), arg: x };
    let (v, d1, d2) = match f {
        Func::Sin => (x.sin(), x.cos(), -x.sin()),
        Func::Cos => (x.cos(), -x.sin(), -x.cos()),
        Func::Tan => {
            let t = x.tan();
            let s = 1.0 + t * t;
            (t, s, 2.0 * t * s)
        }
        Func::Exp => {
            let e = x.exp();
            (e, e, e)
        }
        Func::Log => {
            if x <= 0.0 {
                return Err(bad("log"));
            }
            (x.ln(), 1.0 / x, -1.0 / (x * x))
        }
        Func::Sqrt => {
            if x <= 0.0 {
                return Err(bad("sqrt"));
            }
            let s = x.sqrt();
            (s, 0.5 / s, -0.25 / (s * x))
        }
        // abs and sgn differentiate to +/-1 resp. 0 away from the kink and
        // are rejected exactly at it.
        Func::Abs => {
            if x == 0.0 {
                return Err(bad("abs"));
            }
            (x.abs(), x.signum(), 0.0)
        }
        Func::Sgn => {
            if x == 0.0 {
                return Err(bad("sgn"));
            }
            (x.signum(), 0.0, 0.0)
        }
    };
    Ok(Jet2::chain(a, v, d1, d2))
}

fn eval_rec(expr: &Expr, env: &Env, vars: &[&str]) -> Result<Jet2, ExprError> {
    let n = vars.len();
    Ok(match expr {
        Expr::Num(v) => Jet2::constant(*v, n),
        Expr::Var(name) => {
            let v = lookup(env, name)?;
            match vars.iter().position(|w| w == name) {
                Some(idx) => Jet2::variable(v, idx, n),
                None => Jet2::constant(v, n),
            }
        }
        Expr::Add(a, b) => Jet2::add(&eval_rec(a, env, vars)?, &eval_rec(b, env, vars)?),
        Expr::Sub(a, b) => Jet2::sub(&eval_rec(a, env, vars)?, &eval_rec(b, env, vars)?),
        Expr::Mul(a, b) => Jet2::mul(&eval_rec(a, env, vars)?, &eval_rec(b, env, vars)?),
        Expr::Div(a, b) => {
            let num = eval_rec(a, env, vars)?;
            let den = eval_rec(b, env, vars)?;
            Jet2::mul(&num, &Jet2::recip(&den)?)
        }
        Expr::Pow(a, b) => {
            let base = eval_rec(a, env, vars)?;
            let exp = eval_rec(b, env, vars)?;
            let exp_const = exp.grad.iter().all(|g| *g == 0.0)
                && exp.hess.iter().all(|h| *h == 0.0);
            if exp_const {
                if let Some(k) = int_exponent(exp.value) {
                    return Ok(pow_int(&base, k)?);
                }
                // constant real exponent: x^p with x > 0
                let x = base.value;
                if x <= 0.0 {
                    return Err(ExprError::Domain { context: "power".into(), arg: x });
                }
                let p = exp.value;
                let v = x.powf(p);
                return Ok(Jet2::chain(
                    &base,
                    v,
                    p * x.powf(p - 1.0),
                    p * (p - 1.0) * x.powf(p - 2.0),
                ));
            }
            // general case through exp(b log a), a > 0
            if base.value <= 0.0 {
                return Err(ExprError::Domain { context: "power".into(), arg: base.value });
            }
            let ln = apply_func(Func::Log, &base)?;
            apply_func(Func::Exp, &Jet2::mul(&exp, &ln))?
        }
        Expr::Neg(a) => Jet2::scale(&eval_rec(a, env, vars)?, -1.0),
        Expr::Call(f, a) => apply_func(*f, &eval_rec(a, env, vars)?)?,
    })
}

fn pow_int(base: &Jet2, k: i32) -> Result<Jet2, ExprError> {
    if k == 0 {
        return Ok(Jet2::constant(1.0, base.nvars()));
    }
    if k < 0 {
        let pos = pow_int(base, -k)?;
        return Jet2::recip(&pos);
    }
    // exact chain rule: d(x^k) = k x^(k-1), d2 = k(k-1) x^(k-2)
    let x = base.value;
    let kf = k as f64;
    let v = x.powi(k);
    let d1 = kf * x.powi(k - 1);
    let d2 = kf * (kf - 1.0) * x.powi(k - 2);
    Ok(Jet2::chain(base, v, d1, d2))
}

/// Evaluate `expr` with all free variables bound by `env`, differentiating
/// with respect to `vars`, exactly to second order.
pub fn eval_jet2(expr: &Expr, env: &Env, vars: &[&str]) -> Result<Jet2, ExprError> {
    eval_rec(expr, env, vars)
}
