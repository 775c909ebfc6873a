//! Symbolic partial derivative of an expression.
//!
//! Used to precompute integrand factors that quadrature loops would
//! otherwise re-derive at every node; agreement with the hyper-dual jets is
//! covered by tests. `sgn` and `abs` differentiate to 0 resp. `sgn` away
//! from their kink, like the jet path.

use super::ast::{Expr, Func};

fn num(v: f64) -> Expr {
    Expr::Num(v)
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Num(v) if *v == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Num(v) if *v == 1.0)
}

fn add(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return b;
    }
    if is_zero(&b) {
        return a;
    }
    Expr::Add(Box::new(a), Box::new(b))
}

fn sub(a: Expr, b: Expr) -> Expr {
    if is_zero(&b) {
        return a;
    }
    if is_zero(&a) {
        return Expr::Neg(Box::new(b));
    }
    Expr::Sub(Box::new(a), Box::new(b))
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) || is_zero(&b) {
        return num(0.0);
    }
    if is_one(&a) {
        return b;
    }
    if is_one(&b) {
        return a;
    }
    Expr::Mul(Box::new(a), Box::new(b))
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return num(0.0);
    }
    if is_one(&b) {
        return a;
    }
    Expr::Div(Box::new(a), Box::new(b))
}

fn pow(a: Expr, b: Expr) -> Expr {
    Expr::Pow(Box::new(a), Box::new(b))
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

/// d(expr)/d(var), with constant subtrees folded away.
pub fn diff(e: &Expr, var: &str) -> Expr {
    match e {
        Expr::Num(_) => num(0.0),
        Expr::Var(name) => num(if name == var { 1.0 } else { 0.0 }),
        Expr::Add(a, b) => add(diff(a, var), diff(b, var)),
        Expr::Sub(a, b) => sub(diff(a, var), diff(b, var)),
        Expr::Mul(a, b) => add(
            mul(diff(a, var), (**b).clone()),
            mul((**a).clone(), diff(b, var)),
        ),
        Expr::Div(a, b) => {
            let da = diff(a, var);
            let db = diff(b, var);
            if is_zero(&db) {
                return div(da, (**b).clone());
            }
            div(
                sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                pow((**b).clone(), num(2.0)),
            )
        }
        Expr::Pow(a, b) => {
            let da = diff(a, var);
            let db = diff(b, var);
            if is_zero(&db) {
                // constant exponent: p a^(p-1) a'
                if let Expr::Num(p) = **b {
                    return mul(
                        mul(num(p), pow((**a).clone(), num(p - 1.0))),
                        da,
                    );
                }
                // non-literal constant exponent: b a^(b-1) a'
                return mul(
                    mul(
                        (**b).clone(),
                        pow((**a).clone(), sub((**b).clone(), num(1.0))),
                    ),
                    da,
                );
            }
            // general a^b = exp(b log a)
            mul(
                pow((**a).clone(), (**b).clone()),
                add(
                    mul(db, call(Func::Log, (**a).clone())),
                    div(mul((**b).clone(), da), (**a).clone()),
                ),
            )
        }
        Expr::Neg(a) => {
            let da = diff(a, var);
            if is_zero(&da) {
                num(0.0)
            } else {
                Expr::Neg(Box::new(da))
            }
        }
        Expr::Call(f, a) => {
            let da = diff(a, var);
            if is_zero(&da) {
                return num(0.0);
            }
            let outer = match f {
                Func::Sin => call(Func::Cos, (**a).clone()),
                Func::Cos => Expr::Neg(Box::new(call(Func::Sin, (**a).clone()))),
                Func::Tan => add(
                    num(1.0),
                    pow(call(Func::Tan, (**a).clone()), num(2.0)),
                ),
                Func::Exp => call(Func::Exp, (**a).clone()),
                Func::Log => div(num(1.0), (**a).clone()),
                Func::Sqrt => div(num(0.5), call(Func::Sqrt, (**a).clone())),
                Func::Abs => call(Func::Sgn, (**a).clone()),
                Func::Sgn => num(0.0),
            };
            mul(outer, da)
        }
    }
}
