//! Expression parsing, evaluation, and exact second-order forward-mode
//! differentiation.
//!
//! Coefficient functions, sections, chart changes and test densities are all
//! small closed-form expressions; this module is their numerical substrate.

mod ast;
mod deriv;
mod jet;
mod parse;

pub use ast::{Expr, Func};
pub use deriv::diff;
pub use jet::{eval_jet2, Jet2};
pub use parse::parse;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ExprError {
    #[error("syntax error at column {column}: expected {expected}")]
    Syntax { column: usize, expected: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("domain error in `{context}` at argument {arg}")]
    Domain { context: String, arg: f64 },
}

/// Variable bindings for evaluation. Lookups are linear scans; environments
/// here have at most a handful of entries.
pub type Env<'a> = [(&'a str, f64)];

pub(crate) fn lookup(env: &Env, name: &str) -> Result<f64, ExprError> {
    for (n, v) in env {
        if *n == name {
            return Ok(*v);
        }
    }
    Err(ExprError::UnboundVariable(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, env: &Env) -> f64 {
        parse(src).unwrap().eval(env).unwrap()
    }

    #[test]
    fn eval_basics() {
        assert_eq!(ev("z1*z2", &[("z1", 3.0), ("z2", 4.0)]), 12.0);
        assert_eq!(ev("tan(y)", &[("y", 0.0)]), 0.0);
        assert_eq!(ev("2^3^2", &[]), 512.0); // right-associative
        assert_eq!(ev("-2^2", &[]), -4.0); // ^ binds tighter than unary -
        assert_eq!(ev("1 - 2 - 3", &[]), -4.0);
        assert_eq!(ev("8/4/2", &[]), 1.0);
        assert_eq!(ev("sgn(-3.5)", &[]), -1.0);
    }

    #[test]
    fn domain_errors() {
        let e = parse("log(z1)").unwrap();
        assert!(matches!(
            e.eval(&[("z1", -1.0)]),
            Err(ExprError::Domain { .. })
        ));
        let e = parse("1/(1 - x)").unwrap();
        assert!(matches!(e.eval(&[("x", 1.0)]), Err(ExprError::Domain { .. })));
        assert_eq!(e.eval(&[("x", 0.5)]).unwrap(), 2.0);
    }

    #[test]
    fn unbound_variable() {
        let e = parse("y^2 + sin(z1)").unwrap();
        assert!(matches!(
            e.eval(&[("y", 1.0)]),
            Err(ExprError::UnboundVariable(v)) if v == "z1"
        ));
    }

    #[test]
    fn double_star_rejected() {
        let err = parse("2 ** x").unwrap_err();
        match err {
            ExprError::Syntax { column, .. } => assert_eq!(column, 3),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn free_variables() {
        let e = parse("y^2 + sin(z1) - abs(y)").unwrap();
        let mut vars = e.free_vars();
        vars.sort();
        assert_eq!(vars, vec!["y".to_string(), "z1".to_string()]);
    }
}
