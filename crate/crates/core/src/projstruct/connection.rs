//! Coefficient fields of a 2D projective connection: flatness residuals,
//! chart transforms, slope transforms and characteristic tracing.

use crate::exprcalc::{eval_jet2, Expr};

use super::{b_from_coeffs, coeffs_from_b, q_complement, ProjStructError, SymBil};

/// The four coefficient functions of the geodesic cubic, as expressions of
/// z1 = t and z2 = x, on a rectangular domain.
#[derive(Debug, Clone)]
pub struct Connection2D {
    pub a: Expr,
    pub b: Expr,
    pub c: Expr,
    pub d: Expr,
    pub z1: (f64, f64),
    pub z2: (f64, f64),
}

impl Connection2D {
    pub fn zero(z1: (f64, f64), z2: (f64, f64)) -> Connection2D {
        Connection2D {
            a: Expr::num(0.0),
            b: Expr::num(0.0),
            c: Expr::num(0.0),
            d: Expr::num(0.0),
            z1,
            z2,
        }
    }

    pub fn coeffs(&self, z: [f64; 2]) -> Result<[f64; 4], ProjStructError> {
        let env = [("z1", z[0]), ("z2", z[1])];
        Ok([
            self.a.eval(&env)?,
            self.b.eval(&env)?,
            self.c.eval(&env)?,
            self.d.eval(&env)?,
        ])
    }

    pub fn contains(&self, z: [f64; 2]) -> bool {
        self.z1.0 <= z[0] && z[0] <= self.z1.1 && self.z2.0 <= z[1] && z[1] <= self.z2.1
    }
}

/// Both flatness residuals of the connection at an interior point, from the
/// exact jets of the coefficients. The connection is flat on a domain
/// exactly when both vanish identically there.
pub fn flatness_residual(conn: &Connection2D, z: [f64; 2]) -> Result<(f64, f64), ProjStructError> {
    let env = [("z1", z[0]), ("z2", z[1])];
    let vars = ["z1", "z2"];
    let ja = eval_jet2(&conn.a, &env, &vars)?;
    let jb = eval_jet2(&conn.b, &env, &vars)?;
    let jc = eval_jet2(&conn.c, &env, &vars)?;
    let jd = eval_jet2(&conn.d, &env, &vars)?;
    let (a, b, c, d) = (ja.value, jb.value, jc.value, jd.value);
    let r1 = jc.hess_at(1, 1) / 3.0 - 2.0 / 3.0 * jb.hess_at(1, 0) + ja.hess_at(0, 0)
        - 2.0 / 3.0 * b * jb.grad[0]
        + a * jc.grad[0]
        + c * ja.grad[0]
        + b * jc.grad[1] / 3.0
        - 2.0 * a * jd.grad[1]
        - d * ja.grad[1];
    let r2 = jb.hess_at(0, 0) / 3.0 - 2.0 / 3.0 * jc.hess_at(0, 1) + jd.hess_at(1, 1)
        + 2.0 / 3.0 * c * jc.grad[1]
        - d * jb.grad[1]
        - b * jd.grad[1]
        - c * jb.grad[0] / 3.0
        + 2.0 * d * ja.grad[0]
        + a * jd.grad[0];
    Ok((r1, r2))
}

/// Integrate the characteristic (geodesic-graph) equation
/// `g'' = a g'^3 + b g'^2 + c g' + d` by classic fourth-order Runge–Kutta
/// with a fixed step, from (t0, g0, v0) to t1. Coefficients are supplied by
/// a field evaluator so transformed connections can be traced too.
pub fn trace_characteristic(
    coeffs: &dyn Fn([f64; 2]) -> Result<[f64; 4], ProjStructError>,
    in_domain: &dyn Fn([f64; 2]) -> bool,
    t0: f64,
    g0: f64,
    v0: f64,
    t1: f64,
    steps: usize,
) -> Result<Vec<(f64, f64, f64)>, ProjStructError> {
    let steps = steps.max(1);
    let h = (t1 - t0) / steps as f64;
    let rhs = |t: f64, g: f64, w: f64| -> Result<(f64, f64), ProjStructError> {
        let [a, b, c, d] = coeffs([t, g])?;
        Ok((w, a * w * w * w + b * w * w + c * w + d))
    };
    let mut out = Vec::with_capacity(steps + 1);
    let (mut t, mut g, mut w) = (t0, g0, v0);
    out.push((t, g, w));
    for _ in 0..steps {
        if !in_domain([t, g]) {
            return Err(ProjStructError::LeftDomain(t));
        }
        let (k1g, k1w) = rhs(t, g, w)?;
        let (k2g, k2w) = rhs(t + 0.5 * h, g + 0.5 * h * k1g, w + 0.5 * h * k1w)?;
        let (k3g, k3w) = rhs(t + 0.5 * h, g + 0.5 * h * k2g, w + 0.5 * h * k2w)?;
        let (k4g, k4w) = rhs(t + h, g + h * k3g, w + h * k3w)?;
        g += h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        t += h;
        out.push((t, g, w));
    }
    if !in_domain([t, g]) {
        return Err(ProjStructError::LeftDomain(t));
    }
    Ok(out)
}

impl Connection2D {
    /// Characteristic trace with the connection's own coefficients and
    /// domain box.
    pub fn trace(
        &self,
        t0: f64,
        g0: f64,
        v0: f64,
        t1: f64,
        steps: usize,
    ) -> Result<Vec<(f64, f64, f64)>, ProjStructError> {
        trace_characteristic(
            &|z| self.coeffs(z),
            &|z| self.contains(z),
            t0,
            g0,
            v0,
            t1,
            steps,
        )
    }
}

/// A base chart change phi = (tau, xi) with expression components.
#[derive(Debug, Clone)]
pub struct ChartChange {
    pub tau: Expr,
    pub xi: Expr,
}

/// Value, Jacobian and the two component Hessians of a chart change at a
/// point.
#[derive(Debug, Clone, Copy)]
pub struct MapJet {
    pub value: [f64; 2],
    /// Rows indexed by component (tau, xi), columns by (z1, z2).
    pub jac: [[f64; 2]; 2],
    /// `hess[k]` is the Hessian of component k.
    pub hess: [[[f64; 2]; 2]; 2],
}

impl ChartChange {
    pub fn identity() -> ChartChange {
        ChartChange { tau: Expr::var("z1"), xi: Expr::var("z2") }
    }

    pub fn apply(&self, z: [f64; 2]) -> Result<[f64; 2], ProjStructError> {
        let env = [("z1", z[0]), ("z2", z[1])];
        Ok([self.tau.eval(&env)?, self.xi.eval(&env)?])
    }

    pub fn jet(&self, z: [f64; 2]) -> Result<MapJet, ProjStructError> {
        let env = [("z1", z[0]), ("z2", z[1])];
        let vars = ["z1", "z2"];
        let jt = eval_jet2(&self.tau, &env, &vars)?;
        let jx = eval_jet2(&self.xi, &env, &vars)?;
        Ok(MapJet {
            value: [jt.value, jx.value],
            jac: [[jt.grad[0], jt.grad[1]], [jx.grad[0], jx.grad[1]]],
            hess: [
                [
                    [jt.hess_at(0, 0), jt.hess_at(0, 1)],
                    [jt.hess_at(1, 0), jt.hess_at(1, 1)],
                ],
                [
                    [jx.hess_at(0, 0), jx.hess_at(0, 1)],
                    [jx.hess_at(1, 0), jx.hess_at(1, 1)],
                ],
            ],
        })
    }
}

impl MapJet {
    /// Composite jet of `other ∘ self` at the base point of `self`;
    /// `other` must be the jet at `self.value`.
    pub fn then(&self, other: &MapJet) -> MapJet {
        let j1 = self.jac;
        let j2 = other.jac;
        let mut jac = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    jac[i][j] += j2[i][k] * j1[k][j];
                }
            }
        }
        // H(u,v) = J2 H1(u,v) + H2(J1 u, J1 v), componentwise
        let mut hess = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                // first term
                for k in 0..2 {
                    for c in 0..2 {
                        hess[c][i][j] += j2[c][k] * self.hess[k][i][j];
                    }
                }
                // second term
                for c in 0..2 {
                    let mut acc = 0.0;
                    for p in 0..2 {
                        for q in 0..2 {
                            acc += other.hess[c][p][q] * j1[p][i] * j1[q][j];
                        }
                    }
                    hess[c][i][j] += acc;
                }
            }
        }
        MapJet { value: other.value, jac, hess }
    }
}

/// Transform projective-connection coefficients through the 2-jet of a
/// chart change:
///
/// `B' = J B(J^{-1} u, J^{-1} v) - (I - Q)[phi''(J^{-1} u, J^{-1} v)]`,
///
/// where the second term is the inhomogeneous part of the transformation
/// rule expressed through the forward jet (using the inverse-function
/// identities for the backward one). Returns the coefficients at the image
/// point.
pub fn transform_connection_jets(
    coeffs: [f64; 4],
    jet: &MapJet,
) -> Result<[f64; 4], ProjStructError> {
    let j = jet.jac;
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if det.abs() < 1e-12 {
        return Err(ProjStructError::SingularJacobian(det));
    }
    let jinv = [
        [j[1][1] / det, -j[0][1] / det],
        [-j[1][0] / det, j[0][0] / det],
    ];
    let b = b_from_coeffs(coeffs);
    // first term: pull back through J^{-1}
    let first = b.pullback(jinv)?;
    // second term: the Hessian with both inputs composed with J^{-1}
    let h = SymBil {
        comp: [
            [jet.hess[0][0][0], jet.hess[0][0][1], jet.hess[0][1][1]],
            [jet.hess[1][0][0], jet.hess[1][0][1], jet.hess[1][1][1]],
        ],
    };
    let second = h.compose_inputs(jinv);
    let total = q_complement(&first.sub(&second));
    coeffs_from_b(&total, 1e-8)
}

/// Transform a connection through a chart change at a base point; values are
/// the coefficients of the transformed connection at the image point.
pub fn transform_connection(
    conn: &Connection2D,
    chart: &ChartChange,
    z: [f64; 2],
) -> Result<[f64; 4], ProjStructError> {
    let jet = chart.jet(z)?;
    transform_connection_jets(conn.coeffs(z)?, &jet)
}

/// Transform a section value through a chart change:
/// the slope maps by `u' = (xi_t + xi_x u) / (tau_t + tau_x u)` at the image
/// of the base point. Returns (image point, transformed slope).
pub fn transform_section(
    chart: &ChartChange,
    z: [f64; 2],
    u: f64,
) -> Result<([f64; 2], f64), ProjStructError> {
    let jet = chart.jet(z)?;
    let num = jet.jac[1][0] + jet.jac[1][1] * u;
    let den = jet.jac[0][0] + jet.jac[0][1] * u;
    if den.abs() < 1e-12 {
        return Err(ProjStructError::AtInfinity(den));
    }
    Ok((jet.value, num / den))
}
