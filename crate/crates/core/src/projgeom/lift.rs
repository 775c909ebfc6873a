//! Lift of a plane projective map to the slope bundle.
//!
//! A nonsingular 3x3 matrix S acts on the (t, x) plane as a fractional-linear
//! map; the lift extends it to triples (t, x, v) where v is the slope dx/dt
//! of a line element. The third component is fractional-linear in v with
//! coefficients built from the minor determinants of S, and the lifted map
//! sends graphs of classical solutions of u_t + u u_x = 0 to graphs of
//! classical solutions.

use super::{GeomError, ProjMap2};

/// A lifted projective map: the source matrix together with its minor table.
///
/// `minor[i][j]` is the determinant of S with row i and column j deleted,
/// taken literally with no checkerboard sign.
#[derive(Debug, Clone)]
pub struct LiftedMap {
    source: ProjMap2,
    minor: [[f64; 3]; 3],
}

/// Build the lifted map of a nonsingular S.
pub fn lift_projmap(s: &ProjMap2) -> LiftedMap {
    let m = s.matrix();
    let mut minor = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let rows: Vec<usize> = (0..3).filter(|r| *r != i).collect();
            let cols: Vec<usize> = (0..3).filter(|c| *c != j).collect();
            minor[i][j] = m[rows[0]][cols[0]] * m[rows[1]][cols[1]]
                - m[rows[0]][cols[1]] * m[rows[1]][cols[0]];
        }
    }
    LiftedMap { source: *s, minor }
}

/// Apply a lifted map to a slope element (t, x, v).
pub fn apply_lift(phi: &LiftedMap, t: f64, x: f64, v: f64) -> Result<(f64, f64, f64), GeomError> {
    let m = phi.source.matrix();
    let d = phi.minor;
    let den = m[2][0] * t + m[2][1] * x + m[2][2];
    if den.abs() < 1e-300 {
        return Err(GeomError::AtInfinity(den));
    }
    let t1 = (m[0][0] * t + m[0][1] * x + m[0][2]) / den;
    let x1 = (m[1][0] * t + m[1][1] * x + m[1][2]) / den;
    // minors indexed [row deleted][column deleted], 0-based
    let num = (-d[0][2] * t + d[0][0]) * v + (d[0][2] * x + d[0][1]);
    let dnm = (-d[1][2] * t + d[1][0]) * v + (d[1][2] * x + d[1][1]);
    if dnm.abs() < 1e-300 {
        return Err(GeomError::AtInfinity(dnm));
    }
    Ok((t1, x1, num / dnm))
}

impl LiftedMap {
    pub fn source(&self) -> &ProjMap2 {
        &self.source
    }

    pub fn minors(&self) -> &[[f64; 3]; 3] {
        &self.minor
    }

    pub fn apply(&self, t: f64, x: f64, v: f64) -> Result<(f64, f64, f64), GeomError> {
        apply_lift(self, t, x, v)
    }

    /// Jacobian of the base fractional-linear map at (t, x): the 2x2 matrix
    /// of partials of (t', x').
    pub fn base_jacobian(&self, t: f64, x: f64) -> Result<[[f64; 2]; 2], GeomError> {
        let m = self.source.matrix();
        let den = m[2][0] * t + m[2][1] * x + m[2][2];
        if den.abs() < 1e-300 {
            return Err(GeomError::AtInfinity(den));
        }
        let n0 = m[0][0] * t + m[0][1] * x + m[0][2];
        let n1 = m[1][0] * t + m[1][1] * x + m[1][2];
        let d2 = den * den;
        Ok([
            [
                (m[0][0] * den - n0 * m[2][0]) / d2,
                (m[0][1] * den - n0 * m[2][1]) / d2,
            ],
            [
                (m[1][0] * den - n1 * m[2][0]) / d2,
                (m[1][1] * den - n1 * m[2][1]) / d2,
            ],
        ])
    }

    /// Partials of the slope component at (t, x, v): (dv'/dt, dv'/dx, dv'/dv).
    pub fn slope_gradient(&self, t: f64, x: f64, v: f64) -> Result<[f64; 3], GeomError> {
        let d = self.minor;
        let num = (-d[0][2] * t + d[0][0]) * v + (d[0][2] * x + d[0][1]);
        let dnm = (-d[1][2] * t + d[1][0]) * v + (d[1][2] * x + d[1][1]);
        if dnm.abs() < 1e-300 {
            return Err(GeomError::AtInfinity(dnm));
        }
        let dnum_dt = -d[0][2] * v;
        let ddnm_dt = -d[1][2] * v;
        let dnum_dx = d[0][2];
        let ddnm_dx = d[1][2];
        let dnum_dv = -d[0][2] * t + d[0][0];
        let ddnm_dv = -d[1][2] * t + d[1][0];
        let q = dnm * dnm;
        Ok([
            (dnum_dt * dnm - num * ddnm_dt) / q,
            (dnum_dx * dnm - num * ddnm_dx) / q,
            (dnum_dv * dnm - num * ddnm_dv) / q,
        ])
    }

    /// Residual of u'_{t'} + u' u'_{x'} at the image of a graph point.
    ///
    /// (t, x) is a base point, (u, ut, ux) the section value and its partials
    /// there. The image surface of the graph is again a graph near the image
    /// point; its partial derivatives are obtained by the implicit function
    /// theorem and the residual of the flat-structure equation is returned.
    pub fn graph_residual(
        &self,
        t: f64,
        x: f64,
        u: f64,
        ut: f64,
        ux: f64,
    ) -> Result<f64, GeomError> {
        let jb = self.base_jacobian(t, x)?;
        let sg = self.slope_gradient(t, x, u)?;
        // chain rule along the graph: d(t', x') composed with (t, x, u(t,x))
        let g = [
            [jb[0][0], jb[0][1]],
            [jb[1][0], jb[1][1]],
        ];
        // slope component partials along the graph
        let w_t = sg[0] + sg[2] * ut;
        let w_x = sg[1] + sg[2] * ux;
        // base-map partials along the graph (u enters only through the slope
        // component; the base map does not see v)
        let a = g[0][0] + 0.0 * ut; // dt'/dt along graph
        let b = g[0][1]; // dt'/dx
        let c = g[1][0]; // dx'/dt
        let e = g[1][1]; // dx'/dx
        let det = a * e - b * c;
        if det.abs() < 1e-300 {
            return Err(GeomError::Singular(det));
        }
        // [u'_{t'}, u'_{x'}] = [w_t, w_x] * J^{-1}
        let upt = (w_t * e - w_x * c) / det;
        let upx = (-w_t * b + w_x * a) / det;
        let (_, _, v1) = self.apply(t, x, u)?;
        Ok(upt + v1 * upx)
    }
}
