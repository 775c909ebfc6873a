//! Projective connections on a two-dimensional base: the trace projection
//! on symmetric bilinear maps, the cubic coefficient isomorphism, chart
//! transforms, the flatness conditions, characteristic tracing and the
//! reduction of general quasilinear equations to the flat-structure model.

mod connection;
mod reduction;

pub use connection::{
    flatness_residual, trace_characteristic, transform_connection, transform_connection_jets,
    transform_section, ChartChange, Connection2D, MapJet,
};
pub use reduction::{
    reduction_pipeline, reduction_test, CharacteristicSolution, GridSpec, PipelineReport,
    ReductionReport,
};

use crate::exprcalc::ExprError;
use crate::quad::QuadError;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ProjStructError {
    #[error("bilinear map is not trace-free: deviation {0:e}")]
    NotInKernel(f64),
    #[error("trajectory left the coefficient domain at t = {0}")]
    LeftDomain(f64),
    #[error("chart-change Jacobian is singular: det {0:e}")]
    SingularJacobian(f64),
    #[error("map sends the slope to infinity: denominator {0:e}")]
    AtInfinity(f64),
    #[error("base component X1 vanishes on the grid (index condition)")]
    Condition108Failed,
    #[error("slope coordinate is degenerate: d(X2/X1)/dy vanishes at z = ({0}, {1})")]
    Condition122Failed(f64, f64),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// A symmetric bilinear map E x E -> E for dim E = 2, stored through its
/// action on the products (e1 e1, e1 e2, e2 e2): `comp[k][m]` is the k-th
/// component of the value on the m-th product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymBil {
    pub comp: [[f64; 3]; 2],
}

impl SymBil {
    pub fn zero() -> SymBil {
        SymBil { comp: [[0.0; 3]; 2] }
    }

    pub fn apply(&self, u: [f64; 2], v: [f64; 2]) -> [f64; 2] {
        let m = [u[0] * v[0], u[0] * v[1] + u[1] * v[0], u[1] * v[1]];
        [
            self.comp[0][0] * m[0] + self.comp[0][1] * m[1] + self.comp[0][2] * m[2],
            self.comp[1][0] * m[0] + self.comp[1][1] * m[1] + self.comp[1][2] * m[2],
        ]
    }

    /// The map defined by a covector xi: `B(u,v) = <xi,u> v + <xi,v> u`.
    pub fn from_covector(xi: [f64; 2]) -> SymBil {
        SymBil {
            comp: [
                [2.0 * xi[0], xi[1], 0.0],
                [0.0, xi[0], 2.0 * xi[1]],
            ],
        }
    }

    /// Trace form: `t(u) = tr[B(u, .)]`, returned on the basis vectors.
    pub fn trace_form(&self) -> [f64; 2] {
        [
            self.comp[0][0] + self.comp[1][1],
            self.comp[0][1] + self.comp[1][2],
        ]
    }

    pub fn add(&self, other: &SymBil) -> SymBil {
        let mut out = SymBil::zero();
        for k in 0..2 {
            for m in 0..3 {
                out.comp[k][m] = self.comp[k][m] + other.comp[k][m];
            }
        }
        out
    }

    pub fn sub(&self, other: &SymBil) -> SymBil {
        let mut out = SymBil::zero();
        for k in 0..2 {
            for m in 0..3 {
                out.comp[k][m] = self.comp[k][m] - other.comp[k][m];
            }
        }
        out
    }

    pub fn scale(&self, c: f64) -> SymBil {
        let mut out = *self;
        for k in 0..2 {
            for m in 0..3 {
                out.comp[k][m] *= c;
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.comp.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Pull back through a linear map: `(S* B)(u, v) = S^{-1} B(Su, Sv)`.
    pub fn pullback(&self, s: [[f64; 2]; 2]) -> Result<SymBil, ProjStructError> {
        let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
        if det.abs() < 1e-14 {
            return Err(ProjStructError::SingularJacobian(det));
        }
        let sinv = [
            [s[1][1] / det, -s[0][1] / det],
            [-s[1][0] / det, s[0][0] / det],
        ];
        let col = |j: usize| [s[0][j], s[1][j]];
        let b11 = self.apply(col(0), col(0));
        let b12 = self.apply(col(0), col(1));
        let b22 = self.apply(col(1), col(1));
        let mul = |v: [f64; 2]| {
            [
                sinv[0][0] * v[0] + sinv[0][1] * v[1],
                sinv[1][0] * v[0] + sinv[1][1] * v[1],
            ]
        };
        let (c11, c12, c22) = (mul(b11), mul(b12), mul(b22));
        Ok(SymBil {
            comp: [[c11[0], c12[0], c22[0]], [c11[1], c12[1], c22[1]]],
        })
    }

    /// Compose the inputs with a linear map: `(u, v) -> B(Mu, Mv)`.
    pub fn compose_inputs(&self, m: [[f64; 2]; 2]) -> SymBil {
        let col = |j: usize| [m[0][j], m[1][j]];
        let b11 = self.apply(col(0), col(0));
        let b12 = self.apply(col(0), col(1));
        let b22 = self.apply(col(1), col(1));
        SymBil {
            comp: [[b11[0], b12[0], b22[0]], [b11[1], b12[1], b22[1]]],
        }
    }
}

/// The canonical projection onto the bilinear maps that fix every line:
/// `QB(u,v) = (1/3) tr[B(u,.)] v + (1/3) tr[B(v,.)] u`.
pub fn q_project(b: &SymBil) -> SymBil {
    let t = b.trace_form();
    SymBil {
        comp: [
            [2.0 / 3.0 * t[0], t[1] / 3.0, 0.0],
            [0.0, t[0] / 3.0, 2.0 / 3.0 * t[1]],
        ],
    }
}

/// The trace-free part `(I - Q) B`, the projective-connection content of an
/// affine connection coefficient.
pub fn q_complement(b: &SymBil) -> SymBil {
    b.sub(&q_project(b))
}

/// Extract the cubic geodesic coefficients (a, b, c, d) of a trace-free map
/// in the splitting e = e1, H = R e2:
///
/// `beta(e+h, e+h) h - sigma(e+h, e+h) = a h^3 + b h^2 + c h + d`
///
/// with beta, sigma the e- and H-components.
pub fn coeffs_from_b(b: &SymBil, tol: f64) -> Result<[f64; 4], ProjStructError> {
    let t = b.trace_form();
    let dev = t[0].abs().max(t[1].abs());
    if dev > tol * b.max_abs().max(1.0) {
        return Err(ProjStructError::NotInKernel(dev));
    }
    let c = &b.comp;
    Ok([
        c[0][2],
        2.0 * c[0][1] - c[1][2],
        c[0][0] - 2.0 * c[1][1],
        -c[1][0],
    ])
}

/// Inverse of [`coeffs_from_b`]: the unique trace-free map with the given
/// geodesic coefficients.
pub fn b_from_coeffs(co: [f64; 4]) -> SymBil {
    let [a, b, c, d] = co;
    SymBil {
        comp: [
            [c / 3.0, b / 3.0, a],
            [-d, -c / 3.0, -b / 3.0],
        ],
    }
}
