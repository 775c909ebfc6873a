//! The variational functionals of entropy theory in standard coordinates,
//! for base dimension two: the generalized functions I, J, C, their
//! disintegration, and shock calculus (Rankine–Hugoniot and admissibility).

mod functionals;
mod shocks;

pub use functionals::{
    c_functional, disintegration_check, i_density, i_functional, identity60_residual,
    j_functional, DisintegrationOutcome, QuadOpts,
};
pub use shocks::{admissibility_check, rh_residual, AdmissibilityReport, KPoint};

use crate::exprcalc::{eval_jet2, Expr, ExprError};
use crate::quad::{adaptive_gl, QuadError};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum KruzhkovError {
    #[error("point outside the layer G")]
    OutsideLayer,
    #[error("test support is not strictly inside the layer")]
    SupportTooLarge,
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// A closed box in the (z1, z2, y) coordinates of the standard layer.
#[derive(Debug, Clone, Copy)]
pub struct Box3 {
    pub z1: (f64, f64),
    pub z2: (f64, f64),
    pub y: (f64, f64),
}

impl Box3 {
    pub fn contains(&self, z: [f64; 2], y: f64) -> bool {
        self.z1.0 <= z[0]
            && z[0] <= self.z1.1
            && self.z2.0 <= z[1]
            && z[1] <= self.z2.1
            && self.y.0 <= y
            && y <= self.y.1
    }

    pub fn strictly_inside(&self, outer: &Box3) -> bool {
        outer.z1.0 <= self.z1.0
            && self.z1.1 <= outer.z1.1
            && outer.z2.0 <= self.z2.0
            && self.z2.1 <= outer.z2.1
            && outer.y.0 <= self.y.0
            && self.y.1 <= outer.y.1
    }
}

/// A quasilinear equation in standard coordinates: the coefficient functions
/// X1, X2, X3 of (z1, z2, y) on a box layer G.
///
/// X1 and X2 are the base components of the characteristic field, X3 the
/// fiber component; the quasilinear equation reads
/// `X1 u_{z1} + X2 u_{z2} = X3` along sections y = u(z).
#[derive(Debug, Clone)]
pub struct QuasiEq {
    pub x1: Expr,
    pub x2: Expr,
    pub x3: Expr,
    pub domain: Box3,
}

impl QuasiEq {
    /// The flat-structure equation u_t + u u_x = 0 on a box.
    pub fn burgers(domain: Box3) -> QuasiEq {
        QuasiEq { x1: Expr::num(1.0), x2: Expr::var("y"), x3: Expr::num(0.0), domain }
    }

    pub fn env<'a>(&self, z: [f64; 2], y: f64) -> [(&'a str, f64); 3] {
        [("z1", z[0]), ("z2", z[1]), ("y", y)]
    }

    pub fn x(&self, z: [f64; 2], y: f64) -> Result<[f64; 3], KruzhkovError> {
        let env = self.env(z, y);
        Ok([self.x1.eval(&env)?, self.x2.eval(&env)?, self.x3.eval(&env)?])
    }

    /// The divergence of the base components in z at (z, y):
    /// `dX1/dz1 + dX2/dz2`.
    pub fn base_divergence(&self, z: [f64; 2], y: f64) -> Result<f64, KruzhkovError> {
        let env = self.env(z, y);
        let j1 = eval_jet2(&self.x1, &env, &["z1"])?;
        let j2 = eval_jet2(&self.x2, &env, &["z2"])?;
        Ok(j1.grad[0] + j2.grad[0])
    }

    /// True when the base divergence vanishes identically because X1 does
    /// not depend on z1 and X2 does not depend on z2; the primitive marches
    /// skip their most expensive sweep in that case.
    pub fn base_divergence_is_zero(&self) -> bool {
        !self.x1.free_vars().iter().any(|v| v == "z1")
            && !self.x2.free_vars().iter().any(|v| v == "z2")
    }

    /// Validate the layer condition: the base projection of the
    /// characteristic field never vanishes on a sample grid.
    pub fn validate_layer(&self, n: usize) -> Result<(), KruzhkovError> {
        let d = &self.domain;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let z = [
                        lerp(d.z1, (i as f64 + 0.5) / n as f64),
                        lerp(d.z2, (j as f64 + 0.5) / n as f64),
                    ];
                    let y = lerp(d.y, (k as f64 + 0.5) / n as f64);
                    let x = self.x(z, y)?;
                    if x[0].hypot(x[1]) < 1e-12 {
                        return Err(KruzhkovError::OutsideLayer);
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn lerp(range: (f64, f64), s: f64) -> f64 {
    range.0 + (range.1 - range.0) * s
}

/// Fiber primitive `Z^i(z, y)`, an antiderivative of `X^i(z, .)` from the
/// basepoint 0. Only differences of values are consumed downstream, so the
/// basepoint is immaterial.
pub fn fiber_primitive(eq: &QuasiEq, i: usize, z: [f64; 2], y: f64) -> Result<f64, KruzhkovError> {
    let x = match i {
        1 => &eq.x1,
        2 => &eq.x2,
        _ => panic!("fiber primitive index must be 1 or 2"),
    };
    let mut err: Option<ExprError> = None;
    let v = adaptive_gl(
        |eta| match x.eval(&eq.env(z, eta)) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        },
        0.0,
        y,
        1e-12,
        40,
    )?;
    match err {
        Some(e) => Err(e.into()),
        None => Ok(v),
    }
}

/// Evaluate a scalar antiderivative at a sorted list of points by marching
/// panel-to-panel with a fixed Gauss rule. Exactness on each short gap is
/// ample for smooth coefficient functions.
pub(crate) fn march_primitive(
    f: &mut dyn FnMut(f64) -> Result<f64, KruzhkovError>,
    points: &[f64],
) -> Result<Vec<f64>, KruzhkovError> {
    let mut out = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    let mut prev = 0.0f64; // basepoint
    let (xs, ws) = crate::quad::gauss_legendre_cached(8);
    for &p in points {
        let mut err: Option<KruzhkovError> = None;
        acc += crate::quad::fixed_gl_with(
            |t| match f(t) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            prev,
            p,
            xs,
            ws,
        );
        if let Some(e) = err {
            return Err(e);
        }
        out.push(acc);
        prev = p;
    }
    Ok(out)
}

/// A measurable section of the layer, as a function of the base point.
#[derive(Debug, Clone)]
pub enum Section {
    /// Constant level y = k.
    Const(f64),
    /// Smooth closed form u(z1, z2).
    Smooth(Expr),
    /// Two classical pieces separated by a level set.
    Piecewise(PiecewiseSolution),
    /// Bilinear interpolation of samples on a rectangular grid.
    Grid(GridSection),
}

impl Section {
    pub fn eval(&self, z: [f64; 2]) -> Result<f64, KruzhkovError> {
        Ok(match self {
            Section::Const(k) => *k,
            Section::Smooth(e) => e.eval(&[("z1", z[0]), ("z2", z[1])])?,
            Section::Piecewise(p) => p.eval(z)?,
            Section::Grid(g) => g.eval(z),
        })
    }

    /// Gradient of the section where it is differentiable (expressions use
    /// exact jets; grids use central differences; piecewise sections use the
    /// jet of the local piece).
    pub fn grad(&self, z: [f64; 2]) -> Result<[f64; 2], KruzhkovError> {
        match self {
            Section::Const(_) => Ok([0.0, 0.0]),
            Section::Smooth(e) => {
                let j = eval_jet2(e, &[("z1", z[0]), ("z2", z[1])], &["z1", "z2"])?;
                Ok([j.grad[0], j.grad[1]])
            }
            Section::Piecewise(p) => {
                let side = p.side(z)?;
                let j = eval_jet2(side, &[("z1", z[0]), ("z2", z[1])], &["z1", "z2"])?;
                Ok([j.grad[0], j.grad[1]])
            }
            Section::Grid(g) => Ok(g.grad(z)),
        }
    }

    /// Kinks of the section along the z2 line {z1} x [lo, hi]: quadrature
    /// panels split there.
    pub fn kinks_z2(&self, z1: f64, lo: f64, hi: f64) -> Vec<f64> {
        match self {
            Section::Piecewise(p) => p.level_roots(|s| [z1, s], lo, hi),
            _ => Vec::new(),
        }
    }

    /// Kinks along the z1 direction at fixed z2.
    pub fn kinks_z1(&self, z2: f64, lo: f64, hi: f64) -> Vec<f64> {
        match self {
            Section::Piecewise(p) => p.level_roots(|s| [s, z2], lo, hi),
            _ => Vec::new(),
        }
    }

    /// Sign-change locus of `self - other` along a z2 line: the base
    /// integrands of the pair functionals kink there.
    pub fn diff_roots_z2(&self, other: &Section, z1: f64, lo: f64, hi: f64) -> Vec<f64> {
        sign_change_roots(
            &|s| match (self.eval([z1, s]), other.eval([z1, s])) {
                (Ok(a), Ok(b)) => a - b,
                _ => f64::NAN,
            },
            lo,
            hi,
        )
    }

    /// Sign-change locus of `self - other` along a z1 line.
    pub fn diff_roots_z1(&self, other: &Section, z2: f64, lo: f64, hi: f64) -> Vec<f64> {
        sign_change_roots(
            &|s| match (self.eval([s, z2]), other.eval([s, z2])) {
                (Ok(a), Ok(b)) => a - b,
                _ => f64::NAN,
            },
            lo,
            hi,
        )
    }
}

/// Locate sign changes of a scalar function on [lo, hi] by sampling and
/// bisection. Samples landing exactly on a zero count as roots.
pub(crate) fn sign_change_roots(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Vec<f64> {
    let n = 64;
    let mut roots = Vec::new();
    let mut prev_s = lo;
    let mut prev_v = f(lo);
    if prev_v == 0.0 {
        roots.push(lo);
    }
    for i in 1..=n {
        let s = lo + (hi - lo) * i as f64 / n as f64;
        let v = f(s);
        if v == 0.0 {
            roots.push(s);
        } else if prev_v.is_finite() && v.is_finite() && prev_v != 0.0 && prev_v * v < 0.0 {
            let (mut a, mut b) = (prev_s, s);
            let mut fa = prev_v;
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_s = s;
        prev_v = v;
    }
    roots
}

/// A piecewise-classical section: a level function splitting the base into
/// V- (level < 0) and V+ (level > 0) with one expression per side, and a
/// parametrization of the separating curve for sampling.
#[derive(Debug, Clone)]
pub struct PiecewiseSolution {
    /// Level function of (z1, z2); its zero set is the shock curve.
    pub level: Expr,
    /// Value on the minus side {level < 0}.
    pub minus: Expr,
    /// Value on the plus side {level > 0}.
    pub plus: Expr,
    /// Curve parametrization (z1(s), z2(s)) for sampling the shock.
    pub sigma: SigmaParam,
}

/// Parametrization of the shock curve.
#[derive(Debug, Clone)]
pub struct SigmaParam {
    pub z1: Expr,
    pub z2: Expr,
    pub s_range: (f64, f64),
}

impl SigmaParam {
    pub fn at(&self, s: f64) -> Result<[f64; 2], KruzhkovError> {
        Ok([self.z1.eval(&[("s", s)])?, self.z2.eval(&[("s", s)])?])
    }

    pub fn samples(&self, n: usize) -> Result<Vec<[f64; 2]>, KruzhkovError> {
        (0..n)
            .map(|i| {
                let s = lerp(self.s_range, (i as f64 + 0.5) / n as f64);
                self.at(s)
            })
            .collect()
    }
}

impl PiecewiseSolution {
    /// Straight shock for the flat-structure equation: the level function is
    /// z2 - speed*z1 - offset, the minus side lies below the line.
    pub fn straight_shock(
        u_minus: f64,
        u_plus: f64,
        speed: f64,
        offset: f64,
        s_range: (f64, f64),
    ) -> PiecewiseSolution {
        let level = crate::exprcalc::parse(&format!("z2 - ({speed})*z1 - ({offset})")).unwrap();
        PiecewiseSolution {
            level,
            minus: Expr::num(u_minus),
            plus: Expr::num(u_plus),
            sigma: SigmaParam {
                z1: Expr::var("s"),
                z2: crate::exprcalc::parse(&format!("({speed})*s + ({offset})")).unwrap(),
                s_range,
            },
        }
    }

    pub fn eval(&self, z: [f64; 2]) -> Result<f64, KruzhkovError> {
        Ok(self.side(z)?.eval(&[("z1", z[0]), ("z2", z[1])])?)
    }

    fn side(&self, z: [f64; 2]) -> Result<&Expr, KruzhkovError> {
        let phi = self.level.eval(&[("z1", z[0]), ("z2", z[1])])?;
        Ok(if phi < 0.0 { &self.minus } else { &self.plus })
    }

    /// One-sided values (minus, plus) at a base point.
    pub fn one_sided(&self, z: [f64; 2]) -> Result<(f64, f64), KruzhkovError> {
        let env = [("z1", z[0]), ("z2", z[1])];
        Ok((self.minus.eval(&env)?, self.plus.eval(&env)?))
    }

    /// Gradient of the level function.
    pub fn level_grad(&self, z: [f64; 2]) -> Result<[f64; 2], KruzhkovError> {
        let j = eval_jet2(&self.level, &[("z1", z[0]), ("z2", z[1])], &["z1", "z2"])?;
        Ok([j.grad[0], j.grad[1]])
    }

    /// Roots of the level function along a coordinate line.
    fn level_roots(&self, line: impl Fn(f64) -> [f64; 2], lo: f64, hi: f64) -> Vec<f64> {
        sign_change_roots(
            &|s| {
                let z = line(s);
                self.level.eval(&[("z1", z[0]), ("z2", z[1])]).unwrap_or(f64::NAN)
            },
            lo,
            hi,
        )
    }
}

/// Bilinear grid section.
#[derive(Debug, Clone)]
pub struct GridSection {
    pub z1s: Vec<f64>,
    pub z2s: Vec<f64>,
    /// Row-major: `us[i * z2s.len() + j]` is the value at (z1s[i], z2s[j]).
    pub us: Vec<f64>,
}

impl GridSection {
    pub fn eval(&self, z: [f64; 2]) -> f64 {
        let (i, a) = locate(&self.z1s, z[0]);
        let (j, b) = locate(&self.z2s, z[1]);
        let m = self.z2s.len();
        let i1 = (i + 1).min(self.z1s.len() - 1);
        let j1 = (j + 1).min(m - 1);
        let v00 = self.us[i * m + j];
        let v01 = self.us[i * m + j1];
        let v10 = self.us[i1 * m + j];
        let v11 = self.us[i1 * m + j1];
        v00 * (1.0 - a) * (1.0 - b) + v10 * a * (1.0 - b) + v01 * (1.0 - a) * b + v11 * a * b
    }

    pub fn grad(&self, z: [f64; 2]) -> [f64; 2] {
        let h1 = (self.z1s[self.z1s.len() - 1] - self.z1s[0]) / (self.z1s.len() as f64 * 4.0);
        let h2 = (self.z2s[self.z2s.len() - 1] - self.z2s[0]) / (self.z2s.len() as f64 * 4.0);
        [
            (self.eval([z[0] + h1, z[1]]) - self.eval([z[0] - h1, z[1]])) / (2.0 * h1),
            (self.eval([z[0], z[1] + h2]) - self.eval([z[0], z[1] - h2])) / (2.0 * h2),
        ]
    }
}

fn locate(xs: &[f64], x: f64) -> (usize, f64) {
    if x <= xs[0] {
        return (0, 0.0);
    }
    if x >= xs[xs.len() - 1] {
        return (xs.len() - 2, 1.0);
    }
    let i = (xs.partition_point(|v| *v <= x) - 1).min(xs.len() - 2);
    (i, (x - xs[i]) / (xs[i + 1] - xs[i]))
}

/// A test density on the layer: a smooth product bump (nonnegative by
/// construction), a separable product of a y-bump with a base test function,
/// or a user expression with declared support.
#[derive(Debug, Clone)]
pub enum TestDensity {
    /// Product of `(1 - s^2)^4` kernels over the box.
    Bump(Box3),
    /// Separable `l(y) * zeta(z)`.
    Separable { l: Bump1, zeta: ZetaTest },
    /// User expression phi(z1, z2, y), assumed supported in the box.
    Expr { phi: Expr, support: Box3 },
}

impl TestDensity {
    pub fn support(&self) -> Box3 {
        match self {
            TestDensity::Bump(b) => *b,
            TestDensity::Separable { l, zeta } => {
                let s = zeta.support();
                Box3 { z1: s.0, z2: s.1, y: (l.a, l.b) }
            }
            TestDensity::Expr { support, .. } => *support,
        }
    }

    pub fn phi(&self, z: [f64; 2], y: f64) -> Result<f64, KruzhkovError> {
        Ok(match self {
            TestDensity::Bump(b) => bump(z[0], b.z1) * bump(z[1], b.z2) * bump(y, b.y),
            TestDensity::Separable { l, zeta } => l.eval(y) * zeta.phi(z)?,
            TestDensity::Expr { phi, .. } => {
                phi.eval(&[("z1", z[0]), ("z2", z[1]), ("y", y)])?
            }
        })
    }

    /// Base gradient (d/dz1, d/dz2) of the test function.
    pub fn grad_z(&self, z: [f64; 2], y: f64) -> Result<[f64; 2], KruzhkovError> {
        Ok(match self {
            TestDensity::Bump(b) => {
                let b1 = bump(z[0], b.z1);
                let b2 = bump(z[1], b.z2);
                let by = bump(y, b.y);
                [dbump(z[0], b.z1) * b2 * by, b1 * dbump(z[1], b.z2) * by]
            }
            TestDensity::Separable { l, zeta } => {
                let g = zeta.grad(z)?;
                let ly = l.eval(y);
                [g[0] * ly, g[1] * ly]
            }
            TestDensity::Expr { phi, .. } => {
                let j =
                    eval_jet2(phi, &[("z1", z[0]), ("z2", z[1]), ("y", y)], &["z1", "z2"])?;
                [j.grad[0], j.grad[1]]
            }
        })
    }

    /// L1 norm over the support (coarse fixed rule, used to scale
    /// tolerances).
    pub fn l1_norm(&self) -> Result<f64, KruzhkovError> {
        let s = self.support();
        let n = 12;
        let mut acc = 0.0;
        let w1 = (s.z1.1 - s.z1.0) / n as f64;
        let w2 = (s.z2.1 - s.z2.0) / n as f64;
        let wy = (s.y.1 - s.y.0) / n as f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let z = [
                        s.z1.0 + w1 * (i as f64 + 0.5),
                        s.z2.0 + w2 * (j as f64 + 0.5),
                    ];
                    let y = s.y.0 + wy * (k as f64 + 0.5);
                    acc += self.phi(z, y)?.abs();
                }
            }
        }
        Ok(acc * w1 * w2 * wy)
    }

    /// Check a nonnegativity claim by sampling the support.
    pub fn verify_nonneg(&self, n: usize) -> Result<bool, KruzhkovError> {
        let s = self.support();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let z = [
                        lerp(s.z1, i as f64 / (n - 1) as f64),
                        lerp(s.z2, j as f64 / (n - 1) as f64),
                    ];
                    let y = lerp(s.y, k as f64 / (n - 1) as f64);
                    if self.phi(z, y)? < 0.0 {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// A test function of the base variables only.
#[derive(Debug, Clone)]
pub enum ZetaTest {
    Bump { z1: (f64, f64), z2: (f64, f64) },
    Expr { phi: Expr, z1: (f64, f64), z2: (f64, f64) },
}

impl ZetaTest {
    pub fn support(&self) -> ((f64, f64), (f64, f64)) {
        match self {
            ZetaTest::Bump { z1, z2 } | ZetaTest::Expr { z1, z2, .. } => (*z1, *z2),
        }
    }

    pub fn phi(&self, z: [f64; 2]) -> Result<f64, KruzhkovError> {
        Ok(match self {
            ZetaTest::Bump { z1, z2 } => bump(z[0], *z1) * bump(z[1], *z2),
            ZetaTest::Expr { phi, .. } => phi.eval(&[("z1", z[0]), ("z2", z[1])])?,
        })
    }

    pub fn grad(&self, z: [f64; 2]) -> Result<[f64; 2], KruzhkovError> {
        Ok(match self {
            ZetaTest::Bump { z1, z2 } => [
                dbump(z[0], *z1) * bump(z[1], *z2),
                bump(z[0], *z1) * dbump(z[1], *z2),
            ],
            ZetaTest::Expr { phi, .. } => {
                let j = eval_jet2(phi, &[("z1", z[0]), ("z2", z[1])], &["z1", "z2"])?;
                [j.grad[0], j.grad[1]]
            }
        })
    }
}

/// Smooth 1D bump kernel on an interval.
#[derive(Debug, Clone, Copy)]
pub struct Bump1 {
    pub a: f64,
    pub b: f64,
}

impl Bump1 {
    pub fn eval(&self, y: f64) -> f64 {
        bump(y, (self.a, self.b))
    }

    /// Value of the kernel normalized to unit integral.
    pub fn normalized(&self, y: f64) -> f64 {
        // int_{-1}^{1} (1 - s^2)^4 ds = 256/315
        let width = 0.5 * (self.b - self.a);
        self.eval(y) / (width * 256.0 / 315.0)
    }
}

/// The C^3 polynomial kernel (1 - s^2)^4 mapped onto a range.
pub fn bump(x: f64, range: (f64, f64)) -> f64 {
    let (a, b) = range;
    let s = (2.0 * x - (a + b)) / (b - a);
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let w = 1.0 - s * s;
    w * w * w * w
}

/// Derivative of [`bump`] in x.
pub fn dbump(x: f64, range: (f64, f64)) -> f64 {
    let (a, b) = range;
    let s = (2.0 * x - (a + b)) / (b - a);
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let w = 1.0 - s * s;
    4.0 * w * w * w * (-2.0 * s) * 2.0 / (b - a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprcalc::parse;

    pub(crate) fn test_box() -> Box3 {
        Box3 { z1: (0.0, 2.0), z2: (-2.0, 2.0), y: (-2.0, 2.0) }
    }

    #[test]
    fn fiber_primitive_burgers() {
        let eq = QuasiEq::burgers(test_box());
        for y in [-1.5, 0.0, 0.7, 2.0] {
            let z1 = fiber_primitive(&eq, 1, [0.5, 0.0], y).unwrap();
            let z2 = fiber_primitive(&eq, 2, [0.5, 0.0], y).unwrap();
            assert!((z1 - y).abs() < 1e-12);
            assert!((z2 - y * y / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fiber_primitive_constant_second_component() {
        let eq = QuasiEq {
            x1: Expr::num(1.0),
            x2: Expr::num(3.5),
            x3: Expr::num(0.0),
            domain: test_box(),
        };
        let v = fiber_primitive(&eq, 2, [1.0, 1.0], 1.2).unwrap();
        assert!((v - 3.5 * 1.2).abs() < 1e-12);
    }

    #[test]
    fn fiber_primitive_derivative_recovers_field() {
        use rand::{Rng, SeedableRng};
        let eq = QuasiEq {
            x1: parse("1 + z1/8 + y^2/4").unwrap(),
            x2: parse("y + sin(z2)/2").unwrap(),
            x3: Expr::num(0.0),
            domain: test_box(),
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let z = [rng.gen_range(0.0..2.0), rng.gen_range(-2.0..2.0)];
            let y: f64 = rng.gen_range(-1.9..1.9);
            let h = 1e-6;
            for i in [1, 2] {
                let zp = fiber_primitive(&eq, i, z, y + h).unwrap();
                let zm = fiber_primitive(&eq, i, z, y - h).unwrap();
                let x = eq.x(z, y).unwrap();
                let want = if i == 1 { x[0] } else { x[1] };
                assert!(((zp - zm) / (2.0 * h) - want).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn march_primitive_matches_adaptive() {
        let eq = QuasiEq {
            x1: parse("1 + y^2/4").unwrap(),
            x2: parse("y").unwrap(),
            x3: Expr::num(0.0),
            domain: test_box(),
        };
        let z = [0.7, -0.3];
        let pts = [-1.5, -0.2, 0.0, 0.4, 1.9];
        let mut f =
            |eta: f64| -> Result<f64, KruzhkovError> { Ok(eq.x1.eval(&eq.env(z, eta))?) };
        let vals = march_primitive(&mut f, &pts).unwrap();
        for (p, v) in pts.iter().zip(&vals) {
            let want = fiber_primitive(&eq, 1, z, *p).unwrap();
            assert!((v - want).abs() < 1e-12, "{v} vs {want}");
        }
    }

    #[test]
    fn piecewise_eval_and_roots() {
        let pw = PiecewiseSolution::straight_shock(1.0, -1.0, 0.0, 0.0, (0.0, 2.0));
        assert_eq!(pw.eval([1.0, -0.5]).unwrap(), 1.0);
        assert_eq!(pw.eval([1.0, 0.5]).unwrap(), -1.0);
        let roots = pw.level_roots(|s| [1.0, s], -2.0, 2.0);
        assert_eq!(roots.len(), 1);
        assert!(roots[0].abs() < 1e-12);
    }

    #[test]
    fn bump_support_and_derivative() {
        let b = TestDensity::Bump(test_box());
        assert_eq!(b.phi([0.0, -2.0], 0.0).unwrap(), 0.0);
        assert!(b.phi([1.0, 0.0], 0.0).unwrap() > 0.0);
        assert!(b.verify_nonneg(5).unwrap());
        let h = 1e-6;
        let z = [0.8, 0.3];
        let g = b.grad_z(z, 0.1).unwrap();
        let fd0 = (b.phi([z[0] + h, z[1]], 0.1).unwrap()
            - b.phi([z[0] - h, z[1]], 0.1).unwrap())
            / (2.0 * h);
        assert!((g[0] - fd0).abs() < 1e-8);
    }
}
