//! Entropy densities restricted to a fiber of the projective line.
//!
//! A fiber density is a scalar function in a distinguished chart of P(E)
//! together with the chart data; the change-of-basis law, the vector interval
//! integral, the barycenter, the nine positivity characterizations and the
//! barycentric-map calculus all live here.

mod bmap;

pub use bmap::{
    check_axioms, dq, epsilon_u, reconstruct_density, rq, AxiomSpec, BarycentricMap,
    ReconstructionAnchor,
};

use crate::exprcalc::{Expr, ExprError};
use crate::projgeom::{Basis1, GeomError, HPoint1};
use crate::quad::{adaptive_gl, QuadError};
use crate::report::{Check, CheckReport};

use thiserror::Error;

/// Absolute tolerance of the interval quadratures.
pub const QUAD_TOL: f64 = 1e-12;
pub const QUAD_DEPTH: u32 = 40;
/// Below this endpoint separation the barycenter uses its diagonal limit.
pub const DIAGONAL_EPS: f64 = 1e-7;

#[derive(Debug, Clone, Error)]
pub enum DensityError {
    #[error("point outside the chart: {0}")]
    OutOfChart(String),
    #[error("interval has zero mass vector")]
    ZeroMass,
    #[error("cross-ratio case violation: {0}")]
    CaseViolation(String),
    #[error("degenerate tuple: {0}")]
    DegenerateTuple(String),
    #[error("barycentric axiom failure: {0}")]
    AxiomFailure(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// Domain of a fiber density in its chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartDomain {
    /// An open interval of chart values; infinite endpoints give the full
    /// chart line (still a proper arc of P(E)).
    Interval(f64, f64),
    /// The whole projective line. Not a valid domain for the positivity
    /// theory; constructible so the checkers can reject it.
    FullCircle,
}

impl ChartDomain {
    pub fn interval(&self) -> Option<(f64, f64)> {
        match self {
            ChartDomain::Interval(a, b) => Some((*a, *b)),
            ChartDomain::FullCircle => None,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self {
            ChartDomain::Interval(a, b) => *a < x && x < *b,
            ChartDomain::FullCircle => true,
        }
    }
}

/// The scalar representative of the density in its chart.
#[derive(Debug, Clone)]
pub enum DensityFn {
    Expr(Expr),
    /// Sampled values with linear interpolation; `xs` strictly increasing.
    Grid { xs: Vec<f64>, ys: Vec<f64> },
}

/// An entropy-density restriction to a fiber: chart basis, chart interval and
/// the scalar function of the chart coordinate.
#[derive(Debug, Clone)]
pub struct FiberDensity {
    pub basis: Basis1,
    pub domain: ChartDomain,
    pub f: DensityFn,
}

impl FiberDensity {
    pub fn from_expr(domain: ChartDomain, expr: Expr) -> FiberDensity {
        FiberDensity { basis: Basis1::standard(), domain, f: DensityFn::Expr(expr) }
    }

    pub fn constant(domain: ChartDomain, c: f64) -> FiberDensity {
        FiberDensity::from_expr(domain, Expr::num(c))
    }

    pub fn from_grid(domain: ChartDomain, xs: Vec<f64>, ys: Vec<f64>) -> FiberDensity {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.windows(2).all(|w| w[0] < w[1]), "grid must be increasing");
        FiberDensity { basis: Basis1::standard(), domain, f: DensityFn::Grid { xs, ys } }
    }

    pub fn eval(&self, x: f64) -> Result<f64, DensityError> {
        match &self.f {
            DensityFn::Expr(e) => Ok(e.eval(&[("x", x)])?),
            DensityFn::Grid { xs, ys } => {
                let n = xs.len();
                if n == 0 {
                    return Err(DensityError::OutOfChart("empty grid".into()));
                }
                if x <= xs[0] {
                    return Ok(ys[0]);
                }
                if x >= xs[n - 1] {
                    return Ok(ys[n - 1]);
                }
                let idx = xs.partition_point(|v| *v <= x) - 1;
                let w = (x - xs[idx]) / (xs[idx + 1] - xs[idx]);
                Ok(ys[idx] * (1.0 - w) + ys[idx + 1] * w)
            }
        }
    }

    /// Change of basis: the new basis vectors are the columns of `t`,
    /// `e'_i = t[0][i-1] e1 + t[1][i-1] e2`, and the scalar representative
    /// transforms with the cube of the chart denominator:
    ///
    /// `b'(x') = |det T| / (t11 + x' t12)^3 * b((t21 + x' t22)/(t11 + x' t12))`.
    pub fn transform(&self, t: [[f64; 2]; 2]) -> Result<FiberDensity, DensityError> {
        let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
        if det.abs() < 1e-14 {
            return Err(DensityError::OutOfChart("singular basis change".into()));
        }
        let (a, b) = self
            .domain
            .interval()
            .ok_or_else(|| DensityError::OutOfChart("full-circle domain".into()))?;
        // inverse chart map x' = (t11 x - t21) / (t22 - t12 x)
        let (t11, t12, t21, t22) = (t[0][0], t[0][1], t[1][0], t[1][1]);
        let inv = move |x: f64| (t11 * x - t21) / (t22 - t12 * x);
        let new_domain = if a.is_infinite() || b.is_infinite() {
            if t12.abs() > 1e-14 {
                return Err(DensityError::OutOfChart(
                    "full chart line does not fit in the target chart".into(),
                ));
            }
            ChartDomain::Interval(f64::NEG_INFINITY, f64::INFINITY)
        } else {
            // the target chart must cover the arc: no pole inside
            if t12.abs() > 1e-14 {
                let pole = t22 / t12;
                if a < pole && pole < b {
                    return Err(DensityError::OutOfChart(format!(
                        "target chart excludes a direction inside the arc (pole at {pole})"
                    )));
                }
            }
            let (pa, pb) = (inv(a), inv(b));
            ChartDomain::Interval(pa.min(pb), pa.max(pb))
        };
        let new_basis = Basis1 {
            e1: [
                t[0][0] * self.basis.e1[0] + t[1][0] * self.basis.e2[0],
                t[0][0] * self.basis.e1[1] + t[1][0] * self.basis.e2[1],
            ],
            e2: [
                t[0][1] * self.basis.e1[0] + t[1][1] * self.basis.e2[0],
                t[0][1] * self.basis.e1[1] + t[1][1] * self.basis.e2[1],
            ],
        };
        // closed form through expression composition when the source is an Expr
        if let DensityFn::Expr(e) = &self.f {
            let sub = substitute_moebius(e, t);
            let denom = Expr::Pow(
                Box::new(Expr::Add(
                    Box::new(Expr::num(t11)),
                    Box::new(Expr::Mul(Box::new(Expr::var("x")), Box::new(Expr::num(t12)))),
                )),
                Box::new(Expr::num(3.0)),
            );
            let expr = Expr::Div(
                Box::new(Expr::Mul(Box::new(Expr::num(det.abs())), Box::new(sub))),
                Box::new(denom),
            );
            return Ok(FiberDensity { basis: new_basis, domain: new_domain, f: DensityFn::Expr(expr) });
        }
        // grid source: resample on the mapped nodes
        let DensityFn::Grid { xs, .. } = &self.f else { unreachable!() };
        let fwd = move |xp: f64| (t21 + xp * t22) / (t11 + xp * t12);
        let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(xs.len());
        for &x in xs {
            let xp = inv(x);
            let den = t11 + xp * t12;
            let v = det.abs() / den.powi(3) * self.eval(fwd(xp))?;
            pairs.push((xp, v));
        }
        pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
        let (nxs, nys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        Ok(FiberDensity { basis: new_basis, domain: new_domain, f: DensityFn::Grid { xs: nxs, ys: nys } })
    }

    /// Vector integral of the density over the chart interval [s, t]: the
    /// mass and first-moment components `(int b dx, int x b dx)` in the chart
    /// basis. Antisymmetric under swapping s and t.
    pub fn interval_integral(&self, s: f64, t: f64) -> Result<[f64; 2], DensityError> {
        if s == t {
            return Ok([0.0, 0.0]);
        }
        let m0 = self.quad(s, t, |_, v| v)?;
        let m1 = self.quad(s, t, |x, v| x * v)?;
        Ok([m0, m1])
    }

    fn quad(&self, s: f64, t: f64, g: impl Fn(f64, f64) -> f64) -> Result<f64, DensityError> {
        let mut err: Option<DensityError> = None;
        let v = adaptive_gl(
            |x| match self.eval(x) {
                Ok(v) => g(x, v),
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            s,
            t,
            QUAD_TOL,
            QUAD_DEPTH,
        )?;
        match err {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    /// Barycenter of the arc with chart endpoints (s, t) as a point of the
    /// line, `P(R (m0 e1 + m1 e2))`. Extended by continuity on the diagonal.
    pub fn barycenter_point(&self, s: f64, t: f64) -> Result<HPoint1, DensityError> {
        if (t - s).abs() < DIAGONAL_EPS {
            return Ok(HPoint1::affine(0.5 * (s + t)));
        }
        let m = self.interval_integral(s, t)?;
        let scale = self.abs_mass_scale(s, t)?;
        if m[0].abs().max(m[1].abs()) <= 1e-10 * scale.max(1e-300) {
            return Err(DensityError::ZeroMass);
        }
        Ok(HPoint1::new(m[0], m[1])?)
    }

    /// Barycenter in chart coordinates; fails when the barycenter escapes
    /// the chart.
    pub fn barycenter_chart(&self, s: f64, t: f64) -> Result<f64, DensityError> {
        let p = self.barycenter_point(s, t)?;
        match p.chart_value() {
            crate::projgeom::ExtReal::Finite(v) => Ok(v),
            crate::projgeom::ExtReal::Infinity => Err(DensityError::OutOfChart(
                "barycenter at the chart's excluded direction".into(),
            )),
        }
    }

    fn abs_mass_scale(&self, s: f64, t: f64) -> Result<f64, DensityError> {
        let lo = s.min(t);
        let hi = s.max(t);
        self.quad(lo, hi, |x, v| v.abs() * (1.0 + x.abs()))
    }
}

/// Compose an expression in `x` with the fractional-linear chart transition.
fn substitute_moebius(e: &Expr, t: [[f64; 2]; 2]) -> Expr {
    let x = Expr::var("x");
    let num = Expr::Add(
        Box::new(Expr::num(t[1][0])),
        Box::new(Expr::Mul(Box::new(x.clone()), Box::new(Expr::num(t[1][1])))),
    );
    let den = Expr::Add(
        Box::new(Expr::num(t[0][0])),
        Box::new(Expr::Mul(Box::new(x), Box::new(Expr::num(t[0][1])))),
    );
    let arg = Expr::Div(Box::new(num), Box::new(den));
    substitute(e, "x", &arg)
}

pub(crate) fn substitute(e: &Expr, var: &str, with: &Expr) -> Expr {
    match e {
        Expr::Num(v) => Expr::Num(*v),
        Expr::Var(name) => {
            if name == var {
                with.clone()
            } else {
                Expr::Var(name.clone())
            }
        }
        Expr::Add(a, b) => {
            Expr::Add(Box::new(substitute(a, var, with)), Box::new(substitute(b, var, with)))
        }
        Expr::Sub(a, b) => {
            Expr::Sub(Box::new(substitute(a, var, with)), Box::new(substitute(b, var, with)))
        }
        Expr::Mul(a, b) => {
            Expr::Mul(Box::new(substitute(a, var, with)), Box::new(substitute(b, var, with)))
        }
        Expr::Div(a, b) => {
            Expr::Div(Box::new(substitute(a, var, with)), Box::new(substitute(b, var, with)))
        }
        Expr::Pow(a, b) => {
            Expr::Pow(Box::new(substitute(a, var, with)), Box::new(substitute(b, var, with)))
        }
        Expr::Neg(a) => Expr::Neg(Box::new(substitute(a, var, with))),
        Expr::Call(f, a) => Expr::Call(*f, Box::new(substitute(a, var, with))),
    }
}

/// Sampling specification for the nine-assertion checker.
#[derive(Debug, Clone, Copy)]
pub struct NineSpec {
    /// Grid resolution per axis.
    pub n: usize,
    /// Numerical zero threshold for the scalar representative.
    pub tol: f64,
}

impl Default for NineSpec {
    fn default() -> Self {
        NineSpec { n: 64, tol: 1e-9 }
    }
}

/// Evaluate the nine equivalent positivity assertions on sampled data.
///
/// Each assertion gets a pass/fail entry; for densities that never vanish on
/// the sample grid a final consistency entry asserts that all nine agree.
pub fn check_nine_assertions(d: &FiberDensity, spec: NineSpec) -> CheckReport {
    let mut checks = Vec::new();
    let Some((a, b)) = d.domain.interval() else {
        checks.push(Check::new("proper-arc-domain", "155", false).with_note(
            "the domain is the full projective line; the characterizations require a proper arc",
        ));
        return CheckReport::from_checks(checks);
    };
    // clip infinite chart lines to a large window for sampling
    let (a, b) = (a.max(-1e3), b.min(1e3));
    let n = spec.n.max(8);
    let xs: Vec<f64> = (0..=n)
        .map(|i| a + (b - a) * (i as f64 + 0.5) / (n as f64 + 1.0))
        .collect();
    let vals: Vec<f64> = match xs.iter().map(|x| d.eval(*x)).collect::<Result<_, _>>() {
        Ok(v) => v,
        Err(e) => {
            checks.push(Check::new("evaluate", "133", false).with_note(e.to_string()));
            return CheckReport::from_checks(checks);
        }
    };
    let strict = vals.iter().all(|v| v.abs() > spec.tol);

    // sampled arc pairs reused by several assertions
    let mut pairs = Vec::new();
    let m = 12usize;
    for i in 0..m {
        for j in (i + 1)..=m {
            let s = a + (b - a) * (i as f64 + 0.35) / (m as f64 + 1.0);
            let t = a + (b - a) * (j as f64 + 0.15) / (m as f64 + 1.0);
            if t - s > 1e-6 {
                pairs.push((s, t));
            }
        }
    }

    // (i)/(ii): nonvanishing mass integral over arcs, in this chart and in a
    // transformed chart
    let mass_nonzero = |dd: &FiberDensity, ps: &[(f64, f64)]| -> bool {
        for (s, t) in ps {
            let Ok(scale) = dd.abs_mass_scale(*s, *t) else { return false };
            let Ok(m) = dd.interval_integral(*s, *t) else { return false };
            if m[0].abs() <= 1e-9 * scale.max(1e-300) {
                return false;
            }
        }
        true
    };
    let i_pass = mass_nonzero(d, &pairs);
    checks.push(Check::new("(i) mass integral nonzero, one basis", "148", i_pass));
    let t_change = [[1.0, 0.0], [0.3, 1.0]]; // shear keeps every chart interval intact
    let inv_change = |x: f64| x - 0.3; // inverse chart map for that shear
    let ii_pass = match d.transform(t_change) {
        Ok(dt) => {
            let tp: Vec<(f64, f64)> = pairs
                .iter()
                .map(|(s, t)| {
                    let (u, v) = (inv_change(*s), inv_change(*t));
                    (u.min(v), u.max(v))
                })
                .collect();
            mass_nonzero(&dt, &tp)
        }
        Err(_) => false,
    };
    checks.push(Check::new("(ii) mass integral nonzero, second basis", "148", ii_pass));

    // (iii)/(iv): no interval of identical zero, and no sign change
    let dead_free = |vs: &[f64]| {
        let chunk = (vs.len() / 8).max(1);
        vs.chunks(chunk).all(|c| c.iter().any(|v| v.abs() > spec.tol))
    };
    let single_signed = |vs: &[f64]| {
        let has_pos = vs.iter().any(|v| *v > spec.tol);
        let has_neg = vs.iter().any(|v| *v < -spec.tol);
        !(has_pos && has_neg)
    };
    let iii_pass = dead_free(&vals) && single_signed(&vals);
    checks.push(Check::new("(iii) support dense and single-signed", "149/150", iii_pass));
    // (iv) is the all-bases form; spot-check in the sheared chart
    let iv_pass = match d.transform(t_change) {
        Ok(dt) => match xs.iter().map(|x| dt.eval(inv_change(*x))).collect::<Result<Vec<_>, _>>() {
            Ok(tv) => dead_free(&tv) && single_signed(&tv),
            Err(_) => false,
        },
        Err(_) => false,
    };
    checks.push(Check::new("(iv) support dense and single-signed, second basis", "149/150", iv_pass));

    // (v): vector integral nonzero and barycenter strictly inside each arc
    let mut v_pass = true;
    for (s, t) in &pairs {
        match d.barycenter_chart(*s, *t) {
            Ok(bc) => {
                if !(s.min(*t) < bc && bc < s.max(*t)) {
                    v_pass = false;
                    break;
                }
            }
            Err(_) => {
                v_pass = false;
                break;
            }
        }
    }
    checks.push(Check::new("(v) barycenter strictly inside arcs", "151/152", v_pass));

    // (vi): continuity at the diagonal
    let mut vi_pass = true;
    let mut worst_vi = 0.0f64;
    for i in (0..xs.len()).step_by((xs.len() / 8).max(1)) {
        let s = xs[i];
        for h in [1e-3, 1e-4, 1e-5] {
            let h = h * (b - a);
            if s + h >= b {
                continue;
            }
            match d.barycenter_chart(s, s + h) {
                Ok(bc) => {
                    let dev = (bc - s).abs() / h.max(1e-12);
                    worst_vi = worst_vi.max(dev);
                    if dev > 2.0 {
                        vi_pass = false;
                    }
                }
                Err(_) => vi_pass = false,
            }
        }
    }
    checks.push(
        Check::new("(vi) diagonal continuity B(s,s)=s", "153", vi_pass).with_values(vec![worst_vi]),
    );

    // (vii): injectivity (monotonicity) of the partial barycenter maps
    let mut vii_pass = true;
    'outer: for &q in &[xs[xs.len() / 4], xs[xs.len() / 2]] {
        let mut prev: Option<f64> = None;
        for &t in xs.iter().step_by(4) {
            if (t - q).abs() < 1e-4 * (b - a) {
                continue;
            }
            match d.barycenter_chart(q, t) {
                Ok(bc) => {
                    if let Some(p) = prev {
                        if bc <= p + 1e-12 {
                            vii_pass = false;
                            break 'outer;
                        }
                    }
                    prev = Some(bc);
                }
                Err(_) => {
                    vii_pass = false;
                    break 'outer;
                }
            }
        }
    }
    checks.push(Check::new("(vii) partial maps injective", "154", vii_pass));

    // (viii)/(ix): total variation positive and the unit direction field
    // continuous, for two scalar products. Zeros of the scalar are reported
    // separately: continuity is only tested away from them.
    let zeros = xs.iter().zip(&vals).filter(|(_, v)| v.abs() <= spec.tol).count();
    let gram_checks = [
        ("(viii) Radon-Nikodym field continuous, one product", [[1.0, 0.0], [0.0, 1.0]]),
        ("(ix) Radon-Nikodym field continuous, second product", [[2.0, 0.3], [0.3, 0.5]]),
    ];
    for (name, g) in gram_checks {
        let tv_pos = dead_free(&vals);
        let mut cont = true;
        let mut prev_dir: Option<[f64; 2]> = None;
        for (x, v) in xs.iter().zip(&vals) {
            if v.abs() <= spec.tol {
                prev_dir = None; // restart across a reported zero
                continue;
            }
            let w = [*v, *v * x];
            let norm = (g[0][0] * w[0] * w[0]
                + 2.0 * g[0][1] * w[0] * w[1]
                + g[1][1] * w[1] * w[1])
                .sqrt();
            let dir = [w[0] / norm, w[1] / norm];
            if let Some(p) = prev_dir {
                if p[0] * dir[0] + p[1] * dir[1] <= 0.0 {
                    cont = false;
                }
            }
            prev_dir = Some(dir);
        }
        let mut check = Check::new(name, "155", tv_pos && cont);
        if zeros > 0 {
            check = check.with_note(format!(
                "scalar vanishes near {zeros} sample point(s); continuity tested away from them"
            ));
        }
        checks.push(check);
    }

    if strict {
        let verdicts: Vec<bool> = checks.iter().map(|c| c.pass).collect();
        let consistent = verdicts.iter().all(|v| *v) || verdicts.iter().all(|v| !*v);
        checks.push(
            Check::new("equivalence consistency (strict density)", "Thm 5", consistent)
                .with_note("the nine verdicts must agree for a nonvanishing density"),
        );
    }
    CheckReport::from_checks(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprcalc::parse;

    pub(crate) fn density(src: &str, a: f64, b: f64) -> FiberDensity {
        FiberDensity::from_expr(ChartDomain::Interval(a, b), parse(src).unwrap())
    }

    #[test]
    fn transform_identity() {
        let d = density("1 + x^2", -1.0, 1.0);
        let t = d.transform([[1.0, 0.0], [0.0, 1.0]]).unwrap();
        for x in [-0.7, 0.0, 0.4] {
            assert!((t.eval(x).unwrap() - d.eval(x).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn transform_scaled_second_vector() {
        // e1' = e1, e2' = 2 e2 sends the constant 1 to the constant 2
        let d = density("1", -5.0, 5.0);
        let t = d.transform([[1.0, 0.0], [0.0, 2.0]]).unwrap();
        for x in [-2.0, 0.0, 1.5] {
            assert!((t.eval(x).unwrap() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn transform_basis_swap() {
        // e1' = e2, e2' = e1: b'(x') = b(1/x') / x'^3
        let d = density("1", 0.5, 4.0);
        let t = d.transform([[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let v = t.eval(2.0).unwrap();
        assert!((v - 1.0 / 8.0).abs() < 1e-14, "{v}");
        // double transform is the identity on the common domain
        let back = t.transform([[0.0, 1.0], [1.0, 0.0]]).unwrap();
        for x in [0.6, 1.0, 3.0] {
            assert!((back.eval(x).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn transform_rejects_pole_inside() {
        let d = density("1", -1.0, 1.0);
        // pole at x = t22/t12 = 0 lies inside (-1, 1)
        let r = d.transform([[1.0, 1.0], [1.0, 0.0]]);
        assert!(matches!(r, Err(DensityError::OutOfChart(_))));
    }

    #[test]
    fn interval_integral_constant() {
        let d = density("1", -10.0, 10.0);
        let m = d.interval_integral(0.0, 2.0).unwrap();
        assert!((m[0] - 2.0).abs() < 1e-12 && (m[1] - 2.0).abs() < 1e-12);
        assert_eq!(d.interval_integral(1.0, 1.0).unwrap(), [0.0, 0.0]);
        let m2 = d.interval_integral(2.0, 0.0).unwrap();
        assert!((m[0] + m2[0]).abs() < 1e-12 && (m[1] + m2[1]).abs() < 1e-12);
    }

    #[test]
    fn interval_integral_linear_density() {
        let d = density("x", 0.0, 1.0);
        for (s, t) in [(0.1, 0.9), (0.25, 0.5), (0.8, 0.2)] {
            let m = d.interval_integral(s, t).unwrap();
            let want0 = (t * t - s * s) / 2.0;
            let want1 = (t * t * t - s * s * s) / 3.0;
            assert!((m[0] - want0).abs() < 1e-12);
            assert!((m[1] - want1).abs() < 1e-12);
        }
    }

    #[test]
    fn barycenter_constant_is_midpoint() {
        let d = density("3", -10.0, 10.0);
        for (s, t) in [(0.0, 2.0), (-3.0, 5.0), (1.0, 1.0)] {
            let b = d.barycenter_chart(s, t).unwrap();
            assert!((b - 0.5 * (s + t)).abs() < 1e-10, "{b}");
        }
    }

    #[test]
    fn barycenter_linear_density() {
        let d = density("x", 0.0, 1.0);
        let (s, t) = (0.2, 0.7);
        let b = d.barycenter_chart(s, t).unwrap();
        let want = 2.0 / 3.0 * (t.powi(3) - s.powi(3)) / (t * t - s * s);
        assert!((b - want).abs() < 1e-10);
    }

    #[test]
    fn barycenter_scaling_invariance() {
        let d = density("1 + x^2", -2.0, 2.0);
        let dc = density("7*(1 + x^2)", -2.0, 2.0);
        for (s, t) in [(-1.5, 0.3), (0.1, 1.9)] {
            let b1 = d.barycenter_chart(s, t).unwrap();
            let b2 = dc.barycenter_chart(s, t).unwrap();
            assert!((b1 - b2).abs() < 1e-12);
        }
        // negative scaling too: the barycenter only sees the direction
        let dn = density("-(1 + x^2)", -2.0, 2.0);
        let b1 = d.barycenter_chart(-1.0, 1.5).unwrap();
        let b2 = dn.barycenter_chart(-1.0, 1.5).unwrap();
        assert!((b1 - b2).abs() < 1e-12);
    }

    #[test]
    fn barycenter_strictly_monotone() {
        let d = density("exp(x)", 0.0, 1.0);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..20 {
            let t = 0.2 + 0.7 * k as f64 / 19.0;
            let b = d.barycenter_chart(0.1, t).unwrap();
            assert!(b > prev, "barycenter not strictly increasing");
            prev = b;
        }
    }

    #[test]
    fn barycenter_zero_mass() {
        // odd density over a symmetric arc: the mass component vanishes and
        // the barycenter escapes to the excluded direction
        let d = density("x", -1.0, 1.0);
        match d.barycenter_chart(-0.5, 0.5) {
            Err(DensityError::OutOfChart(_)) | Err(DensityError::ZeroMass) => {}
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn barycenter_basis_independent() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let families = ["1 + x^2", "2 + sin(x)", "exp(x/3)", "0.5 + x^4"];
        let mut done = 0;
        while done < 50 {
            let src = families[done % families.len()];
            let d = density(src, -2.0, 2.0);
            let t11 = rng.gen_range(0.5..1.5);
            let t12: f64 = rng.gen_range(-0.2..0.2);
            let t21 = rng.gen_range(-0.5..0.5);
            let t22 = rng.gen_range(0.5..1.5);
            let t = [[t11, t12], [t21, t22]];
            let det: f64 = t11 * t22 - t12 * t21;
            if det.abs() < 0.2 {
                continue;
            }
            if t12.abs() > 1e-14 && (-2.0..=2.0).contains(&(t22 / t12)) {
                continue;
            }
            let s = rng.gen_range(-1.8..0.0);
            let u = rng.gen_range(0.1..1.8);
            let here = d.barycenter_chart(s, u).unwrap();
            let dt = d.transform(t).unwrap();
            let inv = |x: f64| (t11 * x - t21) / (t22 - t12 * x);
            let (sp, up) = (inv(s), inv(u));
            let bp = dt.barycenter_chart(sp.min(up), sp.max(up)).unwrap();
            // map back through the chart transition
            let back = (t21 + bp * t22) / (t11 + bp * t12);
            assert!((back - here).abs() < 1e-9, "{src}: {back} vs {here}");
            done += 1;
        }
    }

    #[test]
    fn nine_assertions_constant_density() {
        let d = density("1", -10.0, 10.0);
        let report = check_nine_assertions(&d, NineSpec::default());
        assert!(report.pass, "{report:#?}");
        assert!(report.checks.len() >= 10); // nine assertions + consistency
    }

    #[test]
    fn nine_assertions_sign_changing_density() {
        let d = density("x", -1.0, 1.0);
        let report = check_nine_assertions(&d, NineSpec::default());
        assert!(!report.pass);
        let iii = report.find("(iii) support dense and single-signed").unwrap();
        assert!(!iii.pass, "sign change must fail");
        let v = report.find("(v) barycenter strictly inside arcs").unwrap();
        assert!(!v.pass, "symmetric arcs push the barycenter out of the arc");
    }

    #[test]
    fn nine_assertions_reject_full_circle() {
        let d = FiberDensity::constant(ChartDomain::FullCircle, 1.0);
        let report = check_nine_assertions(&d, NineSpec::default());
        assert!(!report.pass);
        assert_eq!(report.checks[0].name, "proper-arc-domain");
    }

    #[test]
    fn strict_negative_density_passes() {
        let d = density("-2", -3.0, 3.0);
        let report = check_nine_assertions(&d, NineSpec::default());
        assert!(report.pass, "{report:#?}");
    }
}
