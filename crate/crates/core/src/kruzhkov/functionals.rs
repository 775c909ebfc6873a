//! Numerical evaluation of the variational functionals.
//!
//! All integrals are composite tensor Gauss–Legendre. The y-integration is
//! always split at the section value (the sign kink), and the base
//! integration is split along the section's discontinuity curves, which
//! restores spectral accuracy for piecewise-classical data.

use super::{
    lerp, march_primitive, Bump1, KruzhkovError, QuasiEq, Section, TestDensity, ZetaTest,
};
use crate::quad::gauss_legendre;

/// Quadrature resolution.
#[derive(Debug, Clone, Copy)]
pub struct QuadOpts {
    /// Gauss nodes per base panel (each direction).
    pub z_nodes: usize,
    /// Base panels per direction before kink splitting.
    pub z_panels: usize,
    /// Gauss nodes per fiber panel.
    pub y_nodes: usize,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts { z_nodes: 20, z_panels: 2, y_nodes: 20 }
    }
}

/// Split [lo, hi] into `base` uniform panels, refined at the given splits.
fn panels(lo: f64, hi: f64, base: usize, splits: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = (0..=base).map(|i| lerp((lo, hi), i as f64 / base as f64)).collect();
    for &s in splits {
        if s > lo + 1e-14 && s < hi - 1e-14 {
            cuts.push(s);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Fiber primitives Z1, Z2 and the base divergence primitive W at a set of
/// fiber points over a fixed base point, by a single march.
fn primitives_at(
    eq: &QuasiEq,
    z: [f64; 2],
    points: &[f64],
    divergence: Option<&crate::exprcalc::Expr>,
) -> Result<Vec<[f64; 3]>, KruzhkovError> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].partial_cmp(&points[j]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| points[i]).collect();
    let mut f1 = |eta: f64| -> Result<f64, KruzhkovError> { Ok(eq.x1.eval(&eq.env(z, eta))?) };
    let z1vals = march_primitive(&mut f1, &sorted)?;
    let mut f2 = |eta: f64| -> Result<f64, KruzhkovError> { Ok(eq.x2.eval(&eq.env(z, eta))?) };
    let z2vals = march_primitive(&mut f2, &sorted)?;
    let wvals = match divergence {
        None => vec![0.0; sorted.len()],
        Some(div) => {
            let mut fw =
                |eta: f64| -> Result<f64, KruzhkovError> { Ok(div.eval(&eq.env(z, eta))?) };
            march_primitive(&mut fw, &sorted)?
        }
    };
    let mut vals = vec![[0.0f64; 3]; points.len()];
    for (k, &idx) in order.iter().enumerate() {
        vals[idx] = [z1vals[k], z2vals[k], wvals[k]];
    }
    Ok(vals)
}

/// Precompute the symbolic base divergence, or None when it vanishes
/// identically; the primitive marches then skip it.
fn divergence_expr(eq: &QuasiEq) -> Option<crate::exprcalc::Expr> {
    if eq.base_divergence_is_zero() {
        return None;
    }
    Some(crate::exprcalc::Expr::Add(
        Box::new(crate::exprcalc::diff(&eq.x1, "z1")),
        Box::new(crate::exprcalc::diff(&eq.x2, "z2")),
    ))
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// The generalized function I applied to a test density:
///
/// `<I, psi> = ∬ sgn(u(z) - y) { Σ_i (Z_i(z,u) - Z_i(z,y)) d(phi)/dz_i
///   + [X3(z,u) + W(z,u) - W(z,y)] phi } dz dy`
///
/// with W the primitive of the base divergence.
pub fn i_functional(
    eq: &QuasiEq,
    sigma: &Section,
    psi: &TestDensity,
    opts: QuadOpts,
) -> Result<f64, KruzhkovError> {
    let sup = psi.support();
    if !sup.strictly_inside(&eq.domain) {
        return Err(KruzhkovError::SupportTooLarge);
    }
    let div_expr = divergence_expr(eq);
    let (zx, zw) = gauss_legendre(opts.z_nodes);
    let (yx, yw) = gauss_legendre(opts.y_nodes);
    let mid2 = 0.5 * (sup.z2.0 + sup.z2.1);
    let z1_splits = sigma.kinks_z1(mid2, sup.z1.0, sup.z1.1);
    let mut total = 0.0;
    for (a1, b1) in panels(sup.z1.0, sup.z1.1, opts.z_panels, &z1_splits) {
        for (n1, w1) in zx.iter().zip(&zw) {
            let z1 = 0.5 * (a1 + b1) + 0.5 * (b1 - a1) * n1;
            let jac1 = 0.5 * (b1 - a1) * w1;
            let z2_splits = sigma.kinks_z2(z1, sup.z2.0, sup.z2.1);
            for (a2, b2) in panels(sup.z2.0, sup.z2.1, opts.z_panels, &z2_splits) {
                for (n2, w2) in zx.iter().zip(&zw) {
                    let z2 = 0.5 * (a2 + b2) + 0.5 * (b2 - a2) * n2;
                    let jac2 = 0.5 * (b2 - a2) * w2;
                    let z = [z1, z2];
                    let u = sigma.eval(z)?;
                    // y panels split at the kink y = u(z)
                    let y_splits = [u];
                    let ypanels = panels(sup.y.0, sup.y.1, 1, &y_splits);
                    // all fiber evaluation points plus u itself
                    let mut ypts: Vec<f64> = Vec::with_capacity(ypanels.len() * opts.y_nodes + 1);
                    for (ay, by) in &ypanels {
                        for ny in &yx {
                            ypts.push(0.5 * (ay + by) + 0.5 * (by - ay) * ny);
                        }
                    }
                    ypts.push(u);
                    let prim = primitives_at(eq, z, &ypts, div_expr.as_ref())?;
                    let pu = prim[ypts.len() - 1];
                    let x3u = eq.x3.eval(&eq.env(z, u))?;
                    let mut inner = 0.0;
                    let mut idx = 0;
                    for (ay, by) in &ypanels {
                        let jy = 0.5 * (by - ay);
                        for (ny, wy) in yx.iter().zip(&yw) {
                            let y = 0.5 * (ay + by) + jy * ny;
                            let p = prim[idx];
                            idx += 1;
                            let phi = psi.phi(z, y)?;
                            let gz = psi.grad_z(z, y)?;
                            let term = (pu[0] - p[0]) * gz[0]
                                + (pu[1] - p[1]) * gz[1]
                                + (x3u + pu[2] - p[2]) * phi;
                            inner += wy * jy * sgn(u - y) * term;
                        }
                    }
                    total += jac1 * jac2 * inner;
                }
            }
        }
    }
    Ok(total)
}

/// The pointwise density of I for differentiable sections:
/// `sgn(u(z) - y) [X3(z, u(z)) - Σ_i X^i(z, u(z)) du/dz_i]`.
pub fn i_density(
    eq: &QuasiEq,
    sigma: &Section,
    z: [f64; 2],
    y: f64,
) -> Result<f64, KruzhkovError> {
    let u = sigma.eval(z)?;
    let g = sigma.grad(z)?;
    let x = eq.x(z, u)?;
    Ok(sgn(u - y) * (x[2] - x[0] * g[0] - x[1] * g[1]))
}

/// The generalized function J against a base test function, for a smooth
/// comparison section tau:
///
/// `<J, zeta> = ∫ sgn(u - v) { Σ_i (Z_i(z,u) - Z_i(z,v)) d(zeta)/dz_i
///   + [X3(z,u) - Σ_i X^i(z,v) dv/dz_i + W(z,u) - W(z,v)] zeta } dz`.
pub fn j_functional(
    eq: &QuasiEq,
    sigma: &Section,
    tau: &Section,
    zeta: &ZetaTest,
    opts: QuadOpts,
) -> Result<f64, KruzhkovError> {
    base_integral(eq, sigma, tau, zeta, opts, |x3u, xv, gv| {
        x3u - (xv[0] * gv[0] + xv[1] * gv[1])
    })
}

/// The symmetric generalized function C, defined for any two bounded
/// sections:
///
/// `<C, zeta> = ∫ sgn(u - v) { Σ_i (Z_i(z,u) - Z_i(z,v)) d(zeta)/dz_i
///   + [X3(z,u) - X3(z,v) + W(z,u) - W(z,v)] zeta } dz`.
pub fn c_functional(
    eq: &QuasiEq,
    sigma: &Section,
    tau: &Section,
    zeta: &ZetaTest,
    opts: QuadOpts,
) -> Result<f64, KruzhkovError> {
    base_integral(eq, sigma, tau, zeta, opts, |x3u, xv, _gv| x3u - xv[2])
}

/// Shared base-integral skeleton of J and C. The closure receives
/// `(X3(z,u), X(z,v), grad v)` and returns the zero-order bracket; the
/// divergence-primitive difference `W(z,u) - W(z,v)` is added here.
fn base_integral(
    eq: &QuasiEq,
    sigma: &Section,
    tau: &Section,
    zeta: &ZetaTest,
    opts: QuadOpts,
    bracket: impl Fn(f64, [f64; 3], [f64; 2]) -> f64,
) -> Result<f64, KruzhkovError> {
    let (s1, s2) = zeta.support();
    let div_expr = divergence_expr(eq);
    let (zx, zw) = gauss_legendre(opts.z_nodes);
    let mid2 = 0.5 * (s2.0 + s2.1);
    let mut z1_splits = sigma.kinks_z1(mid2, s1.0, s1.1);
    z1_splits.extend(tau.kinks_z1(mid2, s1.0, s1.1));
    z1_splits.extend(sigma.diff_roots_z1(tau, mid2, s1.0, s1.1));
    let mut total = 0.0;
    for (a1, b1) in panels(s1.0, s1.1, opts.z_panels, &z1_splits) {
        for (n1, w1) in zx.iter().zip(&zw) {
            let z1 = 0.5 * (a1 + b1) + 0.5 * (b1 - a1) * n1;
            let jac1 = 0.5 * (b1 - a1) * w1;
            let mut z2_splits = sigma.kinks_z2(z1, s2.0, s2.1);
            z2_splits.extend(tau.kinks_z2(z1, s2.0, s2.1));
            z2_splits.extend(sigma.diff_roots_z2(tau, z1, s2.0, s2.1));
            for (a2, b2) in panels(s2.0, s2.1, opts.z_panels, &z2_splits) {
                for (n2, w2) in zx.iter().zip(&zw) {
                    let z2 = 0.5 * (a2 + b2) + 0.5 * (b2 - a2) * n2;
                    let jac2 = 0.5 * (b2 - a2) * w2;
                    let z = [z1, z2];
                    let u = sigma.eval(z)?;
                    let v = tau.eval(z)?;
                    let prim = primitives_at(eq, z, &[u, v], div_expr.as_ref())?;
                    let (pu, pv) = (prim[0], prim[1]);
                    let x3u = eq.x3.eval(&eq.env(z, u))?;
                    let xv = eq.x(z, v)?;
                    let gv = tau.grad(z)?;
                    let phi = zeta.phi(z)?;
                    let gz = zeta.grad(z)?;
                    let zero_order = bracket(x3u, xv, gv) + (pu[2] - pv[2]);
                    let term = (pu[0] - pv[0]) * gz[0] + (pu[1] - pv[1]) * gz[1]
                        + zero_order * phi;
                    total += jac1 * jac2 * sgn(u - v) * term;
                }
            }
        }
    }
    Ok(total)
}

/// Residual data of the pairing identity between the composed densities and
/// the symmetric functional:
///
/// `<I_sigma ∘ tau, zeta> + <I_tau ∘ sigma, zeta> = <C(sigma, tau), zeta>`.
///
/// `tau` must be the (locally) Lipschitz member of the pair: the composition
/// of the sigma-density with tau is taken in the weak form (the J
/// functional), while the composition of the tau-density with sigma is the
/// pointwise density evaluated along sigma, which is what gives the identity
/// meaning when sigma merely jumps.
pub fn identity60_residual(
    eq: &QuasiEq,
    sigma: &Section,
    tau: &Section,
    zeta: &ZetaTest,
    opts: QuadOpts,
) -> Result<(f64, f64, f64), KruzhkovError> {
    let weak = j_functional(eq, sigma, tau, zeta, opts)?;
    let (s1, s2) = zeta.support();
    let (zx, zw) = gauss_legendre(opts.z_nodes);
    let mid2 = 0.5 * (s2.0 + s2.1);
    let mut z1_splits = sigma.kinks_z1(mid2, s1.0, s1.1);
    z1_splits.extend(tau.kinks_z1(mid2, s1.0, s1.1));
    z1_splits.extend(sigma.diff_roots_z1(tau, mid2, s1.0, s1.1));
    let mut pointwise = 0.0;
    for (a1, b1) in panels(s1.0, s1.1, opts.z_panels, &z1_splits) {
        for (n1, w1) in zx.iter().zip(&zw) {
            let z1 = 0.5 * (a1 + b1) + 0.5 * (b1 - a1) * n1;
            let jac1 = 0.5 * (b1 - a1) * w1;
            let mut z2_splits = sigma.kinks_z2(z1, s2.0, s2.1);
            z2_splits.extend(tau.kinks_z2(z1, s2.0, s2.1));
            z2_splits.extend(sigma.diff_roots_z2(tau, z1, s2.0, s2.1));
            for (a2, b2) in panels(s2.0, s2.1, opts.z_panels, &z2_splits) {
                for (n2, w2) in zx.iter().zip(&zw) {
                    let z2 = 0.5 * (a2 + b2) + 0.5 * (b2 - a2) * n2;
                    let jac2 = 0.5 * (b2 - a2) * w2;
                    let z = [z1, z2];
                    let u = sigma.eval(z)?;
                    let phi = zeta.phi(z)?;
                    pointwise += jac1 * jac2 * i_density(eq, tau, z, u)? * phi;
                }
            }
        }
    }
    let lhs = weak + pointwise;
    let rhs = c_functional(eq, sigma, tau, zeta, opts)?;
    Ok((lhs, rhs, (lhs - rhs).abs()))
}

/// Both sides of the disintegration identity: the y-average of the sliced
/// functionals against a fiber weight l, and the full functional against the
/// separable test density.
#[derive(Debug, Clone, Copy)]
pub struct DisintegrationOutcome {
    pub lhs: f64,
    pub rhs: f64,
}

impl DisintegrationOutcome {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn relative_residual(&self) -> f64 {
        self.residual() / self.lhs.abs().max(self.rhs.abs()).max(1e-12)
    }
}

/// Disintegration: `∫ <J(sigma, kappa(y)), zeta> l(y) dy  =  <I, l ⊗ zeta>`.
pub fn disintegration_check(
    eq: &QuasiEq,
    sigma: &Section,
    zeta: &ZetaTest,
    l: Bump1,
    opts: QuadOpts,
) -> Result<DisintegrationOutcome, KruzhkovError> {
    // The sliced functional kinks in y at values attained by the one-sided
    // limits of the section along its jump set; split the outer rule there.
    let mut y_splits: Vec<f64> = Vec::new();
    if let Section::Piecewise(pw) = sigma {
        for z in pw.sigma.samples(5)? {
            let (um, up) = pw.one_sided(z)?;
            y_splits.push(um);
            y_splits.push(up);
        }
    }
    let (yx, yw) = gauss_legendre(24);
    let mut lhs = 0.0;
    for (a, b) in panels(l.a, l.b, 2, &y_splits) {
        for (n, w) in yx.iter().zip(&yw) {
            let y = 0.5 * (a + b) + 0.5 * (b - a) * n;
            let jac = 0.5 * (b - a) * w;
            let j = j_functional(eq, sigma, &Section::Const(y), zeta, opts)?;
            lhs += jac * l.eval(y) * j;
        }
    }
    let psi = TestDensity::Separable { l, zeta: zeta.clone() };
    let rhs = i_functional(eq, sigma, &psi, opts)?;
    Ok(DisintegrationOutcome { lhs, rhs })
}
