//! Shock calculus: the Rankine–Hugoniot pairing and jump admissibility.

use serde::Serialize;

use super::{KruzhkovError, PiecewiseSolution, QuasiEq};
use crate::quad::adaptive_gl;

/// Pairing of the shock conormal with the fiber integral of the base
/// components of the characteristic field across the jump:
///
/// `<d(level)(z), ∫_{u+(z)}^{u-(z)} (X1, X2)(z, y) dy>`.
///
/// Vanishes exactly on weak shocks; the sign convention ties the conormal to
/// the labeling minus = {level < 0}.
pub fn rh_residual(
    eq: &QuasiEq,
    pw: &PiecewiseSolution,
    z: [f64; 2],
) -> Result<f64, KruzhkovError> {
    let (um, up) = pw.one_sided(z)?;
    let grad = pw.level_grad(z)?;
    let f = flux_integral(eq, z, up, um)?;
    Ok(grad[0] * f[0] + grad[1] * f[1])
}

/// Oriented fiber integral of (X1, X2) from a to b.
fn flux_integral(eq: &QuasiEq, z: [f64; 2], a: f64, b: f64) -> Result<[f64; 2], KruzhkovError> {
    let mut out = [0.0; 2];
    for (slot, expr) in [(0usize, &eq.x1), (1usize, &eq.x2)] {
        let mut err: Option<KruzhkovError> = None;
        out[slot] = adaptive_gl(
            |y| match expr.eval(&eq.env(z, y)) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e.into());
                    0.0
                }
            },
            a,
            b,
            1e-12,
            40,
        )?;
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(out)
}

/// One admissibility sample of the chord inequality.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KPoint {
    pub k: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Flux-secant gap `(rhs - lhs) / 2`; nonnegative = admissible at k.
    pub margin: f64,
}

/// Admissibility data of a piecewise solution at a shock point.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub z: [f64; 2],
    pub u_minus: f64,
    pub u_plus: f64,
    pub rh_residual: f64,
    /// Chord inequality samples over the jump interval.
    pub kpoints: Vec<KPoint>,
    /// Worst chord margin over the grid.
    pub worst_margin: f64,
    /// Entering margin on the plus side (must be <= 0).
    pub enter_plus: f64,
    /// Entering margin on the minus side (must be >= 0).
    pub enter_minus: f64,
    /// The full chord condition holds on the sample grid.
    pub chord_pass: bool,
    /// Both entering inequalities hold.
    pub lax_pass: bool,
    pub rh_pass: bool,
    /// The one-sided entering conditions together with the jump identity
    /// imply the chord condition for this equation class; false would flag
    /// an inconsistency between the two routes.
    pub prop3_consistent: bool,
    pub admissible: bool,
}

/// Check jump admissibility at a point of the shock curve: the chord
/// inequality over a k-grid spanning the jump interval, the entering
/// inequalities at both one-sided values, and the jump identity.
pub fn admissibility_check(
    eq: &QuasiEq,
    pw: &PiecewiseSolution,
    z: [f64; 2],
    k_grid: usize,
    tol: f64,
) -> Result<AdmissibilityReport, KruzhkovError> {
    let (um, up) = pw.one_sided(z)?;
    let grad = pw.level_grad(z)?;
    let rh = rh_residual(eq, pw, z)?;
    let scale = scalar_flux_scale(eq, z, um, up)?;
    let rh_pass = rh.abs() <= tol * scale.max(1.0);

    let lo = um.min(up);
    let hi = um.max(up);
    let n = k_grid.max(3);
    let mut kpoints = Vec::with_capacity(n);
    let mut worst = f64::INFINITY;
    if (hi - lo).abs() < 1e-14 {
        worst = 0.0;
    } else {
        for i in 0..n {
            let k = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            // set integrals over the unoriented intervals |k, u+| and |u-, k|
            let f1 = flux_integral(eq, z, k.min(up), k.max(up))?;
            let f2 = flux_integral(eq, z, k.min(um), k.max(um))?;
            let lhs = grad[0] * f1[0] + grad[1] * f1[1];
            let rhs = grad[0] * f2[0] + grad[1] * f2[1];
            let margin = 0.5 * (rhs - lhs);
            worst = worst.min(margin);
            kpoints.push(KPoint { k, lhs, rhs, margin });
        }
    }
    let chord_pass = worst >= -tol * scale.max(1.0);

    // entering conditions: the conormal pairing with the characteristic
    // field at the one-sided values
    let xp = eq.x(z, up)?;
    let xm = eq.x(z, um)?;
    let enter_plus = grad[0] * xp[0] + grad[1] * xp[1];
    let enter_minus = grad[0] * xm[0] + grad[1] * xm[1];
    let lax_pass = enter_plus <= tol * scale.max(1.0) && enter_minus >= -tol * scale.max(1.0);

    let prop3_consistent = !(rh_pass && lax_pass) || chord_pass;
    let admissible = rh_pass && lax_pass && chord_pass;
    Ok(AdmissibilityReport {
        z,
        u_minus: um,
        u_plus: up,
        rh_residual: rh,
        kpoints,
        worst_margin: worst,
        enter_plus,
        enter_minus,
        chord_pass,
        lax_pass,
        rh_pass,
        prop3_consistent,
        admissible,
    })
}

fn scalar_flux_scale(
    eq: &QuasiEq,
    z: [f64; 2],
    um: f64,
    up: f64,
) -> Result<f64, KruzhkovError> {
    let mut m = 0.0f64;
    for i in 0..5 {
        let y = um + (up - um) * i as f64 / 4.0;
        let x = eq.x(z, y)?;
        m = m.max(x[0].abs().max(x[1].abs()));
    }
    Ok(m * (up - um).abs())
}
