//! The canonical entropy density on the Möbius band and the explicit
//! entropic solution built from conic arcs and line pencils.
//!
//! Conventions: plane points are homogeneous (X, Y, W) with the affine chart
//! (X, Y) -> [X : Y : 1]. The vanishing point sits at the origin of the
//! affine chart, [0 : 0 : 1]; the simultaneity levels are the lines through
//! it. The two covering charts of the band come from the frame
//! eps1 = (0,0,1), eps2 = (1,0,0), eps3 = (0,1,0) and its quarter-turn.

mod scene;

pub use scene::{
    build_scene, evaluate_solution, verify_scene, ArcReport, MobiusScene, RegionReport,
    SceneError, ScenePlacement, SceneReport, SceneSampling, SceneValue,
};

use crate::density::{ChartDomain, DensityError, FiberDensity};
use crate::projgeom::{GeomError, HPoint1, HPoint2, PLine};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum MobiusError {
    #[error("the fiber over the vanishing point is not part of the bundle")]
    AtVanishingPoint,
    #[error("consecutive loop samples share no covering chart")]
    SamplingTooCoarse,
    #[error("loop sample lies on a chart seam (simultaneity axis)")]
    OnChartSeam,
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Density(#[from] DensityError),
}

/// The canonical entropy density: vanishing point, an orthonormal frame
/// whose first vector spans the vanishing direction, and an orientation of
/// the simultaneity pencil.
#[derive(Debug, Clone)]
pub struct CanonicalDensity {
    pub pinf: HPoint2,
    /// Columns are the frame vectors eps1, eps2, eps3 in (X, Y, W).
    pub frame: [[f64; 3]; 3],
    pub omega: i8,
}

impl CanonicalDensity {
    /// The standard frame for the vanishing point at the affine origin.
    pub fn standard(omega: i8) -> CanonicalDensity {
        CanonicalDensity {
            pinf: HPoint2::new(0.0, 0.0, 1.0).unwrap(),
            // columns: eps1 = W axis, eps2 = X axis, eps3 = Y axis
            frame: [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]],
            omega,
        }
    }

    /// A frame orthonormal with respect to a general inner product (Gram
    /// matrix), with the first vector along the vanishing direction.
    /// Realizes the freedom of the scalar product in the construction.
    pub fn with_gram(gram: [[f64; 3]; 3], omega: i8) -> CanonicalDensity {
        let dot = |a: [f64; 3], b: [f64; 3]| {
            let mut acc = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    acc += a[i] * gram[i][j] * b[j];
                }
            }
            acc
        };
        // Gram-Schmidt seeded with the vanishing direction
        let seeds = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let mut cols: Vec<[f64; 3]> = Vec::new();
        for seed in seeds {
            let mut v = seed;
            for prev in &cols {
                let c = dot(v, *prev);
                for i in 0..3 {
                    v[i] -= c * prev[i];
                }
            }
            let n = dot(v, v).sqrt();
            for x in &mut v {
                *x /= n;
            }
            cols.push(v);
        }
        let mut frame = [[0.0; 3]; 3];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..3 {
                frame[i][j] = col[i];
            }
        }
        CanonicalDensity { pinf: HPoint2::new(0.0, 0.0, 1.0).unwrap(), frame, omega }
    }

    /// Frame coordinates of a plane vector.
    fn frame_coords(&self, v: [f64; 3]) -> [f64; 3] {
        solve3(self.frame, v)
    }

    fn frame_apply(&self, c: [f64; 3]) -> [f64; 3] {
        let f = &self.frame;
        [
            f[0][0] * c[0] + f[0][1] * c[1] + f[0][2] * c[2],
            f[1][0] * c[0] + f[1][1] * c[1] + f[1][2] * c[2],
            f[2][0] * c[0] + f[2][1] * c[1] + f[2][2] * c[2],
        ]
    }
}

pub(crate) fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> [f64; 3] {
    let det = crate::projgeom::det3(&m);
    let mut out = [0.0; 3];
    for k in 0..3 {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = b[i];
        }
        out[k] = crate::projgeom::det3(&mk) / det;
    }
    out
}

/// Which covering chart a point uses, by the dominant frame coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CoverChart {
    A,
    APrime,
}

/// The fiber chart at a base point: the representative plane vector and the
/// tangent representatives of the two basis directions.
#[derive(Debug, Clone)]
pub struct FiberChart {
    /// Chart representative of the base point (frame-normalized).
    pub rep: [f64; 3],
    /// Tangent representative of the angular basis vector.
    pub e1: [f64; 3],
    /// Tangent representative of the instantaneous basis vector (toward the
    /// vanishing point).
    pub e2: [f64; 3],
}

impl FiberChart {
    /// Chart coordinate of a fiber direction: the direction spanned by a
    /// tangent representative w (any representative scale) has coordinate
    /// lambda with direction = P(R(e1 + lambda e2)).
    pub fn fiber_coord(&self, w: [f64; 3]) -> Result<f64, MobiusError> {
        // solve w = alpha e1 + beta e2 + gamma rep
        let m = [
            [self.e1[0], self.e2[0], self.rep[0]],
            [self.e1[1], self.e2[1], self.rep[1]],
            [self.e1[2], self.e2[2], self.rep[2]],
        ];
        let c = solve3(m, w);
        if c[0].abs() < 1e-12 * (c[1].abs() + c[2].abs()).max(1.0) {
            return Err(MobiusError::AtVanishingPoint); // instantaneous direction
        }
        Ok(c[1] / c[0])
    }

    /// A tangent representative of the direction with the given fiber
    /// coordinate.
    pub fn direction(&self, lambda: f64) -> [f64; 3] {
        [
            self.e1[0] + lambda * self.e2[0],
            self.e1[1] + lambda * self.e2[1],
            self.e1[2] + lambda * self.e2[2],
        ]
    }
}

/// The canonical density restricted to the fiber over `q`: the chart data
/// and the constant scalar representative (the orientation sign) on the full
/// chart line. The excluded chart direction is the instantaneous one, so the
/// density lives exactly on the non-instantaneous directions.
pub fn canonical_fiber_density(
    cd: &CanonicalDensity,
    q: &HPoint2,
) -> Result<(FiberChart, FiberDensity), MobiusError> {
    let chart = fiber_chart(cd, q)?;
    let density = FiberDensity::constant(
        ChartDomain::Interval(f64::NEG_INFINITY, f64::INFINITY),
        cd.omega as f64,
    );
    Ok((chart, density))
}

fn fiber_chart(cd: &CanonicalDensity, q: &HPoint2) -> Result<FiberChart, MobiusError> {
    let c = cd.frame_coords(q.coords());
    let r = c[1].hypot(c[2]);
    if r < 1e-13 * c[0].abs().max(1e-300) {
        return Err(MobiusError::AtVanishingPoint);
    }
    // chart A: dominant eps3 (the cosine slot); chart A': dominant eps2
    if c[2].abs() >= c[1].abs() {
        let s = if c[2] >= 0.0 { 1.0 } else { -1.0 };
        let rep_f = [s * c[0] / r, s * c[1] / r, s * c[2] / r];
        let (sin_t, cos_t) = (rep_f[1], rep_f[2]);
        Ok(FiberChart {
            rep: cd.frame_apply(rep_f),
            e1: cd.frame_apply([0.0, cos_t, -sin_t]),
            e2: cd.frame_apply([1.0, 0.0, 0.0]),
        })
    } else {
        let s = if c[1] >= 0.0 { -1.0 } else { 1.0 };
        let rep_f = [s * c[0] / r, s * c[1] / r, s * c[2] / r];
        // rep = x' eps1 - cos t' eps2 + sin t' eps3
        let (cos_t, sin_t) = (-rep_f[1], rep_f[2]);
        Ok(FiberChart {
            rep: cd.frame_apply(rep_f),
            e1: cd.frame_apply([0.0, sin_t, cos_t]),
            e2: cd.frame_apply([1.0, 0.0, 0.0]),
        })
    }
}

/// Transport the fiber orientation along a loop of homogeneous samples and
/// return the holonomy sign: -1 when the loop reverses fiber orientation.
///
/// The loop must avoid the vanishing point. Winding is measured in the
/// simultaneity pencil: a projective line (closed through the chart's
/// infinity) winds once and flips the orientation; an affine circle around
/// the vanishing point winds twice and transports trivially.
pub fn orientation_holonomy(
    cd: &CanonicalDensity,
    samples: &[HPoint2],
) -> Result<i8, MobiusError> {
    if samples.len() < 3 {
        return Err(MobiusError::SamplingTooCoarse);
    }
    let chart_of = |p: &HPoint2| -> Result<CoverChart, MobiusError> {
        let c = cd.frame_coords(p.coords());
        if c[1].hypot(c[2]) < 1e-13 * c[0].abs().max(1e-300) {
            return Err(MobiusError::AtVanishingPoint);
        }
        Ok(if c[2].abs() >= c[1].abs() { CoverChart::A } else { CoverChart::APrime })
    };
    // transition sign where both charts hold: +1 on the overlap component
    // with opposite eps2/eps3 coordinate signs, -1 where they agree
    let overlap_sign = |p: &HPoint2| -> Result<i8, MobiusError> {
        let c = cd.frame_coords(p.coords());
        let prod = c[1] * c[2];
        if prod == 0.0 {
            return Err(MobiusError::OnChartSeam);
        }
        Ok(if prod < 0.0 { 1 } else { -1 })
    };
    let mut sign: i8 = 1;
    let mut current = chart_of(&samples[0])?;
    let start = current;
    for i in 1..samples.len() {
        let next = chart_of(&samples[i])?;
        if next != current {
            // switch at the previous sample, which must sit in the overlap
            sign *= overlap_sign(&samples[i - 1])?;
            current = next;
        }
    }
    if current != start {
        sign *= overlap_sign(samples.last().unwrap())?;
    }
    Ok(sign)
}

/// Conic data: the symmetric matrix of the quadratic form together with the
/// two tangency points and the pole where their tangents meet.
#[derive(Debug, Clone)]
pub struct Conic {
    pub matrix: [[f64; 3]; 3],
    pub p1: HPoint2,
    pub p2: HPoint2,
    pub pole: HPoint2,
}

impl Conic {
    /// The conic through `q` tangent at p1 and p2 to the lines joining them
    /// with the pole: the member of the pencil `l1 l2 - lambda l12^2`
    /// through `q`.
    pub fn through_tangency(
        p1: &HPoint2,
        p2: &HPoint2,
        pole: &HPoint2,
        q: &HPoint2,
    ) -> Result<Conic, GeomError> {
        let l1 = PLine::through(pole, p1)?;
        let l2 = PLine::through(pole, p2)?;
        let l12 = PLine::through(p1, p2)?;
        let d12 = l12.incidence(q);
        if d12.abs() < 1e-14 {
            return Err(GeomError::DegenerateTuple("q lies on the chord".into()));
        }
        let lambda = l1.incidence(q) * l2.incidence(q) / (d12 * d12);
        let a = l1.covector();
        let b = l2.covector();
        let c = l12.covector();
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = 0.5 * (a[i] * b[j] + a[j] * b[i]) - lambda * c[i] * c[j];
            }
        }
        Ok(Conic { matrix: m, p1: *p1, p2: *p2, pole: *pole })
    }

    pub fn value(&self, p: &HPoint2) -> f64 {
        let x = p.coords();
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                acc += x[i] * self.matrix[i][j] * x[j];
            }
        }
        acc
    }

    /// The tangent line at a point of the conic (the polar).
    pub fn tangent_at(&self, q: &HPoint2) -> Result<PLine, GeomError> {
        let x = q.coords();
        let mut c = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i] += self.matrix[i][j] * x[j];
            }
        }
        PLine::new(c[0], c[1], c[2])
    }
}

/// Cross-ratio of four concurrent lines, computed by parametrizing the
/// pencil with a fixed basis of covectors vanishing at the common point.
pub fn pencil_cross_ratio(
    q: &HPoint2,
    lines: [&PLine; 4],
) -> Result<crate::projgeom::ExtReal, GeomError> {
    let x = q.coords();
    // two independent covectors vanishing at q, from the cross products
    // with the two least-aligned coordinate axes
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut idx: Vec<usize> = (0..3).collect();
    idx.sort_by(|&a, &b| x[a].abs().partial_cmp(&x[b].abs()).unwrap());
    let cross = |a: [f64; 3]| {
        [
            x[1] * a[2] - x[2] * a[1],
            x[2] * a[0] - x[0] * a[2],
            x[0] * a[1] - x[1] * a[0],
        ]
    };
    let m1 = cross(axes[idx[0]]);
    let m2 = cross(axes[idx[1]]);
    let mut params = Vec::with_capacity(4);
    for l in lines {
        let c = l.covector();
        // solve c ~ alpha m1 + beta m2 on the least-degenerate coordinate pair
        let mut best_pair = (0usize, 1usize);
        let mut best_det = 0.0f64;
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let det = m1[i] * m2[j] - m1[j] * m2[i];
            if det.abs() > best_det.abs() {
                best_det = det;
                best_pair = (i, j);
            }
        }
        let (i, j) = best_pair;
        let alpha = (c[i] * m2[j] - c[j] * m2[i]) / best_det;
        let beta = (m1[i] * c[j] - m1[j] * c[i]) / best_det;
        params.push(HPoint1::new(alpha, beta)?);
    }
    crate::projgeom::cross_ratio(&params[0], &params[1], &params[2], &params[3])
}

/// Residual of the harmonic property of the conic: the tangent at `q` is
/// the harmonic conjugate of the simultaneity line through `q` with respect
/// to the two lines joining `q` with the tangency points. Returns the
/// distance of the pencil cross-ratio from -1.
pub fn conic_harmonic_check(conic: &Conic, q: &HPoint2) -> Result<f64, GeomError> {
    if q.approx_eq(&conic.p1) || q.approx_eq(&conic.p2) {
        return Err(GeomError::DegenerateTuple("q at a tangency point".into()));
    }
    let t = conic.tangent_at(q)?;
    let linf = PLine::through(q, &conic.pole)?;
    let l1 = PLine::through(q, &conic.p1)?;
    let l2 = PLine::through(q, &conic.p2)?;
    let cr = pencil_cross_ratio(q, [&t, &linf, &l1, &l2])?;
    match cr {
        crate::projgeom::ExtReal::Finite(v) => Ok((v + 1.0).abs()),
        crate::projgeom::ExtReal::Infinity => Ok(f64::INFINITY),
    }
}
