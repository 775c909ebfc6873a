//! Projective geometry of the line P(E) (dim E = 2) and the plane P(V)
//! (dim V = 3): homogeneous points and lines, cross-ratio, harmonic
//! conjugates, charts, projective maps and their lifts to the slope bundle.

mod lift;

pub use jet_test::{projective_jet_test, Jet2Map, JetTestError, JET_TEST_TOL};
pub use lift::{apply_lift, lift_projmap, LiftedMap};

use thiserror::Error;

/// Tolerance for canonical-form equality of homogeneous coordinates.
pub const HOM_EQ_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("degenerate tuple: {0}")]
    DegenerateTuple(String),
    #[error("point lies outside the chart: {0}")]
    OutOfChart(String),
    #[error("map sends the point to infinity: denominator {0:e}")]
    AtInfinity(f64),
    #[error("map is not projective: relative residual {residual:e} exceeds tolerance {tol:e}")]
    NotProjective { residual: f64, tol: f64 },
    #[error("matrix is singular: determinant {0:e}")]
    Singular(f64),
}

/// An extended real: the value set of the cross-ratio.
///
/// Infinity is a first-class tagged value; intermediate arithmetic stays on
/// homogeneous determinants and never produces float infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn approx_eq(self, other: ExtReal, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a - b).abs() <= tol,
            (ExtReal::Infinity, ExtReal::Infinity) => true,
            _ => false,
        }
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinity => write!(f, "inf"),
        }
    }
}

fn canonicalize<const N: usize>(coords: [f64; N]) -> Option<[f64; N]> {
    let mut max = 0.0f64;
    for c in coords {
        max = max.max(c.abs());
    }
    if max == 0.0 || !max.is_finite() {
        return None;
    }
    let mut out = coords;
    for c in &mut out {
        *c /= max;
    }
    // first component of modulus above tolerance fixes the sign
    for c in out {
        if c.abs() > HOM_EQ_TOL {
            if c < 0.0 {
                for d in &mut out {
                    *d = -*d;
                }
            }
            break;
        }
    }
    Some(out)
}

/// A point of the projective line, as homogeneous coordinates with respect to
/// a declared basis {e1, e2}: the point is P(R(h0 e1 + h1 e2)).
///
/// Stored in canonical form: max-abs component 1, first nonzero component
/// positive. Equality is equality of canonical forms within [`HOM_EQ_TOL`].
#[derive(Debug, Clone, Copy)]
pub struct HPoint1 {
    coords: [f64; 2],
}

impl HPoint1 {
    pub fn new(h0: f64, h1: f64) -> Result<HPoint1, GeomError> {
        canonicalize([h0, h1])
            .map(|coords| HPoint1 { coords })
            .ok_or_else(|| GeomError::DegenerateTuple("zero homogeneous pair".into()))
    }

    /// The affine point `x`, i.e. [1 : x].
    pub fn affine(x: f64) -> HPoint1 {
        HPoint1::new(1.0, x).expect("finite affine coordinate")
    }

    /// The point at infinity of the chart, [0 : 1] = P(R e2).
    pub fn infinity() -> HPoint1 {
        HPoint1 { coords: [0.0, 1.0] }
    }

    pub fn coords(&self) -> [f64; 2] {
        self.coords
    }

    /// Chart value [h0 : h1] -> h1/h0, infinity when h0 = 0.
    pub fn chart_value(&self) -> ExtReal {
        if self.coords[0].abs() <= HOM_EQ_TOL {
            ExtReal::Infinity
        } else {
            ExtReal::Finite(self.coords[1] / self.coords[0])
        }
    }

    pub fn approx_eq(&self, other: &HPoint1) -> bool {
        let a = self.coords;
        let b = other.coords;
        (a[0] - b[0]).abs() <= HOM_EQ_TOL && (a[1] - b[1]).abs() <= HOM_EQ_TOL
    }
}

/// 2x2 determinant of a pair of homogeneous line points.
pub fn det2(a: &HPoint1, b: &HPoint1) -> f64 {
    a.coords[0] * b.coords[1] - a.coords[1] * b.coords[0]
}

/// A point of the projective plane, homogeneous triple.
#[derive(Debug, Clone, Copy)]
pub struct HPoint2 {
    coords: [f64; 3],
}

impl HPoint2 {
    pub fn new(h0: f64, h1: f64, h2: f64) -> Result<HPoint2, GeomError> {
        canonicalize([h0, h1, h2])
            .map(|coords| HPoint2 { coords })
            .ok_or_else(|| GeomError::DegenerateTuple("zero homogeneous triple".into()))
    }

    pub fn coords(&self) -> [f64; 3] {
        self.coords
    }

    pub fn approx_eq(&self, other: &HPoint2) -> bool {
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| (a - b).abs() <= HOM_EQ_TOL)
    }
}

/// A projective line of the plane, as a homogeneous covector; a point lies on
/// the line iff the dot product of coordinates vanishes.
#[derive(Debug, Clone, Copy)]
pub struct PLine {
    covector: [f64; 3],
}

impl PLine {
    pub fn new(c0: f64, c1: f64, c2: f64) -> Result<PLine, GeomError> {
        canonicalize([c0, c1, c2])
            .map(|covector| PLine { covector })
            .ok_or_else(|| GeomError::DegenerateTuple("zero covector".into()))
    }

    pub fn covector(&self) -> [f64; 3] {
        self.covector
    }

    /// The line through two distinct points (cross product).
    pub fn through(p: &HPoint2, q: &HPoint2) -> Result<PLine, GeomError> {
        let a = p.coords;
        let b = q.coords;
        PLine::new(
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
        .map_err(|_| GeomError::DegenerateTuple("line through coincident points".into()))
    }

    /// Intersection of two distinct lines.
    pub fn meet(&self, other: &PLine) -> Result<HPoint2, GeomError> {
        let a = self.covector;
        let b = other.covector;
        HPoint2::new(
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
        .map_err(|_| GeomError::DegenerateTuple("meet of coincident lines".into()))
    }

    pub fn incidence(&self, p: &HPoint2) -> f64 {
        self.covector
            .iter()
            .zip(&p.coords)
            .map(|(c, x)| c * x)
            .sum()
    }

    pub fn contains(&self, p: &HPoint2) -> bool {
        self.incidence(p).abs() <= 10.0 * HOM_EQ_TOL
    }
}

/// A projective transformation of the plane: a nonsingular 3x3 matrix mod
/// scale, acting on homogeneous coordinates.
#[derive(Debug, Clone, Copy)]
pub struct ProjMap2 {
    matrix: [[f64; 3]; 3],
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl ProjMap2 {
    pub fn new(matrix: [[f64; 3]; 3]) -> Result<ProjMap2, GeomError> {
        let d = det3(&matrix);
        if d.abs() < 1e-14 {
            return Err(GeomError::Singular(d));
        }
        Ok(ProjMap2 { matrix })
    }

    pub fn identity() -> ProjMap2 {
        ProjMap2 { matrix: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    pub fn matrix(&self) -> &[[f64; 3]; 3] {
        &self.matrix
    }

    pub fn det(&self) -> f64 {
        det3(&self.matrix)
    }

    pub fn apply(&self, p: &HPoint2) -> HPoint2 {
        let x = p.coords;
        let m = &self.matrix;
        HPoint2::new(
            m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
            m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
            m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2],
        )
        .expect("nonsingular matrix maps nonzero vectors to nonzero vectors")
    }

    /// Push a line forward: covectors transform by the inverse transpose;
    /// up to scale that is the cofactor action.
    pub fn apply_line(&self, l: &PLine) -> PLine {
        let inv = self.inverse();
        let c = l.covector;
        let m = &inv.matrix;
        PLine::new(
            c[0] * m[0][0] + c[1] * m[1][0] + c[2] * m[2][0],
            c[0] * m[0][1] + c[1] * m[1][1] + c[2] * m[2][1],
            c[0] * m[0][2] + c[1] * m[1][2] + c[2] * m[2][2],
        )
        .expect("nonsingular")
    }

    pub fn compose(&self, other: &ProjMap2) -> ProjMap2 {
        let a = &self.matrix;
        let b = &other.matrix;
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    m[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        ProjMap2 { matrix: m }
    }

    pub fn inverse(&self) -> ProjMap2 {
        let m = &self.matrix;
        let d = det3(m);
        let mut inv = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                // cofactor expansion, transposed
                let r0 = (i + 1) % 3;
                let r1 = (i + 2) % 3;
                let c0 = (j + 1) % 3;
                let c1 = (j + 2) % 3;
                inv[j][i] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) / d;
            }
        }
        ProjMap2 { matrix: inv }
    }

    /// Action on a projective line P(E): a 2x2 nonsingular matrix on
    /// homogeneous pairs.
    pub fn act_on_line(matrix: [[f64; 2]; 2], p: &HPoint1) -> Result<HPoint1, GeomError> {
        let d = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if d.abs() < 1e-14 {
            return Err(GeomError::Singular(d));
        }
        let x = p.coords;
        HPoint1::new(
            matrix[0][0] * x[0] + matrix[0][1] * x[1],
            matrix[1][0] * x[0] + matrix[1][1] * x[1],
        )
    }
}

/// Cross-ratio [a, b, c, d] of four points of the projective line,
/// normalized so that [[1:x], [1:1], [1:0], [0:1]] = x.
///
/// Computed as (det(a,c) det(b,d)) / (det(a,d) det(b,c)) on homogeneous
/// pairs; infinity is an admissible value.
pub fn cross_ratio(a: &HPoint1, b: &HPoint1, c: &HPoint1, d: &HPoint1) -> Result<ExtReal, GeomError> {
    // the tuple is admissible iff no level set has more than two points
    let pts = [a, b, c, d];
    for i in 0..4 {
        for j in (i + 1)..4 {
            for k in (j + 1)..4 {
                if pts[i].approx_eq(pts[j]) && pts[j].approx_eq(pts[k]) {
                    return Err(GeomError::DegenerateTuple(
                        "three of the four points coincide".into(),
                    ));
                }
            }
        }
    }
    let num = det2(a, c) * det2(b, d);
    let den = det2(a, d) * det2(b, c);
    if den == 0.0 {
        if num == 0.0 {
            return Err(GeomError::DegenerateTuple("cross-ratio 0/0".into()));
        }
        return Ok(ExtReal::Infinity);
    }
    Ok(ExtReal::Finite(num / den))
}

/// The harmonic conjugate of `p` with respect to the pair {x, y}: the point
/// B with [B, p, x, y] = -1.
///
/// In homogeneous vectors B = det(p, y) x + det(p, x) y.
pub fn harmonic_conjugate(
    p: &HPoint1,
    x: &HPoint1,
    y: &HPoint1,
) -> Result<HPoint1, GeomError> {
    if x.approx_eq(y) {
        return Err(GeomError::DegenerateTuple("x = y".into()));
    }
    if p.approx_eq(x) || p.approx_eq(y) {
        return Err(GeomError::DegenerateTuple("p coincides with x or y".into()));
    }
    let alpha = det2(p, y);
    let beta = det2(p, x);
    HPoint1::new(
        alpha * x.coords[0] + beta * y.coords[0],
        alpha * x.coords[1] + beta * y.coords[1],
    )
}

/// A basis {e1, e2} of E, each vector in coordinates of the ambient basis.
#[derive(Debug, Clone, Copy)]
pub struct Basis1 {
    pub e1: [f64; 2],
    pub e2: [f64; 2],
}

impl Basis1 {
    pub fn standard() -> Basis1 {
        Basis1 { e1: [1.0, 0.0], e2: [0.0, 1.0] }
    }

    pub fn det(&self) -> f64 {
        self.e1[0] * self.e2[1] - self.e1[1] * self.e2[0]
    }
}

/// Chart of the projective line determined by a basis: the inverse sends
/// x to P(R(e1 + x e2)).
pub fn chart_inv(basis: &Basis1, x: f64) -> HPoint1 {
    HPoint1::new(
        basis.e1[0] + x * basis.e2[0],
        basis.e1[1] + x * basis.e2[1],
    )
    .expect("basis vectors independent")
}

/// Chart map: the coordinate of `q` in the chart of `basis`; fails on the
/// excluded direction P(R e2).
pub fn chart_map(basis: &Basis1, q: &HPoint1) -> Result<f64, GeomError> {
    // solve c1 e1 + c2 e2 = q
    let d = basis.det();
    if d.abs() < 1e-14 {
        return Err(GeomError::Singular(d));
    }
    let q = q.coords();
    let c1 = (q[0] * basis.e2[1] - q[1] * basis.e2[0]) / d;
    let c2 = (basis.e1[0] * q[1] - basis.e1[1] * q[0]) / d;
    if c1.abs() <= HOM_EQ_TOL * c2.abs().max(1.0) {
        return Err(GeomError::OutOfChart("q = P(R e2)".into()));
    }
    Ok(c2 / c1)
}

/// The tautologic section through `e` over the chart that excludes `l1`:
/// the unique vector v on the line of `q` with v - e on the line of `l1`.
///
/// Scaling e scales the output.
pub fn tautologic_section(
    e: [f64; 2],
    q: &HPoint1,
    l1: &HPoint1,
) -> Result<[f64; 2], GeomError> {
    if q.approx_eq(l1) {
        return Err(GeomError::OutOfChart("q = P(L1)".into()));
    }
    // v = c q, v - e = d l1  =>  c q - d l1 = e, a 2x2 solve
    let qv = q.coords();
    let lv = l1.coords();
    let det = qv[0] * (-lv[1]) - (-lv[0]) * qv[1];
    if det.abs() < 1e-14 {
        return Err(GeomError::OutOfChart("q and L1 collinear".into()));
    }
    // e on the line of l1 means e is not a valid anchor
    let e_on_l1 = (e[0] * lv[1] - e[1] * lv[0]).abs() <= HOM_EQ_TOL * norm2(e).max(1.0);
    if e_on_l1 {
        return Err(GeomError::OutOfChart("anchor e lies in L1".into()));
    }
    let c = (e[0] * (-lv[1]) - (-lv[0]) * e[1]) / det;
    Ok([c * qv[0], c * qv[1]])
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn cross_ratio_normalization() {
        // [x-point, 1, 0, inf] = x
        for x in [-3.0, -0.5, 0.25, 2.0, 7.0] {
            let v = cross_ratio(
                &HPoint1::affine(x),
                &HPoint1::affine(1.0),
                &HPoint1::affine(0.0),
                &HPoint1::infinity(),
            )
            .unwrap();
            assert!(v.approx_eq(ExtReal::Finite(x), 1e-12), "{v} vs {x}");
        }
    }

    #[test]
    fn cross_ratio_first_equals_third_is_zero() {
        let a = HPoint1::affine(2.0);
        let v = cross_ratio(&a, &HPoint1::affine(3.0), &a, &HPoint1::affine(5.0)).unwrap();
        assert_eq!(v, ExtReal::Finite(0.0));
    }

    #[test]
    fn cross_ratio_affine_example() {
        // [2, 3, 1, inf] = ((2-1)(3-inf))/((2-inf)(3-1)) -> (2-1)/(3-1) = 0.5
        let v = cross_ratio(
            &HPoint1::affine(2.0),
            &HPoint1::affine(3.0),
            &HPoint1::affine(1.0),
            &HPoint1::infinity(),
        )
        .unwrap();
        assert!(v.approx_eq(ExtReal::Finite(0.5), 1e-15));
    }

    #[test]
    fn cross_ratio_degenerate() {
        let a = HPoint1::affine(1.0);
        assert!(cross_ratio(&a, &a, &a, &HPoint1::affine(2.0)).is_err());
    }

    #[test]
    fn cross_ratio_projective_invariance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut done = 0;
        while done < 100 {
            let m: [[f64; 2]; 2] = [
                [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
                [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
            ];
            if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() < 0.1 {
                continue;
            }
            let pts: Vec<HPoint1> = (0..4)
                .map(|_| HPoint1::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect::<Result<_, _>>()
                .unwrap();
            let mut distinct = true;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    if pts[i].approx_eq(&pts[j]) {
                        distinct = false;
                    }
                }
            }
            if !distinct {
                continue;
            }
            let before = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
            let img: Vec<HPoint1> = pts
                .iter()
                .map(|p| ProjMap2::act_on_line(m, p).unwrap())
                .collect();
            let after = cross_ratio(&img[0], &img[1], &img[2], &img[3]).unwrap();
            match (before, after) {
                (ExtReal::Finite(u), ExtReal::Finite(v)) => {
                    assert!(
                        (u - v).abs() <= 1e-12 * u.abs().max(1.0),
                        "{u} vs {v}"
                    );
                }
                (u, v) => assert!(u.approx_eq(v, 1e-9), "{u} vs {v}"),
            }
            done += 1;
        }
    }

    #[test]
    fn cross_ratio_swap_inverse() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let xs: Vec<f64> = (0..4).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let p: Vec<HPoint1> = xs.iter().map(|x| HPoint1::affine(*x)).collect();
            if xs.windows(2).any(|w| (w[0] - w[1]).abs() < 1e-3) {
                continue;
            }
            let u = cross_ratio(&p[0], &p[1], &p[2], &p[3]).unwrap();
            let v = cross_ratio(&p[0], &p[1], &p[3], &p[2]).unwrap();
            if let (Some(u), Some(v)) = (u.finite(), v.finite()) {
                if u != 0.0 && v != 0.0 {
                    assert!((u * v - 1.0).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn harmonic_midpoint() {
        // conjugate of infinity w.r.t. {0, 2} is the midpoint 1
        let b = harmonic_conjugate(
            &HPoint1::infinity(),
            &HPoint1::affine(0.0),
            &HPoint1::affine(2.0),
        )
        .unwrap();
        assert!(b.approx_eq(&HPoint1::affine(1.0)));
        // symmetric pair around 0
        let b = harmonic_conjugate(
            &HPoint1::infinity(),
            &HPoint1::affine(-3.0),
            &HPoint1::affine(3.0),
        )
        .unwrap();
        assert!(b.approx_eq(&HPoint1::affine(0.0)));
    }

    #[test]
    fn harmonic_of_zero_is_infinity() {
        let b = harmonic_conjugate(
            &HPoint1::affine(0.0),
            &HPoint1::affine(1.0),
            &HPoint1::affine(-1.0),
        )
        .unwrap();
        assert!(b.approx_eq(&HPoint1::infinity()));
        let cr = cross_ratio(
            &b,
            &HPoint1::affine(0.0),
            &HPoint1::affine(1.0),
            &HPoint1::affine(-1.0),
        )
        .unwrap();
        assert!(cr.approx_eq(ExtReal::Finite(-1.0), 1e-12));
    }

    #[test]
    fn harmonic_involution() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let xs: f64 = rng.gen_range(-4.0..4.0);
            let ys: f64 = rng.gen_range(-4.0..4.0);
            let ps: f64 = rng.gen_range(-4.0..4.0);
            // keep away from the degenerate configurations that amplify
            // rounding in the double conjugation
            if (xs - ys).abs() < 0.2 || (ps - xs).abs() < 0.2 || (ps - ys).abs() < 0.2 {
                continue;
            }
            let (x, y, p) = (HPoint1::affine(xs), HPoint1::affine(ys), HPoint1::affine(ps));
            let b = harmonic_conjugate(&p, &x, &y).unwrap();
            if b.approx_eq(&x) || b.approx_eq(&y) {
                continue;
            }
            let back = harmonic_conjugate(&b, &x, &y).unwrap();
            let d = [back.coords()[0] - p.coords()[0], back.coords()[1] - p.coords()[1]];
            assert!(
                d[0].abs().max(d[1].abs()) < 1e-10,
                "{back:?} vs {p:?}"
            );
        }
    }

    #[test]
    fn chart_round_trip() {
        let basis = Basis1::standard();
        assert!(chart_inv(&basis, 0.0).approx_eq(&HPoint1::new(1.0, 0.0).unwrap()));
        for x in [-3.0, 0.5, 7.0] {
            let q = chart_inv(&basis, x);
            assert!((chart_map(&basis, &q).unwrap() - x).abs() < 1e-14);
        }
        assert!(matches!(
            chart_map(&basis, &HPoint1::infinity()),
            Err(GeomError::OutOfChart(_))
        ));
    }

    #[test]
    fn chart_transition_law() {
        // e1' = e1, e2' = t12 e1 + t22 e2: x = (t21 + x' t22)/(t11 + x' t12)
        // with the first basis vector unchanged, t11 = 1, t21 = 0.
        let (t12, t22) = (0.7, -1.3);
        let b = Basis1::standard();
        let bp = Basis1 { e1: [1.0, 0.0], e2: [t12, t22] };
        for xp in [-2.0, 0.3, 1.9] {
            let q = chart_inv(&bp, xp);
            let x = chart_map(&b, &q).unwrap();
            let want = (0.0 + xp * t22) / (1.0 + xp * t12);
            assert!((x - want).abs() < 1e-12);
        }
    }

    #[test]
    fn tautologic_section_basics() {
        // basis chart: e = e1, L1 = P(R e2), q = [1:x] -> e1 + x e2
        let e2 = HPoint1::infinity();
        for x in [-2.0, 0.0, 3.0] {
            let v = tautologic_section([1.0, 0.0], &HPoint1::affine(x), &e2).unwrap();
            assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - x).abs() < 1e-14);
        }
        // q = P(R e) returns e itself
        let v = tautologic_section([2.0, 1.0], &HPoint1::new(2.0, 1.0).unwrap(), &e2).unwrap();
        assert!((v[0] - 2.0).abs() < 1e-14 && (v[1] - 1.0).abs() < 1e-14);
        // scaled anchor: e = 2 e1, q = [1:3] -> 2 e1 + 6 e2
        let v = tautologic_section([2.0, 0.0], &HPoint1::affine(3.0), &e2).unwrap();
        assert!((v[0] - 2.0).abs() < 1e-14 && (v[1] - 6.0).abs() < 1e-14);
    }

    #[test]
    fn tautologic_section_scaling() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let e = [rng.gen_range(0.2..2.0), rng.gen_range(-2.0..2.0)];
            let q = HPoint1::affine(rng.gen_range(-3.0..3.0));
            let l1 = HPoint1::new(rng.gen_range(-1.0..1.0), 1.0).unwrap();
            if q.approx_eq(&l1) {
                continue;
            }
            let Ok(v) = tautologic_section(e, &q, &l1) else { continue };
            let c = 3.5;
            let vc = tautologic_section([c * e[0], c * e[1]], &q, &l1).unwrap();
            assert!((vc[0] - c * v[0]).abs() < 1e-10 && (vc[1] - c * v[1]).abs() < 1e-10);
        }
    }
}
