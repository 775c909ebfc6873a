//! The explicit entropic solution: two line pencils separated by hyperbola
//! arcs around the vanishing point.
//!
//! Every placement is normalized to canonical coordinates where the two
//! pencil centers are the axis directions at infinity, the vanishing point
//! is the origin, and the reference point is (1, 1). The defining marks are
//! then q1 = (1, h) with 0 < h < 1 on the right edge and q2 = (g, 1) with
//! g < 0 on the top edge; the shock arcs are pieces of the hyperbolas
//! xy = h and xy = g.

use rayon::prelude::*;
use serde::Serialize;

use crate::projgeom::{lift_projmap, GeomError, HPoint1, HPoint2, PLine, ProjMap2};

use super::{
    canonical_fiber_density, conic_harmonic_check, solve3, CanonicalDensity, Conic, MobiusError,
};

#[derive(Debug, Clone, thiserror::Error)]
pub enum SceneError {
    #[error("incidence constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("point lies on a shock arc")]
    InShockSet {
        minus: Box<SceneValue>,
        plus: Box<SceneValue>,
    },
    #[error("point lies outside the solution domain")]
    OutsideDomain,
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
    #[error(transparent)]
    Density(#[from] crate::density::DensityError),
}

/// Scene input: marked points in the source coordinates.
#[derive(Debug, Clone)]
pub enum ScenePlacement {
    /// The pencil centers at the axis directions at infinity, the vanishing
    /// point at the origin.
    Axes { r: [f64; 2], q1: [f64; 2], q2: [f64; 2] },
    /// All marked points at finite positions.
    Finite {
        p1: [f64; 2],
        p2: [f64; 2],
        pinf: [f64; 2],
        r: [f64; 2],
        q1: [f64; 2],
        q2: [f64; 2],
    },
    /// Fully homogeneous marks.
    General {
        p1: HPoint2,
        p2: HPoint2,
        pinf: HPoint2,
        r: HPoint2,
        q1: HPoint2,
        q2: HPoint2,
    },
}

/// One pencil region of the scene.
#[derive(Debug, Clone, Serialize)]
pub struct SceneRegion {
    pub label: &'static str,
    /// The quadrilateral side the region is adjacent to.
    pub side: &'static str,
    /// Pencil center index: 1 or 2.
    pub center: u8,
    /// Flow multiplier relative to the orientation-induced flow; building a
    /// scene sets +1, tampering flips it.
    pub flow: i8,
}

/// The assembled scene, stored canonically with the normalizing map.
#[derive(Debug, Clone)]
pub struct MobiusScene {
    /// Claimed pencil orientation in the source coordinates.
    pub omega: i8,
    /// Orientation transported to canonical coordinates.
    pub omega_canonical: i8,
    /// Canonical q1 = (1, h), 0 < h < 1.
    pub h: f64,
    /// Canonical q2 = (g, 1), g < 0.
    pub g: f64,
    pub to_canonical: ProjMap2,
    pub from_canonical: ProjMap2,
    pub regions: Vec<SceneRegion>,
    /// Image of the source chart's infinity line, for the far-field region
    /// bookkeeping (None when it is the canonical infinity line).
    far_line: Option<PLine>,
}

const REGION_A: usize = 0;
const REGION_B: usize = 1;
const REGION_C: usize = 2;
const REGION_D: usize = 3;

fn canonical_e(i: usize) -> HPoint2 {
    match i {
        0 => HPoint2::new(1.0, 0.0, 0.0).unwrap(),
        1 => HPoint2::new(0.0, 1.0, 0.0).unwrap(),
        _ => HPoint2::new(0.0, 0.0, 1.0).unwrap(),
    }
}

/// The projective map sending four points in general position to the
/// standard frame (e1, e2, e3, unit point).
fn four_point_normalization(
    p1: &HPoint2,
    p2: &HPoint2,
    p3: &HPoint2,
    unit: &HPoint2,
) -> Result<ProjMap2, SceneError> {
    let m = [
        [p1.coords()[0], p2.coords()[0], p3.coords()[0]],
        [p1.coords()[1], p2.coords()[1], p3.coords()[1]],
        [p1.coords()[2], p2.coords()[2], p3.coords()[2]],
    ];
    let lam = solve3(m, unit.coords());
    if lam.iter().any(|v| v.abs() < 1e-12) {
        return Err(SceneError::ConstraintViolation(
            "the pencil centers, the vanishing point and the reference point are not in general position".into(),
        ));
    }
    let mut n = [[0.0; 3]; 3];
    for i in 0..3 {
        n[i][0] = m[i][0] * lam[0];
        n[i][1] = m[i][1] * lam[1];
        n[i][2] = m[i][2] * lam[2];
    }
    let fwd = ProjMap2::new(n).map_err(SceneError::Geometry)?.inverse();
    Ok(fwd)
}

/// Build and validate a scene from its placement and claimed orientation.
pub fn build_scene(placement: &ScenePlacement, omega: i8) -> Result<MobiusScene, SceneError> {
    let (p1, p2, pinf, r, q1, q2, source_affine) = match placement {
        ScenePlacement::Axes { r, q1, q2 } => (
            canonical_e(0),
            canonical_e(1),
            canonical_e(2),
            HPoint2::new(r[0], r[1], 1.0)?,
            HPoint2::new(q1[0], q1[1], 1.0)?,
            HPoint2::new(q2[0], q2[1], 1.0)?,
            true,
        ),
        ScenePlacement::Finite { p1, p2, pinf, r, q1, q2 } => (
            HPoint2::new(p1[0], p1[1], 1.0)?,
            HPoint2::new(p2[0], p2[1], 1.0)?,
            HPoint2::new(pinf[0], pinf[1], 1.0)?,
            HPoint2::new(r[0], r[1], 1.0)?,
            HPoint2::new(q1[0], q1[1], 1.0)?,
            HPoint2::new(q2[0], q2[1], 1.0)?,
            true,
        ),
        ScenePlacement::General { p1, p2, pinf, r, q1, q2 } => {
            (*p1, *p2, *pinf, *r, *q1, *q2, false)
        }
    };
    if pinf.coords()[2].abs() < 1e-12 {
        return Err(SceneError::ConstraintViolation(
            "the vanishing point must be affine in the source chart".into(),
        ));
    }
    let mut s = four_point_normalization(&p1, &p2, &pinf, &r)?;
    let affine = |p: &HPoint2, s: &ProjMap2| -> Result<[f64; 2], SceneError> {
        let img = s.apply(p);
        let c = img.coords();
        if c[2].abs() < 1e-10 {
            return Err(SceneError::ConstraintViolation(
                "a defining mark normalizes to infinity".into(),
            ));
        }
        Ok([c[0] / c[2], c[1] / c[2]])
    };
    let q1c = affine(&q1, &s)?;
    let q2c = affine(&q2, &s)?;
    let on_right = (q1c[0] - 1.0).abs() < 1e-9;
    let on_top = (q2c[1] - 1.0).abs() < 1e-9;
    if !on_right {
        return Err(SceneError::ConstraintViolation(format!(
            "q1 must lie on the line joining the first foot and the reference point (normalized x = {}, expected 1)",
            q1c[0]
        )));
    }
    if !on_top {
        return Err(SceneError::ConstraintViolation(format!(
            "q2 must lie on the line joining the reference point and the first center (normalized y = {}, expected 1)",
            q2c[1]
        )));
    }
    let (h0, g0) = (q1c[1], q2c[0]);
    let standard = 0.0 < h0 && h0 < 1.0 && g0 < 0.0;
    let mirrored = h0 < 0.0 && 0.0 < g0 && g0 < 1.0;
    let (h, g, mirror) = if standard {
        (h0, g0, false)
    } else if mirrored {
        (g0, h0, true)
    } else {
        return Err(SceneError::ConstraintViolation(format!(
            "the marks are not in an admissible position: q1 height {h0}, q2 abscissa {g0} \
             (expected 0 < height < 1 and abscissa < 0, or the mirrored placement)"
        )));
    };
    if mirror {
        // swap the two pencil centers: (X, Y, W) -> (Y, X, W)
        let swap = ProjMap2::new([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        s = swap.compose(&s);
    }
    // orientation transport: compare the pencil-winding sense at the
    // vanishing point before and after the normalization
    let pinf_aff = [pinf.coords()[0] / pinf.coords()[2], pinf.coords()[1] / pinf.coords()[2]];
    let lifted = lift_projmap(&s);
    let mut sign_acc = 0i32;
    for (dx, dy, wx, wy) in [
        (1.0, 0.0, 0.0, 1.0),
        (0.0, 1.0, -1.0, 0.0),
        (-1.0, 0.0, 0.0, -1.0),
        (0.7, 0.7, -0.7, 0.7),
    ] {
        let delta = 1e-3;
        let z0 = [pinf_aff[0] + delta * dx, pinf_aff[1] + delta * dy];
        // (z0 - pinf) x w = delta * (dx*wy - dy*wx) = delta > 0 by choice
        let Ok(j) = lifted.base_jacobian(z0[0], z0[1]) else { continue };
        let img = s.apply(&HPoint2::new(z0[0], z0[1], 1.0)?);
        let c = img.coords();
        if c[2].abs() < 1e-12 {
            continue;
        }
        let za = [c[0] / c[2], c[1] / c[2]];
        let w1 = [j[0][0] * wx + j[0][1] * wy, j[1][0] * wx + j[1][1] * wy];
        let cross = za[0] * w1[1] - za[1] * w1[0];
        sign_acc += if cross > 0.0 { 1 } else { -1 };
    }
    if sign_acc.abs() < 3 {
        return Err(SceneError::ConstraintViolation(
            "cannot determine the orientation transport of the normalization".into(),
        ));
    }
    let omega_canonical = omega * if sign_acc > 0 { 1 } else { -1 };
    let from_canonical = s.inverse();
    // image of the source infinity line, which splits the horizontal-pencil
    // region into its near and far pieces for the finite placement
    let far_line = if source_affine {
        let linf = PLine::new(0.0, 0.0, 1.0).unwrap();
        let img = s.inverse(); // covectors map by the inverse transpose of S^{-1} = S^T
        let _ = img;
        let c = linf.covector();
        let m = from_canonical.matrix();
        // (S^{-1})^T acting on the covector: l' = l . S^{-1}
        let lc = [
            c[0] * m[0][0] + c[1] * m[1][0] + c[2] * m[2][0],
            c[0] * m[0][1] + c[1] * m[1][1] + c[2] * m[2][1],
            c[0] * m[0][2] + c[1] * m[1][2] + c[2] * m[2][2],
        ];
        let line = PLine::new(lc[0], lc[1], lc[2]).ok();
        // drop it when it is the canonical infinity line (axes placement)
        line.filter(|l| {
            let v = l.covector();
            v[0].abs() > 1e-9 || v[1].abs() > 1e-9
        })
    } else {
        None
    };
    let regions = vec![
        SceneRegion { label: "A", side: "[p2,q1]", center: 2, flow: 1 },
        SceneRegion { label: "B", side: "[q1,q2]", center: 1, flow: 1 },
        SceneRegion { label: "C", side: "[q2,p1]", center: 2, flow: 1 },
        SceneRegion { label: "D", side: "[p1,p2]", center: 1, flow: 1 },
    ];
    Ok(MobiusScene {
        omega,
        omega_canonical,
        h,
        g,
        to_canonical: s,
        from_canonical,
        regions,
        far_line,
    })
}

impl MobiusScene {
    /// Flip the flow of one region (by index into `regions`): a deliberately
    /// mis-oriented scene for negative verification.
    pub fn tamper_flow(&mut self, region: usize) {
        self.regions[region].flow = -self.regions[region].flow;
    }

    /// The two shock conics in canonical coordinates.
    pub fn conics(&self) -> (Conic, Conic) {
        let p1 = canonical_e(0);
        let p2 = canonical_e(1);
        let pole = canonical_e(2);
        let c1 = Conic::through_tangency(&p1, &p2, &pole, &HPoint2::new(1.0, self.h, 1.0).unwrap())
            .expect("canonical marks are nondegenerate");
        let c2 = Conic::through_tangency(&p1, &p2, &pole, &HPoint2::new(self.g, 1.0, 1.0).unwrap())
            .expect("canonical marks are nondegenerate");
        (c1, c2)
    }

    /// Height of the segment chord at a canonical abscissa.
    fn segline(&self, x: f64) -> f64 {
        // through (1, h) and (g, 1)
        self.h + (x - 1.0) * (1.0 - self.h) / (self.g - 1.0)
    }

    /// Classify a canonical affine point.
    fn classify(&self, x: f64, y: f64, arc_tol: f64) -> Classification {
        // the excluded neighborhood of the vanishing point
        if x < 1.0 && y < 1.0 && y < self.segline(x) {
            return Classification::Excluded;
        }
        let f1 = x * y - self.h;
        let f2 = x * y - self.g;
        let scale = (x * x + y * y).max(1.0);
        if x >= 1.0 - 1e-12 && f1.abs() <= arc_tol * scale {
            return Classification::OnArc(0);
        }
        if y >= 1.0 - 1e-12 && f2.abs() <= arc_tol * scale {
            return Classification::OnArc(1);
        }
        if x > 1.0 && f1 < 0.0 {
            return Classification::Region(REGION_A);
        }
        if y > 1.0 && f2 < 0.0 {
            return Classification::Region(REGION_C);
        }
        // horizontal-pencil region; the far piece lies across the image of
        // the source infinity line
        if let Some(line) = &self.far_line {
            let here = line.incidence(&HPoint2::new(x, y, 1.0).unwrap());
            let near_ref = line.incidence(
                &HPoint2::new(0.5 * (1.0 + self.g), self.segline(0.5 * (1.0 + self.g)) + 0.05, 1.0)
                    .unwrap(),
            );
            if here * near_ref < 0.0 {
                return Classification::Region(REGION_D);
            }
        }
        Classification::Region(REGION_B)
    }

    /// The orientation-induced characteristic velocity of a region's pencil
    /// at a canonical point, as a unit vector in the canonical chart.
    fn flow_at(&self, region: usize, x: f64, y: f64, omega: i8) -> [f64; 2] {
        let eff = (omega * self.regions[region].flow) as f64;
        match self.regions[region].center {
            2 => [0.0, eff * x.signum()],
            _ => [-eff * y.signum(), 0.0],
        }
    }
}

enum Classification {
    Excluded,
    OnArc(usize),
    Region(usize),
}

/// The section value at a base point.
#[derive(Debug, Clone, Serialize)]
pub struct SceneValue {
    pub region: &'static str,
    /// Pencil center index (1 or 2).
    pub center: u8,
    /// Oriented direction in the source affine chart.
    pub direction: [f64; 2],
    /// Oriented direction in canonical coordinates.
    pub direction_canonical: [f64; 2],
}

impl SceneValue {
    /// The fiber point over z: the direction as a homogeneous slope pair.
    pub fn slope(&self) -> Result<HPoint1, GeomError> {
        HPoint1::new(self.direction[0], self.direction[1])
    }
}

/// Evaluate the section at a source-coordinates point.
pub fn evaluate_solution(scene: &MobiusScene, z: &HPoint2) -> Result<SceneValue, SceneError> {
    let img = scene.to_canonical.apply(z);
    let c = img.coords();
    if c[2].abs() < 1e-10 * (c[0].abs() + c[1].abs()) {
        // canonical infinity: negative slopes belong to the vertical-pencil
        // region, positive ones to the excluded boundary side
        let m = c[1] / c[0];
        if m < 0.0 {
            return value_at(scene, [c[0] / c[1] * 1e6, 1e6 * m.signum()], REGION_A, z);
        }
        return Err(SceneError::OutsideDomain);
    }
    let (x, y) = (c[0] / c[2], c[1] / c[2]);
    match scene.classify(x, y, 1e-9) {
        Classification::Excluded => Err(SceneError::OutsideDomain),
        Classification::Region(idx) => value_at(scene, [x, y], idx, z),
        Classification::OnArc(k) => {
            // one-sided values across the arc
            let (minus_region, plus_region) = if k == 0 {
                (REGION_A, REGION_B)
            } else {
                (REGION_C, REGION_B)
            };
            let minus = value_at(scene, [x, y], minus_region, z)?;
            let plus = value_at(scene, [x, y], plus_region, z)?;
            Err(SceneError::InShockSet { minus: Box::new(minus), plus: Box::new(plus) })
        }
    }
}

fn value_at(
    scene: &MobiusScene,
    canonical: [f64; 2],
    region: usize,
    z: &HPoint2,
) -> Result<SceneValue, SceneError> {
    let w_can = scene.flow_at(region, canonical[0], canonical[1], scene.omega_canonical);
    // transport the direction back through the inverse fractional-linear map
    let lifted = lift_projmap(&scene.from_canonical);
    let j = lifted
        .base_jacobian(canonical[0], canonical[1])
        .map_err(SceneError::Geometry)?;
    let dir = [
        j[0][0] * w_can[0] + j[0][1] * w_can[1],
        j[1][0] * w_can[0] + j[1][1] * w_can[1],
    ];
    let n = dir[0].hypot(dir[1]);
    let _ = z;
    Ok(SceneValue {
        region: scene.regions[region].label,
        center: scene.regions[region].center,
        direction: [dir[0] / n, dir[1] / n],
        direction_canonical: w_can,
    })
}

/// Sampling plan for the verifier.
#[derive(Debug, Clone, Copy)]
pub struct SceneSampling {
    pub arc_samples: usize,
    pub region_samples: usize,
    /// Admissible Rankine–Hugoniot residual (normalized).
    pub rh_tol: f64,
    /// Margins smaller than this count as tangential, not failures.
    pub tangent_tol: f64,
}

impl Default for SceneSampling {
    fn default() -> Self {
        SceneSampling { arc_samples: 128, region_samples: 256, rh_tol: 1e-9, tangent_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ArcReport {
    pub label: String,
    pub samples: usize,
    pub max_rh_residual: f64,
    /// Largest conormal pairing on the plus side (must be <= 0).
    pub worst_plus_margin: f64,
    /// Smallest conormal pairing on the minus side (must be >= 0).
    pub worst_minus_margin: f64,
    pub max_harmonic_residual: f64,
    pub tangential_samples: usize,
    pub rh_pass: bool,
    pub lax_pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionReport {
    pub label: String,
    pub samples: usize,
    pub max_classical_residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SceneReport {
    pub arcs: Vec<ArcReport>,
    pub regions: Vec<RegionReport>,
    pub pass: bool,
}

struct ArcSampleOutcome {
    rh: f64,
    plus: f64,
    minus: f64,
    harmonic: f64,
    tangential: bool,
}

/// Verify the scene against a canonical density: jump admissibility on every
/// arc sample (conservation through the fiber barycenter, entering
/// conditions through the oriented pencils) and the classical property in
/// the regions.
pub fn verify_scene(
    scene: &MobiusScene,
    cd: &CanonicalDensity,
    sampling: SceneSampling,
) -> Result<SceneReport, SceneError> {
    let (c1, c2) = scene.conics();
    let mut arcs = Vec::new();
    for (k, conic) in [(0usize, &c1), (1usize, &c2)] {
        let n = sampling.arc_samples.max(8);
        // log-spaced parameters along the unbounded arc, clear of both ends
        let span = 50.0f64;
        let samples: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let t = span.powf((i as f64 + 0.5) / n as f64);
                if k == 0 {
                    // from q1 = (1, h) toward the first center: x runs up
                    [t, scene.h / t]
                } else {
                    // from q2 = (g, 1) toward the second center: y runs up
                    [scene.g / t, t]
                }
            })
            .collect();
        let (minus_region, plus_region) =
            if k == 0 { (REGION_A, REGION_B) } else { (REGION_C, REGION_B) };
        let outcomes: Result<Vec<ArcSampleOutcome>, SceneError> = samples
            .par_iter()
            .map(|&[x, y]| {
                arc_sample_checks(scene, cd, conic, [x, y], minus_region, plus_region, &sampling)
            })
            .collect();
        let outcomes = outcomes?;
        let mut rep = ArcReport {
            label: if k == 0 { "arc q1-p1".into() } else { "arc q2-p2".into() },
            samples: outcomes.len(),
            max_rh_residual: 0.0,
            worst_plus_margin: f64::NEG_INFINITY,
            worst_minus_margin: f64::INFINITY,
            max_harmonic_residual: 0.0,
            tangential_samples: 0,
            rh_pass: true,
            lax_pass: true,
        };
        for o in &outcomes {
            rep.max_rh_residual = rep.max_rh_residual.max(o.rh);
            rep.worst_plus_margin = rep.worst_plus_margin.max(o.plus);
            rep.worst_minus_margin = rep.worst_minus_margin.min(o.minus);
            rep.max_harmonic_residual = rep.max_harmonic_residual.max(o.harmonic);
            if o.tangential {
                rep.tangential_samples += 1;
            }
        }
        rep.rh_pass = rep.max_rh_residual <= sampling.rh_tol;
        rep.lax_pass = rep.worst_plus_margin <= sampling.tangent_tol
            && rep.worst_minus_margin >= -sampling.tangent_tol;
        arcs.push(rep);
    }

    // classical property in the regions, in the source chart where the
    // pencil centers may be finite
    let mut regions = Vec::new();
    for idx in [REGION_A, REGION_B, REGION_C] {
        let pts = region_points(scene, idx, sampling.region_samples);
        let mut worst = 0.0f64;
        for p in &pts {
            let res = classical_residual(scene, idx, *p)?;
            worst = worst.max(res);
        }
        regions.push(RegionReport {
            label: scene.regions[idx].label.to_string(),
            samples: pts.len(),
            max_classical_residual: worst,
            pass: worst < 1e-10,
        });
    }
    let pass = arcs.iter().all(|a| a.rh_pass && a.lax_pass) && regions.iter().all(|r| r.pass);
    Ok(SceneReport { arcs, regions, pass })
}

fn arc_sample_checks(
    scene: &MobiusScene,
    cd: &CanonicalDensity,
    conic: &Conic,
    q: [f64; 2],
    minus_region: usize,
    plus_region: usize,
    sampling: &SceneSampling,
) -> Result<ArcSampleOutcome, SceneError> {
    let [x, y] = q;
    let qh = HPoint2::new(x, y, 1.0)?;
    // shock conormal from the conic level function in the affine chart
    let grad = {
        let m = &conic.matrix;
        let p = [x, y, 1.0];
        let mut g = [0.0; 2];
        for i in 0..2 {
            for j in 0..3 {
                g[i] += 2.0 * m[i][j] * p[j];
            }
        }
        g
    };
    let gnorm = grad[0].hypot(grad[1]).max(1e-300);
    // fiber chart and the two pencil directions
    let (chart, density) = canonical_fiber_density(cd, &qh)?;
    let lam1 = chart.fiber_coord([1.0, 0.0, 0.0])?; // toward the first center
    let lam2 = chart.fiber_coord([0.0, 1.0, 0.0])?; // toward the second center
    // conservation: the fiber integral of the density across the jump pairs
    // to zero with the conormal
    let m = density.interval_integral(lam1, lam2)?;
    let w = [
        m[0] * chart.e1[0] + m[1] * chart.e2[0],
        m[0] * chart.e1[1] + m[1] * chart.e2[1],
        m[0] * chart.e1[2] + m[1] * chart.e2[2],
    ];
    // affine velocity of the curve rep + s w
    let rep = chart.rep;
    let dir = [
        w[0] * rep[2] - rep[0] * w[2],
        w[1] * rep[2] - rep[1] * w[2],
    ];
    let dnorm = dir[0].hypot(dir[1]).max(1e-300);
    let rh = (grad[0] * dir[0] + grad[1] * dir[1]).abs() / (gnorm * dnorm);
    // entering conditions with the oriented pencil velocities
    let w_minus = scene.flow_at(minus_region, x, y, cd.omega);
    let w_plus = scene.flow_at(plus_region, x, y, cd.omega);
    let plus = (grad[0] * w_plus[0] + grad[1] * w_plus[1]) / gnorm;
    let minus = (grad[0] * w_minus[0] + grad[1] * w_minus[1]) / gnorm;
    let tangential =
        plus.abs() <= sampling.tangent_tol || minus.abs() <= sampling.tangent_tol;
    // the geometric route: the tangent is harmonic, so the barycenter
    // direction is tangent by construction
    let harmonic = conic_harmonic_check(conic, &qh)?;
    Ok(ArcSampleOutcome { rh, plus, minus, harmonic, tangential })
}

fn region_points(scene: &MobiusScene, region: usize, n: usize) -> Vec<[f64; 2]> {
    let n = n.max(16);
    let mut out = Vec::with_capacity(n);
    let h = scene.h;
    let g = scene.g;
    let per_row = (n as f64).sqrt().ceil() as usize;
    for i in 0..per_row {
        for j in 0..per_row {
            if out.len() >= n {
                break;
            }
            let s = (i as f64 + 0.5) / per_row as f64;
            let t = (j as f64 + 0.5) / per_row as f64;
            let p = match region {
                REGION_A => {
                    // below the first arc, right of the vertical side
                    let x = 1.05 + 3.0 * s;
                    let ymax = h / x - 0.02;
                    let y = ymax - 3.0 * t;
                    [x, y]
                }
                REGION_C => {
                    // left of the second arc, above the horizontal side
                    let y = 1.05 + 3.0 * s;
                    let xmax = g / y - 0.02;
                    let x = xmax - 3.0 * t;
                    [x, y]
                }
                _ => {
                    // above the composite boundary
                    let x = g + 0.1 + (4.0 - g) * s;
                    let floor = if x >= 1.0 {
                        h / x
                    } else if x <= 0.0 {
                        (g / x).min(10.0)
                    } else {
                        scene.segline(x).max(h / x.max(1e-9)).min(5.0)
                    };
                    // keep inside: above all local boundaries
                    let base = if x > 0.0 && x < 1.0 {
                        scene.segline(x).max(0.0)
                    } else {
                        floor
                    };
                    [x, base + 0.1 + 3.0 * t]
                }
            };
            // only keep points that classify into the intended region
            if let Classification::Region(idx) = scene.classify(p[0], p[1], 1e-9) {
                if idx == region || (region == REGION_B && idx == REGION_D) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Residual of the classical property at a region point, evaluated in the
/// source chart: the pencil field satisfies the structure equation exactly;
/// the check recomputes it from the slope function of the pencil.
fn classical_residual(
    scene: &MobiusScene,
    region: usize,
    canonical: [f64; 2],
) -> Result<f64, SceneError> {
    let center_can = if scene.regions[region].center == 1 {
        canonical_e(0)
    } else {
        canonical_e(1)
    };
    let center = scene.from_canonical.apply(&center_can);
    let zc = HPoint2::new(canonical[0], canonical[1], 1.0)?;
    let z = scene.from_canonical.apply(&zc);
    let cc = center.coords();
    let zcrd = z.coords();
    if zcrd[2].abs() < 1e-10 {
        return Ok(0.0); // source-infinity sample: nothing to differentiate
    }
    let zaff = [zcrd[0] / zcrd[2], zcrd[1] / zcrd[2]];
    if cc[2].abs() < 1e-10 * (cc[0].abs() + cc[1].abs()) {
        // center at infinity in the source chart: the pencil is a parallel
        // field, constant, hence exactly classical
        return Ok(0.0);
    }
    let caff = [cc[0] / cc[2], cc[1] / cc[2]];
    // slope field u(t, x) = (cy - x) / (cx - t) or its reciprocal, whichever
    // is regular here; the structure-equation residual uses exact jets
    let (dx, dy) = (caff[0] - zaff[0], caff[1] - zaff[1]);
    let (expr, vars, at) = if dx.abs() >= dy.abs() {
        (
            format!("({} - x)/({} - t)", caff[1], caff[0]),
            ("t", "x"),
            [zaff[0], zaff[1]],
        )
    } else {
        // swapped chart: t' = x, x' = t
        (
            format!("({} - x)/({} - t)", caff[0], caff[1]),
            ("t", "x"),
            [zaff[1], zaff[0]],
        )
    };
    let e = crate::exprcalc::parse(&expr).expect("generated slope expression parses");
    let env = [(vars.0, at[0]), (vars.1, at[1])];
    let jet = crate::exprcalc::eval_jet2(&e, &env, &[vars.0, vars.1])
        .map_err(|er| SceneError::ConstraintViolation(er.to_string()))?;
    Ok((jet.grad[0] + jet.value * jet.grad[1]).abs())
}
