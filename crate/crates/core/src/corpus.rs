//! Seeded generators for test corpora: bump test densities, base test
//! functions, positive fiber densities and random projective maps.
//!
//! Everything is deterministic in the seed, so property suites and the
//! command-line checks reproduce bit-identically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::{ChartDomain, FiberDensity};
use crate::exprcalc::parse;
use crate::kruzhkov::{Box3, Bump1, TestDensity, ZetaTest};
use crate::projgeom::ProjMap2;

fn sub_range(rng: &mut ChaCha8Rng, range: (f64, f64), min_frac: f64) -> (f64, f64) {
    let width = range.1 - range.0;
    let w = width * rng.gen_range(min_frac..0.8);
    let lo = range.0 + (width - w) * rng.gen_range(0.0..1.0);
    (lo, lo + w)
}

/// Random product-bump test densities supported strictly inside the box.
pub fn bump_corpus(domain: &Box3, count: usize, seed: u64) -> Vec<TestDensity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = |r: (f64, f64)| {
        let pad = 0.02 * (r.1 - r.0);
        (r.0 + pad, r.1 - pad)
    };
    (0..count)
        .map(|_| {
            TestDensity::Bump(Box3 {
                z1: sub_range(&mut rng, margin(domain.z1), 0.25),
                z2: sub_range(&mut rng, margin(domain.z2), 0.25),
                y: sub_range(&mut rng, margin(domain.y), 0.25),
            })
        })
        .collect()
}

/// Random base test functions on sub-boxes of the given ranges.
pub fn zeta_corpus(
    z1: (f64, f64),
    z2: (f64, f64),
    count: usize,
    seed: u64,
) -> Vec<ZetaTest> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| ZetaTest::Bump {
            z1: sub_range(&mut rng, z1, 0.3),
            z2: sub_range(&mut rng, z2, 0.3),
        })
        .collect()
}

/// Random fiber weights inside an interval.
pub fn bump1_corpus(range: (f64, f64), count: usize, seed: u64) -> Vec<Bump1> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (a, b) = sub_range(&mut rng, range, 0.3);
            Bump1 { a, b }
        })
        .collect()
}

/// Strictly positive fiber densities on an interval: random members of the
/// family `c0 + c1 x^2 + c2 exp(a x) + c3 (2 + sin(b x))`.
pub fn positive_densities(
    domain: ChartDomain,
    count: usize,
    seed: u64,
) -> Vec<FiberDensity> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c0: f64 = rng.gen_range(0.2..1.5);
            let c1: f64 = rng.gen_range(0.0..1.0);
            let c2: f64 = rng.gen_range(0.0..0.8);
            let a: f64 = rng.gen_range(-0.8..0.8);
            let c3: f64 = rng.gen_range(0.0..0.5);
            let b: f64 = rng.gen_range(0.5..2.0);
            let src = format!("{c0} + {c1}*x^2 + {c2}*exp({a}*x) + {c3}*(2 + sin({b}*x))");
            FiberDensity::from_expr(domain, parse(&src).expect("generated density parses"))
        })
        .collect()
}

/// Random well-conditioned projective maps of the plane.
pub fn random_projmaps(count: usize, seed: u64) -> Vec<ProjMap2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut m = [[0.0; 3]; 3];
        for row in &mut m {
            for e in row.iter_mut() {
                *e = rng.gen_range(-1.0..1.0);
            }
        }
        // keep the maps near the identity-scale regime so lifted slopes stay
        // in a testable range
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += 1.5;
        }
        if let Ok(s) = ProjMap2::new(m) {
            if s.det().abs() > 0.2 {
                out.push(s);
            }
        }
    }
    out
}
