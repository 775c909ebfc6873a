//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its measured margin and wall time. Run with `--nocapture` to see
//! every line.

use std::time::Instant;

use flatproj::corpus;
use flatproj::density::{
    check_axioms, dq, reconstruct_density, rq, AxiomSpec, BarycentricMap, ChartDomain,
    DensityFn, FiberDensity, ReconstructionAnchor,
};
use flatproj::exprcalc::parse;
use flatproj::kruzhkov::{
    admissibility_check, disintegration_check, i_functional, identity60_residual, c_functional,
    Box3, Bump1, PiecewiseSolution, QuadOpts, QuasiEq, Section, ZetaTest,
};
use flatproj::mobius::{
    build_scene, orientation_holonomy, verify_scene, CanonicalDensity, ScenePlacement,
    SceneSampling,
};
use flatproj::projgeom::{
    cross_ratio, lift_projmap, ExtReal, HPoint1, HPoint2, ProjMap2,
};
use flatproj::projstruct::{
    flatness_residual, reduction_pipeline, reduction_test, Connection2D, GridSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn conclude(n: u32, what: &str, pass: bool, detail: String, budget: f64, started: Instant) {
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "acceptance criterion {n:2} [{what}]: {} ({detail}; {elapsed:.2}s of {budget}s)",
        if pass { "PASS" } else { "FAIL" },
    );
    assert!(pass, "criterion {n} failed: {detail}");
    assert!(
        elapsed <= budget,
        "criterion {n} exceeded its time budget: {elapsed:.2}s > {budget}s"
    );
}

#[test]
fn criterion_01_cross_ratio_suite() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    // normalization on random affine values
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x: f64 = rng.gen_range(-5.0..5.0);
        let v = cross_ratio(
            &HPoint1::affine(x),
            &HPoint1::affine(1.0),
            &HPoint1::affine(0.0),
            &HPoint1::infinity(),
        )
        .unwrap();
        let v = v.finite().unwrap();
        worst = worst.max((v - x).abs() / x.abs().max(1.0));
    }
    // projective invariance on 100 random configurations
    let mut done = 0;
    while done < 100 {
        let m = [
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
        ];
        if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() < 0.2 {
            continue;
        }
        let pts: Vec<HPoint1> = (0..4)
            .map(|_| HPoint1::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect::<Result<_, _>>()
            .unwrap();
        let mut ok = true;
        for i in 0..4 {
            for j in (i + 1)..4 {
                if pts[i].approx_eq(&pts[j]) {
                    ok = false;
                }
            }
        }
        if !ok {
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
                // skip ill-conditioned near-degenerate configurations
                if u.abs() > 1e3 {
                    continue;
                }
                worst = worst.max((u - v).abs() / u.abs().max(1.0));
            }
            (u, v) => {
                if !u.approx_eq(v, 1e-9) {
                    worst = worst.max(1.0);
                }
            }
        }
        done += 1;
    }
    conclude(
        1,
        "cross-ratio normalization and invariance",
        worst < 1e-12,
        format!("worst relative deviation {worst:.3e}"),
        1.0,
        t0,
    );
}

#[test]
fn criterion_02_lift_graph_mapping_and_functoriality() {
    let t0 = Instant::now();
    let maps = corpus::random_projmaps(20, 202);
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    let mut worst_graph: f64 = 0.0;
    for s in &maps {
        let phi = lift_projmap(s);
        let mut pts = 0;
        while pts < 200 {
            let t = rng.gen_range(0.1..2.0);
            let x = rng.gen_range(-2.0..2.0);
            let u = x / (1.0 + t);
            let ut = -x / ((1.0 + t) * (1.0 + t));
            let ux = 1.0 / (1.0 + t);
            let Ok((t1, x1, v1)) = phi.apply(t, x, u) else { continue };
            if t1.abs() > 1e3 || x1.abs() > 1e3 || v1.abs() > 1e3 {
                continue;
            }
            match phi.graph_residual(t, x, u, ut, ux) {
                Ok(r) => {
                    worst_graph = worst_graph.max(r.abs());
                    pts += 1;
                }
                Err(_) => continue,
            }
        }
    }
    let mut worst_fun: f64 = 0.0;
    for pair in maps.chunks(2) {
        if pair.len() < 2 {
            continue;
        }
        let (s1, s2) = (&pair[0], &pair[1]);
        let composed = lift_projmap(&s1.compose(s2));
        let (l1, l2) = (lift_projmap(s1), lift_projmap(s2));
        let mut pts = 0;
        while pts < 50 {
            let t = rng.gen_range(-1.0..1.0);
            let x = rng.gen_range(-1.0..1.0);
            let v = rng.gen_range(-1.5..1.5);
            let (Ok(a), Ok(mid)) = (composed.apply(t, x, v), l2.apply(t, x, v)) else {
                continue;
            };
            let Ok(b) = l1.apply(mid.0, mid.1, mid.2) else { continue };
            if a.2.abs() > 1e3 || b.2.abs() > 1e3 {
                continue;
            }
            worst_fun = worst_fun
                .max((a.0 - b.0).abs() / (1.0 + a.0.abs()))
                .max((a.1 - b.1).abs() / (1.0 + a.1.abs()))
                .max((a.2 - b.2).abs() / (1.0 + a.2.abs()));
            pts += 1;
        }
    }
    conclude(
        2,
        "lift: graphs to graphs, functorial",
        worst_graph < 1e-6 && worst_fun < 1e-10,
        format!("graph residual {worst_graph:.3e}, functoriality {worst_fun:.3e}"),
        5.0,
        t0,
    );
}

fn kruzhkov_domain() -> Box3 {
    Box3 { z1: (0.05, 3.0), z2: (-3.0, 3.0), y: (-3.0, 3.0) }
}

#[test]
fn criterion_03_kruzhkov_signs() {
    let t0 = Instant::now();
    let eq = QuasiEq::burgers(kruzhkov_domain());
    let opts = QuadOpts::default();
    let classical = Section::Smooth(parse("z2/(1 + z1)").unwrap());
    let corpus20 = corpus::bump_corpus(&eq.domain, 20, 301);
    let mut worst_classical: f64 = 0.0;
    for psi in &corpus20 {
        let v = i_functional(&eq, &classical, psi, opts).unwrap();
        worst_classical = worst_classical.max(v.abs());
    }
    let entropic = Section::Piecewise(PiecewiseSolution::straight_shock(
        1.0, -1.0, 0.0, 0.0,
        (0.1, 2.9),
    ));
    let corpus50 = corpus::bump_corpus(&eq.domain, 50, 302);
    let mut min_entropic = f64::INFINITY;
    for psi in &corpus50 {
        assert!(psi.verify_nonneg(4).unwrap());
        let v = i_functional(&eq, &entropic, psi, opts).unwrap();
        min_entropic = min_entropic.min(v);
    }
    let reversed = Section::Piecewise(PiecewiseSolution::straight_shock(
        -1.0, 1.0, 0.0, 0.0,
        (0.1, 2.9),
    ));
    let mut most_negative = f64::INFINITY;
    for psi in &corpus50 {
        let v = i_functional(&eq, &reversed, psi, opts).unwrap();
        most_negative = most_negative.min(v);
    }
    let pass = worst_classical < 1e-8 && min_entropic >= -1e-8 && most_negative < -1e-3;
    conclude(
        3,
        "entropy signs of the variational functional",
        pass,
        format!(
            "classical max |I| {worst_classical:.3e}, entropic min {min_entropic:.3e}, reversed min {most_negative:.3e}"
        ),
        30.0,
        t0,
    );
}

#[test]
fn criterion_04_disintegration() {
    let t0 = Instant::now();
    let eq = QuasiEq::burgers(kruzhkov_domain());
    let opts = QuadOpts::default();
    let smooth_sections = [
        Section::Smooth(parse("z2/(1 + z1)").unwrap()),
        Section::Smooth(parse("0.8*cos(z2)").unwrap()),
        Section::Smooth(parse("0.5*sin(z1 + z2)").unwrap()),
        Section::Smooth(parse("z2/4 - z1/8").unwrap()),
        Section::Const(0.4),
    ];
    let shock_sections: Vec<Section> = [
        (1.0, -1.0, 0.0, 0.0),
        (1.5, -0.5, 0.5, 0.2),
        (0.8, -1.2, -0.2, -0.3),
        (2.0, 0.0, 1.0, 0.0),
        (1.2, -0.7, 0.25, 0.5),
    ]
    .iter()
    .map(|&(um, up, s, o)| {
        Section::Piecewise(PiecewiseSolution::straight_shock(um, up, s, o, (0.1, 2.9)))
    })
    .collect();
    let zeta = ZetaTest::Bump { z1: (0.3, 2.0), z2: (-1.2, 1.2) };
    let l = Bump1 { a: -1.4, b: 1.1 };
    let mut worst: f64 = 0.0;
    for sec in smooth_sections.iter().chain(&shock_sections) {
        let out = disintegration_check(&eq, sec, &zeta, l, opts).unwrap();
        worst = worst.max(out.relative_residual());
    }
    conclude(
        4,
        "disintegration of the functional",
        worst < 1e-6,
        format!("worst relative residual {worst:.3e}"),
        30.0,
        t0,
    );
}

#[test]
fn criterion_05_pairing_identity_and_contraction() {
    let t0 = Instant::now();
    let eq = QuasiEq::burgers(kruzhkov_domain());
    let opts = QuadOpts::default();
    let zeta = ZetaTest::Bump { z1: (0.3, 2.5), z2: (-2.0, 2.0) };
    // Lipschitz pairs: (kinked, smooth) and (jump, smooth)
    let kinked = Section::Piecewise(PiecewiseSolution {
        level: parse("z2 - 1").unwrap(),
        minus: parse("0.5").unwrap(),
        plus: parse("0.5 - (z2 - 1)/2").unwrap(),
        sigma: flatproj::kruzhkov::SigmaParam {
            z1: parse("s").unwrap(),
            z2: parse("1").unwrap(),
            s_range: (0.1, 2.9),
        },
    });
    let smooth = Section::Smooth(parse("cos(z1)/2").unwrap());
    let shock = Section::Piecewise(PiecewiseSolution::straight_shock(1.0, -1.0, 0.0, 0.0, (0.1, 2.9)));
    let mut worst_identity: f64 = 0.0;
    for sigma in [&kinked, &shock, &smooth] {
        let (_, _, res) = identity60_residual(&eq, sigma, &smooth, &zeta, opts).unwrap();
        worst_identity = worst_identity.max(res);
    }
    // contraction inequality for entropic pairs against nonnegative tests
    let entropic_pairs = [
        (
            Section::Piecewise(PiecewiseSolution::straight_shock(1.0, -1.0, 0.0, 0.0, (0.1, 2.9))),
            Section::Piecewise(PiecewiseSolution::straight_shock(1.5, -0.5, 0.5, 0.5, (0.1, 2.9))),
        ),
        (
            Section::Piecewise(PiecewiseSolution::straight_shock(2.0, 0.0, 1.0, -0.4, (0.1, 2.9))),
            Section::Smooth(parse("z2/(1 + z1)").unwrap()),
        ),
    ];
    let mut min_c = f64::INFINITY;
    for (a, b) in &entropic_pairs {
        for z in corpus::zeta_corpus((0.3, 2.5), (-2.0, 2.0), 4, 505) {
            let v = c_functional(&eq, a, b, &z, opts).unwrap();
            min_c = min_c.min(v);
        }
    }
    let pass = worst_identity < 1e-8 && min_c >= -1e-8;
    conclude(
        5,
        "pairing identity and contraction sign",
        pass,
        format!("identity residual {worst_identity:.3e}, min C {min_c:.3e}"),
        20.0,
        t0,
    );
}

#[test]
fn criterion_06_shock_calculus() {
    let t0 = Instant::now();
    let eq = QuasiEq::burgers(kruzhkov_domain());
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    // conservation pins the speed at the arithmetic mean
    let mut worst_rh: f64 = 0.0;
    for _ in 0..20 {
        let um: f64 = rng.gen_range(-1.4..1.4);
        let up: f64 = rng.gen_range(-1.4..1.4);
        let speed = 0.5 * (um + up);
        let pw = PiecewiseSolution::straight_shock(um, up, speed, 0.0, (0.1, 2.0));
        let z = pw.sigma.at(1.0).unwrap();
        let r = flatproj::kruzhkov::rh_residual(&eq, &pw, z).unwrap();
        worst_rh = worst_rh.max(r.abs());
    }
    // classification of random jumps agrees with the one-sided conditions
    let mut classified_ok = true;
    let mut jumps = 0;
    while jumps < 20 {
        let um: f64 = rng.gen_range(-1.5..1.5);
        let up: f64 = rng.gen_range(-1.5..1.5);
        if (um - up).abs() < 0.05 {
            continue;
        }
        let speed = 0.5 * (um + up);
        let pw = PiecewiseSolution::straight_shock(um, up, speed, 0.0, (0.1, 2.0));
        let z = pw.sigma.at(0.8).unwrap();
        let rep = admissibility_check(&eq, &pw, z, 65, 1e-9).unwrap();
        let lax = um > up; // convex flux
        if rep.admissible != lax || rep.lax_pass != lax || rep.chord_pass != lax {
            classified_ok = false;
        }
        if !rep.prop3_consistent {
            classified_ok = false;
        }
        jumps += 1;
    }
    conclude(
        6,
        "shock speed and admissibility classification",
        worst_rh < 1e-12 && classified_ok,
        format!("worst conservation residual {worst_rh:.3e}, classification agreement {classified_ok}"),
        2.0,
        t0,
    );
}

#[test]
fn criterion_07_flatness_oracle() {
    let t0 = Instant::now();
    let mk = |d: &str| Connection2D {
        a: parse("0").unwrap(),
        b: parse("0").unwrap(),
        c: parse("0").unwrap(),
        d: parse(d).unwrap(),
        z1: (-2.0, 2.0),
        z2: (-2.0, 2.0),
    };
    let mut pass = true;
    let mut detail = String::new();
    for (src, ddy2, should_be_flat) in [
        ("1.5", Box::new(|_: f64| 0.0) as Box<dyn Fn(f64) -> f64>, true),
        ("z2", Box::new(|_| 0.0), true),
        ("3*z2 - 2", Box::new(|_| 0.0), true),
        ("z2^2", Box::new(|_| 2.0), false),
        ("sin(z2)", Box::new(|x: f64| -x.sin()), false),
    ] {
        let conn = mk(src);
        let mut flat = true;
        for z in [[0.3, -0.7], [1.0, 0.4], [-1.5, 1.2]] {
            let (r1, r2) = flatness_residual(&conn, z).unwrap();
            // the second residual is exactly the second fiber derivative of
            // the free coefficient here
            let want = ddy2(z[1]);
            if r1 != 0.0 || r2 != want {
                pass = false;
                detail = format!("{src}: ({r1}, {r2}) vs (0, {want})");
            }
            if r1 != 0.0 || r2 != 0.0 {
                flat = false;
            }
        }
        if flat != should_be_flat {
            pass = false;
            detail = format!("{src}: flatness verdict {flat}, wanted {should_be_flat}");
        }
    }
    conclude(
        7,
        "flatness residual is exact for free-coefficient fields",
        pass,
        if detail.is_empty() { "all coefficient families verified".into() } else { detail },
        1.0,
        t0,
    );
}

#[test]
fn criterion_08_reduction_pipeline() {
    let t0 = Instant::now();
    // the direction-field equation reduces with identically zero
    // coefficients and pushforward tan
    let eq125 = QuasiEq {
        x1: parse("cos(y)").unwrap(),
        x2: parse("sin(y)").unwrap(),
        x3: parse("0").unwrap(),
        domain: Box3 { z1: (0.5, 2.5), z2: (-2.0, 2.0), y: (-1.2, 1.2) },
    };
    let rep = reduction_pipeline(&eq125, GridSpec::default(), None).unwrap();
    let reducible = rep.reduction.reducible;
    let zero_coeffs = rep.reduction.max_coeff_abs() < 1e-10;
    let flat = rep.flat;
    let push = rep.pushforward_residual.unwrap_or(f64::INFINITY);
    // the pushforward rule is the slope coordinate, tan of the fiber variable
    let mut push_rule_ok = true;
    for y in [-1.0, -0.3, 0.2, 0.9] {
        let env = [("z1", 1.0), ("z2", 0.0), ("y", y)];
        let w = eq125.x2.eval(&env).unwrap() / eq125.x1.eval(&env).unwrap();
        if (w - y.tan()).abs() > 1e-14 {
            push_rule_ok = false;
        }
    }
    // the quartic fiber term is certified non-reducible
    let quartic = QuasiEq {
        x1: parse("1").unwrap(),
        x2: parse("y").unwrap(),
        x3: parse("y^4").unwrap(),
        domain: Box3 { z1: (0.0, 2.0), z2: (-2.0, 2.0), y: (-1.0, 1.0) },
    };
    let qrep = reduction_test(&quartic, GridSpec::default()).unwrap();
    let pass = reducible
        && zero_coeffs
        && flat
        && push < 1e-8
        && push_rule_ok
        && !qrep.reducible
        && qrep.max_fit_residual > 0.1;
    conclude(
        8,
        "reduction pipeline",
        pass,
        format!(
            "pushforward residual {push:.3e}, counterexample fit residual {:.3}",
            qrep.max_fit_residual
        ),
        10.0,
        t0,
    );
}

#[test]
fn criterion_09_barycentric_calculus() {
    let t0 = Instant::now();
    let densities =
        corpus::positive_densities(ChartDomain::Interval(-1.0, 1.0), 10, 909);
    let mut rng = ChaCha8Rng::seed_from_u64(910);
    let q = HPoint1::affine(4.0);
    let p = HPoint1::infinity();
    let mut worst: f64 = 0.0;
    for d in &densities {
        let b = BarycentricMap::from_density(d.clone()).unwrap();
        // characteristic identity on sampled quadruples
        let spec = AxiomSpec { pairs: 24, quads: 24, seed: rng.gen(), tol: 1e-8 };
        let rep = check_axioms(&b, spec);
        let h6 = rep.find("H6 characteristic identity").unwrap();
        if !h6.pass {
            worst = worst.max(1.0);
        }
        worst = worst.max(h6.values[0]);
        // multiplicativity, cocycle and the quotient identity
        for _ in 0..6 {
            let mut v: Vec<f64> = (0..4).map(|_| rng.gen_range(-0.9..0.9)).collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if v.windows(2).any(|w| w[1] - w[0] < 0.15) {
                continue;
            }
            let r1 = rq(&b, v[0], v[1], v[3], &q).unwrap().finite().unwrap();
            let r2 = rq(&b, v[1], v[2], v[3], &q).unwrap().finite().unwrap();
            let r3 = rq(&b, v[0], v[2], v[3], &q).unwrap().finite().unwrap();
            worst = worst.max((r1 * r2 - r3).abs() / (1.0 + r3.abs()));
            let d1 = dq(&b, v[0], v[1], v[1], v[2], &q).unwrap();
            let d2 = dq(&b, v[1], v[2], v[2], v[3], &q).unwrap();
            let d3 = dq(&b, v[0], v[1], v[2], v[3], &q).unwrap();
            worst = worst.max((d1 * d2 - d3).abs() / (1.0 + d3.abs()));
            let dp = dq(&b, v[0], v[1], v[2], v[3], &p).unwrap();
            let dqv = dq(&b, v[0], v[1], v[2], v[3], &q).unwrap();
            let bxy = b.eval_point(v[0], v[1]).unwrap();
            let buv = b.eval_point(v[2], v[3]).unwrap();
            let cr = cross_ratio(&bxy, &buv, &p, &q).unwrap().finite().unwrap();
            worst = worst.max((dp / dqv - cr).abs() / (1.0 + cr.abs()));
        }
    }
    conclude(
        9,
        "barycentric cross-ratio calculus",
        worst < 1e-8,
        format!("worst identity deviation {worst:.3e}"),
        10.0,
        t0,
    );
}

#[test]
fn criterion_10_reconstruction_round_trip() {
    let t0 = Instant::now();
    let mut worst: f64 = 0.0;
    for src in ["1.0", "1 + x^2", "exp(x)"] {
        let d = FiberDensity::from_expr(ChartDomain::Interval(-1.0, 1.0), parse(src).unwrap());
        let b = BarycentricMap::from_density(d.clone()).unwrap();
        let (u0, v0) = (-0.5, 0.5);
        let beta0 = d.interval_integral(u0, v0).unwrap();
        let anchor = ReconstructionAnchor { q: HPoint1::infinity(), u0, v0, beta0 };
        let rec = reconstruct_density(&b, &anchor, 200).unwrap();
        // the recovered grid is proportional to the generator; normalize by
        // the median ratio and take the worst relative deviation
        let DensityFn::Grid { xs, ys } = &rec.f else { panic!("grid expected") };
        let mut ratios: Vec<f64> = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| y / d.eval(*x).unwrap())
            .collect();
        let mut sorted = ratios.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let c = sorted[sorted.len() / 2];
        for r in &mut ratios {
            worst = worst.max((*r / c - 1.0).abs());
        }
    }
    // the midpoint rule reconstructs a constant
    let b = BarycentricMap::midpoint((-2.0, 2.0));
    let anchor = ReconstructionAnchor {
        q: HPoint1::infinity(),
        u0: -1.0,
        v0: 1.0,
        beta0: [2.0, 0.0],
    };
    let rec = reconstruct_density(&b, &anchor, 200).unwrap();
    let v0 = rec.eval(0.0).unwrap();
    let DensityFn::Grid { xs, ys } = &rec.f else { panic!("grid expected") };
    for (x, y) in xs.iter().zip(ys) {
        let _ = x;
        worst = worst.max((y / v0 - 1.0).abs());
    }
    conclude(
        10,
        "density reconstruction round trip",
        worst < 1e-4,
        format!("worst relative deviation {worst:.3e}"),
        10.0,
        t0,
    );
}

#[test]
fn criterion_11_mobius_scene() {
    let t0 = Instant::now();
    let scene = build_scene(
        &ScenePlacement::Axes { r: [1.0, 1.0], q1: [1.0, 0.5], q2: [-0.75, 1.0] },
        1,
    )
    .unwrap();
    let cd = CanonicalDensity::standard(1);
    let report = verify_scene(&scene, &cd, SceneSampling::default()).unwrap();
    let verified = report.pass
        && report.arcs.iter().all(|a| a.max_rh_residual < 1e-9)
        && report.arcs.iter().all(|a| a.worst_plus_margin < 0.0 && a.worst_minus_margin > 0.0)
        && report.regions.iter().all(|r| r.max_classical_residual < 1e-10);
    // holonomy: a projective-line loop flips, a contractible loop does not
    let line_loop: Vec<HPoint2> = (0..=64)
        .map(|k| {
            let s = std::f64::consts::PI * (k as f64 + 0.25) / 65.0;
            HPoint2::new(s.sin(), s.cos(), s.cos()).unwrap()
        })
        .collect();
    let mut closed = line_loop.clone();
    closed.push(line_loop[0]);
    let flip = orientation_holonomy(&cd, &closed).unwrap();
    let circle: Vec<HPoint2> = (0..=64)
        .map(|k| {
            let s = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            HPoint2::new(3.0 + 0.3 * s.cos(), 1.0 + 0.3 * s.sin(), 1.0).unwrap()
        })
        .collect();
    let trivial = orientation_holonomy(&cd, &circle).unwrap();
    // tampering one pencil region breaks exactly its arc
    let mut tampered = scene.clone();
    tampered.tamper_flow(0);
    let trep = verify_scene(&tampered, &cd, SceneSampling::default()).unwrap();
    let tamper_ok = !trep.pass && !trep.arcs[0].lax_pass && trep.arcs[1].lax_pass;
    let pass = verified && flip == -1 && trivial == 1 && tamper_ok;
    conclude(
        11,
        "entropic scene on the band",
        pass,
        format!(
            "verified {verified}, holonomy ({flip}, {trivial}), tamper isolation {tamper_ok}"
        ),
        20.0,
        t0,
    );
}
