use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use renormlab::cgeom::{in_geodisk, CPoint, GeoDisk};
use renormlab::nest::{analyze_cascades, build_level_nest, CascadeKind, NestOptions};
use renormlab::realdyn::{fixed_points, OrbitSample, Param, PowerMap, RInterval, UnimodalLevel, DEFAULT_ORBIT_BUDGET};
use renormlab::renorm::{build_tower, RenormTower};
use renormlab::verify::{
    jump_dichotomy_check, monotone_pullback, parabolic_proximity, quad_estimate, quad_ratio_min,
    run_contraction_trial, sample_little_julia, track_cascade, CascadeOutcome, Dichotomy,
};
use renormlab::Complex64;

fn tower(c: f64, depth: usize) -> RenormTower {
    let p = Param::new(c).unwrap();
    let orbit = OrbitSample::new(p, DEFAULT_ORBIT_BUDGET);
    build_tower(p, depth, &orbit, &NestOptions::default()).unwrap()
}

/// Second superattracting parameter of the doubling ladder past `c = -1`,
/// period 64.
const C6: f64 = -1.4009619629448422;

#[test]
fn dichotomy_randomized() {
    let eps = 0.05;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut trials, mut jumped, mut in_s) = (0, 0, 0);
    let mut kappa_max = f64::NEG_INFINITY;
    while trials < 1000 {
        let p = Param::new(rng.gen_range(-2.0..-1.0)).unwrap();
        let (_, beta) = fixed_points(p).unwrap();
        let a = rng.gen_range(p.c()..beta);
        let len = (beta - a) * rng.gen_range(0.01..0.5);
        let Ok(j) = RInterval::new(a, a + len) else {
            continue;
        };
        let l = rng.gen_range(1..=12);
        let signs: Vec<f64> = (0..l)
            .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        if monotone_pullback(p, &j, &signs).is_err() {
            continue;
        }
        // half the starts hug the real axis beyond an endpoint, the rest
        // fill a box around J
        let z0 = if rng.gen_bool(0.5) {
            let r = j.len() * rng.gen_range(0.01..2.0);
            let phi = rng.gen_range(-0.5 * eps..0.5 * eps);
            let end = if rng.gen_bool(0.5) {
                Complex64::new(j.hi(), 0.0) + Complex64::from_polar(r, phi)
            } else {
                Complex64::new(j.lo(), 0.0) - Complex64::from_polar(r, phi)
            };
            CPoint::from_complex(end)
        } else {
            CPoint::new(
                j.mid() + j.len() * rng.gen_range(-2.0..2.0),
                j.len() * rng.gen_range(-2.0..2.0),
            )
        };
        // near the slits beyond T the pullback hugs the real line outside H
        if !in_geodisk(&z0, &GeoDisk::round(RInterval::symmetric(beta).unwrap())) {
            continue;
        }
        let Ok(d) = jump_dichotomy_check(p, &j, &signs, z0, eps) else {
            continue;
        };
        trials += 1;
        match d {
            Dichotomy::Jumped { .. } => jumped += 1,
            Dichotomy::InS { kappa, .. } => {
                in_s += 1;
                kappa_max = kappa_max.max(kappa);
            }
            Dichotomy::Neither { theta } => panic!("p={p:?} j={j:?} z0={z0:?} theta={theta}"),
        }
    }
    assert!(jumped > 0 && in_s > 0, "{jumped} {in_s}");
    assert!(kappa_max <= 10.0, "{kappa_max}");
}

#[test]
fn quad_shell_bound_for_the_base_map() {
    for &c in &[-2.0, -1.4, -0.3, 0.25] {
        let m = quad_ratio_min(|z| z * z + c, |_| true, 5.0, 5.0, 1, 10_000);
        assert!(m >= 1.0 - c.abs() / 25.0 - 1e-12, "c={c} {m}");
        assert!(m >= 0.9);
    }
}

#[test]
fn quad_estimate_is_positive_and_converges() {
    let t = tower(-1.0, 1);
    let coarse = quad_estimate(&t, 1, 5.0, 10_000).unwrap();
    let fine = quad_estimate(&t, 1, 5.0, 40_000).unwrap();
    assert!(coarse > 0.0);
    assert!((fine - coarse).abs() <= 0.05 * coarse, "{coarse} {fine}");
}

#[test]
fn julia_sample_is_symmetric_and_commensurable() {
    let t = tower(-1.0, 1);
    let s = sample_little_julia(&t, 1, 200, 300).unwrap();
    assert!((1.0..=50.0).contains(&s.commensurability), "{}", s.commensurability);
    let b = t.levels[1].b;
    let key = |z: &CPoint| ((z.re() * 1e9).round() as i64, (z.im() * 1e9).round() as i64);
    let set: std::collections::HashSet<_> = s.points.iter().map(key).collect();
    for z in &s.points {
        let m = CPoint::new(z.re(), -z.im());
        assert!(set.contains(&key(&m)));
        if z.is_real() {
            assert!(b.dilate(1.0 + 1e-6).contains(z.re()), "{z:?}");
        }
    }
    assert!(s.sector_theta > 0.0 && s.sector_theta <= PI);
}

#[test]
fn contraction_is_uniform_along_the_ladder() {
    let t = tower(C6, 3);
    let lvl = &t.levels[3];
    let centre = Complex64::new(lvl.p.mid(), 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cs: Vec<f64> = (0..100)
        .map(|_| {
            let z0 = CPoint::from_complex(centre + Complex64::from_polar(2.0 * lvl.p.len(), rng.gen_range(0.0..2.0 * PI)));
            run_contraction_trial(&t, 3, z0, 0.05, 64.0).unwrap().c_measured
        })
        .collect();
    cs.sort_by(f64::total_cmp);
    let (med, max) = (cs[50], cs[99]);
    assert!(max.is_finite() && max <= 10.0 * med, "{med} {max}");
}

#[test]
fn real_start_beyond_beta_stays_real() {
    let t = tower(-1.0, 1);
    let lvl = &t.levels[1];
    let z0 = CPoint::new(lvl.beta.abs() + 1.5 * lvl.p.len(), 0.0);
    let r = run_contraction_trial(&t, 1, z0, 0.05, 64.0).unwrap();
    for s in &r.trace.steps {
        assert!(s.z.is_real());
        assert!(s.angle.is_none_or(|a| a == 0.0));
    }
}

fn longest_cascade(c: f64) -> (UnimodalLevel, renormlab::nest::PrincipalNest, renormlab::nest::CascadeRecord) {
    let p = Param::new(c).unwrap();
    let orbit = OrbitSample::new(p, DEFAULT_ORBIT_BUDGET);
    let lvl = UnimodalLevel::base(p).unwrap();
    let nest = build_level_nest(&lvl, &orbit, &NestOptions::default()).unwrap();
    let cr = analyze_cascades(&lvl, &nest, &orbit, 16)
        .into_iter()
        .max_by_key(|c| c.length)
        .unwrap();
    (lvl, nest, cr)
}

#[test]
fn real_points_stay_in_the_disk() {
    let (lvl, nest, cr) = longest_cascade(-1.7499);
    let big = nest.levels[cr.m_start].interval;
    let inner = nest.levels[cr.m_start + 1].interval;
    // E_0: the part of the annulus on the side of h(0)
    let h0 = PowerMap::new(lvl.param, cr.return_time * lvl.period).eval(0.0);
    let (a, b) = if h0 >= 0.0 {
        (inner.hi(), big.hi())
    } else {
        (big.lo(), inner.lo())
    };
    for i in 1..20 {
        let x = a + (b - a) * i as f64 / 20.0;
        for j in 1..cr.length.min(4) {
            let tr = track_cascade(&lvl, &nest, &cr, CPoint::new(x, 0.0), j, 0.05).unwrap();
            assert!(tr.z_final.is_real(), "x={x} j={j}");
            assert_eq!(tr.outcome, CascadeOutcome::InDisk);
            assert!(in_geodisk(&tr.z_final, &GeoDisk::round(big)));
        }
    }
}

#[test]
fn parabolic_proximity_shrinks_near_the_window() {
    let mut prev = f64::INFINITY;
    for j in 3..=6 {
        let (lvl, nest, cr) = longest_cascade(-1.75 + 10f64.powi(-j));
        assert_eq!(cr.kind, CascadeKind::SaddleNode);
        let nu = parabolic_proximity(&lvl, &nest, &cr).unwrap();
        assert!(nu > 0.0 && nu < prev, "j={j} nu={nu}");
        prev = nu;
    }
}
