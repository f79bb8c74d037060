use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use renormlab::cgeom::{
    angle_to_interval, dist_to_interval, forward, in_geodisk, inverse_step, pullback_points,
    sqrt_incidence_min, sqrt_lemma_theta, subtended_angle, CPoint, GeoDisk,
};
use renormlab::realdyn::{fixed_points, monotone_pullback_step, Param, RInterval};
use renormlab::Complex64;

/// Steps of a random monotone pullback of `j`, stopping before an interval
/// leaves `[c, ∞)` (the domain where each inverse branch is univalent on the
/// slit plane) or after `max_len` steps.
fn itinerary(p: Param, j: RInterval, rng: &mut ChaCha8Rng, max_len: usize) -> (Vec<f64>, Vec<RInterval>) {
    let mut signs = Vec::new();
    let mut js = vec![j];
    let mut cur = j;
    while signs.len() < max_len && cur.lo() >= p.c() {
        let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let Ok(next) = monotone_pullback_step(p, &cur, s) else {
            break;
        };
        signs.push(s);
        js.push(next);
        cur = next;
    }
    // the last interval is only a target; it needs no further step
    (signs, js)
}

fn sample_in_disk(d: &GeoDisk, rng: &mut ChaCha8Rng) -> CPoint {
    let half = d.j.len() / 2.0;
    let r = half / d.theta.sin().max(1e-3);
    loop {
        let x = d.j.mid() + rng.gen_range(-r..r);
        let y = rng.gen_range(-r..r);
        let z = CPoint::new(x, y);
        if in_geodisk(&z, d) {
            return z;
        }
    }
}

/// A subinterval of `[c, β]` of random position and size.
fn random_interval(p: Param, rng: &mut ChaCha8Rng) -> RInterval {
    let (_, beta) = fixed_points(p).unwrap();
    let lo = p.c();
    let a = rng.gen_range(lo..beta);
    let len = (beta - a) * rng.gen_range(0.05..1.0);
    RInterval::new(a, a + len).unwrap()
}

#[test]
fn schwarz_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = 0;
    let mut pairs = 0;
    let mut steps_total = 0;
    while pairs < 10 {
        let p = Param::new(rng.gen_range(-2.0..-0.8)).unwrap();
        let j = random_interval(p, &mut rng);
        let theta = rng.gen_range(0.2..3.0);
        let disk = GeoDisk::new(j, theta).unwrap();
        let (signs, js) = itinerary(p, j, &mut rng, 20);
        if signs.is_empty() {
            continue;
        }
        pairs += 1;
        for _ in 0..1000 {
            let z = sample_in_disk(&disk, &mut rng);
            let zs = pullback_points(p, &z, &signs).unwrap();
            for (zk, jk) in zs.iter().zip(&js) {
                steps_total += 1;
                let inside = zk.is_real() && jk.contains(zk.re())
                    || subtended_angle(zk.z, jk) >= PI - theta - 1e-9;
                if !inside {
                    violations += 1;
                }
            }
        }
    }
    assert!(steps_total > 10_000);
    assert_eq!(violations, 0);
}

/// `max (dist(φz, J')/|J'|) / (dist(z, J)/|J|)` over `n` samples with
/// `|J| ≤ dist(z, J) ≤ 20 |J|` and `∠(z, J) ≥ eps`.
///
/// Samples sit beyond an endpoint at distance `r` and angle `ψ ∈ [eps, π/2]`
/// to its outward ray, so that `dist = r` and `∠ = ψ`; points over the
/// interior of `J` see it at more than `π/2` and are not extremal.
fn goodangle_c(p: Param, j: RInterval, signs: &[f64], jp: RInterval, eps: f64, n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let r = j.len() * 20f64.powf(rng.gen::<f64>());
        let psi = rng.gen_range(eps..FRAC_PI_2);
        let half = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let z = if rng.gen_bool(0.5) {
            Complex64::new(j.hi(), 0.0) + Complex64::from_polar(r, half * psi)
        } else {
            Complex64::new(j.lo(), 0.0) - Complex64::from_polar(r, half * psi)
        };
        let z = CPoint::from_complex(z);
        debug_assert!((angle_to_interval(&z, &j).unwrap() - psi).abs() < 1e-9);
        let w = pullback_points(p, &z, signs).unwrap();
        let zp = w[w.len() - 1];
        let ratio = (dist_to_interval(zp.z, &jp) / jp.len()) / (r / j.len());
        worst = worst.max(ratio);
    }
    worst
}

#[test]
fn goodangle_constant_is_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases = 0;
    while cases < 4 {
        let p = Param::new(rng.gen_range(-1.9..-1.2)).unwrap();
        let j = random_interval(p, &mut rng);
        let (signs, js) = itinerary(p, j, &mut rng, 12);
        if signs.len() < 3 {
            continue;
        }
        cases += 1;
        let jp = js[js.len() - 1];
        for eps in [0.1, 0.3, 0.6] {
            let c1 = goodangle_c(p, j, &signs, jp, eps, 1000, 1);
            let c10 = goodangle_c(p, j, &signs, jp, eps, 10_000, 2);
            assert!(c1.is_finite() && c10.is_finite());
            assert!(c10 <= 1.1 * c1, "eps={eps}: C(N)={c1} C(10N)={c10}");
        }
    }
}

#[test]
fn sqrt_incidence_grid() {
    // 100 radii x 50 incidence angles x 2 half-planes = 10^4 points per pair
    for &(a, b) in &[(0.0, 1.0), (0.5, 1.0), (1.0, 4.0), (2.0, 0.5), (1.0, 0.0), (0.1, 10.0)] {
        let eta = sqrt_incidence_min(a, b, 100, 50);
        assert!(eta >= FRAC_PI_4 - 1e-9, "a={a} b={b} eta={eta}");
    }
}

#[test]
fn sqrt_lemma_fit_is_stable() {
    for &a in &[0.25, 1.0, 4.0] {
        for &th in &[0.4, 1.0, FRAC_PI_2, 2.2] {
            let coarse = sqrt_lemma_theta(a, th, 2_000).unwrap();
            let fine = sqrt_lemma_theta(a, th, 20_000).unwrap();
            assert!(
                (fine - coarse).abs() <= 0.02 * coarse,
                "a={a} th={th}: {coarse} vs {fine}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn apex_height_closed_form(a in -5.0f64..5.0, len in 1e-3f64..10.0, theta in 0.01f64..3.13) {
        let j = RInterval::new(a, a + len).unwrap();
        let d = GeoDisk::new(j, theta).unwrap();
        let h = (theta / 2.0).tan() * len / 2.0;
        prop_assert!((d.apex_height() - h).abs() <= 1e-12 * h.max(1.0));
        // the apex is on the boundary
        let apex = Complex64::new(j.mid(), d.apex_height());
        prop_assert!((PI - subtended_angle(apex, &j) - theta).abs() < 1e-9);
    }

    #[test]
    fn pullback_round_trip(
        c in -2.0f64..-0.75,
        re in -3.0f64..3.0,
        im in prop_oneof![Just(0.0), -3.0f64..3.0],
        signs in prop::collection::vec(prop_oneof![Just(1.0), Just(-1.0)], 1..40),
    ) {
        let p = Param::new(c).unwrap();
        let z0 = CPoint::new(re, if im == 0.0 { 0.1 } else { im });
        let zs = pullback_points(p, &z0, &signs).unwrap();
        // rounding at z_{-j} grows by |(f^j)'(z_{-j})| on the way forward
        let mut gain = 1.0f64;
        let mut budget = 0.0f64;
        for (k, zk) in zs.iter().enumerate() {
            if k > 0 {
                gain *= 2.0 * zk.z.norm();
            }
            budget += gain.max(1.0);
            let back = forward(p, zk.z, k);
            let tol = 1e-15 * budget * z0.z.norm().max(1.0);
            prop_assert!((back - z0.z).norm() <= tol.max(1e-9 * z0.z.norm().max(1.0)),
                "k={} back={} z0={}", k, back, z0.z);
        }
    }

    #[test]
    fn inverse_step_inverts(c in -2.0f64..0.25, re in -4.0f64..4.0, im in 1e-6f64..4.0, s in prop_oneof![Just(1.0), Just(-1.0)]) {
        let p = Param::new(c).unwrap();
        let z = CPoint::new(re, im);
        let w = inverse_step(p, &z, s).unwrap();
        prop_assert!((w.z * w.z + c - z.z).norm() <= 1e-12 * z.z.norm().max(1.0));
        prop_assert!(s * w.re() >= 0.0);
    }

    #[test]
    fn round_disk_is_euclidean(a in -3.0f64..3.0, len in 0.01f64..5.0, x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let j = RInterval::new(a, a + len).unwrap();
        let z = CPoint::new(j.mid() + x * len, y * len);
        let in_round = (z.z - Complex64::new(j.mid(), 0.0)).norm() <= len / 2.0;
        let margin = ((z.z - Complex64::new(j.mid(), 0.0)).norm() - len / 2.0).abs();
        prop_assume!(margin > 1e-9 * len);
        prop_assert_eq!(in_geodisk(&z, &GeoDisk::new(j, FRAC_PI_2).unwrap()), in_round);
    }
}
