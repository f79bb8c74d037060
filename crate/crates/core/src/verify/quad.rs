use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cgeom::{inverse_step, CPoint};
use crate::error::{Error, Result};
use crate::realdyn::{Param, RInterval};
use crate::renorm::RenormTower;

/// Signs of `f^j(c)`, `j = 0..n-1`: the branch of `f^{-(n-1)}` that follows
/// the critical value.
pub(crate) fn level_branch_signs(p: Param, n: usize) -> Vec<f64> {
    let c = p.c();
    let mut signs = Vec::with_capacity(n);
    let mut x = c;
    for _ in 1..n {
        signs.push(if x >= 0.0 { 1.0 } else { -1.0 });
        x = x * x + c;
    }
    signs
}

/// Pulls `u ∈ C_T` back by `f^{n-1}` along [`level_branch_signs`].
pub(crate) fn pull_to_critical_value(p: Param, signs: &[f64], u: Complex64) -> Option<Complex64> {
    let mut back = CPoint::from_complex(u);
    for s in signs.iter().rev() {
        back = inverse_step(p, &back, *s).ok()?;
    }
    Some(back.z)
}

/// Whether `z` lies in the domain `U'` of the level map `f^n`, the component
/// of `f^{-n}(C_T)` around 0.
///
/// `U'` is the full preimage under `f` of `V`, the image of `C_T` under the
/// inverse branch of `f^{n-1}` that follows the critical value. `w = f(z)` is
/// in `V` exactly when pulling `f^{n-1}(w)` back along that branch returns `w`.
pub fn in_level_domain(p: Param, n: usize, t: &RInterval, z: Complex64) -> bool {
    let c = p.c();
    let w = z * z + c;
    let mut u = w;
    for _ in 1..n {
        u = u * u + c;
        if !u.is_finite() {
            return false;
        }
    }
    if u.im == 0.0 && !t.contains(u.re) {
        return false;
    }
    match pull_to_critical_value(p, &level_branch_signs(p, n), u) {
        Some(b) => (b - w).norm() <= 1e-8 * w.norm().max(1.0),
        None => false,
    }
}

/// `min |g(z)| / |z|^2` over the points of a polar grid of `n_r x n_phi`
/// points in the shell `r_lo <= |z| <= r_hi` accepted by `keep`. Angles are
/// offset by half a cell so no grid point is real. Infinite when no point is
/// accepted.
pub fn quad_ratio_min<G: Fn(Complex64) -> Complex64, K: Fn(Complex64) -> bool>(
    g: G,
    keep: K,
    r_lo: f64,
    r_hi: f64,
    n_r: usize,
    n_phi: usize,
) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..n_r {
        let r = if n_r == 1 {
            r_lo
        } else {
            r_lo + (r_hi - r_lo) * i as f64 / (n_r - 1) as f64
        };
        for j in 0..n_phi {
            let phi = 2.0 * PI * (j as f64 + 0.5) / n_phi as f64;
            let z = Complex64::from_polar(r, phi);
            if !keep(z) {
                continue;
            }
            best = best.min(g(z).norm() / (r * r));
        }
    }
    best
}

/// `c_min` of the level-`k` map in coordinates where `B^k` becomes `[-1, 1]`:
/// `F_k(w) = f^{n_k}(|β_k| w) / |β_k|`, over the part of `1 <= |w| <= radius`
/// inside the domain of the level map, on about `points` grid points.
pub fn quad_estimate(tower: &RenormTower, k: usize, radius: f64, points: usize) -> Result<f64> {
    if radius <= 1.0 {
        return Err(Error::Precondition(format!("radius {radius} <= 1")));
    }
    let lvl = tower.level(k)?;
    let s = lvl.beta.abs();
    let n = lvl.n;
    let c = tower.base.c();
    let side = (points as f64).sqrt().ceil().max(2.0) as usize;
    let g = |w: Complex64| {
        let mut z = w * s;
        for _ in 0..n {
            z = z * z + c;
        }
        z / s
    };
    let t = lvl.t;
    let p = tower.base;
    let keep = |w: Complex64| in_level_domain(p, n, &t, w * s);
    let m = quad_ratio_min(g, keep, 1.0, radius, side, side);
    if m.is_finite() {
        Ok(m)
    } else {
        Err(Error::InsufficientData("no grid point in the level domain".into()))
    }
}
