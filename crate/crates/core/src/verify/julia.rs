use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cgeom::{min_theta, CPoint};
use crate::error::{Error, Result};
use crate::renorm::RenormTower;
use crate::verify::quad::{level_branch_signs, pull_to_critical_value};

const EXTENT_STEPS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JuliaSample {
    pub k: usize,
    pub grid_n: usize,
    pub max_iter: usize,
    /// Width of a pruning cell.
    pub cell: f64,
    #[serde(skip)]
    pub points: Vec<CPoint>,
    /// Number of points, symmetric images included.
    pub kept: usize,
    pub diam: f64,
    /// Least `θ` with every kept point in `D_θ(B^k)`, `B^k` widened by one
    /// cell at each end.
    pub sector_theta: f64,
    /// `diam / |P^k|`.
    pub commensurability: f64,
    /// `log(r_out / r_in) / 2π`, `r_in` the largest kept `|z|`, `r_out` the
    /// distance from 0 to the ends of `T^k`. Ordinal only.
    pub modulus_proxy: f64,
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull by the monotone chain, counter-clockwise.
pub(crate) fn convex_hull(pts: &[Complex64]) -> Vec<Complex64> {
    let mut v = pts.to_vec();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v.dedup();
    if v.len() < 3 {
        return v;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * v.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 {
            Box::new(v.iter())
        } else {
            Box::new(v.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

pub(crate) fn diameter(pts: &[Complex64]) -> f64 {
    let h = convex_hull(pts);
    let mut d: f64 = 0.0;
    for i in 0..h.len() {
        for j in i + 1..h.len() {
            d = d.max((h[i] - h[j]).norm());
        }
    }
    d
}

/// Sample of the little Julia set `J(F)` of the level map
/// `F = f^{n_k}: U' -> C_T`, `T = T^k`, by inverse iteration pruned on a grid.
///
/// Both preimages `±y` of a point under `F` are taken: the branch of
/// `f^{-(n-1)}` following the critical value, then `±sqrt(w - c)`. A
/// breadth-first walk over the preimage tree keeps the first point landing
/// in each cell of a `grid_n x grid_n` grid and stops at depth `max_iter`.
/// The walk starts after a transient of 64 backward steps from `i |B^k| / 2`;
/// the grid box, symmetric about 0, is sized from a longer backward chain.
/// The kept set is closed under `z -> -z` and conjugation.
///
/// Escape-time sampling of the filled set is not used: the interior of the
/// filled set is far below grid scale along the period-doubling ladder and
/// empty at its limit.
pub fn sample_little_julia(
    tower: &RenormTower,
    k: usize,
    grid_n: usize,
    max_iter: usize,
) -> Result<JuliaSample> {
    let lvl = tower.level(k)?;
    let t = lvl.t;
    let n = lvl.n;
    let p = tower.base;
    let c = p.c();
    let signs = level_branch_signs(p, n);
    let preimage = |u: Complex64| -> Option<Complex64> {
        let w = pull_to_critical_value(p, &signs, u)?;
        let mut y = (w - c).sqrt();
        // numerically real points of the real trace
        if y.im.abs() <= 1e-12 * y.norm() {
            y.im = 0.0;
        }
        y.is_finite().then_some(y)
    };

    let mut z = Complex64::new(0.0, lvl.b.len() / 2.0);
    for _ in 0..64 {
        z = preimage(z).ok_or(Error::SamplingFailure)?;
    }
    // extent of J(F) from a backward chain with fixed pseudo-random branches
    let (mut rx, mut ry) = (lvl.b.hi().abs(), 0.0f64);
    let mut bits: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut w = z;
    for _ in 0..EXTENT_STEPS {
        bits ^= bits << 13;
        bits ^= bits >> 7;
        bits ^= bits << 17;
        let y = preimage(w).ok_or(Error::SamplingFailure)?;
        w = if bits & 1 == 0 { y } else { -y };
        rx = rx.max(w.re.abs());
        ry = ry.max(w.im.abs());
    }
    let rx = 1.25 * rx;
    let ry = 1.25 * ry.max(rx / 4.0);
    let grid_n = grid_n.max(2);
    let hx = 2.0 * rx / grid_n as f64;
    let hy = 2.0 * ry / grid_n as f64;
    let cell = |z: Complex64| -> Option<usize> {
        let ix = ((z.re + rx) / hx).floor();
        let iy = ((z.im + ry) / hy).floor();
        if ix < 0.0 || iy < 0.0 || ix >= grid_n as f64 || iy >= grid_n as f64 {
            return None;
        }
        Some(iy as usize * grid_n + ix as usize)
    };
    let mut reps: Vec<Option<Complex64>> = vec![None; grid_n * grid_n];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back((z, 0usize));
    while let Some((u, depth)) = queue.pop_front() {
        let Some(y) = preimage(u) else { continue };
        for v in [y, -y] {
            if let Some(i) = cell(v) {
                if reps[i].is_none() {
                    reps[i] = Some(v);
                    if depth + 1 < max_iter {
                        queue.push_back((v, depth + 1));
                    }
                }
            }
        }
    }
    // the fixed point beta_k and its symmetric preimage are in J(F)
    let mut points = vec![CPoint::new(lvl.beta, 0.0), CPoint::new(-lvl.beta, 0.0)];
    for v in reps.into_iter().flatten() {
        for w in [v, -v, v.conj(), -v.conj()] {
            points.push(CPoint::from_complex(w));
        }
    }
    if points.len() <= 2 {
        return Err(Error::SamplingFailure);
    }
    let zs: Vec<Complex64> = points.iter().map(|p| p.z).collect();
    let diam = diameter(&zs);
    // one cell of slack at the ends of B, where J(F) meets the real line
    let b = lvl.b.dilate(1.0 + 2.0 * hx / lvl.b.len());
    let sector_theta = zs.iter().map(|z| min_theta(*z, &b)).fold(0.0, f64::max);
    let r_in = zs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let r_out = t.lo().abs().min(t.hi().abs());
    Ok(JuliaSample {
        k,
        grid_n,
        max_iter,
        cell: hx,
        kept: points.len(),
        points,
        diam,
        sector_theta,
        commensurability: diam / lvl.p.len(),
        modulus_proxy: (r_out / r_in).ln() / (2.0 * PI),
    })
}
