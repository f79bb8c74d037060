//! Slit-plane geometry: hyperbolic neighbourhoods `D_θ(J)`, the angle
//! `∠(z, J)`, the sets `Q_ε` and `S_{θ,ε}`, and inverse branches of `z^2 + c`
//! applied to points.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realdyn::{Param, RInterval};

/// Absolute slack for angle comparisons, radians.
pub const ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bank {
    Upper,
    Lower,
}

/// A point of the completed slit plane. The bank only matters for real
/// points sitting on a slit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CPoint {
    pub z: Complex64,
    pub bank: Option<Bank>,
}

impl CPoint {
    pub fn new(re: f64, im: f64) -> Self {
        Self {
            z: Complex64::new(re, im),
            bank: None,
        }
    }

    pub fn on_bank(re: f64, bank: Bank) -> Self {
        Self {
            z: Complex64::new(re, 0.0),
            bank: Some(bank),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self { z, bank: None }
    }

    pub fn re(&self) -> f64 {
        self.z.re
    }

    pub fn im(&self) -> f64 {
        self.z.im
    }

    pub fn is_real(&self) -> bool {
        self.z.im == 0.0
    }
}

/// `D_θ(J)`: the two disk segments over `J` meeting the line at angle `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoDisk {
    pub j: RInterval,
    pub theta: f64,
}

impl GeoDisk {
    pub fn new(j: RInterval, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::Precondition(format!("theta = {theta} not in (0, pi)")));
        }
        Ok(Self { j, theta })
    }

    /// Round disk with diameter `J`.
    pub fn round(j: RInterval) -> Self {
        Self {
            j,
            theta: FRAC_PI_2,
        }
    }

    /// Height of the top of `D_θ(J)` above the midpoint of `J`.
    pub fn apex_height(&self) -> f64 {
        (self.theta / 2.0).tan() * self.j.len() / 2.0
    }

    /// `n` points on the upper boundary arc, endpoints included.
    pub fn upper_arc(&self, n: usize) -> Vec<Complex64> {
        let half = self.j.len() / 2.0;
        let h = self.apex_height();
        let y0 = (h * h - half * half) / (2.0 * h);
        let r = h - y0;
        let centre = Complex64::new(self.j.mid(), y0);
        let phi_b = (-y0).atan2(half);
        let n = n.max(2);
        (0..n)
            .map(|i| {
                let phi = phi_b + (PI - 2.0 * phi_b) * i as f64 / (n - 1) as f64;
                let mut w = centre + Complex64::from_polar(r, phi);
                w.im = w.im.max(0.0);
                w
            })
            .collect()
    }
}

/// Euclidean distance from `z` to `J`.
pub fn dist_to_interval(z: Complex64, j: &RInterval) -> f64 {
    let x = z.re.clamp(j.lo(), j.hi());
    (z - Complex64::new(x, 0.0)).norm()
}

/// Angle under which `J` is seen from `z`, `|arg((a - z)/(b - z))|`; `π` on
/// the interior of `J`.
pub fn subtended_angle(z: Complex64, j: &RInterval) -> f64 {
    let a = Complex64::new(j.lo(), 0.0) - z;
    let b = Complex64::new(j.hi(), 0.0) - z;
    if z.im == 0.0 && j.contains_interior(z.re) {
        return PI;
    }
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return PI;
    }
    (a / b).arg().abs()
}

/// `∠(z, J)`: least angle between `[a, z]`, `[b, z]` and the outward rays.
pub fn angle_to_interval(z: &CPoint, j: &RInterval) -> Result<f64> {
    if z.is_real() && j.contains_interior(z.re()) {
        return Err(Error::DegeneratePosition);
    }
    let at_b = (z.z - Complex64::new(j.hi(), 0.0)).arg().abs();
    let at_a = (Complex64::new(j.lo(), 0.0) - z.z).arg().abs();
    Ok(at_a.min(at_b))
}

pub fn in_geodisk(z: &CPoint, d: &GeoDisk) -> bool {
    if z.is_real() && d.j.contains(z.re()) {
        return true;
    }
    subtended_angle(z.z, &d.j) >= PI - d.theta - ANGLE_TOL
}

/// Smallest `θ` with `z ∈ cl D_θ(J)`; zero on `J` itself.
pub fn min_theta(z: Complex64, j: &RInterval) -> f64 {
    if z.im == 0.0 && j.contains(z.re) {
        return 0.0;
    }
    PI - subtended_angle(z, j)
}

/// `z ∈ Q_ε(J)`: `∠(z, J) ≥ ε`. Interior points of `J` count as angle `π`.
pub fn in_q(z: &CPoint, j: &RInterval, eps: f64) -> bool {
    let ang = angle_to_interval(z, j).unwrap_or(PI);
    ang >= eps - ANGLE_TOL
}

/// `z ∈ S_{θ,ε}(H, J)`: inside one of the two real-symmetric wedges of
/// half-angle `2ε` at the endpoints of `J`, axis along the outward rays, and
/// inside `D_θ(H)`.
pub fn in_s(z: &CPoint, h: &RInterval, j: &RInterval, theta: f64, eps: f64) -> Result<bool> {
    if !h.contains_interval(j) {
        return Err(Error::InvalidNesting);
    }
    let disk = GeoDisk::new(*h, theta)?;
    if !in_geodisk(z, &disk) {
        return Ok(false);
    }
    let vertex = z.is_real() && (z.re() == j.lo() || z.re() == j.hi());
    if vertex {
        return Ok(true);
    }
    Ok(match angle_to_interval(z, j) {
        Ok(a) => a < 2.0 * eps + ANGLE_TOL,
        Err(_) => false,
    })
}

/// Principal square root; the two banks of the negative axis go to the
/// upper and lower imaginary half-axes, no bank counting as upper.
pub fn sqrt_branch(w: &CPoint) -> CPoint {
    if w.z.im == 0.0 && w.z.re < 0.0 {
        let r = (-w.z.re).sqrt();
        let im = match w.bank {
            Some(Bank::Lower) => -r,
            _ => r,
        };
        return CPoint::new(0.0, im);
    }
    let s = w.z.sqrt();
    if s.im == 0.0 {
        CPoint {
            z: s,
            bank: w.bank,
        }
    } else {
        CPoint::from_complex(s)
    }
}

/// `sign * sqrt(z - c)`, the branch of `f^{-1}` on the half-plane `sign`.
pub fn inverse_step(p: Param, z: &CPoint, sign: f64) -> Result<CPoint> {
    let w = CPoint {
        z: z.z - p.c(),
        bank: z.bank,
    };
    if w.z.im == 0.0 && w.z.re < 0.0 && w.bank.is_none() {
        return Err(Error::BranchCutAmbiguity { step: 0 });
    }
    let mut r = sqrt_branch(&w);
    if sign < 0.0 {
        r.z = -r.z;
        r.bank = r.bank.map(|b| match b {
            Bank::Upper => Bank::Lower,
            Bank::Lower => Bank::Upper,
        });
    }
    // a real landing below c sits on the slit of the next step
    r.bank = if r.is_real() && r.re() < p.c() {
        Some(r.bank.unwrap_or(Bank::Upper))
    } else {
        None
    };
    Ok(r)
}

/// Backward orbit `z_0, z_{-1}, ..., z_{-len}` along the given signs.
pub fn pullback_points(p: Param, z0: &CPoint, signs: &[f64]) -> Result<Vec<CPoint>> {
    let mut out = Vec::with_capacity(signs.len() + 1);
    out.push(*z0);
    let mut cur = *z0;
    for (k, s) in signs.iter().enumerate() {
        cur = inverse_step(p, &cur, *s).map_err(|e| match e {
            Error::BranchCutAmbiguity { .. } => Error::BranchCutAmbiguity { step: k },
            other => other,
        })?;
        out.push(cur);
    }
    Ok(out)
}

/// `f^k(z)`.
pub fn forward(p: Param, z: Complex64, k: usize) -> Complex64 {
    let mut w = z;
    for _ in 0..k {
        w = w * w + p.c();
    }
    w
}

/// Fitted `θ'` with `√(D_θ(T)) ⊆ D_θ'(T')` for `T = [-a, 1]`, `T' = [0, 1]`,
/// from `n` samples of the upper boundary of `D_θ(T)` and of the upper bank of
/// `[-a, 0)`. The fitted angle is attained on the boundary, the subtended
/// angle being harmonic.
pub fn sqrt_lemma_theta(a: f64, theta: f64, n: usize) -> Result<f64> {
    let t = RInterval::new(-a, 1.0)?;
    let tp = RInterval::new(0.0, 1.0)?;
    let disk = GeoDisk::new(t, theta)?;
    let mut worst = 0.0f64;
    let mut eval = |w: CPoint| {
        let s = sqrt_branch(&w);
        worst = worst.max(min_theta(s.z, &tp));
    };
    for w in disk.upper_arc(n) {
        eval(CPoint {
            z: w,
            bank: Some(Bank::Upper),
        });
    }
    for i in 0..n {
        let x = -a * i as f64 / n as f64;
        eval(CPoint::on_bank(x, Bank::Upper));
    }
    Ok(worst)
}

/// Smallest image angle `η'` over a polar grid of `ζ` around `a` with
/// incidence angle `θ ≤ π/2` at `a`, for the interval `J = [a, b]` taken in
/// the given order (`a > b` allowed). The grid has `n_r * n_psi` points.
pub fn sqrt_incidence_min(a: f64, b: f64, n_r: usize, n_psi: usize) -> f64 {
    let jp_b = b.sqrt();
    // outward ray at a points away from b
    let out_a = if a < b { PI } else { 0.0 };
    let out_b = if b > a { 0.0 } else { PI };
    let scale = (b - a).abs();
    let mut worst = PI;
    for i in 0..n_r {
        let r = scale * 10f64.powf(-3.0 + 6.0 * i as f64 / (n_r - 1).max(1) as f64);
        for k in 0..n_psi {
            // incidence angle theta in [0, pi/2], both half-planes
            let th = FRAC_PI_2 * k as f64 / (n_psi - 1).max(1) as f64;
            for side in [1.0, -1.0] {
                let psi = out_a + side * if out_a == 0.0 { th } else { -th };
                let zeta = Complex64::new(a, 0.0) + Complex64::from_polar(r, psi);
                let bank = if side > 0.0 { Bank::Upper } else { Bank::Lower };
                let w = CPoint {
                    z: Complex64::new(zeta.re, if zeta.im.abs() < 1e-300 { 0.0 } else { zeta.im }),
                    bank: Some(bank),
                };
                let zp = sqrt_branch(&w).z;
                let d = zp - Complex64::new(jp_b, 0.0);
                if d.norm() == 0.0 {
                    continue;
                }
                let eta = (d.arg() - out_b).abs();
                let eta = if eta > PI { 2.0 * PI - eta } else { eta };
                worst = worst.min(eta);
            }
        }
    }
    worst
}
