use serde::{Deserialize, Serialize};

use crate::cgeom::{angle_to_interval, dist_to_interval, in_geodisk, inverse_step, CPoint, GeoDisk};
use crate::error::{Error, Result};
use crate::nest::{branch_signs, CascadeKind, CascadeRecord, PrincipalNest};
use crate::realdyn::{monotone_pullback_step, PowerMap, RInterval, UnimodalLevel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CascadeOutcome {
    InDisk,
    /// `d = dist(z', E') / |I^{m(k)}|`.
    JumpedWithDist { d: f64, angle: f64 },
    Neither { d: f64, angle: f64 },
}

impl CascadeOutcome {
    /// The dichotomy holds with jump distance at most `dmax`.
    pub fn within(&self, dmax: f64) -> bool {
        match self {
            CascadeOutcome::InDisk => true,
            CascadeOutcome::JumpedWithDist { d, .. } => *d <= dmax,
            CascadeOutcome::Neither { .. } => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeTrial {
    pub j: usize,
    pub z: CPoint,
    pub z_final: CPoint,
    pub e_final: RInterval,
    pub outcome: CascadeOutcome,
}

fn return_map(level: &UnimodalLevel, cascade: &CascadeRecord) -> (usize, PowerMap) {
    let steps = cascade.return_time * level.period;
    (steps, PowerMap::new(level.param, steps))
}

/// Pulls `z ∈ D(I^{m(k)})` back `j` times through the return map `h_k`
/// along `E_0 ⊂ I^{m(k)} \ I^{m(k)+1}`, `E_{-i} ⊂ I^{m(k)+i} \ I^{m(k)+i+1}`.
///
/// `E_0` is the component of the annulus on the side of `h_k(0)`, the only
/// side covered by `h_k` on a saddle-node cascade.
pub fn track_cascade(
    level: &UnimodalLevel,
    nest: &PrincipalNest,
    cascade: &CascadeRecord,
    z: CPoint,
    j: usize,
    eps: f64,
) -> Result<CascadeTrial> {
    if j + 1 > cascade.length.max(1) && j > 0 {
        return Err(Error::Precondition(format!(
            "{j} pullbacks exceed cascade length {}",
            cascade.length
        )));
    }
    let outer = nest.levels.get(cascade.m_start).ok_or(Error::MissingLevel(cascade.m_start))?;
    let inner = nest
        .levels
        .get(cascade.m_start + 1)
        .ok_or(Error::MissingLevel(cascade.m_start + 1))?;
    let big = outer.interval;
    let disk = GeoDisk::round(big);
    if !in_geodisk(&z, &disk) {
        return Err(Error::Precondition("z is not in D(I^{m(k)})".into()));
    }
    let p = level.param;
    let (steps, h) = return_map(level, cascade);
    let side = if h.eval(0.0) >= 0.0 { 1.0 } else { -1.0 };
    let mut e = if side > 0.0 {
        RInterval::new(inner.interval.hi(), big.hi())?
    } else {
        RInterval::new(big.lo(), inner.interval.lo())?
    };
    let signs = branch_signs(p, steps, side);
    let mut w = z;
    for _ in 0..j {
        for (i, s) in signs.iter().enumerate().rev() {
            e = monotone_pullback_step(p, &e, *s)?;
            w = inverse_step(p, &w, *s).map_err(|err| match err {
                Error::BranchCutAmbiguity { .. } => Error::BranchCutAmbiguity { step: i },
                other => other,
            })?;
        }
    }
    let outcome = if in_geodisk(&w, &disk) {
        CascadeOutcome::InDisk
    } else {
        let angle = angle_to_interval(&w, &e).unwrap_or(0.0);
        let d = dist_to_interval(w.z, &e) / big.len();
        if angle > eps {
            CascadeOutcome::JumpedWithDist { d, angle }
        } else {
            CascadeOutcome::Neither { d, angle }
        }
    };
    Ok(CascadeTrial {
        j,
        z,
        z_final: w,
        e_final: e,
        outcome,
    })
}

/// `min s (h_k(x) - x) / |I^{m(k)}|` over a grid of the central interval
/// `I^{m(k)+1}`, `s` the side of `h_k(0)`. Small values mean `h_k` is close
/// to having a fixed point there.
pub fn parabolic_proximity(
    level: &UnimodalLevel,
    nest: &PrincipalNest,
    cascade: &CascadeRecord,
) -> Result<f64> {
    if cascade.kind != CascadeKind::SaddleNode {
        return Err(Error::WrongCascadeKind);
    }
    let big = nest.levels.get(cascade.m_start).ok_or(Error::MissingLevel(cascade.m_start))?;
    let inner = nest
        .levels
        .get(cascade.m_start + 1)
        .ok_or(Error::MissingLevel(cascade.m_start + 1))?
        .interval;
    let (_, h) = return_map(level, cascade);
    let s = if h.eval(0.0) >= 0.0 { 1.0 } else { -1.0 };
    const GRID: usize = 2001;
    let mut nu = f64::INFINITY;
    for i in 0..GRID {
        let x = inner.lo() + inner.len() * i as f64 / (GRID - 1) as f64;
        nu = nu.min(s * (h.eval(x) - x));
    }
    Ok(nu / big.interval.len())
}
