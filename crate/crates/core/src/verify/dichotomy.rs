use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::cgeom::{angle_to_interval, in_q, in_s, min_theta, pullback_points, CPoint};
use crate::error::{Error, Result};
use crate::realdyn::{fixed_points, monotone_pullback_step, monotonicity_interval, Param, RInterval};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dichotomy {
    /// First `k` with `z_{-k} ∈ Q_ε(J_{-k})`.
    Jumped { k: usize, angle: f64 },
    /// `z' ∈ S_{θ,ε}(H_l(J'), J')`; `theta` is the least disk angle that
    /// works and `kappa = (theta - π/2) / ε`.
    InS { theta: f64, kappa: f64 },
    Neither { theta: f64 },
}

impl Dichotomy {
    pub fn holds(&self) -> bool {
        !matches!(self, Dichotomy::Neither { .. })
    }
}

/// `J, J_{-1}, ..., J_{-l}` along the branches `signs`.
pub fn monotone_pullback(p: Param, j: &RInterval, signs: &[f64]) -> Result<Vec<RInterval>> {
    let mut out = Vec::with_capacity(signs.len() + 1);
    out.push(*j);
    let mut cur = *j;
    for s in signs {
        cur = monotone_pullback_step(p, &cur, *s)?;
        if cur.contains_interior(0.0) {
            return Err(Error::Precondition("pullback is not monotone".into()));
        }
        out.push(cur);
    }
    Ok(out)
}

/// Either the backward orbit of `z0` sees some `J_{-k}` at an angle of at
/// least `eps`, or its endpoint lies in the wedge pair at `∂J'` cut off by a
/// hyperbolic disk over `H_l(J')`, the monotonicity interval of `f^l` inside
/// `[-β, β]`.
pub fn jump_dichotomy_check(
    p: Param,
    j: &RInterval,
    signs: &[f64],
    z0: CPoint,
    eps: f64,
) -> Result<Dichotomy> {
    let js = monotone_pullback(p, j, signs)?;
    let zs = pullback_points(p, &z0, signs)?;
    for (k, (jk, zk)) in js.iter().zip(&zs).enumerate() {
        if in_q(zk, jk, eps) && !(zk.is_real() && jk.contains_interior(zk.re())) {
            let angle = angle_to_interval(zk, jk).unwrap_or(PI);
            return Ok(Dichotomy::Jumped { k, angle });
        }
    }
    let jp = js[js.len() - 1];
    let zp = zs[zs.len() - 1];
    let (_, beta) = fixed_points(p)?;
    let range = RInterval::symmetric(beta)?;
    let h = monotonicity_interval(p, jp.mid(), signs.len(), &range)?.hull(&jp);
    let theta = min_theta(zp.z, &h);
    if theta >= PI {
        return Ok(Dichotomy::Neither { theta });
    }
    let probe = (theta + 1e-9).clamp(1e-9, PI - 1e-12);
    if in_s(&zp, &h, &jp, probe, eps)? {
        Ok(Dichotomy::InS {
            theta,
            kappa: (theta - FRAC_PI_2) / eps,
        })
    } else {
        Ok(Dichotomy::Neither { theta })
    }
}
