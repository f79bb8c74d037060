//! Renormalization tower: periods `n_k`, the intervals `P^k ⊆ S^k ⊂ T^k`,
//! `B^k`, the cycles and the scaling ratios.
//!
//! Levels are kept as iterates `f^{n_k}` of the base map in its original
//! coordinate; nothing is ever composed symbolically.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nest::{build_level_nest, NestEnd, NestOptions, PrincipalNest};
use crate::realdyn::{
    bisect, fixed_points, monotonicity_interval, OrbitSample, Param, PowerMap, RInterval,
    UnimodalLevel,
};

/// Deepest tower built at desk scale.
pub const MAX_DEPTH: usize = 6;
/// Descent stops when the periodic interval gets shorter than this.
pub const P_GUARD: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detected {
    /// Relative period `p_{k+1} = n_{k+1} / n_k`.
    pub factor: usize,
    /// Total period in base steps.
    pub period: usize,
    /// Signed fixed endpoint of `B^{k+1}`.
    pub beta: f64,
}

/// Renormalization of the level map read off its nest.
pub fn detect_renormalization(level: &UnimodalLevel, nest: &PrincipalNest) -> Result<Detected> {
    if nest.immediately_renormalizable {
        return Ok(Detected {
            factor: 2,
            period: 2 * level.period,
            beta: level.alpha,
        });
    }
    match nest.end {
        NestEnd::Renormalizable { period, beta } => Ok(Detected {
            factor: period,
            period: period * level.period,
            beta,
        }),
        _ => Err(Error::NotRenormalizable),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormLevel {
    pub k: usize,
    pub n: usize,
    /// Chosen periodic interval: the minimal one when valid, else `B`.
    pub p: RInterval,
    pub p_min: Option<RInterval>,
    pub b: RInterval,
    pub beta: f64,
    /// Orientation-reversing fixed point of `f^n` in `B`, if it repels.
    pub alpha: Option<f64>,
    pub s: RInterval,
    pub t: RInterval,
    pub xi: f64,
    pub xi_capped: bool,
    pub cycle: Vec<RInterval>,
    /// `|B^k| / |B^{k-1}|`, from level 1 on.
    pub sigma: Option<f64>,
    /// `|S^k| / |T^k|`.
    pub lambda_proxy: f64,
    /// `log10 |(f^n)'(beta_k)|`, a conditioning indicator.
    pub log10_derivative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormTower {
    pub base: Param,
    pub levels: Vec<RenormLevel>,
    /// Nest of level `k`'s map, the one that produced level `k + 1`.
    pub nests: Vec<PrincipalNest>,
    /// Largest `|S^k| / |T^k|` over levels `k >= 1`.
    pub epstein_lambda: f64,
    pub stop: String,
}

impl RenormTower {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> Result<&RenormLevel> {
        self.levels.get(k).ok_or(Error::MissingLevel(k))
    }

    /// Level `k` as a unimodal map; fails when its alpha does not repel.
    pub fn unimodal(&self, k: usize) -> Result<UnimodalLevel> {
        let l = self.level(k)?;
        UnimodalLevel::new(self.base, l.n, l.beta)
    }
}

/// `|B^{k+1}| / |B^k|`.
pub fn sigma(tower: &RenormTower, k: usize) -> Result<f64> {
    let a = tower.level(k)?;
    let b = tower.level(k + 1)?;
    Ok(b.b.len() / a.b.len())
}

/// `S = [-xi, xi]`, the maximal symmetric interval on which `f^n` is
/// unimodal, and the range `T` of its Epstein extension.
///
/// Both come from the maximal monotonicity interval `Z` of `f^{n-1}` around
/// the critical value: `f(S) = [c, Z.hi]` and `T = f^{n-1}(Z)`. `T` contains
/// `f^n(S)` and is the interval whose slit plane is the range of the level
/// map. Returns `(S, T, xi, capped)`.
pub fn unimodality_interval(p: Param, n: usize) -> Result<(RInterval, RInterval, f64, bool)> {
    let (_, beta) = fixed_points(p)?;
    let range = RInterval::symmetric(beta)?;
    let c = p.c();
    let z = monotonicity_interval(p, c, n.saturating_sub(1), &range)?;
    let xi = (z.hi() - c).max(0.0).sqrt();
    let top = p.iterate(z.hi(), n.saturating_sub(1));
    let capped = (top.abs() - beta).abs() <= 1e-9 * beta;
    let t = RInterval::new(p.iterate(z.lo(), n - 1), top)?;
    Ok((RInterval::symmetric(xi)?, t, xi, capped))
}

fn minimal_periodic_interval(f: &PowerMap) -> Option<RInterval> {
    let a = f.eval(0.0);
    let b = f.eval(a);
    let pm = RInterval::new(a, b).ok()?;
    // 0 must sit inside with room to spare, not at an endpoint up to rounding
    if a.abs().min(b.abs()) <= 1e-9 * pm.len() || !pm.contains_interior(0.0) {
        return None;
    }
    let img = f.image(&pm);
    if pm.dilate(1.0 + 1e-9).contains_interval(&img) {
        Some(pm)
    } else {
        None
    }
}

/// `f^i(P)`, `i = 0..n`, by exact interval images.
pub fn cycle_of(p: Param, j: &RInterval, n: usize) -> Vec<RInterval> {
    let mut out = Vec::with_capacity(n);
    let mut cur = *j;
    for _ in 0..n {
        out.push(cur);
        cur = cur.image(p);
    }
    out
}

impl RenormLevel {
    /// Level 0: the map itself on `B = [-β, β]`.
    pub fn base(p: Param) -> Result<Self> {
        let (_, beta) = fixed_points(p)?;
        make_level(p, 0, 1, beta, None)
    }
}

fn make_level(
    p: Param,
    k: usize,
    n: usize,
    beta: f64,
    parent_b: Option<&RInterval>,
) -> Result<RenormLevel> {
    let f = PowerMap::new(p, n);
    let b = RInterval::symmetric(beta)?;
    let p_min = if k == 0 {
        None
    } else {
        minimal_periodic_interval(&f)
    };
    let chosen = p_min.unwrap_or(b);
    let (s, t, xi, xi_capped) = unimodality_interval(p, n)?;
    let alpha = UnimodalLevel::new(p, n, beta).ok().map(|l| l.alpha);
    let (_, d) = f.eval_with_derivative(beta);
    Ok(RenormLevel {
        k,
        n,
        p: chosen,
        p_min,
        b,
        beta,
        alpha,
        s,
        t,
        xi,
        xi_capped,
        cycle: cycle_of(p, &chosen, n),
        sigma: parent_b.map(|pb| b.len() / pb.len()),
        lambda_proxy: s.len() / t.len(),
        log10_derivative: d.abs().log10(),
    })
}

/// Builds levels `0..=max_depth` (capped at [`MAX_DEPTH`]) by running the
/// nest on each level map in turn.
///
/// Fails only when the base map has no first renormalization; deeper
/// failures truncate the tower and are recorded in `stop`.
pub fn build_tower(
    p: Param,
    max_depth: usize,
    orbit: &OrbitSample,
    opts: &NestOptions,
) -> Result<RenormTower> {
    let base = UnimodalLevel::base(p)?;
    let mut levels = vec![make_level(p, 0, 1, base.beta, None)?];
    let mut nests = Vec::new();
    let mut cur = base;
    let max_depth = max_depth.min(MAX_DEPTH);
    let mut stop = String::from("max depth");
    for k in 1..=max_depth {
        let nest = match build_level_nest(&cur, orbit, opts) {
            Ok(n) => n,
            // no return at all: no period can stabilize
            Err(Error::NoReturnWithinBudget { .. }) if k == 1 => {
                return Err(Error::NotRenormalizable)
            }
            Err(e) if k == 1 => return Err(e),
            Err(e) => {
                stop = e.to_string();
                break;
            }
        };
        let det = match detect_renormalization(&cur, &nest) {
            Ok(d) => d,
            Err(e) if k == 1 => return Err(e),
            Err(e) => {
                nests.push(nest);
                stop = e.to_string();
                break;
            }
        };
        nests.push(nest);
        let lvl = make_level(p, k, det.period, det.beta, Some(&levels[k - 1].b))?;
        if lvl.p.len() < P_GUARD {
            stop = "precision guard on |P|".into();
            break;
        }
        levels.push(lvl);
        match UnimodalLevel::new(p, det.period, det.beta) {
            Ok(next) => cur = next,
            Err(e) => {
                stop = e.to_string();
                break;
            }
        }
    }
    let epstein_lambda = levels
        .iter()
        .skip(1)
        .map(|l| l.lambda_proxy)
        .fold(0.0, f64::max);
    Ok(RenormTower {
        base: p,
        levels,
        nests,
        epstein_lambda,
        stop,
    })
}

/// Ratio of the two parts into which the preimage `eta` of 0 divides
/// `[alpha_k, -beta_k]`; always in `(0, 1]`.
pub fn divides_ratio(p: Param, level: &RenormLevel) -> Result<f64> {
    let alpha = level.alpha.ok_or(Error::NoPreimageInInterval)?;
    let far = -level.beta;
    let f = PowerMap::new(p, level.n);
    let eta = bisect(|x| f.eval(x), alpha, far).ok_or(Error::NoPreimageInInterval)?;
    let a = (eta - alpha).abs();
    let b = (far - eta).abs();
    if a == 0.0 || b == 0.0 {
        return Err(Error::NoPreimageInInterval);
    }
    Ok(a.min(b) / a.max(b))
}
