use serde::{Deserialize, Serialize};

use crate::cgeom::{angle_to_interval, dist_to_interval, in_geodisk, inverse_step, CPoint, GeoDisk};
use crate::error::{Error, Result};
use crate::realdyn::{monotone_pullback_step, RInterval};
use crate::renorm::RenormTower;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReturnClass {
    InDisk,
    Jumped,
    Unclassified,
    /// `z0` was not in `D(B^level)`, so no dichotomy is claimed.
    NoClaim,
}

/// A backward return of the interval orbit to `B^level`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moment {
    pub level: usize,
    pub in_disk: bool,
    pub class: ReturnClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub s: usize,
    pub j: RInterval,
    pub z: CPoint,
    /// `None` when `z` is real and inside `J`.
    pub angle: Option<f64>,
    pub good: bool,
    pub moments: Vec<Moment>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpTrace {
    pub steps: Vec<TraceStep>,
    pub first_jump: Option<usize>,
    pub jump_eps: f64,
}

impl JumpTrace {
    /// Every recorded return moment is either in its disk or after a jump.
    pub fn fully_classified(&self) -> bool {
        self.steps
            .iter()
            .flat_map(|s| s.moments.iter())
            .all(|m| m.class != ReturnClass::Unclassified)
    }

    pub fn return_moments(&self) -> usize {
        self.steps.iter().map(|s| s.moments.len()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    JumpedGood { s: usize },
    ReachedVTau { in_disk: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub k: usize,
    pub z0: CPoint,
    pub eps: f64,
    pub kbar: f64,
    pub ratio_in: f64,
    pub ratio_out: f64,
    pub c_measured: f64,
    pub trace: JumpTrace,
    pub outcome: Outcome,
    pub v_tau: RInterval,
    /// Step at which the orbit is back in level `k - 1`'s central interval.
    pub v_step: usize,
}

/// `V_τ` for level `k`: `B^{k-1}` when level `k - 1` renormalizes
/// immediately, else the nest interval just above its last non-central
/// level but one.
fn v_tau(tower: &RenormTower, k: usize) -> Result<RInterval> {
    let b = tower.level(k - 1)?.b;
    let Some(nest) = tower.nests.get(k - 1) else {
        return Ok(b);
    };
    if nest.immediately_renormalizable || nest.height < 1 {
        return Ok(b);
    }
    let m = nest.noncentral_set[nest.height as usize - 1];
    Ok(match m.checked_sub(1).and_then(|i| nest.levels.get(i)) {
        Some(l) => l.interval,
        None => b,
    })
}

/// Pulls `z0` back along the cycle of `P^k`, `J_{-s} = ` the component of
/// `f^{-s}(P^k)` containing `f^{n-s}(P^k)`, for `s = 1..n-1`.
pub fn run_contraction_trial(
    tower: &RenormTower,
    k: usize,
    z0: CPoint,
    eps: f64,
    kbar: f64,
) -> Result<ContractionReport> {
    if k == 0 {
        return Err(Error::Precondition("contraction trial needs k >= 1".into()));
    }
    let p = tower.base;
    let lvl = tower.level(k)?;
    let n = lvl.n;
    let j0 = lvl.p;
    let ratio_in = dist_to_interval(z0.z, &j0) / j0.len();
    if ratio_in < 1.0 {
        return Err(Error::Precondition(format!(
            "dist(z0, P) / |P| = {ratio_in} < 1"
        )));
    }
    let v = v_tau(tower, k)?;
    let v_step = n - tower.level(k - 1)?.n;
    let periods: Vec<(usize, RInterval, bool)> = (0..k)
        .map(|l| {
            tower
                .level(l)
                .map(|x| (x.n, x.b, in_geodisk(&z0, &GeoDisk::round(x.b))))
        })
        .collect::<Result<_>>()?;

    let mut steps = vec![TraceStep {
        s: 0,
        j: j0,
        z: z0,
        angle: angle_to_interval(&z0, &j0).ok(),
        good: true,
        moments: Vec::new(),
    }];
    let mut first_jump = None;
    if steps[0].angle.is_some_and(|a| a > eps) {
        first_jump = Some(0);
    }
    let mut outcome = None;
    let mut j = j0;
    let mut z = z0;
    for s in 1..n {
        let side = lvl.cycle[n - s].side();
        if side == 0.0 {
            return Err(Error::Invariant(format!("cycle interval {} straddles 0", n - s)));
        }
        j = monotone_pullback_step(p, &j, side)?;
        z = inverse_step(p, &z, side).map_err(|e| match e {
            Error::BranchCutAmbiguity { .. } => Error::BranchCutAmbiguity { step: s - 1 },
            other => other,
        })?;
        let angle = angle_to_interval(&z, &j).ok();
        let good = j.len() * kbar >= j0.len();
        if first_jump.is_none() && angle.is_some_and(|a| a > eps) {
            first_jump = Some(s);
        }
        if outcome.is_none() && good && angle.is_some_and(|a| a > eps) {
            outcome = Some(Outcome::JumpedGood { s });
        }
        let mut moments = Vec::new();
        for (l, (nl, bl, claimed)) in periods.iter().enumerate() {
            if (n - s) % nl == 0 {
                let in_disk = in_geodisk(&z, &GeoDisk::round(*bl));
                let class = if !claimed {
                    ReturnClass::NoClaim
                } else if in_disk {
                    ReturnClass::InDisk
                } else if first_jump.is_some() {
                    ReturnClass::Jumped
                } else {
                    ReturnClass::Unclassified
                };
                moments.push(Moment {
                    level: l,
                    in_disk,
                    class,
                });
            }
        }
        if s == v_step && outcome.is_none() {
            outcome = Some(Outcome::ReachedVTau {
                in_disk: in_geodisk(&z, &GeoDisk::round(v)),
            });
        }
        steps.push(TraceStep {
            s,
            j,
            z,
            angle,
            good,
            moments,
        });
    }
    let last = steps.last().expect("trace has the initial step");
    let ratio_out = dist_to_interval(last.z.z, &last.j) / last.j.len();
    let outcome = outcome.unwrap_or(Outcome::ReachedVTau {
        in_disk: in_geodisk(&last.z, &GeoDisk::round(v)),
    });
    Ok(ContractionReport {
        k,
        z0,
        eps,
        kbar,
        ratio_in,
        ratio_out,
        c_measured: ratio_out / ratio_in,
        trace: JumpTrace {
            steps,
            first_jump,
            jump_eps: eps,
        },
        outcome,
        v_tau: v,
        v_step,
    })
}
