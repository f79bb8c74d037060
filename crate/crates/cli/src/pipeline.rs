//! nest -> cascades -> essential period -> tower -> verifiers, for one `c`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use renormlab::cgeom::CPoint;
use renormlab::nest::{
    analyze_cascades, build_level_nest, essential_period, CascadeKind, CascadeRecord,
    EssentialPeriodReport, NestEnd,
};
use renormlab::realdyn::{OrbitSample, Param, UnimodalLevel, DEFAULT_ORBIT_BUDGET};
use renormlab::renorm::{build_tower, detect_renormalization, RenormTower};
use renormlab::verify::{
    parabolic_proximity, quad_estimate, run_contraction_trial, sample_little_julia, track_cascade,
    CascadeOutcome, JuliaSample, Outcome,
};
use renormlab::{Complex64, Error};
use serde::{Deserialize, Serialize};

use crate::{CliError, RunConfig};

/// A typed dynamical error met at some stage. These are answers, not
/// failures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Note {
    pub stage: String,
    pub kind: String,
    pub message: String,
}

impl Note {
    pub fn new(stage: &str, e: &Error) -> Self {
        let dbg = format!("{e:?}");
        let kind = dbg.split([' ', '(', '{']).next().unwrap_or("").to_string();
        Self {
            stage: stage.to_string(),
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestSummary {
    pub levels: usize,
    pub return_times: Vec<usize>,
    pub noncentral_set: Vec<usize>,
    pub height: i64,
    pub immediately_renormalizable: bool,
    pub end: NestEnd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeSummary {
    pub k: usize,
    pub kind: CascadeKind,
    pub m_start: usize,
    pub length: usize,
    pub depth: usize,
    pub neglectable: (usize, usize),
    pub parabolic_proximity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub k: usize,
    pub n: usize,
    pub p: [f64; 2],
    pub b: [f64; 2],
    pub t: [f64; 2],
    pub sigma: Option<f64>,
    pub lambda_proxy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionSummary {
    pub k: usize,
    pub samples: usize,
    pub c_max: f64,
    pub c_median: f64,
    pub jumped_good: usize,
    pub reached_v_tau: usize,
    pub reached_in_disk: usize,
    pub return_moments: usize,
    /// Trials with some return moment neither in its disk nor after a jump.
    pub unclassified_trials: usize,
    pub errors: Vec<Note>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JuliaSummary {
    #[serde(flatten)]
    pub sample: JuliaSample,
    /// `diam / |B^k|`.
    pub diam_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelChecks {
    pub k: usize,
    pub contraction: Option<ContractionSummary>,
    pub c_min_quad: Option<f64>,
    pub julia: Option<JuliaSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub c: f64,
    pub config: RunConfig,
    pub nest: Option<NestSummary>,
    pub cascades: Vec<CascadeSummary>,
    pub period: Option<usize>,
    pub essential_period: Option<EssentialPeriodReport>,
    pub immediately_renormalizable: Option<bool>,
    pub p_e: Option<usize>,
    pub sigma: Option<f64>,
    pub tower_stop: Option<String>,
    pub levels: Vec<LevelSummary>,
    pub checks: Vec<LevelChecks>,
    pub notes: Vec<Note>,
}

fn pair(j: &renormlab::realdyn::RInterval) -> [f64; 2] {
    [j.lo(), j.hi()]
}

/// Fails only on an internal invariant; other errors become notes.
fn soft<T>(r: Result<T, Error>, stage: &str, notes: &mut Vec<Note>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Invariant(m)) => Err(CliError::Invariant(format!("{stage}: {m}"))),
        Err(e) => {
            notes.push(Note::new(stage, &e));
            Ok(None)
        }
    }
}

/// Seed for the samples of `(c, k)`, independent of run order.
pub fn sample_seed(seed: u64, c: f64, k: usize) -> u64 {
    seed ^ c.to_bits().rotate_left(17) ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// `samples` starts on `|z - mid P^k| = 2 |P^k|` at seeded random angles.
pub fn contraction_level(
    tower: &RenormTower,
    k: usize,
    cfg: &RunConfig,
) -> Result<ContractionSummary, CliError> {
    let lvl = tower
        .level(k)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(cfg.seed, tower.base.c(), k));
    let centre = Complex64::new(lvl.p.mid(), 0.0);
    let mut cs = Vec::with_capacity(cfg.samples);
    let mut s = ContractionSummary {
        k,
        samples: cfg.samples,
        c_max: 0.0,
        c_median: f64::NAN,
        jumped_good: 0,
        reached_v_tau: 0,
        reached_in_disk: 0,
        return_moments: 0,
        unclassified_trials: 0,
        errors: Vec::new(),
    };
    for _ in 0..cfg.samples {
        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
        let z0 = CPoint::from_complex(centre + Complex64::from_polar(2.0 * lvl.p.len(), phi));
        match run_contraction_trial(tower, k, z0, cfg.eps, cfg.kbar) {
            Ok(r) => {
                cs.push(r.c_measured);
                s.return_moments += r.trace.return_moments();
                if !r.trace.fully_classified() {
                    s.unclassified_trials += 1;
                }
                match r.outcome {
                    Outcome::JumpedGood { .. } => s.jumped_good += 1,
                    Outcome::ReachedVTau { in_disk } => {
                        s.reached_v_tau += 1;
                        if in_disk {
                            s.reached_in_disk += 1;
                        }
                    }
                }
            }
            Err(Error::Invariant(m)) => return Err(CliError::Invariant(m)),
            Err(e) => s.errors.push(Note::new("contraction", &e)),
        }
    }
    cs.sort_by(f64::total_cmp);
    if !cs.is_empty() {
        s.c_max = cs[cs.len() - 1];
        s.c_median = cs[cs.len() / 2];
    }
    Ok(s)
}

pub fn julia_level(tower: &RenormTower, k: usize, cfg: &RunConfig) -> Result<JuliaSummary, Error> {
    let sample = sample_little_julia(tower, k, cfg.grid, cfg.max_iter)?;
    let diam_ratio = sample.diam / tower.level(k)?.b.len();
    Ok(JuliaSummary { sample, diam_ratio })
}

pub fn tower_for(c: f64, cfg: &RunConfig) -> Result<RenormTower, Error> {
    let p = Param::new(c)?;
    let orbit = OrbitSample::new(p, DEFAULT_ORBIT_BUDGET);
    build_tower(p, cfg.depth, &orbit, &cfg.nest_options())
}

fn summarize_cascade(
    level: &UnimodalLevel,
    nest: &renormlab::nest::PrincipalNest,
    c: &CascadeRecord,
) -> CascadeSummary {
    CascadeSummary {
        k: c.k,
        kind: c.kind,
        m_start: c.m_start,
        length: c.length,
        depth: c.depth,
        neglectable: c.neglectable,
        parabolic_proximity: parabolic_proximity(level, nest, c).ok(),
    }
}

pub fn run_pipeline(c: f64, cfg: &RunConfig) -> Result<PipelineReport, CliError> {
    let mut notes = Vec::new();
    let mut report = PipelineReport {
        c,
        config: cfg.clone(),
        nest: None,
        cascades: Vec::new(),
        period: None,
        essential_period: None,
        immediately_renormalizable: None,
        p_e: None,
        sigma: None,
        tower_stop: None,
        levels: Vec::new(),
        checks: Vec::new(),
        notes: Vec::new(),
    };
    let Some(p) = soft(Param::new(c), "param", &mut notes)? else {
        report.notes = notes;
        return Ok(report);
    };
    let orbit = OrbitSample::new(p, DEFAULT_ORBIT_BUDGET);
    let Some(base) = soft(UnimodalLevel::base(p), "base", &mut notes)? else {
        report.notes = notes;
        return Ok(report);
    };
    let opts = cfg.nest_options();
    let Some(nest) = soft(build_level_nest(&base, &orbit, &opts), "nest", &mut notes)? else {
        report.notes = notes;
        return Ok(report);
    };
    report.nest = Some(NestSummary {
        levels: nest.levels.len(),
        return_times: nest.return_times(),
        noncentral_set: nest.noncentral_set.clone(),
        height: nest.height,
        immediately_renormalizable: nest.immediately_renormalizable,
        end: nest.end,
    });
    report.immediately_renormalizable = Some(nest.immediately_renormalizable);
    let cascades = analyze_cascades(&base, &nest, &orbit, 16);
    report.cascades = cascades
        .iter()
        .map(|cr| summarize_cascade(&base, &nest, cr))
        .collect();
    if let Some(det) = soft(detect_renormalization(&base, &nest), "renormalization", &mut notes)? {
        report.period = Some(det.period);
        if let Some(ep) = soft(
            essential_period(&base, &nest, &cascades, det.period, &orbit),
            "essential_period",
            &mut notes,
        )? {
            report.p_e = Some(ep.essential_period);
            report.essential_period = Some(ep);
        }
    }
    if report.period.is_some() {
        if let Some(tower) = soft(build_tower(p, cfg.depth, &orbit, &opts), "tower", &mut notes)? {
            report.tower_stop = Some(tower.stop.clone());
            report.sigma = tower.levels.get(1).and_then(|l| l.sigma);
            report.levels = tower
                .levels
                .iter()
                .map(|l| LevelSummary {
                    k: l.k,
                    n: l.n,
                    p: pair(&l.p),
                    b: pair(&l.b),
                    t: pair(&l.t),
                    sigma: l.sigma,
                    lambda_proxy: l.lambda_proxy,
                })
                .collect();
            for k in 1..=tower.depth().min(cfg.verify_levels) {
                let contraction = Some(contraction_level(&tower, k, cfg)?);
                let c_min_quad = soft(
                    quad_estimate(&tower, k, 5.0, cfg.quad_points),
                    "quad",
                    &mut notes,
                )?;
                let julia = soft(julia_level(&tower, k, cfg), "julia", &mut notes)?;
                report.checks.push(LevelChecks {
                    k,
                    contraction,
                    c_min_quad,
                    julia,
                });
            }
        }
    }
    report.notes = notes;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackSummary {
    pub c: f64,
    pub cascade: CascadeSummary,
    pub trials: usize,
    pub in_disk: usize,
    pub jumped: usize,
    pub neither: usize,
    /// Largest `d` over the jumped trials.
    pub d_max: f64,
    pub errors: Vec<Note>,
}

/// `trials` points uniform in `D(I^{m(k)})` of the base map's longest
/// cascade, each pulled back `1 + t mod (length - 1)` times.
pub fn track_cascade_trials(c: f64, trials: usize, cfg: &RunConfig) -> Result<TrackSummary, Error> {
    let p = Param::new(c)?;
    let orbit = OrbitSample::new(p, DEFAULT_ORBIT_BUDGET);
    let base = UnimodalLevel::base(p)?;
    let nest = build_level_nest(&base, &orbit, &cfg.nest_options())?;
    let cascades = analyze_cascades(&base, &nest, &orbit, 16);
    let longest = cascades
        .iter()
        .max_by_key(|c| c.length)
        .ok_or_else(|| Error::InsufficientData("no central cascade".into()))?;
    let top = nest
        .levels
        .get(longest.m_start)
        .ok_or(Error::MissingLevel(longest.m_start))?
        .interval;
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(cfg.seed, c, 0));
    let mut out = TrackSummary {
        c,
        cascade: summarize_cascade(&base, &nest, longest),
        trials,
        in_disk: 0,
        jumped: 0,
        neither: 0,
        d_max: 0.0,
        errors: Vec::new(),
    };
    for t in 0..trials {
        let r = 0.999 * 0.5 * top.len() * rng.gen::<f64>().sqrt();
        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
        let z = CPoint::from_complex(Complex64::new(top.mid(), 0.0) + Complex64::from_polar(r, phi));
        let j = if longest.length <= 1 {
            0
        } else {
            1 + t % (longest.length - 1)
        };
        match track_cascade(&base, &nest, longest, z, j, cfg.eps) {
            Ok(tr) => match tr.outcome {
                CascadeOutcome::InDisk => out.in_disk += 1,
                CascadeOutcome::JumpedWithDist { d, .. } => {
                    out.jumped += 1;
                    out.d_max = out.d_max.max(d);
                }
                CascadeOutcome::Neither { .. } => out.neither += 1,
            },
            Err(Error::Invariant(m)) => return Err(Error::Invariant(m)),
            Err(e) => out.errors.push(Note::new("track_cascade", &e)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn note_kind_is_variant_name() {
        let n = Note::new("base", &Error::AlphaAttracting { c: -0.5 });
        assert_eq!(n.kind, "AlphaAttracting");
        assert_eq!(Note::new("x", &Error::NotRenormalizable).kind, "NotRenormalizable");
    }
}
