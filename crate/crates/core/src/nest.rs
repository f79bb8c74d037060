//! Principal nest of a unimodal level, its central cascades and the
//! essential period.
//!
//! All constructions are written for a [`UnimodalLevel`], i.e. for
//! `F = f^n` acting near 0 in the coordinate of the base map. The base map is
//! the case `n = 1`. Return times are counted in `F`-steps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realdyn::{
    bisect, pullback_component, OrbitSample, Param, PowerMap, RInterval, UnimodalLevel,
};

/// Knobs for [`build_level_nest`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestOptions {
    pub max_levels: usize,
    /// Descent stops once `|I^m|` drops below this length.
    pub precision_guard: f64,
    /// Consecutive equal return times needed before the stall rule fires.
    pub stall_levels: usize,
    /// ... together with `|I^m| / |I^{m-1}|` above this ratio.
    pub stall_ratio: f64,
    /// Return domains and gaps are filled in for levels `1..=domain_levels`.
    pub domain_levels: usize,
    pub domain_cap: usize,
    /// Number of `F`-orbit points scanned when collecting return domains.
    pub scan_cap: usize,
}

impl Default for NestOptions {
    fn default() -> Self {
        Self {
            max_levels: 10_000,
            precision_guard: 1e-9,
            stall_levels: 30,
            stall_ratio: 1.0 - 1e-10,
            domain_levels: 32,
            domain_cap: 64,
            scan_cap: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestLevel {
    pub m: usize,
    pub interval: RInterval,
    /// `t(m)` in `F`-steps; 0 for the top level.
    pub return_time: usize,
    pub return_domains: Vec<RInterval>,
    pub gaps: Vec<RInterval>,
}

/// Why the descent stopped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NestEnd {
    Immediate,
    /// `F^period` is renormalizable on `[beta, -beta]`; `beta` is the fixed
    /// endpoint.
    Renormalizable { period: usize, beta: f64 },
    MaxLevels,
    PrecisionGuard,
    Stalled,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalNest {
    /// Period of the level map in base steps.
    pub base_period: usize,
    pub levels: Vec<NestLevel>,
    pub noncentral_set: Vec<usize>,
    pub height: i64,
    pub immediately_renormalizable: bool,
    pub end: NestEnd,
    pub orbit_budget: usize,
}

impl PrincipalNest {
    pub fn return_times(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.return_time).collect()
    }

    /// Deepest built level whose interval contains `y` in its interior;
    /// boundary points belong to the outer level.
    pub fn level_of(&self, y: f64) -> Option<usize> {
        let a = y.abs();
        if self.levels.is_empty() || a >= self.levels[0].interval.hi() {
            return None;
        }
        // radii are strictly decreasing
        let (mut lo, mut hi) = (0usize, self.levels.len() - 1);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if a < self.levels[mid].interval.hi() {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Some(lo)
    }

    pub fn radius(&self, m: usize) -> Result<f64> {
        self.levels
            .get(m)
            .map(|l| l.interval.hi())
            .ok_or(Error::MissingLevel(m))
    }
}

/// `X = {0} ∪ {m : t(m+1) > t(m)}`, read off the return times of built levels.
///
/// `times[0]` is ignored. A level is listed only when `t(m+1)` is known.
pub fn noncentral_set(times: &[usize]) -> Vec<usize> {
    let mut x = vec![0];
    for m in 1..times.len().saturating_sub(1) {
        if times[m + 1] > times[m] {
            x.push(m);
        }
    }
    x
}

/// `F^2(A) ⊆ A`.
pub fn immediately_renormalizable(level: &UnimodalLevel) -> bool {
    let a = level.a_interval();
    let img = PowerMap::new(level.param, 2 * level.period).image(&a);
    a.contains_interval(&img)
}

/// The renormalization test run whenever a return is central.
///
/// Looks for the outermost point `x ∈ (0, r]` with `G(±x) = ±x` fixed by
/// `G = F^big_n`, multiplier at least 1 there and `|G(0)| ≤ x`. Returns the
/// signed fixed endpoint.
pub fn period_test(level: &UnimodalLevel, big_n: usize, r: f64) -> Option<f64> {
    let g = PowerMap::new(level.param, level.period * big_n);
    let g0 = g.eval(0.0).abs();
    const GRID: usize = 256;
    let mut best: Option<f64> = None;
    for sign in [1.0f64, -1.0] {
        // fixed point y = sign * x, G(x) = G(y) since G is even
        let h = |x: f64| g.eval(x) - sign * x;
        let mut prev_x = 0.0;
        let mut prev_h = h(0.0);
        for i in 1..=GRID {
            let x = r * i as f64 / GRID as f64;
            let hx = h(x);
            if prev_h.signum() != hx.signum() || hx == 0.0 {
                if let Some(root) = bisect(h, prev_x, x) {
                    let y = sign * root;
                    let (_, d) = g.eval_with_derivative(y);
                    if root > 0.0
                        && d >= 1.0 - 1e-9
                        && g0 <= root * (1.0 + 1e-9)
                        && best.is_none_or(|b: f64| root > b.abs())
                    {
                        best = Some(y);
                    }
                }
            }
            prev_x = x;
            prev_h = hx;
        }
    }
    best
}

/// Principal nest of the base map `x^2 + c`.
pub fn build_principal_nest(
    p: Param,
    max_levels: usize,
    orbit: &OrbitSample,
) -> Result<PrincipalNest> {
    let level = UnimodalLevel::base(p)?;
    let opts = NestOptions {
        max_levels,
        ..NestOptions::default()
    };
    build_level_nest(&level, orbit, &opts)
}

/// First `t ≥ 1` with `F^t(0)` in `i`, scanning the base orbit with stride `n`.
fn first_return(i: &RInterval, orbit: &OrbitSample, n: usize, from: usize) -> Option<usize> {
    let mut t = from + 1;
    while t * n < orbit.budget() {
        if i.contains(orbit.point(t * n)) {
            return Some(t - from);
        }
        t += 1;
    }
    None
}

pub fn build_level_nest(
    level: &UnimodalLevel,
    orbit: &OrbitSample,
    opts: &NestOptions,
) -> Result<PrincipalNest> {
    let n = level.period;
    let a = level.a_interval();
    let mut nest = PrincipalNest {
        base_period: n,
        levels: Vec::new(),
        noncentral_set: Vec::new(),
        height: -1,
        immediately_renormalizable: false,
        end: NestEnd::Immediate,
        orbit_budget: orbit.budget(),
    };
    if immediately_renormalizable(level) {
        nest.immediately_renormalizable = true;
        return Ok(nest);
    }
    nest.levels.push(NestLevel {
        m: 0,
        interval: a,
        return_time: 0,
        return_domains: Vec::new(),
        gaps: Vec::new(),
    });
    let mut equal_run = 0usize;
    let end = loop {
        let m = nest.levels.len();
        if m > opts.max_levels {
            break NestEnd::MaxLevels;
        }
        let prev = nest.levels[m - 1].clone();
        let t = match first_return(&prev.interval, orbit, n, 0) {
            Some(t) => t,
            None if m == 1 => {
                return Err(Error::NoReturnWithinBudget {
                    budget: orbit.budget(),
                })
            }
            None => break NestEnd::BudgetExhausted,
        };
        let seg = &orbit.points()[..=t * n];
        let interval = pullback_component(&prev.interval, seg)?;
        if !prev.interval.contains_interval(&interval) || interval.len() >= prev.interval.len() {
            return Err(Error::Invariant(format!("level {m} is not nested")));
        }
        nest.levels.push(NestLevel {
            m,
            interval,
            return_time: t,
            return_domains: Vec::new(),
            gaps: Vec::new(),
        });
        if m >= 2 && t == prev.return_time {
            if let Some(beta) = period_test(level, t, interval.hi()) {
                break NestEnd::Renormalizable { period: t, beta };
            }
            equal_run += 1;
            if equal_run >= opts.stall_levels
                && interval.len() / prev.interval.len() > opts.stall_ratio
            {
                break NestEnd::Stalled;
            }
        } else {
            equal_run = 0;
        }
        if interval.len() < opts.precision_guard {
            break NestEnd::PrecisionGuard;
        }
    };
    nest.end = end;
    let upto = opts.domain_levels.min(nest.levels.len() - 1);
    for m in 1..=upto {
        let doms = return_domains(level, &nest, m, orbit, opts.domain_cap, opts.scan_cap)?;
        let gaps = gaps_of(&nest.levels[m - 1].interval, &doms);
        nest.levels[m].return_domains = doms;
        nest.levels[m].gaps = gaps;
    }
    nest.noncentral_set = noncentral_set(&nest.return_times());
    nest.height = nest.noncentral_set.len() as i64 - 1;
    Ok(nest)
}

/// Domains of the first return map to `I^{m-1}` that meet the orbit sample,
/// central domain `I^m` first.
pub fn return_domains(
    level: &UnimodalLevel,
    nest: &PrincipalNest,
    m: usize,
    orbit: &OrbitSample,
    cap: usize,
    scan_cap: usize,
) -> Result<Vec<RInterval>> {
    if m == 0 || m >= nest.levels.len() {
        return Err(Error::MissingLevel(m));
    }
    let n = level.period;
    let outer = nest.levels[m - 1].interval;
    let central = nest.levels[m].interval;
    let mut doms = vec![central];
    let mut i = 1usize;
    while i < scan_cap && i * n < orbit.budget() && doms.len() < cap {
        let x = orbit.point(i * n);
        if outer.contains_interior(x) && !doms.iter().any(|d| d.contains(x)) {
            let Some(r) = first_return(&outer, orbit, n, i) else {
                break;
            };
            let seg = &orbit.points()[i * n..=(i + r) * n];
            if let Ok(d) = pullback_component(&outer, seg) {
                if !d.contains_interior(0.0)
                    && outer.contains_interval(&d)
                    && !doms.iter().any(|e| e.interiors_overlap(&d))
                {
                    doms.push(d);
                }
            }
        }
        i += 1;
    }
    Ok(doms)
}

/// Components of `outer` minus the union of `doms`.
pub fn gaps_of(outer: &RInterval, doms: &[RInterval]) -> Vec<RInterval> {
    let mut sorted: Vec<RInterval> = doms.to_vec();
    sorted.sort_by(|a, b| a.lo().total_cmp(&b.lo()));
    let mut gaps = Vec::new();
    let mut cursor = outer.lo();
    for d in &sorted {
        if d.lo() > cursor {
            if let Ok(g) = RInterval::new(cursor, d.lo()) {
                gaps.push(g);
            }
        }
        cursor = cursor.max(d.hi());
    }
    if outer.hi() > cursor {
        if let Ok(g) = RInterval::new(cursor, outer.hi()) {
            gaps.push(g);
        }
    }
    gaps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CascadeKind {
    SaddleNode,
    UlamNeumann,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeRecord {
    pub k: usize,
    pub m_start: usize,
    pub m_end: usize,
    pub kind: CascadeKind,
    pub length: usize,
    /// Return time of `h_k` in `F`-steps.
    pub return_time: usize,
    pub depth: usize,
    /// Open range of neglectable levels `(lo, hi)`; empty when `lo + 1 >= hi`.
    pub neglectable: (usize, usize),
    /// No orbit point was found in `I^{m(k)} \ I^{m(k)+1}`.
    pub depth_unsampled: bool,
    pub markov: Vec<(usize, RInterval)>,
}

impl CascadeRecord {
    pub fn is_neglectable(&self, l: usize) -> bool {
        l > self.neglectable.0 && l < self.neglectable.1
    }

    pub fn neglectable_is_empty(&self) -> bool {
        self.neglectable.0 + 1 >= self.neglectable.1
    }
}

/// Cascades delimited by consecutive elements of `X`; depth and Markov data
/// are left empty (see [`depth_and_neglectable`] and [`markov_family`]).
pub fn detect_cascades(level: &UnimodalLevel, nest: &PrincipalNest) -> Vec<CascadeRecord> {
    let x = &nest.noncentral_set;
    let mut out = Vec::new();
    for k in 0..x.len().saturating_sub(1) {
        let (ms, me) = (x[k], x[k + 1]);
        let t = nest.levels[ms + 1].return_time;
        let h = PowerMap::new(level.param, level.period * t);
        let img = h.image(&nest.levels[ms + 1].interval);
        let kind = if img.contains_interior(0.0) {
            CascadeKind::UlamNeumann
        } else {
            CascadeKind::SaddleNode
        };
        out.push(CascadeRecord {
            k,
            m_start: ms,
            m_end: me,
            kind,
            length: me - ms,
            return_time: t,
            depth: 0,
            neglectable: (ms, ms + 1),
            depth_unsampled: true,
            markov: Vec::new(),
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthReport {
    pub depth: usize,
    pub neglectable: (usize, usize),
    pub unsampled: bool,
    /// `(orbit index, landing level, d(x))` for every sampled annulus point.
    pub samples: Vec<(usize, usize, usize)>,
}

/// `d_k = max d(x)` over sampled orbit points in `I^{m(k)} \ I^{m(k)+1}`.
///
/// The landing level of `h_k x` is the level of the first return of `x` to
/// `I^{m(k)}`; levels past `m(k+1)` give `d(x) = 0`.
pub fn depth_and_neglectable(
    level: &UnimodalLevel,
    nest: &PrincipalNest,
    cascade: &CascadeRecord,
    orbit: &OrbitSample,
) -> DepthReport {
    let n = level.period;
    let top = nest.levels[cascade.m_start].interval;
    let mut samples = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut i = 1usize;
    while (i + 1) * n < orbit.budget() {
        let x = orbit.point(i * n);
        if nest.level_of(x) == Some(cascade.m_start) {
            let Some(r) = first_return(&top, orbit, n, i) else {
                break;
            };
            let y = orbit.point((i + r) * n);
            if let Some(j) = nest.level_of(y) {
                let d = if j >= cascade.m_end {
                    0
                } else {
                    (j - cascade.m_start).min(cascade.m_end - j)
                };
                // keep one sample per landing level, the orbit is recurrent
                if seen.insert(j) {
                    samples.push((i, j, d));
                }
            }
        }
        i += 1;
    }
    let unsampled = samples.is_empty();
    let depth = samples.iter().map(|s| s.2).max().unwrap_or(0);
    let neglectable = if cascade.kind == CascadeKind::SaddleNode && !unsampled {
        (cascade.m_start + depth, cascade.m_end.saturating_sub(depth))
    } else {
        (cascade.m_start, cascade.m_start + 1)
    };
    DepthReport {
        depth,
        neglectable,
        unsampled,
        samples,
    }
}

/// Signs of `f^j` on the positive half of the central domain of `h_k`,
/// `j = 0..T` in base steps.
pub fn branch_signs(p: Param, steps: usize, side: f64) -> Vec<f64> {
    let mut signs = Vec::with_capacity(steps);
    let mut x = 0.0;
    for j in 0..steps {
        signs.push(if j == 0 {
            side
        } else if x >= 0.0 {
            1.0
        } else {
            -1.0
        });
        x = p.map(x);
    }
    signs
}

/// Pulls `k` back through the branch of `h = f^steps` on the `side` half of
/// the central domain.
pub fn pull_through_branch(p: Param, k: &RInterval, steps: usize, side: f64) -> Result<RInterval> {
    let signs = branch_signs(p, steps, side);
    let mut cur = *k;
    for s in signs.iter().rev() {
        cur = crate::realdyn::monotone_pullback_step(p, &cur, *s)?;
    }
    Ok(cur)
}

/// Markov family `K^{m(k)+i}`, `i = 1..l_k`, both sides, capped at `cap`
/// intervals per level.
pub fn markov_family(
    level: &UnimodalLevel,
    nest: &PrincipalNest,
    cascade: &CascadeRecord,
    cap: usize,
) -> Vec<(usize, RInterval)> {
    let first = nest.levels[cascade.m_start + 1]
        .return_domains
        .iter()
        .skip(1)
        .copied()
        .collect::<Vec<_>>();
    let steps = cascade.return_time * level.period;
    let mut out = Vec::new();
    let mut cur = first;
    for i in 1..cascade.length {
        let lvl = cascade.m_start + i;
        for kk in &cur {
            out.push((lvl, *kk));
        }
        let mut next = Vec::new();
        'outer: for kk in &cur {
            for side in [1.0, -1.0] {
                if next.len() >= cap {
                    break 'outer;
                }
                if let Ok(pb) = pull_through_branch(level.param, kk, steps, side) {
                    next.push(pb);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        cur = next;
    }
    out
}

/// Fills in depth, neglectable range and Markov family for every cascade.
pub fn analyze_cascades(
    level: &UnimodalLevel,
    nest: &PrincipalNest,
    orbit: &OrbitSample,
    markov_cap: usize,
) -> Vec<CascadeRecord> {
    let mut cs = detect_cascades(level, nest);
    for c in &mut cs {
        let d = depth_and_neglectable(level, nest, c, orbit);
        c.depth = d.depth;
        c.neglectable = d.neglectable;
        c.depth_unsampled = d.unsampled;
        if c.m_start + 1 < nest.levels.len() && !nest.levels[c.m_start + 1].return_domains.is_empty() {
            c.markov = markov_family(level, nest, c, markov_cap);
        }
    }
    cs
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Landing {
    pub k: usize,
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssentialPeriodReport {
    pub period: usize,
    pub essential_period: usize,
    pub removed_indices: Vec<usize>,
    pub per_interval_levels: Vec<Vec<Landing>>,
}

/// Essential period of a renormalizable level with renormalization period
/// `period` (in `F`-steps).
pub fn essential_period(
    level: &UnimodalLevel,
    nest: &PrincipalNest,
    cascades: &[CascadeRecord],
    period: usize,
    orbit: &OrbitSample,
) -> Result<EssentialPeriodReport> {
    if period == 0 {
        return Err(Error::NotRenormalizable);
    }
    let n = level.period;
    let mut removed = Vec::new();
    let mut table = Vec::with_capacity(period);
    for i in 0..period {
        let mut landings = Vec::new();
        let mut drop = false;
        for c in cascades {
            let top = nest.levels[c.m_start].interval;
            let mut j = i;
            while j * n < orbit.budget() && !top.contains(orbit.point(j * n)) {
                j += 1;
            }
            if j * n >= orbit.budget() {
                continue;
            }
            if let Some(l) = nest.level_of(orbit.point(j * n)) {
                landings.push(Landing { k: c.k, level: l });
                if c.kind == CascadeKind::SaddleNode && c.is_neglectable(l) {
                    drop = true;
                }
            }
        }
        if drop {
            removed.push(i);
        }
        table.push(landings);
    }
    Ok(EssentialPeriodReport {
        period,
        essential_period: period - removed.len(),
        removed_indices: removed,
        per_interval_levels: table,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommensurabilityRow {
    pub m: usize,
    pub deep: bool,
    /// `|I^m| / |component of I^{m-1} \ I^m|`.
    pub central_ratio: f64,
    /// Extremes of the same ratio over non-central domains and gaps.
    pub others_min: Option<f64>,
    pub others_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommensurabilityReport {
    pub pbar: usize,
    pub rows: Vec<CommensurabilityRow>,
    /// Largest `|ln ratio|` over central intervals not deep inside a cascade.
    pub shallow_central_log_max: f64,
    /// Largest `|ln ratio|` over central intervals deep inside a cascade.
    pub deep_central_log_max: f64,
    /// Largest `|ln ratio|` over non-central domains and gaps.
    pub others_log_max: f64,
}

/// Level-by-level ratios against the annulus `I^{m-1} \ I^m`, with levels deep
/// inside a cascade (`m(k) + pbar <= m <= m(k+1) - pbar`) flagged.
pub fn commensurability_report(
    nest: &PrincipalNest,
    cascades: &[CascadeRecord],
    pbar: usize,
) -> CommensurabilityReport {
    let mut rows = Vec::new();
    let (mut sh, mut dp, mut ot) = (0.0f64, 0.0f64, 0.0f64);
    for m in 1..nest.levels.len() {
        let outer = nest.levels[m - 1].interval.len();
        let inner = nest.levels[m].interval.len();
        let ann = 0.5 * (outer - inner);
        if ann <= 0.0 {
            continue;
        }
        let deep = cascades
            .iter()
            .any(|c| c.m_start + pbar <= m && m + pbar <= c.m_end);
        let central = inner / ann;
        let mut others = nest.levels[m]
            .return_domains
            .iter()
            .skip(1)
            .chain(nest.levels[m].gaps.iter())
            .map(|d| d.len() / ann)
            .collect::<Vec<_>>();
        others.sort_by(f64::total_cmp);
        for r in &others {
            ot = ot.max(r.ln().abs());
        }
        if deep {
            dp = dp.max(central.ln().abs());
        } else {
            sh = sh.max(central.ln().abs());
        }
        rows.push(CommensurabilityRow {
            m,
            deep,
            central_ratio: central,
            others_min: others.first().copied(),
            others_max: others.last().copied(),
        });
    }
    CommensurabilityReport {
        pbar,
        rows,
        shallow_central_log_max: sh,
        deep_central_log_max: dp,
        others_log_max: ot,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realdyn::DEFAULT_ORBIT_BUDGET;

    fn nest_for(c: f64) -> Result<PrincipalNest> {
        let p = Param::new(c).unwrap();
        let orbit = OrbitSample::new(p, DEFAULT_ORBIT_BUDGET);
        build_principal_nest(p, 200, &orbit)
    }

    #[test]
    fn c_minus_one_is_immediate() {
        let n = nest_for(-1.0).unwrap();
        assert!(n.immediately_renormalizable);
        assert!(n.levels.is_empty());
        assert_eq!(n.height, -1);
    }

    #[test]
    fn c_minus_1_9_first_return() {
        let n = nest_for(-1.9).unwrap();
        assert_eq!(n.levels[1].return_time, 4);
        for w in n.levels.windows(2) {
            assert!(w[0].interval.contains_interval(&w[1].interval));
            assert!(w[1].interval.contains_interior(0.0));
        }
    }

    #[test]
    fn attracting_alpha_rejected() {
        assert!(matches!(nest_for(-0.5), Err(Error::AlphaAttracting { .. })));
    }

    #[test]
    fn noncentral_set_from_times() {
        assert_eq!(noncentral_set(&[0, 2, 3, 5, 5, 5, 7]), vec![0, 1, 2, 5]);
        assert_eq!(noncentral_set(&[0, 4]), vec![0]);
    }

    #[test]
    fn gaps_complement_domains() {
        let outer = RInterval::new(-1.0, 1.0).unwrap();
        let doms = [
            RInterval::new(-0.2, 0.2).unwrap(),
            RInterval::new(0.5, 0.7).unwrap(),
        ];
        let g = gaps_of(&outer, &doms);
        let total: f64 = g.iter().map(|x| x.len()).sum::<f64>()
            + doms.iter().map(|x| x.len()).sum::<f64>();
        assert!((total - 2.0).abs() < 1e-15);
        assert_eq!(g.len(), 3);
    }
}
