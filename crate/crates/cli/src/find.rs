//! Parameter search: superattracting centres of the quadratic family.

use renormlab::realdyn::bisect;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FindKind {
    /// Rightmost centre of exact period `q` in `[-2, 0]`.
    SuperattractingPeriod { q: usize },
    /// Centre of period `2^n` on the period-doubling ladder.
    PeriodDoubling { n: usize },
    /// Centre of exact period `q` closest to `c0` within `radius`.
    NearWindow { c0: f64, radius: f64, q: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FindError {
    #[error("no root of exact period {q} in [{lo}, {hi}]")]
    NoRootInBracket { q: usize, lo: f64, hi: f64 },
    #[error("invalid search request: {0}")]
    Invalid(String),
}

/// `f_c^q(0)`.
pub fn critical_orbit(c: f64, q: usize) -> f64 {
    let mut x = 0.0;
    for _ in 0..q {
        x = x * x + c;
    }
    x
}

/// `(f_c^q(0), d/dc f_c^q(0))`.
fn orbit_with_dc(c: f64, q: usize) -> (f64, f64) {
    let (mut x, mut d) = (0.0f64, 0.0f64);
    for _ in 0..q {
        d = 2.0 * x * d + 1.0;
        x = x * x + c;
    }
    (x, d)
}

/// No proper divisor of `q` is a period of 0 at `c`.
pub fn has_exact_period(c: f64, q: usize) -> bool {
    (1..q)
        .filter(|d| q.is_multiple_of(*d))
        .all(|d| critical_orbit(c, d).abs() > 1e-9)
}

/// Roots of exact period `q` in `[lo, hi]`, ascending.
pub fn roots_in(q: usize, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let h = (hi - lo) / samples as f64;
    let mut a = lo;
    let mut fa = critical_orbit(a, q);
    for i in 1..=samples {
        let b = lo + h * i as f64;
        let fb = critical_orbit(b, q);
        if fa == 0.0 {
            if has_exact_period(a, q) {
                out.push(a);
            }
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            if let Some(r) = bisect(|c| critical_orbit(c, q), a, b) {
                if has_exact_period(r, q) {
                    out.push(r);
                }
            }
        }
        a = b;
        fa = fb;
    }
    out
}

/// Newton on `c -> f_c^q(0)`; `None` if it does not settle.
fn newton(q: usize, mut c: f64) -> Option<f64> {
    for _ in 0..200 {
        let (x, d) = orbit_with_dc(c, q);
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let step = x / d;
        c -= step;
        if step.abs() <= 4.0 * f64::EPSILON * c.abs().max(1.0) {
            return Some(c);
        }
    }
    None
}

/// Centres `c_0 = 0, c_1, ..., c_n` of periods `2^i`.
///
/// Each new centre is bracketed by the previous gap: it lies to the left of
/// `c_i` at between a tenth and half of `c_{i-1} - c_i`. Newton starts from
/// the geometric extrapolation and a bisection inside the bracket backs it
/// up.
pub fn doubling_ladder(n: usize) -> Result<Vec<f64>, FindError> {
    let mut cs = vec![0.0, -1.0];
    for i in 2..=n {
        let q = 1usize << i;
        let c1 = cs[i - 1];
        let gap = cs[i - 2] - c1;
        let (lo, hi) = (c1 - 0.5 * gap, c1 - 0.1 * gap);
        let delta = if i == 2 {
            4.0
        } else {
            (cs[i - 3] - cs[i - 2]) / gap
        };
        let ok = |r: &f64| *r > lo && *r < hi && has_exact_period(*r, q);
        let root = newton(q, c1 - gap / delta)
            .filter(ok)
            .or_else(|| roots_in(q, lo, hi, 2000).into_iter().last());
        match root {
            Some(r) => cs.push(r),
            None => return Err(FindError::NoRootInBracket { q, lo, hi }),
        }
    }
    cs.truncate(n + 1);
    Ok(cs)
}

pub fn find_param(kind: FindKind) -> Result<f64, FindError> {
    match kind {
        FindKind::PeriodDoubling { n } => {
            if n > 20 {
                return Err(FindError::Invalid(format!("period 2^{n} is beyond f64 resolution")));
            }
            Ok(doubling_ladder(n)?[n])
        }
        FindKind::SuperattractingPeriod { q } => {
            if q == 0 {
                return Err(FindError::Invalid("period must be positive".into()));
            }
            let (lo, hi) = (-2.0, 0.0);
            // rightmost root: roots crowd only near -2
            roots_in(q, lo, hi, 4096 * q)
                .last()
                .copied()
                .ok_or(FindError::NoRootInBracket { q, lo, hi })
        }
        FindKind::NearWindow { c0, radius, q } => {
            if q == 0 || radius.is_nan() || radius <= 0.0 {
                return Err(FindError::Invalid("need q >= 1 and radius > 0".into()));
            }
            let lo = (c0 - radius).max(-2.0);
            let hi = (c0 + radius).min(0.25);
            roots_in(q, lo, hi, 20_000)
                .into_iter()
                .min_by(|a, b| (a - c0).abs().total_cmp(&(b - c0).abs()))
                .ok_or(FindError::NoRootInBracket { q, lo, hi })
        }
    }
}
