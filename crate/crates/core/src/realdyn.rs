//! Real one-dimensional dynamics of the quadratic family `f_c(x) = x^2 + c`.
//!
//! Everything here works in binary64 and in the original coordinate of the
//! base map. Renormalizations are represented as iterates [`PowerMap`] of the
//! base map rather than as composed polynomials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of critical-orbit points kept as a stand-in for the
/// postcritical set.
pub const DEFAULT_ORBIT_BUDGET: usize = 100_000;

/// Relative slack (times the interval length) used by closed membership tests.
pub const MEMBERSHIP_SLACK: f64 = 1e-12;

/// A parameter `c` of the real quadratic family, `-2 <= c <= 1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Param {
    c: f64,
}

impl Param {
    pub fn new(c: f64) -> Result<Self> {
        if !c.is_finite() || c < -2.0 {
            return Err(Error::ParamOutOfRange { c });
        }
        if c > 0.25 {
            return Err(Error::NoRealFixedPoints { c });
        }
        Ok(Self { c })
    }

    #[inline]
    pub fn c(&self) -> f64 {
        self.c
    }

    #[inline]
    pub fn map(&self, x: f64) -> f64 {
        x * x + self.c
    }

    pub fn iterate(&self, mut x: f64, n: usize) -> f64 {
        for _ in 0..n {
            x = x * x + self.c;
        }
        x
    }

    /// `(f^n(x), (f^n)'(x))`.
    pub fn iterate_with_derivative(&self, mut x: f64, n: usize) -> (f64, f64) {
        let mut d = 1.0;
        for _ in 0..n {
            d *= 2.0 * x;
            x = x * x + self.c;
        }
        (x, d)
    }

    /// The alpha fixed point is repelling iff `c < -3/4`.
    pub fn alpha_repelling(&self) -> bool {
        self.c < -0.75
    }
}

/// Fixed points `(alpha, beta)` of `x^2 + c`; `beta` has multiplier `>= 1`.
pub fn fixed_points(p: Param) -> Result<(f64, f64)> {
    quadratic_fixed_points(p.c())
}

/// Same as [`fixed_points`] for a raw `c`, reporting `c > 1/4` as an error.
pub fn quadratic_fixed_points(c: f64) -> Result<(f64, f64)> {
    let disc = 1.0 - 4.0 * c;
    if disc.is_nan() || disc < 0.0 {
        return Err(Error::NoRealFixedPoints { c });
    }
    let s = disc.sqrt();
    Ok(((1.0 - s) / 2.0, (1.0 + s) / 2.0))
}

/// The dynamically symmetric point: `f(-x) = f(x)`.
#[inline]
pub fn symmetric_point(x: f64) -> f64 {
    -x
}

/// Closed real interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RInterval {
    lo: f64,
    hi: f64,
}

impl RInterval {
    /// Builds the interval spanned by `a` and `b` in either order.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: f64) -> Result<Self> {
        Self::new(-r.abs(), r.abs())
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Closed membership with a relative slack of `1e-12 * len`.
    pub fn contains(&self, x: f64) -> bool {
        let s = MEMBERSHIP_SLACK * self.len();
        x >= self.lo - s && x <= self.hi + s
    }

    /// Strict interior membership, no slack.
    pub fn contains_interior(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn contains_interval(&self, other: &RInterval) -> bool {
        self.contains(other.lo) && self.contains(other.hi)
    }

    /// Same center, length scaled by `factor`.
    pub fn dilate(&self, factor: f64) -> RInterval {
        let h = 0.5 * self.len() * factor;
        let m = self.mid();
        RInterval {
            lo: m - h,
            hi: m + h,
        }
    }

    pub fn hull(&self, other: &RInterval) -> RInterval {
        RInterval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Hull of the interval and a point.
    pub fn hull_point(&self, x: f64) -> RInterval {
        RInterval {
            lo: self.lo.min(x),
            hi: self.hi.max(x),
        }
    }

    /// Euclidean distance from `x` to the interval.
    pub fn dist(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }

    pub fn interiors_overlap(&self, other: &RInterval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    /// Sign of the interval relative to the critical point (`0.0` if it
    /// straddles 0).
    pub fn side(&self) -> f64 {
        if self.lo >= 0.0 {
            1.0
        } else if self.hi <= 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    /// Exact image under the quadratic map.
    pub fn image(&self, p: Param) -> RInterval {
        let a = p.map(self.lo);
        let b = p.map(self.hi);
        let top = a.max(b);
        let bottom = if self.lo <= 0.0 && self.hi >= 0.0 {
            p.c()
        } else {
            a.min(b)
        };
        RInterval {
            lo: bottom,
            hi: top.max(bottom + f64::MIN_POSITIVE),
        }
    }
}

/// The first `N` points of the critical orbit, `points[i] = f^i(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitSample {
    points: Vec<f64>,
}

impl OrbitSample {
    pub fn new(p: Param, budget: usize) -> Self {
        let mut points = Vec::with_capacity(budget.max(1));
        let mut x = 0.0;
        for _ in 0..budget.max(1) {
            points.push(x);
            x = p.map(x);
        }
        Self { points }
    }

    pub fn budget(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.points[i]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

/// `f^n` restricted to a neighbourhood of the critical point, evaluated by
/// composing the base map pointwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerMap {
    pub param: Param,
    pub period: usize,
}

impl PowerMap {
    pub fn new(param: Param, period: usize) -> Self {
        Self {
            param,
            period: period.max(1),
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.param.iterate(x, self.period)
    }

    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        self.param.iterate_with_derivative(x, self.period)
    }

    /// Exact image of an interval, computed one base step at a time.
    pub fn image(&self, j: &RInterval) -> RInterval {
        let mut cur = *j;
        for _ in 0..self.period {
            cur = cur.image(self.param);
        }
        cur
    }
}

/// Least `t >= 1` with `f^t(0)` in `interval`.
pub fn first_return_time(interval: &RInterval, orbit: &OrbitSample) -> Result<usize> {
    first_return_time_stride(interval, orbit, 1)
}

/// First return of the critical orbit of `f^stride` (the orbit is read every
/// `stride` base steps).
pub fn first_return_time_stride(
    interval: &RInterval,
    orbit: &OrbitSample,
    stride: usize,
) -> Result<usize> {
    if !interval.contains_interior(0.0) {
        return Err(Error::NotCentral);
    }
    let stride = stride.max(1);
    let mut t = 1;
    while t * stride < orbit.budget() {
        if interval.contains(orbit.point(t * stride)) {
            return Ok(t);
        }
        t += 1;
    }
    Err(Error::NoReturnWithinBudget {
        budget: orbit.budget(),
    })
}

/// One Newton step on `f^j(y) = target`, kept only if it reduces the residual.
pub fn polish(p: Param, y: f64, j: usize, target: f64) -> f64 {
    let (v, d) = p.iterate_with_derivative(y, j);
    if d == 0.0 || !d.is_finite() {
        return y;
    }
    let cand = y - (v - target) / d;
    let (v2, _) = p.iterate_with_derivative(cand, j);
    if (v2 - target).abs() < (v - target).abs() {
        cand
    } else {
        y
    }
}

fn clamp_above_critical_value(p: Param, y: f64) -> Result<f64> {
    let c = p.c();
    if y >= c {
        return Ok(y);
    }
    if c - y <= 8.0 * f64::EPSILON * c.abs().max(1.0) {
        Ok(c)
    } else {
        Err(Error::NoPreimage)
    }
}

/// Branch of `f^{-1}(j)` on the half-line selected by `sign`.
pub fn monotone_pullback_step(p: Param, j: &RInterval, sign: f64) -> Result<RInterval> {
    let lo = clamp_above_critical_value(p, j.lo)?;
    let c = p.c();
    let mut a = (lo - c).sqrt();
    let mut b = (j.hi - c).sqrt();
    if a > 0.0 {
        a = polish(p, a, 1, j.lo.max(c));
    }
    b = polish(p, b, 1, j.hi);
    if sign >= 0.0 {
        RInterval::new(a, b)
    } else {
        RInterval::new(-b, -a)
    }
}

/// Component of `f^{-1}(j)` containing 0; requires `c` in `j`.
pub fn critical_pullback(p: Param, j: &RInterval) -> Result<RInterval> {
    if !j.contains(p.c()) {
        return Err(Error::CriticalValueOutside);
    }
    let r = polish(p, (j.hi - p.c()).sqrt(), 1, j.hi);
    RInterval::symmetric(r)
}

/// Pulls `target` back along a real orbit segment.
///
/// `orbit[0]` is the point whose component is wanted and `orbit[len - 1]`
/// must lie in `target`. Every intermediate step is monotone; only the last
/// step (onto `orbit[0]`) may be the critical fold, which happens exactly
/// when the component contains 0.
///
/// Endpoints are carried as offsets from the orbit points, so intervals much
/// shorter than the spacing of floats near the critical value stay resolved.
pub fn pullback_component(target: &RInterval, orbit: &[f64]) -> Result<RInterval> {
    let steps = orbit.len().saturating_sub(1);
    if steps == 0 {
        return Ok(*target);
    }
    let end = orbit[steps];
    let (mut dlo, mut dhi) = (target.lo - end, target.hi - end);
    if dlo > 0.0 || dhi < 0.0 {
        return Err(Error::OutsideRange);
    }
    for j in (0..steps).rev() {
        let x = orbit[j];
        let x2 = x * x;
        if x2 + dlo <= 0.0 {
            // the preimage of the current interval folds over 0
            if j != 0 || x != 0.0 {
                return Err(Error::Invariant(format!(
                    "pullback component contains 0 at step {j}"
                )));
            }
            if x2 + dhi <= 0.0 {
                return Err(Error::NoPreimage);
            }
            let r = (x2 + dhi).sqrt();
            return RInterval::symmetric(r);
        }
        let ax = x.abs();
        let off = |d: f64| d / ((x2 + d).sqrt() + ax);
        let (a, b) = (off(dlo), off(dhi));
        if x >= 0.0 {
            dlo = a;
            dhi = b;
        } else {
            dlo = -b;
            dhi = -a;
        }
    }
    RInterval::new(orbit[0] + dlo, orbit[0] + dhi)
}

/// Monotonicity interval `H_n(x)` of `f^n` around `x`, built by the backward
/// recursion `H_0 = range`, `H_{j+1}(x) = ` branch of `f^{-1} H_j(f x)` on the
/// half-line of `x`.
pub fn monotonicity_interval(p: Param, x: f64, n: usize, range: &RInterval) -> Result<RInterval> {
    let mut orbit = Vec::with_capacity(n + 1);
    let mut y = x;
    for step in 0..n {
        if y == 0.0 {
            return Err(Error::CriticalPoint { step });
        }
        orbit.push(y);
        y = p.map(y);
    }
    if !range.contains(y) {
        return Err(Error::OutsideRange);
    }
    let c = p.c();
    let mut h = *range;
    for &xj in orbit.iter().rev() {
        if h.hi < c {
            return Err(Error::NoPreimage);
        }
        let a = (h.lo - c).max(0.0).sqrt();
        let b = (h.hi - c).sqrt();
        h = if xj > 0.0 {
            RInterval::new(a, b)?
        } else {
            RInterval::new(-b, -a)?
        };
        if !h.contains(xj) {
            return Err(Error::OutsideRange);
        }
    }
    Ok(h)
}

/// Bisection for a sign change of `g` on `[a, b]`; relative tolerance `1e-13`,
/// at most 200 iterations. Returns `None` when the endpoint values have the
/// same strict sign.
pub fn bisect<G: Fn(f64) -> f64>(g: G, mut a: f64, mut b: f64) -> Option<f64> {
    let mut ga = g(a);
    let gb = g(b);
    if ga == 0.0 {
        return Some(a);
    }
    if gb == 0.0 {
        return Some(b);
    }
    if ga.signum() == gb.signum() || !ga.is_finite() || !gb.is_finite() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= 1e-13 * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return Some(m);
        }
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// A renormalization level seen as a unimodal map `F = f^period` on
/// `B = [beta, -beta]`, with its own orientation-reversing fixed point `alpha`.
///
/// `beta` is signed: it is the endpoint of `B` fixed by `F`; `-beta` is its
/// symmetric point and is mapped onto `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnimodalLevel {
    pub param: Param,
    pub period: usize,
    pub beta: f64,
    pub alpha: f64,
}

impl UnimodalLevel {
    /// The base map itself (`period = 1`); needs `c < -3/4`.
    pub fn base(p: Param) -> Result<Self> {
        if !p.alpha_repelling() {
            return Err(Error::AlphaAttracting { c: p.c() });
        }
        let (alpha, beta) = fixed_points(p)?;
        Ok(Self {
            param: p,
            period: 1,
            beta,
            alpha,
        })
    }

    /// Level of period `period` with signed boundary fixed point `beta`.
    /// Locates `alpha` on the opposite half and checks that it repels.
    pub fn new(p: Param, period: usize, beta: f64) -> Result<Self> {
        let f = PowerMap::new(p, period);
        let s = -beta.signum();
        let far = s * beta.abs();
        let g = |x: f64| f.eval(x) - x;
        let err = Error::AlphaAttracting { c: p.c() };
        let alpha = bisect(g, 0.0, far).ok_or(err.clone())?;
        if alpha == 0.0 || alpha.signum() != s {
            return Err(err);
        }
        let (_, d) = f.eval_with_derivative(alpha);
        if d.abs() <= 1.0 || d > 0.0 {
            return Err(err);
        }
        Ok(Self {
            param: p,
            period,
            beta,
            alpha,
        })
    }

    pub fn map(&self) -> PowerMap {
        PowerMap::new(self.param, self.period)
    }

    /// `A = [alpha, -alpha]`.
    pub fn a_interval(&self) -> RInterval {
        RInterval::symmetric(self.alpha).expect("alpha is nonzero")
    }

    /// `B = [beta, -beta]`.
    pub fn b_interval(&self) -> RInterval {
        RInterval::symmetric(self.beta).expect("beta is nonzero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn p(c: f64) -> Param {
        Param::new(c).unwrap()
    }

    #[test]
    fn fixed_points_closed_forms() {
        let (a, b) = fixed_points(p(0.25)).unwrap();
        assert_abs_diff_eq!(a, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 0.5, epsilon = 1e-15);
        let (a, b) = fixed_points(p(-1.0)).unwrap();
        assert_abs_diff_eq!(a, -0.61803398875, epsilon = 1e-11);
        assert_abs_diff_eq!(b, 1.61803398875, epsilon = 1e-11);
        let (a, b) = fixed_points(p(-2.0)).unwrap();
        assert_eq!((a, b), (-1.0, 2.0));
    }

    #[test]
    fn parameter_range_is_enforced() {
        assert_eq!(
            quadratic_fixed_points(0.3),
            Err(Error::NoRealFixedPoints { c: 0.3 })
        );
        assert!(matches!(Param::new(0.3), Err(Error::NoRealFixedPoints { .. })));
        assert!(matches!(Param::new(-2.1), Err(Error::ParamOutOfRange { .. })));
    }

    #[test]
    fn symmetric_point_is_negation() {
        assert_eq!(symmetric_point(0.0), 0.0);
        assert_eq!(symmetric_point(1.618), -1.618);
        assert_eq!(symmetric_point(-0.25), 0.25);
        let q = p(-1.3);
        assert_eq!(q.map(0.7), q.map(symmetric_point(0.7)));
    }

    #[test]
    fn first_return_examples() {
        let q = p(-1.9);
        let (a, _) = fixed_points(q).unwrap();
        let big_a = RInterval::new(a, -a).unwrap();
        assert_abs_diff_eq!(a, -0.966288, epsilon = 1e-6);
        let orbit = OrbitSample::new(q, 1000);
        assert_eq!(first_return_time(&big_a, &orbit).unwrap(), 4);

        let q = p(-1.0);
        let (a, _) = fixed_points(q).unwrap();
        let orbit = OrbitSample::new(q, 1000);
        let big_a = RInterval::new(a, -a).unwrap();
        assert_eq!(first_return_time(&big_a, &orbit).unwrap(), 2);

        let q = p(-2.0);
        let orbit = OrbitSample::new(q, 1000);
        let i = RInterval::new(-1.0, 1.0).unwrap();
        assert_eq!(
            first_return_time(&i, &orbit),
            Err(Error::NoReturnWithinBudget { budget: 1000 })
        );
    }

    #[test]
    fn first_return_is_first() {
        for &c in &[-1.3, -1.5, -1.76, -1.9, -1.99] {
            let q = p(c);
            let orbit = OrbitSample::new(q, 5000);
            let (a, _) = fixed_points(q).unwrap();
            let i = RInterval::new(a, -a).unwrap();
            if let Ok(t) = first_return_time(&i, &orbit) {
                assert!(i.contains(orbit.point(t)));
                for j in 1..t {
                    assert!(!i.contains(orbit.point(j)), "c={c} j={j}");
                }
            }
        }
    }

    #[test]
    fn monotone_pullback_examples() {
        let j = RInterval::new(0.9, 1.1).unwrap();
        let r = monotone_pullback_step(p(-1.0), &j, 1.0).unwrap();
        assert_abs_diff_eq!(r.lo(), 1.378405, epsilon = 1e-6);
        assert_abs_diff_eq!(r.hi(), 1.449138, epsilon = 1e-6);

        let j = RInterval::new(1.0, 4.0).unwrap();
        let r = monotone_pullback_step(p(0.0), &j, -1.0).unwrap();
        assert_eq!((r.lo(), r.hi()), (-2.0, -1.0));

        let j = RInterval::new(-1.5, -1.2).unwrap();
        assert_eq!(
            monotone_pullback_step(p(-1.0), &j, 1.0),
            Err(Error::NoPreimage)
        );
    }

    #[test]
    fn critical_pullback_examples() {
        let q = p(-1.0);
        let r = critical_pullback(q, &RInterval::new(-1.2, -0.8).unwrap()).unwrap();
        assert_abs_diff_eq!(r.hi(), 0.447214, epsilon = 1e-6);
        assert_abs_diff_eq!(r.lo(), -0.447214, epsilon = 1e-6);
        let r = critical_pullback(q, &RInterval::new(-1.0, 0.0).unwrap()).unwrap();
        assert_eq!((r.lo(), r.hi()), (-1.0, 1.0));
        assert_eq!(
            critical_pullback(q, &RInterval::new(-0.5, 0.5).unwrap()),
            Err(Error::CriticalValueOutside)
        );
    }

    #[test]
    fn monotonicity_interval_examples() {
        let q = p(-1.0);
        let (_, b) = fixed_points(q).unwrap();
        let t = RInterval::new(-b, b).unwrap();
        let h = monotonicity_interval(q, 0.3, 1, &t).unwrap();
        assert_abs_diff_eq!(h.lo(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.hi(), b, epsilon = 1e-12);
        assert_eq!(monotonicity_interval(q, 0.3, 0, &t).unwrap(), t);
        assert_eq!(
            monotonicity_interval(q, 0.0, 1, &t),
            Err(Error::CriticalPoint { step: 0 })
        );
    }

    #[test]
    fn monotonicity_intervals_nest() {
        for &c in &[-1.2, -1.55, -1.8, -1.95] {
            let q = p(c);
            let (_, b) = fixed_points(q).unwrap();
            let t = RInterval::new(-b, b).unwrap();
            for &x in &[0.1234, -0.77, 1.05, -1.3] {
                let mut prev = t;
                for n in 1..12 {
                    match monotonicity_interval(q, x, n, &t) {
                        Ok(h) => {
                            assert!(h.contains(x));
                            assert!(prev.contains_interval(&h), "c={c} x={x} n={n}");
                            prev = h;
                        }
                        Err(_) => break,
                    }
                }
            }
        }
    }

    #[test]
    fn pullback_component_recovers_nest_interval() {
        // c = -1: f^2(0) = 0, central pullback of A along 0 -> -1 -> 0
        let q = p(-1.0);
        let (a, _) = fixed_points(q).unwrap();
        let big_a = RInterval::new(a, -a).unwrap();
        let r = pullback_component(&big_a, &[0.0, -1.0, 0.0]).unwrap();
        // f^2(x) = x^4 - 2x^2 = a  at the endpoint
        let e = r.hi();
        assert_abs_diff_eq!(q.iterate(e, 2), a, epsilon = 1e-12);
    }

    #[test]
    fn level_alpha_matches_base() {
        let q = p(-1.3);
        let base = UnimodalLevel::base(q).unwrap();
        let (a, b) = fixed_points(q).unwrap();
        assert_eq!((base.alpha, base.beta), (a, b));
        let lvl = UnimodalLevel::new(q, 1, b).unwrap();
        assert_abs_diff_eq!(lvl.alpha, a, epsilon = 1e-12);
        assert!(matches!(
            UnimodalLevel::base(p(-0.5)),
            Err(Error::AlphaAttracting { .. })
        ));
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert_abs_diff_eq!(r, std::f64::consts::SQRT_2, epsilon = 1e-12);
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0).is_none());
    }

    proptest! {
        #[test]
        fn fixed_points_are_fixed(c in -2.0f64..0.25) {
            let q = p(c);
            let (a, b) = fixed_points(q).unwrap();
            prop_assert!((q.map(a) - a).abs() <= 1e-12);
            prop_assert!((q.map(b) - b).abs() <= 1e-12);
            prop_assert!(2.0 * b >= 1.0 - 1e-12 && 2.0 * a <= 1.0 + 1e-12);
        }

        #[test]
        fn pullback_steps_are_forward_consistent(
            c in -2.0f64..0.25, u in 0.0f64..1.0, w in 0.001f64..1.0, plus in any::<bool>()
        ) {
            let q = p(c);
            let (_, b) = fixed_points(q).unwrap();
            let lo = c + u * (b - c);
            let hi = lo + w * (b - c).max(1e-3);
            let j = RInterval::new(lo, hi).unwrap();
            let sign = if plus { 1.0 } else { -1.0 };
            let r = monotone_pullback_step(q, &j, sign).unwrap();
            let (ya, yb) = (q.map(r.lo()), q.map(r.hi()));
            let (ya, yb) = if ya <= yb { (ya, yb) } else { (yb, ya) };
            prop_assert!((ya - j.lo()).abs() <= 1e-12 * j.lo().abs().max(1.0));
            prop_assert!((yb - j.hi()).abs() <= 1e-12 * j.hi().abs().max(1.0));
            let mirror = monotone_pullback_step(q, &j, -sign).unwrap();
            prop_assert_eq!(mirror.lo(), -r.hi());
            prop_assert_eq!(mirror.hi(), -r.lo());
        }

        #[test]
        fn map_is_even(c in -2.0f64..0.25, x in -3.0f64..3.0) {
            let q = p(c);
            prop_assert_eq!(q.map(x), q.map(-x));
        }
    }
}
