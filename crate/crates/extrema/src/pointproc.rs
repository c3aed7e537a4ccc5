//! Poisson random measures, thinning, the planar empirical process and
//! the path functionals `H1`, `H2`, `H3`.
//!
//! A PRM with intensity measure `λ` puts `Poisson(λ(A))` points in every
//! window `A`, independently over disjoint windows. Exact samplers are
//! provided for the intensities the limit theory needs:
//!
//! * `RecordTime` — `γ(t) = 1/t` on `(0, ∞)`, mass `log(b/a)` on `(a,b]`;
//! * `RecordValue(G)` — mass `log Q(a) − log Q(b)` on `(a,b]`, where
//!   `Q = −log G`;
//! * `UniformRate(c)` — homogeneous rate `c`;
//! * planar `Leb × λ_G` — mass `(b−a)(Q(c) − Q(d))` on `(a,b]×(c,d]`.
//!
//! Sampling draws a Poisson count and then places points by inverting
//! the normalized intensity coordinate-wise, so no rejection is involved.
//! The planar empirical process `ξ_n` of a series puts a point at
//! `(i/n, a_n(X_i − b_n))` for every index; all `n` points are retained
//! and window queries do the filtering, so one pattern serves every
//! threshold.

use crate::maxima::CadlagStepPath;
use crate::observables::GevLimit;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PointProcessError {
    #[error("window ({lo}, {hi}) is not a nonempty interval")]
    BadWindow { lo: f64, hi: f64 },
    #[error("point {0} lies outside the pattern window")]
    PointOutsideWindow(f64),
    #[error("window touches the singular boundary of the intensity")]
    SingularBoundary,
    #[error("intensity has infinite mass on the requested window")]
    InfiniteMass,
    #[error("retention probability {p} outside (0,1)")]
    BadRetention { p: f64 },
    #[error("uniform rate {rate} must be nonnegative and finite")]
    BadRate { rate: f64 },
    #[error("series too short: need {needed} values, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
}

/// A finite multiset of points in a 1D window `(lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern1D {
    window: (f64, f64),
    points: Vec<f64>,
}

impl PointPattern1D {
    /// Sorts the points and checks they lie in the window.
    pub fn new(window: (f64, f64), mut points: Vec<f64>) -> Result<Self, PointProcessError> {
        let (lo, hi) = window;
        if !(lo < hi) || lo.is_nan() || hi.is_nan() {
            return Err(PointProcessError::BadWindow { lo, hi });
        }
        points.sort_by(f64::total_cmp);
        for &p in &points {
            if p.is_nan() || p <= lo || p > hi {
                return Err(PointProcessError::PointOutsideWindow(p));
            }
        }
        Ok(PointPattern1D { window, points })
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of points in `(a, b]`.
    pub fn count_in(&self, a: f64, b: f64) -> usize {
        let lo = self.points.partition_point(|&p| p <= a);
        let hi = self.points.partition_point(|&p| p <= b);
        hi - lo
    }

    /// Independent thinning: each point survives with probability `p`.
    pub fn thin<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> Result<Self, PointProcessError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(PointProcessError::BadRetention { p });
        }
        let kept = self
            .points
            .iter()
            .copied()
            .filter(|_| rng.random::<f64>() < p)
            .collect();
        Ok(PointPattern1D { window: self.window, points: kept })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("# extrema-pattern-1d v1\n# window_lo,window_hi\n");
        out.push_str(&format!("{},{}\n", self.window.0, self.window.1));
        out.push_str("t\n");
        for &p in &self.points {
            out.push_str(&format!("{p}\n"));
        }
        out
    }
}

/// A semi-open rectangle `(t_lo, t_hi] × (y_lo, y_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub t_lo: f64,
    pub t_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Rect {
    pub fn new(t_lo: f64, t_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self, PointProcessError> {
        if !(t_lo < t_hi) {
            return Err(PointProcessError::BadWindow { lo: t_lo, hi: t_hi });
        }
        if !(y_lo < y_hi) {
            return Err(PointProcessError::BadWindow { lo: y_lo, hi: y_hi });
        }
        Ok(Rect { t_lo, t_hi, y_lo, y_hi })
    }

    pub fn contains(&self, t: f64, y: f64) -> bool {
        t > self.t_lo && t <= self.t_hi && y > self.y_lo && y <= self.y_hi
    }
}

/// A finite multiset of points in a planar window, sorted by time.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern2D {
    window: Rect,
    points: Vec<(f64, f64)>,
}

impl PointPattern2D {
    pub fn new(window: Rect, mut points: Vec<(f64, f64)>) -> Result<Self, PointProcessError> {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        for &(t, y) in &points {
            if t.is_nan() || y.is_nan() || !window.contains(t, y) {
                return Err(PointProcessError::PointOutsideWindow(t));
            }
        }
        Ok(PointPattern2D { window, points })
    }

    pub fn window(&self) -> Rect {
        self.window
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn count_in(&self, rect: &Rect) -> usize {
        self.points
            .iter()
            .filter(|&&(t, y)| rect.contains(t, y))
            .count()
    }

    pub fn thin<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> Result<Self, PointProcessError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(PointProcessError::BadRetention { p });
        }
        let kept = self
            .points
            .iter()
            .copied()
            .filter(|_| rng.random::<f64>() < p)
            .collect();
        Ok(PointPattern2D { window: self.window, points: kept })
    }

    pub fn to_csv(&self) -> String {
        let w = self.window;
        let mut out = String::from(
            "# extrema-pattern-2d v1\n# t_lo,t_hi,y_lo,y_hi\n",
        );
        out.push_str(&format!("{},{},{},{}\n", w.t_lo, w.t_hi, w.y_lo, w.y_hi));
        out.push_str("t,y\n");
        for &(t, y) in &self.points {
            out.push_str(&format!("{t},{y}\n"));
        }
        out
    }
}

/// One-dimensional PRM intensities.
#[derive(Debug, Clone, PartialEq)]
pub enum Intensity1D {
    /// `γ(t) = 1/t` on `(0, ∞)` — the record-time limit.
    RecordTime,
    /// The record-value limit for maxima with law `G`.
    RecordValue(GevLimit),
    /// Homogeneous rate.
    UniformRate(f64),
}

impl Intensity1D {
    /// Mass on `(a, b]`.
    pub fn measure(&self, interval: (f64, f64)) -> Result<f64, PointProcessError> {
        let (a, b) = interval;
        if !(a < b) || a.is_nan() || b.is_nan() {
            return Err(PointProcessError::BadWindow { lo: a, hi: b });
        }
        match self {
            Intensity1D::RecordTime => {
                if a <= 0.0 {
                    return Err(PointProcessError::SingularBoundary);
                }
                if b == f64::INFINITY {
                    return Err(PointProcessError::InfiniteMass);
                }
                Ok((b / a).ln())
            }
            Intensity1D::RecordValue(g) => {
                let qa = g.neg_log_cdf(a);
                let qb = g.neg_log_cdf(b);
                if !qa.is_finite() {
                    return Err(PointProcessError::SingularBoundary);
                }
                if qb <= 0.0 {
                    return Err(PointProcessError::InfiniteMass);
                }
                Ok((qa / qb).ln())
            }
            Intensity1D::UniformRate(rate) => {
                if !(*rate >= 0.0) || !rate.is_finite() {
                    return Err(PointProcessError::BadRate { rate: *rate });
                }
                if b == f64::INFINITY || a == f64::NEG_INFINITY {
                    return Err(PointProcessError::InfiniteMass);
                }
                Ok(rate * (b - a))
            }
        }
    }

    /// Draws a PRM realization on `(a, b]`: a Poisson count, then iid
    /// points from the normalized intensity via its inverse CDF.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        interval: (f64, f64),
        rng: &mut R,
    ) -> Result<PointPattern1D, PointProcessError> {
        let mass = self.measure(interval)?;
        let count = sample_poisson(mass, rng);
        let (a, b) = interval;
        let mut points = Vec::with_capacity(count);
        for _ in 0..count {
            let u = open01(rng);
            let p = match self {
                Intensity1D::UniformRate(_) => a + u * (b - a),
                Intensity1D::RecordTime => a * (b / a).powf(u),
                Intensity1D::RecordValue(g) => {
                    // Q(t) interpolates geometrically between Q(a) and Q(b).
                    let qa = g.neg_log_cdf(a);
                    let qb = g.neg_log_cdf(b);
                    g.q_inverse(qa * (qb / qa).powf(u))
                }
            };
            points.push(p);
        }
        PointPattern1D::new(interval, points)
    }
}

/// The planar product intensity `Leb × λ_G` of the limit theory, where
/// `λ_G((c, d]) = log G(d) − log G(c) = Q(c) − Q(d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarIntensity {
    g: GevLimit,
}

impl PlanarIntensity {
    pub fn new(g: GevLimit) -> Self {
        PlanarIntensity { g }
    }

    pub fn law(&self) -> &GevLimit {
        &self.g
    }

    /// Mass on a rectangle: `(t_hi − t_lo) · (Q(y_lo) − Q(y_hi))`.
    pub fn measure(&self, rect: &Rect) -> Result<f64, PointProcessError> {
        if !rect.t_hi.is_finite() || !rect.t_lo.is_finite() {
            return Err(PointProcessError::InfiniteMass);
        }
        let q_lo = self.g.neg_log_cdf(rect.y_lo);
        let q_hi = self.g.neg_log_cdf(rect.y_hi);
        if !q_lo.is_finite() {
            return Err(PointProcessError::InfiniteMass);
        }
        Ok((rect.t_hi - rect.t_lo) * (q_lo - q_hi))
    }

    /// Samples the PRM on a rectangle: time uniform, value by inverting
    /// the `λ_G` mass — exact, no rejection.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        rect: &Rect,
        rng: &mut R,
    ) -> Result<PointPattern2D, PointProcessError> {
        let mass = self.measure(rect)?;
        let count = sample_poisson(mass, rng);
        let q_lo = self.g.neg_log_cdf(rect.y_lo);
        let q_hi = self.g.neg_log_cdf(rect.y_hi);
        let mut points = Vec::with_capacity(count);
        for _ in 0..count {
            let t = rect.t_lo + open01(rng) * (rect.t_hi - rect.t_lo);
            let q = q_hi + open01(rng) * (q_lo - q_hi);
            points.push((t, self.g.q_inverse(q)));
        }
        PointPattern2D::new(*rect, points)
    }
}

fn sample_poisson<R: Rng + ?Sized>(mass: f64, rng: &mut R) -> usize {
    if mass <= 0.0 {
        return 0;
    }
    Poisson::new(mass).expect("positive finite mass").sample(rng) as usize
}

fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(rand::distr::Open01)
}

/// The planar empirical process `ξ_n`: a point at `(i/n, a_n(X_i − b_n))`
/// for `1 ≤ i ≤ n`, on the window `(0, 1] × ℝ`.
pub fn build_xi_n(
    xs: &[f64],
    a_n: f64,
    b_n: f64,
    n: usize,
) -> Result<PointPattern2D, PointProcessError> {
    if xs.len() < n {
        return Err(PointProcessError::SeriesTooShort { needed: n, got: xs.len() });
    }
    let window = Rect::new(0.0, 1.0, f64::NEG_INFINITY, f64::INFINITY).expect("static window");
    let points = xs
        .iter()
        .take(n)
        .enumerate()
        .map(|(i, &x)| ((i + 1) as f64 / n as f64, a_n * (x - b_n)))
        .collect();
    PointPattern2D::new(window, points)
}

/// `H1(ξ)(t) = sup{y_i : t_i ≤ t}` as a step path on `window`.
///
/// Initial segments containing no points carry the `−∞` marker.
pub fn functional_h1(pattern: &PointPattern2D, window: (f64, f64)) -> CadlagStepPath {
    let (t_lo, t_hi) = window;
    let pts = pattern.points();
    let mut sup = f64::NEG_INFINITY;
    let mut idx = 0;
    while idx < pts.len() && pts[idx].0 <= t_lo {
        sup = sup.max(pts[idx].1);
        idx += 1;
    }
    let initial = sup;
    let mut jumps: Vec<(f64, f64)> = Vec::new();
    for &(t, y) in &pts[idx..] {
        if t > t_hi {
            break;
        }
        if y > sup {
            sup = y;
            // Coincident times collapse into one jump.
            match jumps.last_mut() {
                Some(last) if last.0 == t => last.1 = y,
                _ => jumps.push((t, y)),
            }
        }
    }
    CadlagStepPath::new(window, initial, jumps).expect("sorted jump times")
}

/// `H2(ξ)(level) = inf{t_i : y_i > level}`; `+∞` when no point exceeds
/// the level.
pub fn functional_h2(pattern: &PointPattern2D, level: f64) -> f64 {
    pattern
        .points()
        .iter()
        .find(|&&(_, y)| y > level)
        .map_or(f64::INFINITY, |&(t, _)| t)
}

/// `H3(path, (a, b])`: the number of jump times in `(a, b]`.
pub fn functional_h3(path: &CadlagStepPath, interval: (f64, f64)) -> usize {
    path.jump_count_in(interval.0, interval.1)
}
