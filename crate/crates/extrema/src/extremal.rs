//! Exact sampling of the extremal limit process.
//!
//! An extremal-`G` process is the Markov jump process with
//! finite-dimensional CDFs
//!
//! ```text
//! P(Y(t₁) ≤ u₁, …, Y(t_k) ≤ u_k) = G^{t₁}(∧_{i≥1} u_i) · G^{t₂−t₁}(∧_{i≥2} u_i) ⋯ G^{t_k−t_{k−1}}(u_k).
//! ```
//!
//! Its sample paths are nondecreasing step functions: in state `y` the
//! process holds for an `Exponential(Q(y))` time (`Q = −log G`), and at a
//! jump from `y` the new state has CDF `1 − Q(x)/Q(y)` on `x > y` —
//! equivalently `Q(new) = Q(y)·U` with `U` uniform. The sampler below is
//! that jump chain, truncated to a window `(t_start, t_end]`; the
//! planar-PRM route (`H1` applied to a `Leb × λ_G` sample) provides an
//! independent sampler of the same law for cross-validation.
//!
//! Paths start at `t_start > 0` because `Y(0+)` escapes to the lower
//! endpoint of `G`'s domain; the marginal at any `t > 0` is `G^t`.

use crate::maxima::CadlagStepPath;
use crate::observables::GevLimit;
use rand::Rng;
use thiserror::Error;

/// Default start time for sampled paths.
pub const DEFAULT_T_START: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum ExtremalError {
    #[error("times must be strictly increasing and positive")]
    BadTimes,
    #[error("need 0 < t_start < t_end, got ({t_start}, {t_end})")]
    BadWindow { t_start: f64, t_end: f64 },
    #[error("state {y} is outside the interior of the law's domain")]
    OutsideDomain { y: f64 },
    #[error("holding time needs t >= 0, got {t}")]
    NegativeTime { t: f64 },
}

/// The joint CDF of `(Y(t₁), …, Y(t_k))` at `(u₁, …, u_k)`.
pub fn fdd_cdf(g: &GevLimit, times: &[f64], values: &[f64]) -> Result<f64, ExtremalError> {
    if times.is_empty() || times.len() != values.len() {
        return Err(ExtremalError::BadTimes);
    }
    let mut prev = 0.0;
    for &t in times {
        if !(t > prev) || !t.is_finite() {
            return Err(ExtremalError::BadTimes);
        }
        prev = t;
    }
    // Suffix minima of the level vector.
    let mut suffix_min = values.to_vec();
    for i in (0..values.len() - 1).rev() {
        suffix_min[i] = suffix_min[i].min(suffix_min[i + 1]);
    }
    let mut log_cdf = 0.0;
    let mut t_prev = 0.0;
    for (&t, &m) in times.iter().zip(&suffix_min) {
        log_cdf -= (t - t_prev) * g.neg_log_cdf(m);
        t_prev = t;
    }
    Ok(log_cdf.exp())
}

/// `P(no jump in (s, s+t] | Y(s) = y) = G(y)^t`.
pub fn conditional_no_jump_prob(g: &GevLimit, y: f64, t: f64) -> Result<f64, ExtremalError> {
    if !(t >= 0.0) {
        return Err(ExtremalError::NegativeTime { t });
    }
    let (lo, hi) = g.domain();
    if !(y > lo && y < hi) {
        return Err(ExtremalError::OutsideDomain { y });
    }
    Ok((-t * g.neg_log_cdf(y)).exp())
}

/// Samples one path of the extremal-`G` process on `(t_start, t_end]`.
///
/// `Y(t_start)` is drawn from `G^{t_start}` by quantile inversion; the
/// jump chain then alternates exponential holding times and `Q`-uniform
/// jumps. A state with `Q(y) = 0` (the upper endpoint) holds forever.
pub fn sample_path<R: Rng + ?Sized>(
    g: &GevLimit,
    t_start: f64,
    t_end: f64,
    rng: &mut R,
) -> Result<CadlagStepPath, ExtremalError> {
    if !(t_start > 0.0 && t_start < t_end) || !t_end.is_finite() {
        return Err(ExtremalError::BadWindow { t_start, t_end });
    }
    let u: f64 = rng.sample(rand::distr::Open01);
    let mut y = g.q_inverse(-u.ln() / t_start);
    let initial = y;
    let mut t = t_start;
    let mut jumps = Vec::new();
    loop {
        let rate = g.neg_log_cdf(y);
        if rate <= 0.0 {
            break;
        }
        let e: f64 = rng.sample(rand::distr::Open01);
        t += -e.ln() / rate;
        if t > t_end {
            break;
        }
        let u: f64 = rng.sample(rand::distr::Open01);
        y = g.q_inverse(rate * u);
        jumps.push((t, y));
    }
    Ok(CadlagStepPath::new((t_start, t_end), initial, jumps).expect("increasing jump times"))
}
