//! `J1` distances between cadlag step paths.
//!
//! The compact-window distance is
//!
//! ```text
//! d_{a,b}(p, q) = inf_h max( sup|p∘h − q| , sup|h − id| )
//! ```
//!
//! over strictly increasing continuous time changes `h` of `[a,b]` fixing
//! the endpoints. For step paths the infimum is attained on piecewise
//! linear `h` through monotone matchings of the two jump sets, which
//! turns the computation into a bottleneck alignment problem: walking an
//! alignment of the jump sequences, every visited pair of plateau levels
//! contributes its level gap to the value term, and every matched jump
//! pair contributes its time displacement. A dynamic program minimizes
//! the maximum over alignments; tests check it against brute-force grid
//! search over time changes.
//!
//! The whole-axis metric integrates window distances:
//!
//! ```text
//! d_{0,∞}(p, q) = ∫₀¹ ∫₁^∞ e^{−t} (1 ∧ d_{s,t}(r_{s,t}p, r_{s,t}q)) dt ds,
//! ```
//!
//! approximated by Gauss–Legendre quadrature with the `t` integral
//! truncated at `T_MAX = 8` (truncation error below `e⁻⁸ ≈ 3.4·10⁻⁴`).

use crate::maxima::CadlagStepPath;
use std::sync::OnceLock;
use thiserror::Error;

/// Truncation horizon of the outer integral in [`d_0inf`].
pub const T_MAX: f64 = 8.0;

const S_NODES: usize = 32;
const T_NODES: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum SkorokhodError {
    #[error("paths do not cover the window [{a}, {b}]")]
    WindowNotCovered { a: f64, b: f64 },
    #[error("window [{a}, {b}] is empty or not finite")]
    BadWindow { a: f64, b: f64 },
    #[error("paths must extend to the truncation horizon {horizon}")]
    HorizonTooShort { horizon: f64 },
}

/// Exact `J1` distance between two step paths on `[a, b]`.
pub fn d_ab(
    p: &CadlagStepPath,
    q: &CadlagStepPath,
    a: f64,
    b: f64,
) -> Result<f64, SkorokhodError> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(SkorokhodError::BadWindow { a, b });
    }
    for path in [p, q] {
        let (lo, hi) = path.window();
        if lo > a || hi < b {
            return Err(SkorokhodError::WindowNotCovered { a, b });
        }
    }
    let rp = p.restrict(a, b).expect("validated cover");
    let rq = q.restrict(a, b).expect("validated cover");
    Ok(alignment_distance(&rp, &rq, b))
}

/// Bottleneck alignment DP over the two jump sequences.
///
/// `dp[i][j]` is the cheapest max-cost of an alignment that has consumed
/// `i` jumps of `p` and `j` of `q`. Every state contributes the gap of
/// the plateau levels `|α_i − β_j|`. A diagonal move matches two jumps
/// at the cost of their time displacement; it is forbidden when exactly
/// one of them sits at the right endpoint, since `h(b) = b`. A
/// horizontal/vertical move leaves a jump unmatched, exposing its
/// intermediate plateau pair — and if it consumes the jump ahead of an
/// opposite-side jump with smaller raw time, the increasing time change
/// must displace time by at least that gap, which is charged into the
/// max (the binding constraint is the earliest remaining opposite jump).
/// An unmatched jump pinned at `b` cannot be reordered before interior
/// opposite jumps at any price.
fn alignment_distance(p: &CadlagStepPath, q: &CadlagStepPath, b: f64) -> f64 {
    let (s_times, alpha) = levels_of(p);
    let (t_times, beta) = levels_of(q);
    let m = s_times.len();
    let k = t_times.len();
    let mut dp = vec![vec![f64::INFINITY; k + 1]; m + 1];
    dp[0][0] = value_gap(alpha[0], beta[0]);
    for i in 0..=m {
        for j in 0..=k {
            if i == 0 && j == 0 {
                continue;
            }
            let mut best = f64::INFINITY;
            if i > 0 && j > 0 {
                let boundary_ok = (s_times[i - 1] == b) == (t_times[j - 1] == b);
                if boundary_ok {
                    let shift = (s_times[i - 1] - t_times[j - 1]).abs();
                    best = best.min(dp[i - 1][j - 1].max(shift));
                }
            }
            if i > 0 && dp[i - 1][j].is_finite() {
                let s = s_times[i - 1];
                let pinned = s == b && j < k && t_times[j] < b;
                if !pinned {
                    let mut cost = dp[i - 1][j];
                    if j < k {
                        cost = cost.max(s - t_times[j]);
                    }
                    best = best.min(cost);
                }
            }
            if j > 0 && dp[i][j - 1].is_finite() {
                let t = t_times[j - 1];
                let pinned = t == b && i < m && s_times[i] < b;
                if !pinned {
                    let mut cost = dp[i][j - 1];
                    if i < m {
                        cost = cost.max(t - s_times[i]);
                    }
                    best = best.min(cost);
                }
            }
            dp[i][j] = best.max(value_gap(alpha[i], beta[j]));
        }
    }
    dp[m][k]
}

fn levels_of(p: &CadlagStepPath) -> (Vec<f64>, Vec<f64>) {
    let times = p.jumps().iter().map(|&(t, _)| t).collect();
    let mut levels = Vec::with_capacity(p.jumps().len() + 1);
    levels.push(p.initial_value());
    levels.extend(p.jumps().iter().map(|&(_, v)| v));
    (times, levels)
}

/// `|x − y|` on the extended reals: equal infinities are distance 0.
fn value_gap(x: f64, y: f64) -> f64 {
    if x == y {
        0.0
    } else {
        (x - y).abs()
    }
}

/// The truncated-quadrature `J1` metric on `D(0, ∞)`.
///
/// Both paths must cover `(·, T_MAX]`; values before each path's own
/// window are its initial value (paths are clamped, matching the
/// right-continuous restriction convention).
pub fn d_0inf(p: &CadlagStepPath, q: &CadlagStepPath) -> Result<f64, SkorokhodError> {
    for path in [p, q] {
        if path.window().1 < T_MAX {
            return Err(SkorokhodError::HorizonTooShort { horizon: T_MAX });
        }
    }
    let (s_nodes, s_weights) = gauss_legendre_cached(S_NODES, 0.0, 1.0);
    let (t_nodes, t_weights) = gauss_legendre_cached(T_NODES, 1.0, T_MAX);
    let mut total = 0.0;
    for (&s, &ws) in s_nodes.iter().zip(s_weights) {
        for (&t, &wt) in t_nodes.iter().zip(t_weights) {
            let rp = clamped_restriction(p, s, t);
            let rq = clamped_restriction(q, s, t);
            let d = alignment_distance(&rp, &rq, t).min(1.0);
            total += ws * wt * (-t).exp() * d;
        }
    }
    Ok(total)
}

/// Restriction of a path to `[s, t]`, clamping to the initial value when
/// `s` precedes the path's own window.
fn clamped_restriction(p: &CadlagStepPath, s: f64, t: f64) -> CadlagStepPath {
    let jumps = p
        .jumps()
        .iter()
        .copied()
        .filter(|&(jt, _)| jt > s && jt <= t)
        .collect();
    CadlagStepPath::new((s, t), p.value_at(s), jumps).expect("restriction preserves order")
}

fn gauss_legendre_cached(n: usize, lo: f64, hi: f64) -> (&'static [f64], &'static [f64]) {
    static S_CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static T_CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let cache = if n == S_NODES { &S_CACHE } else { &T_CACHE };
    let (nodes, weights) = cache.get_or_init(|| gauss_legendre(n, lo, hi));
    (nodes, weights)
}

/// Gauss–Legendre nodes and weights on `[lo, hi]` by Newton iteration on
/// the Legendre recurrence.
fn gauss_legendre(n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mid = 0.5 * (hi + lo);
    let half = 0.5 * (hi - lo);
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    (nodes, weights)
}
