//! Estimators and hypothesis tests for the limit-theorem experiments.
//!
//! Kolmogorov–Smirnov machinery (one- and two-sample, asymptotic p-values
//! via the Kolmogorov series), a chi-square goodness-of-fit test against
//! Poisson count laws, the short-range recurrence diagnostic `D′`, and
//! the block-independence table. Everything is deterministic given a
//! seed; trial loops run in parallel but reduce in trial order, so the
//! output is independent of the worker count.

use crate::dynamics::{DynamicsError, GenerationMode, MapSystem, OrbitSpec};
use crate::observables::{Observable, ObservableError};
use crate::seeding::trial_rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("too few samples: need {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("Poisson mean must be positive and finite, got {mean}")]
    BadMean { mean: f64 },
    #[error("threshold {threshold} has exceedance probability 0 or 1")]
    DegenerateThreshold { threshold: f64 },
    #[error("need n/k_block >= 2, got n = {n}, k_block = {k_block}")]
    BadBlocking { n: u64, k_block: u64 },
    #[error("intervals overlap or are empty")]
    OverlappingIntervals,
    #[error("level x = {level} must be positive")]
    BadLevel { level: f64 },
    #[error("intervals and levels must have equal nonzero length")]
    MismatchedLengths,
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
}

/// One test outcome, serialized as a JSON record by the front ends.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestVerdict {
    pub test: String,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    pub pass: bool,
}

/// Empirical CDF of a sample.
#[derive(Debug, Clone)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

pub fn ecdf(samples: &[f64]) -> Result<Ecdf, StatsError> {
    if samples.len() < 30 {
        return Err(StatsError::TooFewSamples { needed: 30, got: samples.len() });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(Ecdf { sorted })
}

/// One-sample KS statistic `sup |F_n − F|` against a reference CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64, StatsError> {
    if samples.len() < 30 {
        return Err(StatsError::TooFewSamples { needed: 30, got: samples.len() });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// One-sample KS test with the asymptotic p-value.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<(f64, f64), StatsError> {
    let d = ks_statistic(samples, cdf)?;
    let p = kolmogorov_sf((samples.len() as f64).sqrt() * d);
    Ok((d, p))
}

/// Two-sample KS test; the p-value uses the effective sample size
/// `n_a n_b / (n_a + n_b)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64), StatsError> {
    if a.len() < 30 || b.len() < 30 {
        return Err(StatsError::TooFewSamples { needed: 30, got: a.len().min(b.len()) });
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < sa.len() && j < sb.len() {
        let x = sa[i].min(sb[j]);
        while i < sa.len() && sa[i] <= x {
            i += 1;
        }
        while j < sb.len() && sb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let n_eff = na * nb / (na + nb);
    Ok((d, kolmogorov_sf(n_eff.sqrt() * d)))
}

/// Survival function of the Kolmogorov distribution,
/// `P(sup|B| > λ) = 2 Σ (−1)^{k−1} e^{−2k²λ²}`, with the theta-function
/// form for small `λ` where that series converges slowly.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 0.755 {
        let t = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let f = (2.0 * std::f64::consts::PI).sqrt() / lambda;
        let cdf = f * ((-t).exp() + (-9.0 * t).exp() + (-25.0 * t).exp() + (-49.0 * t).exp());
        (1.0 - cdf).clamp(0.0, 1.0)
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=100u32 {
            let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
            sum += sign * term;
            sign = -sign;
            if term < 1e-16 {
                break;
            }
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
pub fn chi2_sf(stat: f64, df: f64) -> f64 {
    if df <= 0.0 {
        return 1.0;
    }
    statrs::function::gamma::gamma_ur(df / 2.0, stat.max(0.0) / 2.0)
}

/// Pearson correlation of two equal-length samples.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    cov / (va.sqrt() * vb.sqrt())
}

/// Chi-square goodness of fit of integer counts against `Poisson(mean)`.
///
/// Cells are consecutive count values merged greedily until every
/// expected cell holds at least 5; the final cell absorbs the upper tail.
/// Degrees of freedom are `cells − 1`. Requires at least 200 counts.
pub fn poisson_count_test(counts: &[u64], mean: f64) -> Result<(f64, f64), StatsError> {
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(StatsError::BadMean { mean });
    }
    if counts.len() < 200 {
        return Err(StatsError::TooFewSamples { needed: 200, got: counts.len() });
    }
    let n = counts.len() as f64;
    let kmax = *counts.iter().max().unwrap() as usize;
    let mut observed = vec![0u64; kmax + 1];
    for &c in counts {
        observed[c as usize] += 1;
    }
    let mut pmf = Vec::with_capacity(kmax + 1);
    let mut p = (-mean).exp();
    let mut cum = 0.0;
    for k in 0..=kmax {
        if k > 0 {
            p *= mean / k as f64;
        }
        pmf.push(p);
        cum += p;
    }
    let tail = (1.0 - cum).max(0.0);

    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut acc_obs, mut acc_exp) = (0.0, 0.0);
    for k in 0..=kmax {
        acc_obs += observed[k] as f64;
        acc_exp += pmf[k] * n;
        if acc_exp >= 5.0 {
            cells.push((acc_obs, acc_exp));
            acc_obs = 0.0;
            acc_exp = 0.0;
        }
    }
    acc_exp += tail * n;
    if acc_exp >= 5.0 || cells.is_empty() {
        cells.push((acc_obs, acc_exp));
    } else if let Some(last) = cells.last_mut() {
        last.0 += acc_obs;
        last.1 += acc_exp;
    }
    if cells.len() < 2 {
        return Ok((0.0, 1.0));
    }
    let chi2: f64 = cells
        .iter()
        .map(|&(o, e)| (o - e) * (o - e) / e)
        .sum();
    let df = (cells.len() - 1) as f64;
    Ok((chi2, chi2_sf(chi2, df)))
}

/// Per-series short-range recurrence statistic: given the (1-based)
/// exceedance indices of one stationary series of length `n`, returns
/// the time-average estimate of `n Σ_{j=2}^{⌊n/k⌋} μ{X₁ > u, X_j > u}`.
pub fn dprime_from_exceedances(exceed_idx: &[usize], n: usize, k_block: usize) -> f64 {
    let j_max = n / k_block;
    let mut total = 0.0;
    for (i, &t) in exceed_idx.iter().enumerate() {
        for &s in &exceed_idx[i + 1..] {
            let lag = s - t;
            if lag >= j_max {
                break;
            }
            total += n as f64 / (n - lag) as f64;
        }
    }
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct DprimeEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub threshold: f64,
    pub exceedance_rate: f64,
    pub n: u64,
    pub k_block: u64,
    pub trials: u64,
}

/// Monte Carlo estimate of the `D′` sum for a map/observable pair at a
/// fixed threshold, averaged over `trials` stationary orbit segments.
/// The standard error comes from a trial-level bootstrap.
pub fn dprime_estimate(
    map: MapSystem,
    obs: &Observable,
    threshold: f64,
    n: usize,
    k_block: usize,
    trials: u64,
    seed: u64,
) -> Result<DprimeEstimate, StatsError> {
    if k_block == 0 || n / k_block < 2 {
        return Err(StatsError::BadBlocking { n: n as u64, k_block: k_block as u64 });
    }
    let radius = obs.exceedance_radius(threshold);
    if !(radius > 0.0 && radius < 1.0) {
        return Err(StatsError::DegenerateThreshold { threshold });
    }
    let center = obs.center();
    let mode = GenerationMode::default_for(map);
    let per_trial: Result<Vec<(f64, usize)>, DynamicsError> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let spec = OrbitSpec::new(n, 0, seed, mode);
            let mut rng = trial_rng(seed, trial);
            let orbit = map.sample_orbit(&spec, &mut rng)?;
            let exceed: Vec<usize> = orbit
                .iter()
                .enumerate()
                .filter(|&(_, &x)| (x - center).abs() < radius)
                .map(|(i, _)| i + 1)
                .collect();
            let stat = dprime_from_exceedances(&exceed, n, k_block);
            Ok((stat, exceed.len()))
        })
        .collect();
    let per_trial = per_trial?;
    let stats: Vec<f64> = per_trial.iter().map(|&(s, _)| s).collect();
    let exceed_total: usize = per_trial.iter().map(|&(_, e)| e).sum();
    let exceedance_rate = exceed_total as f64 / (trials as f64 * n as f64);
    if exceed_total == 0 || exceedance_rate >= 0.99 {
        return Err(StatsError::DegenerateThreshold { threshold });
    }
    let estimate = stats.iter().sum::<f64>() / trials as f64;

    // Trial-level bootstrap for the standard error.
    let mut boot_rng = trial_rng(crate::seeding::derive_seed(seed, "dprime-bootstrap"), 0);
    let reps = 200;
    let mut means = Vec::with_capacity(reps);
    for _ in 0..reps {
        let mut sum = 0.0;
        for _ in 0..stats.len() {
            use rand::Rng;
            sum += stats[boot_rng.random_range(0..stats.len())];
        }
        means.push(sum / stats.len() as f64);
    }
    let mb = means.iter().sum::<f64>() / reps as f64;
    let var = means.iter().map(|m| (m - mb) * (m - mb)).sum::<f64>() / (reps as f64 - 1.0);

    Ok(DprimeEstimate {
        estimate,
        std_error: var.sqrt(),
        threshold,
        exceedance_rate,
        n: n as u64,
        k_block: k_block as u64,
        trials,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockRow {
    pub interval: (f64, f64),
    pub level_x: f64,
    pub threshold_u: f64,
    pub predicted_marginal: f64,
    pub empirical_marginal: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockIndependenceReport {
    pub rows: Vec<BlockRow>,
    pub empirical_joint: f64,
    pub predicted_joint: f64,
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
}

/// Joint non-exceedance of block maxima over disjoint intervals against
/// the product prediction `Π e^{−x_j (b_j − a_j)}`.
///
/// Thresholds follow the scaling representation
/// `u_j = a_n^{−1} G^{−1}(e^{−x_j}) + b_n` with `G` the limit law of the
/// pair at the observable's center.
pub fn block_independence_test(
    map: MapSystem,
    obs: &Observable,
    intervals: &[(f64, f64)],
    levels: &[f64],
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<BlockIndependenceReport, StatsError> {
    if intervals.is_empty() || intervals.len() != levels.len() {
        return Err(StatsError::MismatchedLengths);
    }
    let mut sorted = intervals.to_vec();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    for w in sorted.windows(2) {
        if w[0].1 > w[1].0 {
            return Err(StatsError::OverlappingIntervals);
        }
    }
    for &(a, b) in intervals {
        if !(a >= 0.0 && a < b) || !b.is_finite() {
            return Err(StatsError::OverlappingIntervals);
        }
    }
    for &x in levels {
        if !(x > 0.0) || !x.is_finite() {
            return Err(StatsError::BadLevel { level: x });
        }
    }

    let rho = map.invariant_density(obs.center())?;
    let g = obs.limit_law(rho)?;
    let (a_n, b_n) = obs.scaling(n as u64);
    let thresholds: Vec<f64> = levels
        .iter()
        .map(|&x| g.q_inverse(x) / a_n + b_n)
        .collect();
    let radii: Vec<f64> = thresholds.iter().map(|&u| obs.exceedance_radius(u)).collect();
    for (&u, &r) in thresholds.iter().zip(&radii) {
        if !(r > 0.0 && r < 1.0) {
            return Err(StatsError::DegenerateThreshold { threshold: u });
        }
    }

    // Index blocks [⌈n a⌉ ∨ 1, ⌈n b⌉): the integer lattice of n[a, b).
    let blocks: Vec<(usize, usize)> = intervals
        .iter()
        .map(|&(a, b)| {
            let lo = ((n as f64 * a).ceil() as usize).max(1);
            let hi = (n as f64 * b).ceil() as usize;
            (lo, hi)
        })
        .collect();
    let orbit_len = blocks.iter().map(|&(_, hi)| hi).max().unwrap().max(2) - 1;

    let center = obs.center();
    let mode = GenerationMode::default_for(map);
    let outcomes: Result<Vec<(bool, Vec<bool>)>, DynamicsError> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let spec = OrbitSpec::new(orbit_len, 0, seed, mode);
            let mut rng = trial_rng(seed, trial);
            let orbit = map.sample_orbit(&spec, &mut rng)?;
            let mut all = true;
            let mut per_block = Vec::with_capacity(blocks.len());
            for (bi, &(lo, hi)) in blocks.iter().enumerate() {
                let mut ok = true;
                for i in lo..hi {
                    if (orbit[i - 1] - center).abs() < radii[bi] {
                        ok = false;
                        break;
                    }
                }
                per_block.push(ok);
                all &= ok;
            }
            Ok((all, per_block))
        })
        .collect();
    let outcomes = outcomes?;

    let empirical_joint =
        outcomes.iter().filter(|&&(all, _)| all).count() as f64 / trials as f64;
    let rows = intervals
        .iter()
        .enumerate()
        .map(|(j, &(a, b))| BlockRow {
            interval: (a, b),
            level_x: levels[j],
            threshold_u: thresholds[j],
            predicted_marginal: (-levels[j] * (b - a)).exp(),
            empirical_marginal: outcomes.iter().filter(|&&(_, ref pb)| pb[j]).count() as f64
                / trials as f64,
        })
        .collect();
    let predicted_joint = intervals
        .iter()
        .zip(levels)
        .map(|(&(a, b), &x)| (-x * (b - a)).exp())
        .product();

    Ok(BlockIndependenceReport {
        rows,
        empirical_joint,
        predicted_joint,
        n: n as u64,
        trials,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{GevLimit, ObservableFamily, DEFAULT_CENTER};
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand_distr::Distribution;

    #[test]
    fn ks_statistic_at_plotting_positions_is_small() {
        let n = 999;
        let samples: Vec<f64> = (1..=n).map(|i| i as f64 / (n + 1) as f64).collect();
        let d = ks_statistic(&samples, |x| x).unwrap();
        assert!(d <= 1.0 / (n + 1) as f64 + 1e-12, "D = {d}");
    }

    #[test]
    fn identical_samples_have_zero_two_sample_stat() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let (d, p) = ks_two_sample(&a, &a).unwrap();
        assert_eq!(d, 0.0);
        assert_eq!(p, 1.0);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let a = vec![1.0; 10];
        assert!(matches!(
            ks_statistic(&a, |x| x),
            Err(StatsError::TooFewSamples { .. })
        ));
        assert!(ecdf(&a).is_err());
        assert!(ks_two_sample(&a, &a).is_err());
    }

    #[test]
    fn ecdf_evaluates_fractions() {
        let samples: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        let e = ecdf(&samples).unwrap();
        assert_eq!(e.eval(0.0), 0.0);
        assert_eq!(e.eval(50.0), 0.5);
        assert_eq!(e.eval(100.0), 1.0);
    }

    /// KS p-values under the null are uniform. 2000 reps keep the 0.05
    /// bound on the KS distance of the p-values well above its own
    /// sampling floor (E[D] ≈ 0.02 at 2000 reps).
    #[test]
    fn ks_p_values_are_uniform_under_the_null() {
        let g = GevLimit::gumbel(2.0).unwrap();
        let cdf = |x: f64| g.cdf(x);
        let mut ps = Vec::with_capacity(2000);
        for rep in 0..2000u64 {
            let mut rng = crate::seeding::trial_rng(0x6E11, rep);
            let samples: Vec<f64> = (0..500)
                .map(|_| g.quantile(rng.sample(rand::distr::Open01)).unwrap())
                .collect();
            let (_, p) = ks_test(&samples, cdf).unwrap();
            ps.push(p);
        }
        let d = ks_statistic(&ps, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(d < 0.05, "KS distance of p-values to uniform: {d}");
    }

    #[test]
    fn ks_statistic_invariant_under_monotone_transform() {
        let mut rng = crate::seeding::trial_rng(0xF00, 0);
        let samples: Vec<f64> = (0..500).map(|_| rng.random_range(-2.0..2.0)).collect();
        let cdf = |x: f64| 0.5 * (1.0 + (x / 2.0).tanh());
        let d1 = ks_statistic(&samples, cdf).unwrap();
        let transformed: Vec<f64> = samples.iter().map(|&x| x.exp()).collect();
        let d2 = ks_statistic(&transformed, |y: f64| cdf(y.ln())).unwrap();
        assert_abs_diff_eq!(d1, d2, epsilon = 1e-9);
    }

    #[test]
    fn kolmogorov_sf_reference_values() {
        // Reference values from scipy.special.kolmogorov; both series
        // branches and the switchover point are covered.
        assert_abs_diff_eq!(kolmogorov_sf(0.5), 0.9639452436648751, epsilon = 1e-10);
        assert_abs_diff_eq!(kolmogorov_sf(0.755), 0.6187560849852216, epsilon = 1e-10);
        assert_abs_diff_eq!(kolmogorov_sf(1.0), 0.26999967167735456, epsilon = 1e-10);
        assert_abs_diff_eq!(kolmogorov_sf(1.36), 0.049485876755377876, epsilon = 1e-10);
        assert_abs_diff_eq!(kolmogorov_sf(1.63), 0.009846364888486529, epsilon = 1e-10);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
        assert_abs_diff_eq!(kolmogorov_sf(0.3), 0.9999906941986655, epsilon = 1e-10);
    }

    #[test]
    fn poisson_test_perfect_fit_on_tiny_mean() {
        let counts = vec![0u64; 1000];
        let (stat, p) = poisson_count_test(&counts, 1e-6).unwrap();
        assert_eq!(stat, 0.0);
        assert_eq!(p, 1.0);
    }

    #[test]
    fn poisson_test_null_is_calibrated() {
        let mut rejections = 0;
        let reps = 2000u64;
        for rep in 0..reps {
            let mut rng = crate::seeding::trial_rng(0xCA1, rep);
            let pois = rand_distr::Poisson::new(1.0f64).unwrap();
            let counts: Vec<u64> = (0..1000).map(|_| pois.sample(&mut rng) as u64).collect();
            let (_, p) = poisson_count_test(&counts, 1.0).unwrap();
            if p < 0.01 {
                rejections += 1;
            }
        }
        let rate = rejections as f64 / reps as f64;
        assert!(
            (rate - 0.01).abs() <= 0.005,
            "rejection rate at the 1% level was {rate}"
        );
    }

    #[test]
    fn poisson_test_detects_wrong_mean() {
        let mut rng = crate::seeding::trial_rng(0xCA2, 0);
        let pois = rand_distr::Poisson::new(2.0f64).unwrap();
        let counts: Vec<u64> = (0..10_000).map(|_| pois.sample(&mut rng) as u64).collect();
        let (_, p) = poisson_count_test(&counts, 1.0).unwrap();
        assert!(p < 0.001, "p = {p}");
    }

    #[test]
    fn poisson_test_input_errors() {
        let counts = vec![1u64; 300];
        assert!(poisson_count_test(&counts, 0.0).is_err());
        assert!(poisson_count_test(&counts, -1.0).is_err());
        assert!(poisson_count_test(&counts[..100], 1.0).is_err());
    }

    /// iid null model for D′: with `u = 1 − x/n` the sum converges to
    /// `x²/k`.
    #[test]
    fn dprime_iid_oracle() {
        let n = 100_000usize;
        let k = 10usize;
        let x = 1.0;
        let u = 1.0 - x / n as f64;
        let trials = 2000u64;
        let per_trial: Vec<f64> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = crate::seeding::trial_rng(0xDD0, trial);
                let exceed: Vec<usize> = (0..n)
                    .filter(|_| rng.random::<f64>() > u)
                    .map(|i| i + 1)
                    .collect();
                dprime_from_exceedances(&exceed, n, k)
            })
            .collect();
        let mean = per_trial.iter().sum::<f64>() / trials as f64;
        assert!(
            (mean - x * x / k as f64).abs() < 0.02,
            "D' estimate {mean}, expected {}",
            x * x / k as f64
        );
    }

    /// At a non-periodic center the D′ estimate scales like 1/k; at the
    /// fixed point of the doubling map short returns keep it bounded
    /// below by about x/2 no matter how large k is.
    #[test]
    fn dprime_separates_periodic_and_generic_centers() {
        let map = MapSystem::Doubling;
        let n = 10_000;
        let x = 1.0;

        let obs = Observable::new(ObservableFamily::NegLog, DEFAULT_CENTER).unwrap();
        let g = obs.limit_law(1.0).unwrap();
        let (a_n, b_n) = obs.scaling(n as u64);
        let u = g.q_inverse(x) / a_n + b_n;
        let est10 = dprime_estimate(map, &obs, u, n, 10, 3000, 0xDD1).unwrap();
        let est100 = dprime_estimate(map, &obs, u, n, 100, 3000, 0xDD1).unwrap();
        let ratio = est10.estimate / est100.estimate;
        assert!(
            (3.0..30.0).contains(&ratio),
            "k=10 vs k=100 estimates: {} / {} = {ratio}",
            est10.estimate,
            est100.estimate
        );

        // Center at the fixed point 0: the ball is one-sided, so choose u
        // with radius x/n directly.
        let obs0 = Observable::with_center_unchecked(ObservableFamily::NegLog, 0.0);
        let u0 = -(x / n as f64).ln();
        for k in [10usize, 100] {
            let est = dprime_estimate(map, &obs0, u0, n, k, 2000, 0xDD2).unwrap();
            assert!(
                est.estimate > 0.35,
                "k = {k}: estimate {} not bounded away from 0",
                est.estimate
            );
        }
    }

    #[test]
    fn dprime_rejects_degenerate_thresholds() {
        let obs = Observable::new(ObservableFamily::NegLog, DEFAULT_CENTER).unwrap();
        // Radius >= 1 means exceedance probability 1.
        assert!(matches!(
            dprime_estimate(MapSystem::Doubling, &obs, -0.1, 1000, 10, 10, 0),
            Err(StatsError::DegenerateThreshold { .. })
        ));
        assert!(matches!(
            dprime_estimate(MapSystem::Doubling, &obs, 1.0, 1000, 600, 10, 0),
            Err(StatsError::BadBlocking { .. })
        ));
    }

    #[test]
    fn dprime_is_deterministic() {
        let obs = Observable::new(ObservableFamily::NegLog, DEFAULT_CENTER).unwrap();
        let a = dprime_estimate(MapSystem::Tent, &obs, 8.0, 2000, 10, 50, 7).unwrap();
        let b = dprime_estimate(MapSystem::Tent, &obs, 8.0, 2000, 10, 50, 7).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn block_independence_single_interval_matches_poisson_approximation() {
        let obs = Observable::new(ObservableFamily::NegLog, DEFAULT_CENTER).unwrap();
        let report = block_independence_test(
            MapSystem::Tent,
            &obs,
            &[(0.0, 1.0)],
            &[1.0],
            10_000,
            1500,
            0xB10C,
        )
        .unwrap();
        assert_abs_diff_eq!(report.predicted_joint, (-1.0f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(report.empirical_joint, report.predicted_joint, epsilon = 0.04);
    }

    #[test]
    fn block_independence_halves_compose() {
        let obs = Observable::new(ObservableFamily::NegLog, DEFAULT_CENTER).unwrap();
        let report = block_independence_test(
            MapSystem::Tent,
            &obs,
            &[(0.0, 0.5), (0.5, 1.0)],
            &[1.0, 1.0],
            10_000,
            1500,
            0xB10D,
        )
        .unwrap();
        assert_abs_diff_eq!(report.predicted_joint, (-1.0f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(report.empirical_joint, report.predicted_joint, epsilon = 0.04);
    }

    #[test]
    fn block_independence_rejects_bad_input() {
        let obs = Observable::new(ObservableFamily::NegLog, DEFAULT_CENTER).unwrap();
        assert!(matches!(
            block_independence_test(
                MapSystem::Tent,
                &obs,
                &[(0.0, 0.6), (0.5, 1.0)],
                &[1.0, 1.0],
                1000,
                10,
                0
            ),
            Err(StatsError::OverlappingIntervals)
        ));
        assert!(block_independence_test(
            MapSystem::Tent,
            &obs,
            &[(0.0, 1.0)],
            &[-1.0],
            1000,
            10,
            0
        )
        .is_err());
        assert!(block_independence_test(MapSystem::Tent, &obs, &[], &[], 1000, 10, 0).is_err());
    }
}
