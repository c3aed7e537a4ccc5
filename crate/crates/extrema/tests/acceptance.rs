//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Run with `cargo test -p extrema --test acceptance -- --nocapture`.
//!
//! Every tolerance is pinned here. The statistical criteria use fixed
//! seeds, so the whole suite is deterministic.

mod common;

use extrema::dynamics::MapSystem;
use extrema::experiments::{
    self, extremal_fdd_samples, iid_record_summaries, planar_h1_fdd_samples, record_summaries,
    rescaled_max_samples, xi_rect_counts,
};
use extrema::observables::{GevLimit, Observable, ObservableFamily, DEFAULT_CENTER};
use extrema::pointproc::{functional_h3, Intensity1D, Rect};
use extrema::records::{record_time_pattern, record_value_pattern};
use extrema::seeding::trial_rng;
use extrema::skorokhod::d_ab;
use extrema::stats::{self, correlation, ks_statistic, ks_two_sample, poisson_count_test};
use std::time::Instant;

fn neglog() -> Observable {
    Observable::new(ObservableFamily::NegLog, DEFAULT_CENTER).unwrap()
}

fn report(id: u32, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {id}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} failed: {detail}");
}

/// Criterion 1 — Gumbel limit: tent map, NegLog observable at 1/√2,
/// n = 10⁴ over 10⁴ trials. KS of {M_n − log n} against
/// G(u) = exp(−2e^{−u}) at most 0.05, within a 60 s budget.
#[test]
fn a01_gumbel_limit() {
    const KS_TOL: f64 = 0.05;
    const BUDGET_SECS: f64 = 60.0;
    let started = Instant::now();
    let (n, trials, seed) = (10_000usize, 10_000u64, 0xACC1);
    let samples = rescaled_max_samples(MapSystem::Tent, &neglog(), n, trials, seed).unwrap();
    let g = GevLimit::gumbel(2.0).unwrap();
    let d = ks_statistic(&samples, |x| g.cdf(x)).unwrap();

    // Spot-check that the sampled maxima agree with the full path build.
    for trial in 0..50 {
        let series =
            experiments::observable_series(MapSystem::Tent, &neglog(), n, seed, trial).unwrap();
        let path = extrema::maxima::build_path(&series, 1.0, (n as f64).ln(), n, 1.0).unwrap();
        assert!((path.final_value() - samples[trial as usize]).abs() < 1e-9);
    }

    let elapsed = started.elapsed().as_secs_f64();
    report(
        1,
        d <= KS_TOL && elapsed <= BUDGET_SECS,
        &format!("KS = {d:.4} (tol {KS_TOL}), runtime {elapsed:.1}s (budget {BUDGET_SECS}s)"),
    );
}

/// Criterion 2 — record-time PRM: tent/NegLog, n = 10⁵, 5000 trials.
/// Empirical P(R_n(0.25,1] = 0) within 0.25 ± 0.02 and counts Poisson
/// with mean log 4 at p > 0.01.
#[test]
fn a02_record_time_prm() {
    const VOID_TOL: f64 = 0.02;
    const P_MIN: f64 = 0.01;
    let (n, trials, seed) = (100_000usize, 5000u64, 0xACC2);
    let summaries = record_summaries(MapSystem::Tent, &neglog(), n, trials, seed).unwrap();
    let mut void = 0u64;
    let mut counts = Vec::with_capacity(summaries.len());
    for s in &summaries {
        let c = record_time_pattern(s, n).count_in(0.25, 1.0) as u64;
        if c == 0 {
            void += 1;
        }
        counts.push(c);
    }
    let void_rate = void as f64 / trials as f64;
    let (chi2, p) = poisson_count_test(&counts, 4.0f64.ln()).unwrap();
    report(
        2,
        (void_rate - 0.25).abs() <= VOID_TOL && p > P_MIN,
        &format!(
            "P(no record in (0.25,1]) = {void_rate:.4} (0.25 ± {VOID_TOL}), \
             Poisson(log 4) chi2 = {chi2:.2}, p = {p:.3} (> {P_MIN})"
        ),
    );
}

/// Criterion 3 — record-value PRM, Gumbel case: normalized record values
/// in (0,1] are Poisson(1) at p > 0.01 over 5000 trials.
///
/// The value band above b_n = log n keeps collecting records until the
/// running maximum clears it, around time e·n on average, so the orbit
/// horizon extends to 12n; the residual probability that the band is
/// still open is exp(−11·2e⁻¹) ≈ 3·10⁻⁴, invisible at 5000 trials.
#[test]
fn a03_record_value_prm() {
    const P_MIN: f64 = 0.01;
    const HORIZON: usize = 12;
    let (n, trials, seed) = (20_000usize, 5000u64, 0xACC3);
    let obs = neglog();
    let summaries =
        record_summaries(MapSystem::Tent, &obs, HORIZON * n, trials, seed).unwrap();
    let (a_n, b_n) = obs.scaling(n as u64);
    let counts: Vec<u64> = summaries
        .iter()
        .map(|s| record_value_pattern(s, a_n, b_n).count_in(0.0, 1.0) as u64)
        .collect();
    let (chi2, p) = poisson_count_test(&counts, 1.0).unwrap();
    report(
        3,
        p > P_MIN,
        &format!("record values in (0,1]: Poisson(1) chi2 = {chi2:.2}, p = {p:.3} (> {P_MIN})"),
    );
}

/// Criterion 4 — planar convergence: counts of ξ_n in (0,1]×(1,∞) are
/// Poisson(2e⁻¹) at p > 0.01 and counts over the disjoint halves have
/// |correlation| < 0.05 (5000 trials, n = 10⁵).
#[test]
fn a04_planar_prm() {
    const P_MIN: f64 = 0.01;
    const CORR_TOL: f64 = 0.05;
    let (n, trials, seed) = (100_000usize, 5000u64, 0xACC4);
    let rects = [
        Rect::new(0.0, 1.0, 1.0, f64::INFINITY).unwrap(),
        Rect::new(0.0, 0.5, 1.0, f64::INFINITY).unwrap(),
        Rect::new(0.5, 1.0, 1.0, f64::INFINITY).unwrap(),
    ];
    let counts = xi_rect_counts(MapSystem::Tent, &neglog(), n, trials, seed, &rects).unwrap();
    let full: Vec<u64> = counts.iter().map(|c| c[0]).collect();
    let (chi2, p) = poisson_count_test(&full, 2.0 * (-1.0f64).exp()).unwrap();
    let left: Vec<f64> = counts.iter().map(|c| c[1] as f64).collect();
    let right: Vec<f64> = counts.iter().map(|c| c[2] as f64).collect();
    let r = correlation(&left, &right);
    report(
        4,
        p > P_MIN && r.abs() < CORR_TOL,
        &format!(
            "Poisson(2/e) chi2 = {chi2:.2}, p = {p:.3} (> {P_MIN}); \
             disjoint-rectangle correlation = {r:.4} (|r| < {CORR_TOL})"
        ),
    );
}

/// Criterion 5 — block independence: intervals (0,0.4), (0.5,0.9) at
/// levels x₁ = 1, x₂ = 2; the joint non-exceedance probability must sit
/// within ±0.02 of e^{−0.4}·e^{−0.8} (5000 trials, n = 10⁵).
#[test]
fn a05_block_independence() {
    const TOL: f64 = 0.02;
    let (n, trials, seed) = (100_000usize, 5000u64, 0xACC5);
    let report_table = stats::block_independence_test(
        MapSystem::Tent,
        &neglog(),
        &[(0.0, 0.4), (0.5, 0.9)],
        &[1.0, 2.0],
        n,
        trials,
        seed,
    )
    .unwrap();
    let predicted = (-1.2f64).exp();
    assert!((report_table.predicted_joint - predicted).abs() < 1e-12);
    let gap = (report_table.empirical_joint - predicted).abs();
    report(
        5,
        gap <= TOL,
        &format!(
            "joint non-exceedance {:.4} vs e^-1.2 = {predicted:.4} (|diff| = {gap:.4} <= {TOL})",
            report_table.empirical_joint
        ),
    );
}

/// Criterion 6 — sampler cross-validation: the jump-chain sampler and
/// H1 of the planar PRM agree in distribution at t ∈ {0.5, 1, 2}
/// (two-sample KS p > 0.01 at 10⁴ paths each), and the jump counts of
/// the jump chain on (0.25, 2] are Poisson(log 8).
#[test]
fn a06_sampler_cross_validation() {
    const P_MIN: f64 = 0.01;
    let paths = 10_000u64;
    let g = GevLimit::gumbel(2.0).unwrap();
    let times = [0.5, 1.0, 2.0];
    let (chain, jump_counts) =
        extremal_fdd_samples(&g, 0.05, &times, (0.25, 2.0), paths, 0xACC6).unwrap();
    let planar = planar_h1_fdd_samples(&g, -4.0, &times, paths, 0xACC6 + 1).unwrap();
    let mut min_p = f64::INFINITY;
    for k in 0..times.len() {
        let (_, p) = ks_two_sample(&chain.samples[k], &planar.samples[k]).unwrap();
        min_p = min_p.min(p);
    }
    let (chi2, p_jump) = poisson_count_test(&jump_counts, 8.0f64.ln()).unwrap();
    report(
        6,
        min_p > P_MIN && p_jump > P_MIN,
        &format!(
            "two-sampler KS min p = {min_p:.3} over t = {times:?} (> {P_MIN}); \
             jump counts Poisson(log 8) chi2 = {chi2:.2}, p = {p_jump:.3}"
        ),
    );
}

/// Criterion 7 — thinning: a rate-1 PRM on (0,10) thinned with p = 0.3
/// has Poisson(3) counts at p > 0.01 over 10⁵ samples.
#[test]
fn a07_thinning() {
    const P_MIN: f64 = 0.01;
    let samples = 100_000u64;
    let seed = 0xACC7;
    let intensity = Intensity1D::UniformRate(1.0);
    use rayon::prelude::*;
    let counts: Vec<u64> = (0..samples)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let pattern = intensity.sample((0.0, 10.0), &mut rng).unwrap();
            pattern.thin(0.3, &mut rng).unwrap().len() as u64
        })
        .collect();
    let (chi2, p) = poisson_count_test(&counts, 3.0).unwrap();
    report(
        7,
        p > P_MIN,
        &format!("thinned counts Poisson(3) chi2 = {chi2:.2}, p = {p:.3} (> {P_MIN})"),
    );
}

/// Criterion 8 — Skorokhod metric: the DP distance equals brute-force
/// grid search within 10⁻³ on 200 random pairs with at most 3 jumps,
/// and the metric axioms hold on 1000 random triples.
#[test]
fn a08_skorokhod_metric() {
    const BRUTE_TOL: f64 = 1e-3;
    const AXIOM_TOL: f64 = 1e-9;
    let mut rng = trial_rng(0xACC8, 0);
    let mut worst_gap = 0.0f64;
    for _ in 0..200 {
        let p = common::random_path(&mut rng, 3);
        let q = common::random_path(&mut rng, 3);
        let exact = d_ab(&p, &q, 0.0, 1.0).unwrap();
        let brute = common::brute_force_d_ab(&p, &q, 0.0, 1.0);
        worst_gap = worst_gap.max((exact - brute).abs());
    }
    let mut worst_axiom = 0.0f64;
    for _ in 0..1000 {
        let p = common::random_path(&mut rng, 5);
        let q = common::random_path(&mut rng, 5);
        let r = common::random_path(&mut rng, 5);
        let dpq = d_ab(&p, &q, 0.0, 1.0).unwrap();
        let dqp = d_ab(&q, &p, 0.0, 1.0).unwrap();
        let dpr = d_ab(&p, &r, 0.0, 1.0).unwrap();
        let dqr = d_ab(&q, &r, 0.0, 1.0).unwrap();
        let dpp = d_ab(&p, &p, 0.0, 1.0).unwrap();
        worst_axiom = worst_axiom
            .max((dpq - dqp).abs())
            .max(dpp)
            .max((dpr - dpq - dqr).max(0.0))
            .max((-dpq).max(0.0));
    }
    report(
        8,
        worst_gap < BRUTE_TOL && worst_axiom <= AXIOM_TOL,
        &format!(
            "max |DP − brute force| = {worst_gap:.2e} (< {BRUTE_TOL}); \
             max axiom violation = {worst_axiom:.2e} (<= {AXIOM_TOL})"
        ),
    );
}

/// Criterion 9 — iid record laws: over 2000 iid-uniform trials of
/// n = 10⁵ the mean record count sits within ±0.15 of the harmonic sum.
/// The dynamical counterpart is reported with a confidence interval but
/// not asserted (the almost-sure growth laws are conjectural for maps).
#[test]
fn a09_iid_record_laws() {
    const TOL: f64 = 0.15;
    let (n, trials, seed) = (100_000usize, 2000u64, 0xACC9);
    let summaries = iid_record_summaries(n, trials, seed);
    let mean = summaries.iter().map(|s| s.taus().len() as f64).sum::<f64>() / trials as f64;
    let harmonic: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();
    let gap = (mean - harmonic).abs();

    // Dynamical counterpart: W_n / log n for the tent map, reported only.
    let dyn_trials = 500u64;
    let dyn_n = 10_000usize;
    let dyn_summaries =
        record_summaries(MapSystem::Tent, &neglog(), dyn_n, dyn_trials, seed + 1).unwrap();
    let ratios: Vec<f64> = dyn_summaries
        .iter()
        .map(|s| s.taus().len() as f64 / (dyn_n as f64).ln())
        .collect();
    let dyn_mean = ratios.iter().sum::<f64>() / dyn_trials as f64;
    let dyn_var = ratios.iter().map(|r| (r - dyn_mean) * (r - dyn_mean)).sum::<f64>()
        / (dyn_trials as f64 - 1.0);
    let half_width = 1.96 * (dyn_var / dyn_trials as f64).sqrt();
    println!(
        "ACCEPTANCE 9 (reported, not asserted): tent-map W_n/log n = \
         {dyn_mean:.3} ± {half_width:.3} (95% CI, n = {dyn_n}, {dyn_trials} trials)"
    );

    report(
        9,
        gap <= TOL,
        &format!("iid mean W_n = {mean:.3} vs harmonic sum {harmonic:.3} (|diff| = {gap:.3} <= {TOL})"),
    );
}

/// Extremal-path jump times seen through H3 follow the record-time PRM
/// (supporting check for criterion 6's jump-count assertion).
#[test]
fn extremal_h3_jump_counts_poisson() {
    let g = GevLimit::gumbel(2.0).unwrap();
    let paths = 20_000u64;
    use rayon::prelude::*;
    let counts: Vec<u64> = (0..paths)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(0xACCA, trial);
            let p = extrema::extremal::sample_path(&g, 0.1, 3.0, &mut rng).unwrap();
            functional_h3(&p, (0.5, 3.0)) as u64
        })
        .collect();
    let (_, p) = poisson_count_test(&counts, 6.0f64.ln()).unwrap();
    assert!(p > 0.01, "H3 jump counts chi-square p = {p}");
}
