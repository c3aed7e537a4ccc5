//! Trial-parallel experiment drivers.
//!
//! Each driver runs `trials` independent repetitions of one simulation,
//! drawing trial `i` from the ChaCha stream `(seed, i)` and collecting
//! results in trial order, so output is reproducible bit-for-bit on any
//! worker count. Maxima and records are tracked through distances to the
//! observable center (`ψ` is strictly decreasing), which avoids a
//! transcendental call per orbit step.

use crate::dynamics::{DynamicsError, GenerationMode, MapSystem, OrbitSpec};
use crate::extremal::{self, ExtremalError};
use crate::maxima::PathError;
use crate::observables::{GevLimit, Observable, ObservableError, ObservableFamily};
use crate::pointproc::{Intensity1D, PlanarIntensity, PointProcessError, Rect};
use crate::records::RecordSummary;
use crate::seeding::{derive_seed, trial_rng};
use crate::skorokhod;
use crate::stats::{self, StatsError, TestVerdict};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    PointProcess(#[from] PointProcessError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// One stationary observable series (default generation mode for the map).
pub fn observable_series(
    map: MapSystem,
    obs: &Observable,
    n: usize,
    seed: u64,
    trial: u64,
) -> Result<Vec<f64>, DynamicsError> {
    let spec = OrbitSpec::new(n, 0, seed, GenerationMode::default_for(map));
    let mut rng = trial_rng(seed, trial);
    let orbit = map.sample_orbit(&spec, &mut rng)?;
    Ok(orbit.iter().map(|&x| obs.evaluate(x)).collect())
}

/// Per-trial rescaled maxima `a_n(M_n − b_n)`.
pub fn rescaled_max_samples(
    map: MapSystem,
    obs: &Observable,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<f64>, ExperimentError> {
    let (a_n, b_n) = obs.scaling(n as u64);
    let center = obs.center();
    let mode = GenerationMode::default_for(map);
    let samples: Result<Vec<f64>, DynamicsError> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let spec = OrbitSpec::new(n, 0, seed, mode);
            let mut rng = trial_rng(seed, trial);
            let orbit = map.sample_orbit(&spec, &mut rng)?;
            let min_d = orbit
                .iter()
                .map(|&x| (x - center).abs())
                .fold(f64::INFINITY, f64::min);
            Ok(a_n * (obs.value_at_distance(min_d) - b_n))
        })
        .collect();
    Ok(samples?)
}

/// Per-trial record summaries of the observable series.
pub fn record_summaries(
    map: MapSystem,
    obs: &Observable,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<RecordSummary>, ExperimentError> {
    let center = obs.center();
    let mode = GenerationMode::default_for(map);
    let out: Result<Vec<RecordSummary>, DynamicsError> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let spec = OrbitSpec::new(n, 0, seed, mode);
            let mut rng = trial_rng(seed, trial);
            let orbit = map.sample_orbit(&spec, &mut rng)?;
            Ok(records_of_series(obs, &orbit, center))
        })
        .collect();
    Ok(out?)
}

fn records_of_series(obs: &Observable, orbit: &[f64], center: f64) -> RecordSummary {
    let mut taus = vec![1usize];
    let mut min_d = (orbit[0] - center).abs();
    let mut values = vec![obs.value_at_distance(min_d)];
    for (i, &x) in orbit.iter().enumerate().skip(1) {
        let d = (x - center).abs();
        if d < min_d {
            min_d = d;
            taus.push(i + 1);
            values.push(obs.value_at_distance(d));
        }
    }
    RecordSummary::from_parts(taus, values, orbit.len())
}

/// Per-trial record summaries of iid uniform series (the baseline for
/// the almost-sure record growth laws).
pub fn iid_record_summaries(n: usize, trials: u64, seed: u64) -> Vec<RecordSummary> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            crate::records::record_times(&xs).expect("nonempty series")
        })
        .collect()
}

/// Per-trial counts of the planar empirical process `ξ_n` on rectangles,
/// computed in one pass over each orbit.
pub fn xi_rect_counts(
    map: MapSystem,
    obs: &Observable,
    n: usize,
    trials: u64,
    seed: u64,
    rects: &[Rect],
) -> Result<Vec<Vec<u64>>, ExperimentError> {
    let (a_n, b_n) = obs.scaling(n as u64);
    let center = obs.center();
    let mode = GenerationMode::default_for(map);
    // Rectangle membership in distance coordinates: value in (y_lo, y_hi]
    // means distance in [radius(v_hi), radius(v_lo)).
    let bounds: Vec<(usize, usize, f64, f64)> = rects
        .iter()
        .map(|r| {
            let i_lo = (n as f64 * r.t_lo).floor() as usize + 1;
            let i_hi = (n as f64 * r.t_hi).floor() as usize;
            let d_hi = obs.exceedance_radius(r.y_lo / a_n + b_n);
            let d_lo = if r.y_hi == f64::INFINITY {
                0.0
            } else {
                obs.exceedance_radius(r.y_hi / a_n + b_n)
            };
            (i_lo, i_hi.min(n), d_lo, d_hi)
        })
        .collect();
    let out: Result<Vec<Vec<u64>>, DynamicsError> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let spec = OrbitSpec::new(n, 0, seed, mode);
            let mut rng = trial_rng(seed, trial);
            let orbit = map.sample_orbit(&spec, &mut rng)?;
            let mut counts = vec![0u64; bounds.len()];
            for (i, &x) in orbit.iter().enumerate() {
                let idx = i + 1;
                let d = (x - center).abs();
                for (k, &(i_lo, i_hi, d_lo, d_hi)) in bounds.iter().enumerate() {
                    if idx >= i_lo && idx <= i_hi && d >= d_lo && d < d_hi {
                        counts[k] += 1;
                    }
                }
            }
            Ok(counts)
        })
        .collect();
    Ok(out?)
}

/// Marginal samples of a process at fixed times, one row per time.
#[derive(Debug, Clone)]
pub struct FddSamples {
    pub times: Vec<f64>,
    pub samples: Vec<Vec<f64>>,
}

/// Samples the extremal-`G` jump chain; returns path values at `times`
/// and jump counts on `jump_window`.
pub fn extremal_fdd_samples(
    g: &GevLimit,
    t_start: f64,
    times: &[f64],
    jump_window: (f64, f64),
    paths: u64,
    seed: u64,
) -> Result<(FddSamples, Vec<u64>), ExperimentError> {
    let t_end = times.iter().copied().fold(jump_window.1, f64::max);
    let rows: Result<Vec<(Vec<f64>, u64)>, ExtremalError> = (0..paths)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let p = extremal::sample_path(g, t_start, t_end, &mut rng)?;
            let vals = times.iter().map(|&t| p.value_at(t)).collect();
            let jumps = p.jump_count_in(jump_window.0, jump_window.1) as u64;
            Ok((vals, jumps))
        })
        .collect();
    let rows = rows?;
    let mut samples = vec![Vec::with_capacity(rows.len()); times.len()];
    let mut jump_counts = Vec::with_capacity(rows.len());
    for (vals, jumps) in rows {
        for (k, v) in vals.into_iter().enumerate() {
            samples[k].push(v);
        }
        jump_counts.push(jumps);
    }
    Ok((FddSamples { times: times.to_vec(), samples }, jump_counts))
}

/// Samples `H1` of a planar `Leb × λ_G` PRM — the independent route to
/// the extremal process. `floor_y` truncates the PRM from below; values
/// above the floor are exact, and the floor is chosen so that paths
/// essentially never sit below it at the queried times.
pub fn planar_h1_fdd_samples(
    g: &GevLimit,
    floor_y: f64,
    times: &[f64],
    paths: u64,
    seed: u64,
) -> Result<FddSamples, ExperimentError> {
    let t_max = times.iter().copied().fold(0.0, f64::max);
    let rect = Rect::new(0.0, t_max, floor_y, f64::INFINITY)?;
    let intensity = PlanarIntensity::new(*g);
    let rows: Result<Vec<Vec<f64>>, PointProcessError> = (0..paths)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let pattern = intensity.sample(&rect, &mut rng)?;
            let path = crate::pointproc::functional_h1(&pattern, (0.0, t_max));
            Ok(times.iter().map(|&t| path.value_at(t)).collect())
        })
        .collect();
    let rows = rows?;
    let mut samples = vec![Vec::with_capacity(rows.len()); times.len()];
    for vals in rows {
        for (k, v) in vals.into_iter().enumerate() {
            samples[k].push(v);
        }
    }
    Ok(FddSamples { times: times.to_vec(), samples })
}

/// The selftest report: a battery of seeded statistical checks covering
/// every subsystem, with one verdict per check.
#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub verdicts: Vec<TestVerdict>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

fn verdict(
    test: &str,
    statistic: f64,
    p_value: Option<f64>,
    n: u64,
    trials: u64,
    seed: u64,
    pass: bool,
) -> TestVerdict {
    TestVerdict { test: test.to_string(), statistic, p_value, n, trials, seed, pass }
}

/// Runs the full property battery. Deterministic given the seed and
/// independent of the worker count; roughly half a minute of work.
pub fn selftest(seed: u64) -> Result<SelftestReport, ExperimentError> {
    let mut verdicts = Vec::new();
    let neglog = Observable::new(ObservableFamily::NegLog, crate::observables::DEFAULT_CENTER)
        .expect("default observable");
    let gumbel2 = GevLimit::gumbel(2.0).expect("theta 2");

    // Rescaled maxima against the Gumbel limit, both dyadic maps.
    for (name, map) in [
        ("max-gumbel-ks-tent", MapSystem::Tent),
        ("max-gumbel-ks-doubling", MapSystem::Doubling),
    ] {
        let s = derive_seed(seed, name);
        let (n, trials) = (2000usize, 2000u64);
        let samples = rescaled_max_samples(map, &neglog, n, trials, s)?;
        let (d, p) = stats::ks_test(&samples, |x| gumbel2.cdf(x))?;
        verdicts.push(verdict(name, d, Some(p), n as u64, trials, s, d <= 0.05));
    }

    // Record times on the tent map.
    {
        let s = derive_seed(seed, "records");
        let (n, trials) = (10_000usize, 1500u64);
        let summaries = record_summaries(MapSystem::Tent, &neglog, n, trials, s)?;
        let mut void = 0u64;
        let mut time_counts = Vec::with_capacity(summaries.len());
        for summary in &summaries {
            let times = crate::records::record_time_pattern(summary, n);
            let c = times.count_in(0.25, 1.0) as u64;
            if c == 0 {
                void += 1;
            }
            time_counts.push(c);
        }
        let void_rate = void as f64 / trials as f64;
        verdicts.push(verdict(
            "record-time-void",
            void_rate,
            None,
            n as u64,
            trials,
            s,
            (void_rate - 0.25).abs() <= 0.04,
        ));
        let (chi2, p) = stats::poisson_count_test(&time_counts, 4.0f64.ln())?;
        verdicts.push(verdict(
            "record-time-poisson",
            chi2,
            Some(p),
            n as u64,
            trials,
            s,
            p > 0.01,
        ));
    }

    // Record values: the band (0, 1] above b_n keeps collecting records
    // well past time n, so the orbit horizon extends 12n.
    {
        let s = derive_seed(seed, "record-values");
        let (n, trials) = (5_000usize, 1200u64);
        let summaries = record_summaries(MapSystem::Tent, &neglog, 12 * n, trials, s)?;
        let (a_n, b_n) = neglog.scaling(n as u64);
        let value_counts: Vec<u64> = summaries
            .iter()
            .map(|summary| {
                crate::records::record_value_pattern(summary, a_n, b_n).count_in(0.0, 1.0) as u64
            })
            .collect();
        let (chi2, p) = stats::poisson_count_test(&value_counts, 1.0)?;
        verdicts.push(verdict(
            "record-value-poisson",
            chi2,
            Some(p),
            n as u64,
            trials,
            s,
            p > 0.01,
        ));
    }

    // Planar process: Poisson rectangle counts and disjoint independence.
    {
        let s = derive_seed(seed, "xi-n");
        let (n, trials) = (10_000usize, 1500u64);
        let rects = [
            Rect::new(0.0, 1.0, 1.0, f64::INFINITY).expect("rect"),
            Rect::new(0.0, 0.5, 1.0, f64::INFINITY).expect("rect"),
            Rect::new(0.5, 1.0, 1.0, f64::INFINITY).expect("rect"),
        ];
        let counts = xi_rect_counts(MapSystem::Tent, &neglog, n, trials, s, &rects)?;
        let full: Vec<u64> = counts.iter().map(|c| c[0]).collect();
        let (chi2, p) = stats::poisson_count_test(&full, 2.0 * (-1.0f64).exp())?;
        verdicts.push(verdict("xi-n-poisson", chi2, Some(p), n as u64, trials, s, p > 0.01));
        let left: Vec<f64> = counts.iter().map(|c| c[1] as f64).collect();
        let right: Vec<f64> = counts.iter().map(|c| c[2] as f64).collect();
        let r = stats::correlation(&left, &right);
        verdicts.push(verdict(
            "xi-n-independence",
            r,
            None,
            n as u64,
            trials,
            s,
            r.abs() <= 0.1,
        ));
    }

    // Block independence over two separated intervals.
    {
        let s = derive_seed(seed, "block-indep");
        let (n, trials) = (10_000usize, 1500u64);
        let report = stats::block_independence_test(
            MapSystem::Tent,
            &neglog,
            &[(0.0, 0.4), (0.5, 0.9)],
            &[1.0, 2.0],
            n,
            trials,
            s,
        )?;
        let gap = (report.empirical_joint - report.predicted_joint).abs();
        verdicts.push(verdict("block-independence", gap, None, n as u64, trials, s, gap <= 0.04));
    }

    // Extremal process marginal, jump counts, and the planar cross-check.
    {
        let s = derive_seed(seed, "extremal");
        let paths = 5000u64;
        let (fdd, jump_counts) =
            extremal_fdd_samples(&gumbel2, 0.05, &[0.5, 1.0, 2.0], (0.25, 2.0), paths, s)?;
        let (d, _) = stats::ks_test(&fdd.samples[1], |x| gumbel2.cdf(x))?;
        verdicts.push(verdict("extremal-marginal-ks", d, None, paths, paths, s, d <= 0.03));
        let (chi2, p) = stats::poisson_count_test(&jump_counts, 8.0f64.ln())?;
        verdicts.push(verdict("extremal-jump-poisson", chi2, Some(p), paths, paths, s, p > 0.01));

        let planar = planar_h1_fdd_samples(
            &gumbel2,
            -4.0,
            &[0.5, 1.0, 2.0],
            paths,
            derive_seed(seed, "extremal-planar"),
        )?;
        let mut min_p = f64::INFINITY;
        for k in 0..3 {
            let (_, p) = stats::ks_two_sample(&fdd.samples[k], &planar.samples[k])?;
            min_p = min_p.min(p);
        }
        verdicts.push(verdict(
            "extremal-vs-planar-ks",
            min_p,
            Some(min_p),
            paths,
            paths,
            s,
            min_p > 0.01,
        ));
    }

    // PRM thinning.
    {
        let s = derive_seed(seed, "thinning");
        let samples = 20_000u64;
        let intensity = Intensity1D::UniformRate(1.0);
        let counts: Result<Vec<u64>, PointProcessError> = (0..samples)
            .into_par_iter()
            .map(|trial| {
                let mut rng = trial_rng(s, trial);
                let pattern = intensity.sample((0.0, 10.0), &mut rng)?;
                Ok(pattern.thin(0.3, &mut rng)?.len() as u64)
            })
            .collect();
        let (chi2, p) = stats::poisson_count_test(&counts?, 3.0)?;
        verdicts.push(verdict("prm-thinning", chi2, Some(p), samples, samples, s, p > 0.01));
    }

    // Skorokhod distance sanity: hand values and metric axioms.
    {
        let s = derive_seed(seed, "skorokhod");
        let p1 = crate::maxima::CadlagStepPath::new((0.0, 1.0), 0.0, vec![(0.5, 1.0)])?;
        let q1 = crate::maxima::CadlagStepPath::new((0.0, 1.0), 0.0, vec![(0.6, 1.0)])?;
        let shift = skorokhod::d_ab(&p1, &q1, 0.0, 1.0).expect("windows cover");
        let mut worst = (shift - 0.1).abs();
        let mut rng = trial_rng(s, 0);
        for _ in 0..300 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let k = rng.random_range(0..5usize);
                let mut ts: Vec<f64> = (0..k).map(|_| rng.random_range(0.02..0.98)).collect();
                ts.sort_by(f64::total_cmp);
                ts.dedup();
                let jumps = ts.into_iter().map(|t| (t, rng.random_range(-1.0..1.0))).collect();
                crate::maxima::CadlagStepPath::new((0.0, 1.0), rng.random_range(-1.0..1.0), jumps)
                    .expect("valid path")
            };
            let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            let dab = skorokhod::d_ab(&a, &b, 0.0, 1.0).expect("cover");
            let dba = skorokhod::d_ab(&b, &a, 0.0, 1.0).expect("cover");
            let dac = skorokhod::d_ab(&a, &c, 0.0, 1.0).expect("cover");
            let dbc = skorokhod::d_ab(&b, &c, 0.0, 1.0).expect("cover");
            worst = worst.max((dab - dba).abs()).max((dac - dab - dbc).max(0.0));
        }
        verdicts.push(verdict("skorokhod-axioms", worst, None, 300, 300, s, worst <= 1e-9));
    }

    // iid record growth baseline.
    {
        let s = derive_seed(seed, "iid-records");
        let (n, trials) = (20_000usize, 500u64);
        let summaries = iid_record_summaries(n, trials, s);
        let mean =
            summaries.iter().map(|r| r.taus().len() as f64).sum::<f64>() / trials as f64;
        let harmonic: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();
        let gap = (mean - harmonic).abs();
        verdicts.push(verdict("iid-record-count", gap, None, n as u64, trials, s, gap <= 0.4));
    }

    // Pullback stationarity: uniform marginals at the start, middle and
    // end of the orbit.
    {
        let s = derive_seed(seed, "stationarity");
        let (n, trials) = (64usize, 10_000u64);
        for (name, map) in [
            ("stationarity-tent", MapSystem::Tent),
            ("stationarity-doubling", MapSystem::Doubling),
        ] {
            let orbits: Result<Vec<[f64; 3]>, DynamicsError> = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let spec = OrbitSpec::new(n, 0, s, GenerationMode::Pullback);
                    let mut rng = trial_rng(derive_seed(s, name), trial);
                    let orbit = map.sample_orbit(&spec, &mut rng)?;
                    Ok([orbit[0], orbit[n / 2 - 1], orbit[n - 1]])
                })
                .collect();
            let orbits = orbits?;
            let mut worst = 0.0f64;
            for pos in 0..3 {
                let slice: Vec<f64> = orbits.iter().map(|o| o[pos]).collect();
                worst = worst.max(stats::ks_statistic(&slice, |x| x.clamp(0.0, 1.0))?);
            }
            verdicts.push(verdict(name, worst, None, n as u64, trials, s, worst < 0.02));
        }
    }

    // Measure preservation: push an invariant sample through the map and
    // compare with an independent invariant sample.
    {
        let s = derive_seed(seed, "measure-preservation");
        for (name, map, draws) in [
            ("measure-tent", MapSystem::Tent, 10_000usize),
            ("measure-doubling", MapSystem::Doubling, 10_000),
            ("measure-logistic4", MapSystem::Logistic4, 10_000),
            ("measure-lsv", MapSystem::lsv(0.5).expect("alpha"), 5_000),
        ] {
            let mut rng_a = trial_rng(derive_seed(s, name), 0);
            let mut rng_b = trial_rng(derive_seed(s, name), 1);
            let pushed: Vec<f64> = (0..draws)
                .map(|_| {
                    let x = map.initial_sample(&mut rng_a);
                    map.step(x).expect("domain")
                })
                .collect();
            let fresh: Vec<f64> = (0..draws).map(|_| map.initial_sample(&mut rng_b)).collect();
            let (d, p) = stats::ks_two_sample(&pushed, &fresh)?;
            verdicts.push(verdict(name, d, Some(p), draws as u64, 2, s, p > 0.01));
        }
    }

    Ok(SelftestReport { seed, verdicts })
}
