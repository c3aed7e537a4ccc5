//! Record times, record values and their point patterns.
//!
//! Index `j` is a record of the series when `X_j` strictly exceeds the
//! running maximum `M_{j−1}`; the first index is always a record. The
//! rescaled patterns
//!
//! ```text
//! R_n = Σ_k δ_{τ_k / n},      V_n = Σ_k δ_{a_n (X_{τ_k} − b_n)}
//! ```
//!
//! collect the record times and the normalized record values.

use crate::pointproc::PointPattern1D;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RecordsError {
    #[error("series is empty")]
    EmptySeries,
}

/// Record times `τ₁ = 1 < τ₂ < …` (1-based) and the values attained.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordSummary {
    taus: Vec<usize>,
    values: Vec<f64>,
    series_len: usize,
}

impl RecordSummary {
    /// Assembles a summary from parts already known to satisfy the record
    /// structure (used by drivers that track records through distances).
    pub(crate) fn from_parts(taus: Vec<usize>, values: Vec<f64>, series_len: usize) -> Self {
        debug_assert_eq!(taus.first(), Some(&1));
        debug_assert_eq!(taus.len(), values.len());
        RecordSummary { taus, values, series_len }
    }

    pub fn taus(&self) -> &[usize] {
        &self.taus
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn series_len(&self) -> usize {
        self.series_len
    }

    /// `W(n)`: number of records with `τ_k ≤ n`.
    pub fn count_up_to(&self, n: usize) -> usize {
        self.taus.partition_point(|&tau| tau <= n)
    }

    /// `W` at logarithmically spaced checkpoints `1, 2, 4, …` up to `n`,
    /// with `n` always included.
    pub fn count_checkpoints(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut c = 1usize;
        while c < n {
            out.push((c, self.count_up_to(c)));
            c = c.saturating_mul(2);
        }
        out.push((n, self.count_up_to(n)));
        out
    }
}

/// Extracts the strict records of a series.
pub fn record_times(xs: &[f64]) -> Result<RecordSummary, RecordsError> {
    if xs.is_empty() {
        return Err(RecordsError::EmptySeries);
    }
    let mut taus = vec![1usize];
    let mut values = vec![xs[0]];
    let mut m = xs[0];
    for (idx, &x) in xs.iter().enumerate().skip(1) {
        if x > m {
            m = x;
            taus.push(idx + 1);
            values.push(x);
        }
    }
    Ok(RecordSummary { taus, values, series_len: xs.len() })
}

/// The record-time pattern `{τ_k / n : τ_k ≤ n}` on `(0, 1]`.
///
/// The summary must come from a series of length at least `n`.
pub fn record_time_pattern(summary: &RecordSummary, n: usize) -> PointPattern1D {
    debug_assert!(summary.series_len >= n);
    let pts = summary
        .taus
        .iter()
        .take_while(|&&tau| tau <= n)
        .map(|&tau| tau as f64 / n as f64)
        .collect();
    PointPattern1D::new((0.0, 1.0), pts).expect("record times lie in (0,1]")
}

/// The normalized record-value pattern `{a_n (X_{τ_k} − b_n)}` over all
/// records of the summary, on the whole line.
///
/// The sum runs over every record, not only `τ_k ≤ n`: a value band above
/// `b_n` keeps collecting records until the running maximum clears it,
/// which typically happens several multiples of `n` later. Callers
/// chasing a band `(a, b]` should therefore summarize an orbit long
/// enough that the maximum has passed `b/a_n + b_n` with high
/// probability; with the band still open, counts are biased low.
pub fn record_value_pattern(summary: &RecordSummary, a_n: f64, b_n: f64) -> PointPattern1D {
    let pts = summary.values.iter().map(|&v| a_n * (v - b_n)).collect();
    PointPattern1D::new((f64::NEG_INFINITY, f64::INFINITY), pts)
        .expect("normalized record values are real")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::trial_rng;
    use rand::Rng;

    #[test]
    fn record_times_hand_values() {
        let s = record_times(&[0.5, 0.2, 0.7, 0.9, 0.1]).unwrap();
        assert_eq!(s.taus(), &[1, 3, 4]);
        assert_eq!(s.values(), &[0.5, 0.7, 0.9]);
        assert_eq!(s.count_up_to(3), 2);
        assert_eq!(s.count_up_to(5), 3);
    }

    #[test]
    fn strictly_increasing_series_is_all_records() {
        let s = record_times(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(s.taus(), &[1, 2, 3, 4, 5]);
    }

    #[test]
    fn ties_are_not_records() {
        let s = record_times(&[1.0, 1.0, 2.0, 2.0]).unwrap();
        assert_eq!(s.taus(), &[1, 3]);
    }

    #[test]
    fn empty_series_is_an_error() {
        assert_eq!(record_times(&[]), Err(RecordsError::EmptySeries));
    }

    #[test]
    fn time_pattern_hand_values() {
        let s = record_times(&[0.5, 0.2, 0.7, 0.9]).unwrap();
        let pat = record_time_pattern(&s, 4);
        assert_eq!(pat.points(), &[0.25, 0.75, 1.0]);
        assert_eq!(pat.count_in(0.8, 1.0), 1);
        assert_eq!(pat.count_in(0.76, 0.99), 0);
    }

    #[test]
    fn value_pattern_hand_values() {
        let s = record_times(&[2.0, 1.0, 5.0]).unwrap();
        let pat = record_value_pattern(&s, 1.0, 1.0);
        assert_eq!(pat.points(), &[1.0, 4.0]);
    }

    /// Records are invariant under strictly increasing transforms.
    #[test]
    fn monotone_transform_invariance() {
        let mut rng = trial_rng(3, 0);
        for _ in 0..50 {
            let xs: Vec<f64> = (0..200).map(|_| rng.random_range(-2.0..2.0)).collect();
            let exp_xs: Vec<f64> = xs.iter().map(|&x| x.exp()).collect();
            let affine: Vec<f64> = xs.iter().map(|&x| 2.0 * x + 1.0).collect();
            let base = record_times(&xs).unwrap();
            assert_eq!(base.taus(), record_times(&exp_xs).unwrap().taus());
            assert_eq!(base.taus(), record_times(&affine).unwrap().taus());
        }
    }

    /// Jump times of the maxima path coincide with the record-time
    /// pattern of the same series.
    #[test]
    fn jump_times_equal_record_time_points() {
        let mut rng = trial_rng(4, 0);
        for _ in 0..50 {
            let n = 300usize;
            let xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let path = crate::maxima::build_path(&xs, 1.0, 0.0, n, 1.0).unwrap();
            let summary = record_times(&xs).unwrap();
            let pattern = record_time_pattern(&summary, n);
            // The path does not jump at τ₁ = 1 (that value is held from
            // the start), so pattern = {1/n} ∪ jump times.
            let jump_times: Vec<f64> = path.jumps().iter().map(|&(t, _)| t).collect();
            assert_eq!(pattern.points()[0], 1.0 / n as f64);
            assert_eq!(&pattern.points()[1..], jump_times.as_slice());
        }
    }

    /// iid-uniform records: E[W(n)] is the harmonic sum Σ 1/j. A desk-
    /// scale version; the acceptance suite runs the full-size one.
    #[test]
    fn iid_mean_record_count_matches_harmonic_oracle() {
        let n = 20_000usize;
        let trials = 500u64;
        let mut total = 0usize;
        for trial in 0..trials {
            let mut rng = trial_rng(0xEC0, trial);
            let xs: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            total += record_times(&xs).unwrap().taus().len();
        }
        let mean = total as f64 / trials as f64;
        let harmonic: f64 = (1..=n).map(|j| 1.0 / j as f64).sum();
        // sd(W_n) ≈ 3, so 3σ of the mean over 500 trials is 0.4.
        assert!(
            (mean - harmonic).abs() < 0.4,
            "mean W_n = {mean}, harmonic sum = {harmonic}"
        );
    }

    #[test]
    fn checkpoints_are_log_spaced_and_end_at_n() {
        let s = record_times(&[1.0, 3.0, 2.0, 4.0, 0.5, 6.0, 1.0, 7.0]).unwrap();
        let cps = s.count_checkpoints(8);
        let ns: Vec<usize> = cps.iter().map(|&(n, _)| n).collect();
        assert_eq!(ns, vec![1, 2, 4, 8]);
        assert_eq!(cps.last().unwrap().1, s.taus().len());
    }
}
