//! Running maxima and cadlag step paths.
//!
//! The rescaled maxima path of a series `X₁, …` is
//!
//! ```text
//! Yₙ(t) = aₙ(M_{⌊nt⌋} − bₙ)   for t ≥ 1/n,
//!         aₙ(X₁ − bₙ)          for 0 < t < 1/n,
//! ```
//!
//! a right-continuous step function whose jumps sit exactly at the record
//! indices `τ_k/n`. Paths are stored sparsely — a length-`n` series has
//! `O(log n)` expected records — as an initial value plus sorted
//! `(time, value)` jump pairs over a window.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PathError {
    #[error("series is empty")]
    EmptySeries,
    #[error("series too short: need {needed} values, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("window ({lo}, {hi}) is not a nonempty interval")]
    BadWindow { lo: f64, hi: f64 },
    #[error("jump time {time} is not finite, not increasing or outside the window")]
    BadJumpTime { time: f64 },
    #[error("path is not nondecreasing (value {value} after {previous})")]
    NonMonotone { previous: f64, value: f64 },
    #[error("path CSV malformed: {0}")]
    Csv(String),
}

/// A right-continuous step function on a window `(t_lo, t_hi]`.
///
/// The value is `initial_value` on `[t_lo, first jump)` and the value of
/// the most recent jump afterwards. Jump times are finite and strictly
/// increasing; values may be `±∞` (empty suprema carry a `−∞` marker).
#[derive(Debug, Clone, PartialEq)]
pub struct CadlagStepPath {
    t_lo: f64,
    t_hi: f64,
    initial_value: f64,
    jumps: Vec<(f64, f64)>,
}

impl CadlagStepPath {
    pub fn new(
        window: (f64, f64),
        initial_value: f64,
        jumps: Vec<(f64, f64)>,
    ) -> Result<Self, PathError> {
        let (lo, hi) = window;
        if !(lo < hi) || lo.is_nan() || hi.is_nan() {
            return Err(PathError::BadWindow { lo, hi });
        }
        if initial_value.is_nan() {
            return Err(PathError::NonMonotone { previous: f64::NAN, value: f64::NAN });
        }
        let mut prev = lo;
        for &(t, v) in &jumps {
            if !t.is_finite() || t <= prev || t <= lo || t > hi {
                return Err(PathError::BadJumpTime { time: t });
            }
            if v.is_nan() {
                return Err(PathError::BadJumpTime { time: t });
            }
            prev = t;
        }
        Ok(CadlagStepPath { t_lo: lo, t_hi: hi, initial_value, jumps })
    }

    /// A constant path.
    pub fn constant(window: (f64, f64), value: f64) -> Result<Self, PathError> {
        Self::new(window, value, Vec::new())
    }

    pub fn window(&self) -> (f64, f64) {
        (self.t_lo, self.t_hi)
    }

    pub fn initial_value(&self) -> f64 {
        self.initial_value
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    /// Right-continuous evaluation. Outside the window the path is
    /// clamped: `initial_value` before, the last value after.
    pub fn value_at(&self, t: f64) -> f64 {
        match self.jumps.binary_search_by(|&(jt, _)| jt.total_cmp(&t)) {
            Ok(i) => self.jumps[i].1,
            Err(0) => self.initial_value,
            Err(i) => self.jumps[i - 1].1,
        }
    }

    /// The value at the right end of the window.
    pub fn final_value(&self) -> f64 {
        self.jumps.last().map_or(self.initial_value, |&(_, v)| v)
    }

    /// Number of jump times in `(a, b]`.
    pub fn jump_count_in(&self, a: f64, b: f64) -> usize {
        self.jumps
            .iter()
            .filter(|&&(t, _)| t > a && t <= b)
            .count()
    }

    /// Whether the path never decreases (initial value included).
    pub fn is_nondecreasing(&self) -> bool {
        let mut prev = self.initial_value;
        for &(_, v) in &self.jumps {
            if v < prev {
                return false;
            }
            prev = v;
        }
        true
    }

    /// Restriction to `[s, t] ⊆ [t_lo, t_hi]`: initial value `self(s)`
    /// (right-continuous), jumps in `(s, t]`.
    pub fn restrict(&self, s: f64, t: f64) -> Result<Self, PathError> {
        if !(s < t) || s < self.t_lo || t > self.t_hi {
            return Err(PathError::BadWindow { lo: s, hi: t });
        }
        let jumps = self
            .jumps
            .iter()
            .copied()
            .filter(|&(jt, _)| jt > s && jt <= t)
            .collect();
        Self::new((s, t), self.value_at(s), jumps)
    }

    /// Serializes the path. Lines starting with `#` are comments; the
    /// first data line carries the window and initial value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# extrema-path v1\n# window_lo,window_hi,initial_value\n");
        out.push_str(&format!("{},{},{}\n", self.t_lo, self.t_hi, self.initial_value));
        out.push_str("time,value\n");
        for &(t, v) in &self.jumps {
            out.push_str(&format!("{t},{v}\n"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, PathError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| PathError::Csv("empty file".into()))?;
        let fields: Vec<&str> = header.split(',').collect();
        if fields.len() != 3 {
            return Err(PathError::Csv(format!(
                "expected `window_lo,window_hi,initial_value`, got `{header}`"
            )));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| PathError::Csv(format!("bad number `{s}`: {e}")))
        };
        let lo = parse(fields[0])?;
        let hi = parse(fields[1])?;
        let initial = parse(fields[2])?;
        match lines.next() {
            Some("time,value") => {}
            other => {
                return Err(PathError::Csv(format!(
                    "expected `time,value` column header, got {other:?}"
                )))
            }
        }
        let mut jumps = Vec::new();
        for line in lines {
            let (t, v) = line
                .split_once(',')
                .ok_or_else(|| PathError::Csv(format!("bad row `{line}`")))?;
            jumps.push((parse(t)?, parse(v)?));
        }
        Self::new((lo, hi), initial, jumps)
    }
}

/// Prefix maxima: `out[k] = max(xs[0..=k])`.
pub fn running_max(xs: &[f64]) -> Result<Vec<f64>, PathError> {
    if xs.is_empty() {
        return Err(PathError::EmptySeries);
    }
    let mut out = Vec::with_capacity(xs.len());
    let mut m = xs[0];
    for &x in xs {
        if x > m {
            m = x;
        }
        out.push(m);
    }
    Ok(out)
}

/// Builds the rescaled maxima path `Yₙ` over the window `(0, t_hi]`.
///
/// Requires `xs.len() ≥ ⌈n·t_hi⌉`. Jumps are placed at `j/n` for every
/// strict record index `j ≥ 2`; ties never jump.
pub fn build_path(
    xs: &[f64],
    a_n: f64,
    b_n: f64,
    n: usize,
    t_hi: f64,
) -> Result<CadlagStepPath, PathError> {
    if xs.is_empty() {
        return Err(PathError::EmptySeries);
    }
    assert!(n >= 1 && t_hi > 0.0 && t_hi.is_finite(), "need n >= 1 and finite t_hi > 0");
    let needed = (n as f64 * t_hi).ceil() as usize;
    if xs.len() < needed {
        return Err(PathError::SeriesTooShort { needed, got: xs.len() });
    }
    // Only indices with j/n <= t_hi can appear in the path.
    let usable = ((n as f64 * t_hi).floor() as usize).min(xs.len());
    let mut jumps = Vec::new();
    let mut m = xs[0];
    for (idx, &x) in xs.iter().enumerate().take(usable).skip(1) {
        if x > m {
            m = x;
            jumps.push(((idx + 1) as f64 / n as f64, a_n * (m - b_n)));
        }
    }
    CadlagStepPath::new((0.0, t_hi), a_n * (xs[0] - b_n), jumps)
}

/// Generalized inverse `Y←(u) = inf{x : Y(x) > u}` of a nondecreasing
/// step path, as a step path on the value domain `E`.
///
/// Levels at or below `E`'s lower edge fold into the initial value; the
/// level of the final plateau maps to the right end of `p`'s window (the
/// path is treated as rising beyond its window). On strictly increasing
/// step paths the construction is an involution up to right-continuity
/// normalization.
pub fn invert_path(p: &CadlagStepPath, domain: (f64, f64)) -> Result<CadlagStepPath, PathError> {
    let (lo, hi) = domain;
    if !(lo < hi) || lo.is_nan() || hi.is_nan() {
        return Err(PathError::BadWindow { lo, hi });
    }
    // Collapse the path to strictly increasing levels, rejecting decreases.
    let mut levels = vec![p.initial_value];
    let mut times = Vec::new();
    for &(t, v) in &p.jumps {
        let prev = *levels.last().unwrap();
        if v < prev {
            return Err(PathError::NonMonotone { previous: prev, value: v });
        }
        if v > prev {
            levels.push(v);
            times.push(t);
        }
    }
    // Level band [levels[i], levels[i+1]) maps to times[i]; the top band
    // [levels.last(), ∞) maps to the end of the window.
    times.push(p.t_hi);
    let mut initial = p.t_lo;
    let mut jumps = Vec::new();
    for (&level, &value) in levels.iter().zip(&times) {
        if level <= lo {
            initial = value;
        } else if level < hi {
            jumps.push((level, value));
        }
    }
    CadlagStepPath::new(domain, initial, jumps)
}
