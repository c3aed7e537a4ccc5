//! Interval maps, stationary orbit generation and invariant densities.
//!
//! Four model systems on `[0,1]`:
//!
//! * `Tent` — `f(x) = 1 − |1 − 2x|`, Lebesgue invariant;
//! * `Doubling` — `f(x) = 2x mod 1`, Lebesgue invariant;
//! * `Logistic4` — `f(x) = 4x(1−x)`, arcsine invariant density
//!   `1/(π√(x(1−x)))`;
//! * `Lsv(α)` — the intermittent map `x(1 + 2^α x^α)` on `[0, 1/2)`,
//!   `2x − 1` on `[1/2, 1]`, with `α ∈ (0,1)`; its invariant density is
//!   estimated numerically and flagged as such.
//!
//! Orbits can be generated forward (iterate from an invariant-measure
//! start) or by pullback. Forward iteration of the dyadic maps in binary
//! floating point shifts one mantissa bit out per step, so every tent or
//! doubling orbit collapses onto the fixed point 0 within about 53 steps.
//! Pullback generation walks backwards through uniformly chosen inverse
//! branches instead: both branches carry equal invariant mass under
//! Lebesgue, so the construction reproduces the exact stationary joint
//! law at any orbit length and never collapses. Pullback is therefore the
//! default for `Tent`/`Doubling`; `Logistic4`/`Lsv` iterate forward,
//! their arithmetic being non-dyadic.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// LSV density queries this close to the indifferent fixed point report
/// the divergence marker instead of a histogram value.
pub const LSV_DENSITY_CUTOFF: f64 = 1e-3;

/// Burn-in applied when drawing LSV states from a uniform start.
pub const LSV_BURN_IN: usize = 10_000;

const LSV_DENSITY_ORBIT_LEN: usize = 100_000_000;
const LSV_DENSITY_BINS: usize = 10_000;
const LSV_DENSITY_SEED: u64 = 0x15_5fd3;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("state {x} lies outside the unit interval")]
    DomainViolation { x: f64 },
    #[error("LSV parameter alpha must lie strictly inside (0,1), got {alpha}")]
    InvalidAlpha { alpha: f64 },
    #[error("pullback generation is only defined for the tent and doubling maps")]
    PullbackUnsupported,
    #[error("orbit length must be positive")]
    EmptyOrbit,
}

/// A measure-preserving interval map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapSystem {
    Tent,
    Doubling,
    Logistic4,
    Lsv(f64),
}

/// How an orbit is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenerationMode {
    /// Draw `x₀` from the invariant measure and iterate.
    Forward,
    /// Draw the final state uniformly and walk back through random
    /// inverse branches. Only valid for maps with constant-Jacobian full
    /// branches and Lebesgue invariant measure (tent, doubling).
    Pullback,
}

impl GenerationMode {
    /// The correctness default: pullback where it is exact, forward
    /// elsewhere.
    pub fn default_for(map: MapSystem) -> Self {
        if map.supports_pullback() {
            GenerationMode::Pullback
        } else {
            GenerationMode::Forward
        }
    }
}

/// Settings for one orbit draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSpec {
    pub length: usize,
    /// Extra forward iterations discarded before recording (forward mode
    /// only; pullback is already stationary).
    pub burn_in: usize,
    pub seed: u64,
    pub mode: GenerationMode,
}

impl OrbitSpec {
    pub fn new(length: usize, burn_in: usize, seed: u64, mode: GenerationMode) -> Self {
        OrbitSpec { length, burn_in, seed, mode }
    }

    /// The RNG stream for one trial under this spec's seed.
    pub fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        crate::seeding::trial_rng(self.seed, trial)
    }
}

impl MapSystem {
    /// Builds an LSV map, rejecting `α` outside the open interval `(0,1)`.
    pub fn lsv(alpha: f64) -> Result<Self, DynamicsError> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(MapSystem::Lsv(alpha))
        } else {
            Err(DynamicsError::InvalidAlpha { alpha })
        }
    }

    /// One application of the map.
    pub fn step(&self, x: f64) -> Result<f64, DynamicsError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(DynamicsError::DomainViolation { x });
        }
        Ok(match *self {
            MapSystem::Tent => {
                // 1 − |1 − 2x|, written branch-wise: 2(1−x) is exact for
                // x ∈ [1/2, 1], which makes the first pullback pair
                // forward-consistent to the bit (deeper pairs hold to an
                // ulp; a 53-bit state cannot retain its successor's last
                // bit through an inverse branch).
                if x <= 0.5 {
                    2.0 * x
                } else {
                    2.0 * (1.0 - x)
                }
            }
            MapSystem::Doubling => {
                if x == 1.0 {
                    0.0
                } else if x < 0.5 {
                    2.0 * x
                } else {
                    2.0 * x - 1.0
                }
            }
            MapSystem::Logistic4 => 4.0 * x * (1.0 - x),
            MapSystem::Lsv(alpha) => lsv_step(alpha, x),
        })
    }

    /// Whether pullback generation is available.
    pub fn supports_pullback(&self) -> bool {
        matches!(self, MapSystem::Tent | MapSystem::Doubling)
    }

    /// Whether `invariant_density` reports a numerical estimate rather
    /// than a closed form.
    pub fn density_is_estimated(&self) -> bool {
        matches!(self, MapSystem::Lsv(_))
    }

    /// The invariant density `ρ(x)`.
    ///
    /// Returns `+∞` at density singularities: the `Logistic4` endpoints,
    /// and LSV queries within [`LSV_DENSITY_CUTOFF`] of the indifferent
    /// fixed point (where the density diverges and the limit law would
    /// degenerate). The LSV value elsewhere is a histogram estimate from
    /// a long forward orbit.
    pub fn invariant_density(&self, x: f64) -> Result<f64, DynamicsError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(DynamicsError::DomainViolation { x });
        }
        Ok(match *self {
            MapSystem::Tent | MapSystem::Doubling => 1.0,
            MapSystem::Logistic4 => {
                if x == 0.0 || x == 1.0 {
                    f64::INFINITY
                } else {
                    1.0 / (std::f64::consts::PI * (x * (1.0 - x)).sqrt())
                }
            }
            MapSystem::Lsv(alpha) => {
                if x <= LSV_DENSITY_CUTOFF {
                    f64::INFINITY
                } else {
                    lsv_density(alpha, x)
                }
            }
        })
    }

    /// One draw from the invariant measure.
    ///
    /// Tent/doubling draw uniformly; `Logistic4` uses the exact arcsine
    /// sampler `sin²(πU/2)`; LSV starts uniformly and discards
    /// [`LSV_BURN_IN`] iterations.
    pub fn initial_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            MapSystem::Tent | MapSystem::Doubling => rng.random::<f64>(),
            MapSystem::Logistic4 => {
                let u: f64 = rng.random();
                let s = (std::f64::consts::FRAC_PI_2 * u).sin();
                s * s
            }
            MapSystem::Lsv(alpha) => {
                let mut x: f64 = rng.random();
                for _ in 0..LSV_BURN_IN {
                    x = lsv_step(alpha, x);
                }
                x
            }
        }
    }

    /// Draws a stationary orbit of `spec.length` states.
    pub fn sample_orbit<R: Rng + ?Sized>(
        &self,
        spec: &OrbitSpec,
        rng: &mut R,
    ) -> Result<Vec<f64>, DynamicsError> {
        if spec.length == 0 {
            return Err(DynamicsError::EmptyOrbit);
        }
        match spec.mode {
            GenerationMode::Forward => {
                let mut x = self.initial_sample(rng);
                for _ in 0..spec.burn_in {
                    x = self.step(x)?;
                }
                let mut orbit = Vec::with_capacity(spec.length);
                orbit.push(x);
                for _ in 1..spec.length {
                    x = self.step(x)?;
                    orbit.push(x);
                }
                Ok(orbit)
            }
            GenerationMode::Pullback => {
                if !self.supports_pullback() {
                    return Err(DynamicsError::PullbackUnsupported);
                }
                let mut orbit = vec![0.0; spec.length];
                orbit[spec.length - 1] = uniform52(rng);
                for i in (0..spec.length - 1).rev() {
                    let right: bool = rng.random();
                    orbit[i] = self.inverse_branch(orbit[i + 1], right);
                }
                Ok(orbit)
            }
        }
    }

    fn inverse_branch(&self, y: f64, right: bool) -> f64 {
        match *self {
            MapSystem::Tent => {
                if right {
                    1.0 - y / 2.0
                } else {
                    y / 2.0
                }
            }
            MapSystem::Doubling => {
                if right {
                    (y + 1.0) / 2.0
                } else {
                    y / 2.0
                }
            }
            _ => unreachable!("pullback is gated on supports_pullback"),
        }
    }

    /// Heuristic periodicity guard for observable centers: true when some
    /// iterate `f^k(center)`, `1 ≤ k ≤ max_period`, returns within `tol`
    /// of the center. The short-range recurrence condition fails at
    /// periodic centers, so experiment front ends reject them by default.
    pub fn is_low_period_center(&self, center: f64, max_period: usize, tol: f64) -> bool {
        let mut x = center;
        for _ in 0..max_period {
            x = match self.step(x) {
                Ok(v) => v,
                Err(_) => return false,
            };
            if (x - center).abs() < tol {
                return true;
            }
        }
        false
    }
}

fn lsv_step(alpha: f64, x: f64) -> f64 {
    if x < 0.5 {
        x * (1.0 + 2.0f64.powf(alpha) * x.powf(alpha))
    } else {
        2.0 * x - 1.0
    }
}

/// Uniform on the grid `k·2⁻⁵²`. A 52-bit mantissa leaves one spare bit,
/// which makes both inverse branches of the dyadic maps exact at the
/// first pullback step.
fn uniform52<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 12) as f64 * (1.0 / 4_503_599_627_370_496.0)
}

fn lsv_density(alpha: f64, x: f64) -> f64 {
    let hist = lsv_histogram(alpha);
    let idx = ((x * LSV_DENSITY_BINS as f64) as usize).min(LSV_DENSITY_BINS - 1);
    hist[idx]
}

fn lsv_histogram(alpha: f64) -> Arc<Vec<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(h) = cache.lock().unwrap().get(&alpha.to_bits()) {
        return h.clone();
    }
    let built = Arc::new(build_lsv_histogram(alpha));
    let mut guard = cache.lock().unwrap();
    guard.entry(alpha.to_bits()).or_insert(built).clone()
}

fn build_lsv_histogram(alpha: f64) -> Vec<f64> {
    let mut rng = crate::seeding::trial_rng(LSV_DENSITY_SEED, 0);
    let mut x: f64 = rng.random();
    for _ in 0..LSV_BURN_IN {
        x = lsv_step(alpha, x);
    }
    let mut counts = vec![0u64; LSV_DENSITY_BINS];
    for _ in 0..LSV_DENSITY_ORBIT_LEN {
        let idx = ((x * LSV_DENSITY_BINS as f64) as usize).min(LSV_DENSITY_BINS - 1);
        counts[idx] += 1;
        x = lsv_step(alpha, x);
    }
    let scale = LSV_DENSITY_BINS as f64 / LSV_DENSITY_ORBIT_LEN as f64;
    counts.into_iter().map(|c| c as f64 * scale).collect()
}
