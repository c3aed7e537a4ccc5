//! A simulation laboratory for extremes of chaotic interval maps.
//!
//! The crate generates stationary orbits of piecewise expanding interval
//! maps, builds the rescaled running-maximum paths and record point
//! patterns of those orbits, and provides exact samplers for the limit
//! objects they converge to: extremal processes and Poisson random
//! measures. A statistics layer turns the limit claims into seeded,
//! reproducible pass/fail diagnostics.
//!
//! The pieces fit together like this:
//!
//! * [`dynamics`] — the tent, doubling, quadratic and intermittent maps,
//!   exact-law orbit generation and invariant densities;
//! * [`observables`] — the three `ψ(dist(x, x̃))` observable families,
//!   their scaling constants and [`observables::GevLimit`] laws;
//! * [`maxima`] — running maxima, cadlag step paths and path inversion;
//! * [`records`] — record times/values and their point patterns;
//! * [`pointproc`] — Poisson random measure sampling, thinning, the planar
//!   empirical process and the `H1`/`H2`/`H3` functionals;
//! * [`extremal`] — the Markov jump-chain sampler for the extremal limit
//!   process and its finite-dimensional distributions;
//! * [`skorokhod`] — exact `J1` distances between step paths;
//! * [`stats`] — KS and chi-square machinery, the short-range recurrence
//!   diagnostic and the block-independence table;
//! * [`experiments`] — trial-parallel experiment drivers with
//!   reproducible per-trial random streams.
//!
//! Everything is deterministic given a seed: trials draw from independent
//! counter-based streams keyed by `(seed, trial index)` (see [`seeding`]),
//! so results do not depend on thread count or scheduling.

pub mod dynamics;
pub mod experiments;
pub mod extremal;
pub mod maxima;
pub mod observables;
pub mod pointproc;
pub mod records;
pub mod seeding;
pub mod skorokhod;
pub mod stats;

pub use dynamics::{GenerationMode, MapSystem, OrbitSpec};
pub use maxima::CadlagStepPath;
pub use observables::{GevFamily, GevLimit, Observable, ObservableFamily};
pub use pointproc::{PointPattern1D, PointPattern2D, Rect};
pub use records::RecordSummary;
