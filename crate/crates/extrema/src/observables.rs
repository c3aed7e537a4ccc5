//! Distance observables and their extreme value limit laws.
//!
//! An [`Observable`] is a function `ψ(|x − x̃|)` of the distance between
//! the state and a chosen center `x̃`, maximised at the center. Three
//! families are supported, each paired with linear scaling constants
//! `(a_n, b_n)` and a limit law for the rescaled maximum `a_n(M_n − b_n)`:
//!
//! | family            | observable          | `(a_n, b_n)`    | limit   |
//! |-------------------|---------------------|-----------------|---------|
//! | `NegLog`          | `−log d`            | `(1, log n)`    | Gumbel  |
//! | `Pareto(α)`       | `d^{−α}`            | `(n^{−α}, 0)`   | Fréchet |
//! | `Bounded(C, α)`   | `C − d^{α}`         | `(n^{α}, C)`    | Weibull |
//!
//! The limit law is a [`GevLimit`]: a generalized extreme value CDF `G`
//! carrying the mass factor `θ = 2ρ(x̃)` (two-sided balls around an
//! interior center, `ρ` the invariant density there). The associated
//! exponent function `Q(y) = −log G(y)` drives everything downstream:
//! exceedance tails, Poisson intensities and the extremal process.

use thiserror::Error;

/// Default observable center, `1/√2`: irrational and non-periodic for all
/// the supported maps.
pub const DEFAULT_CENTER: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Error, PartialEq)]
pub enum ObservableError {
    #[error("observable exponent alpha must be positive and finite, got {alpha}")]
    BadAlpha { alpha: f64 },
    #[error("center {center} must lie strictly inside (0,1)")]
    CenterNotInterior { center: f64 },
    #[error("invariant density at the center must lie in (0,∞), got {rho}; the limit law degenerates")]
    DegenerateLimit { rho: f64 },
}

/// The three `ψ` families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObservableFamily {
    /// `−log d`: unbounded, slowly varying tail.
    NegLog,
    /// `d^{−α}`: unbounded, regularly varying tail.
    Pareto { alpha: f64 },
    /// `C − d^{α}`: bounded above by `C`.
    Bounded { cap: f64, alpha: f64 },
}

impl ObservableFamily {
    fn validate(&self) -> Result<(), ObservableError> {
        let alpha = match *self {
            ObservableFamily::NegLog => return Ok(()),
            ObservableFamily::Pareto { alpha } => alpha,
            ObservableFamily::Bounded { alpha, cap } => {
                if !cap.is_finite() {
                    return Err(ObservableError::BadAlpha { alpha: cap });
                }
                alpha
            }
        };
        if alpha > 0.0 && alpha.is_finite() {
            Ok(())
        } else {
            Err(ObservableError::BadAlpha { alpha })
        }
    }
}

/// An observable `φ(x) = ψ(|x − x̃|)` with center `x̃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable {
    family: ObservableFamily,
    center: f64,
}

impl Observable {
    /// Builds an observable, requiring `α > 0` and a center strictly
    /// interior to `(0,1)`.
    ///
    /// Interiority keeps the invariant density at the center finite and
    /// positive for the supported maps. It does not rule out periodic
    /// centers (where the short-range recurrence condition fails); callers
    /// that care should also consult
    /// [`MapSystem::is_low_period_center`](crate::dynamics::MapSystem::is_low_period_center).
    pub fn new(family: ObservableFamily, center: f64) -> Result<Self, ObservableError> {
        family.validate()?;
        if !(center > 0.0 && center < 1.0) {
            return Err(ObservableError::CenterNotInterior { center });
        }
        Ok(Observable { family, center })
    }

    /// Like [`Observable::new`] but skips the interior-center guard.
    ///
    /// Diagnostics (e.g. the short-range recurrence estimate at a fixed
    /// point of the map) deliberately place the center on periodic or
    /// boundary points; the limit theorems do not apply there.
    pub fn with_center_unchecked(family: ObservableFamily, center: f64) -> Self {
        Observable { family, center }
    }

    pub fn family(&self) -> ObservableFamily {
        self.family
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// Evaluates `ψ(|x − x̃|)`. Returns `+∞` at `x = x̃` for the unbounded
    /// families; that is a measure-zero event, not an error.
    pub fn evaluate(&self, x: f64) -> f64 {
        self.value_at_distance((x - self.center).abs())
    }

    /// `ψ(d)` itself. `ψ` is strictly decreasing, so maxima and records
    /// of an observable series can be tracked through distances alone;
    /// the experiment drivers rely on that.
    pub fn value_at_distance(&self, d: f64) -> f64 {
        match self.family {
            ObservableFamily::NegLog => -d.ln(),
            ObservableFamily::Pareto { alpha } => d.powf(-alpha),
            ObservableFamily::Bounded { cap, alpha } => cap - d.powf(alpha),
        }
    }

    /// Ball radius below which the observable exceeds `v`: the `d` with
    /// `ψ(d) = v`, the definitional inverse of `ψ`. Thresholds outside
    /// the observable's range clamp to `0` (nothing exceeds) or `+∞`
    /// (everything does).
    pub fn exceedance_radius(&self, v: f64) -> f64 {
        match self.family {
            ObservableFamily::NegLog => (-v).exp(),
            ObservableFamily::Pareto { alpha } => {
                if v <= 0.0 {
                    f64::INFINITY
                } else {
                    v.powf(-1.0 / alpha)
                }
            }
            ObservableFamily::Bounded { cap, alpha } => {
                if v >= cap {
                    0.0
                } else {
                    (cap - v).powf(1.0 / alpha)
                }
            }
        }
    }

    /// The scaling constants `(a_n, b_n)` for series length `n`.
    pub fn scaling(&self, n: u64) -> (f64, f64) {
        assert!(n >= 1, "scaling is defined for n >= 1");
        let nf = n as f64;
        match self.family {
            ObservableFamily::NegLog => (1.0, nf.ln()),
            ObservableFamily::Pareto { alpha } => (nf.powf(-alpha), 0.0),
            ObservableFamily::Bounded { cap, alpha } => (nf.powf(alpha), cap),
        }
    }

    /// The limit law of `a_n(M_n − b_n)` given the invariant density at
    /// the center. The mass factor is `θ = 2ρ(x̃)`.
    ///
    /// Shapes come from the tail calculus `n μ{X₁ > u/a_n + b_n} → Q(u)`
    /// with `μ(ball of radius r) ≈ 2ρ(x̃) r`: `Pareto(α)` gives
    /// `Q(u) = θ u^{−1/α}` and `Bounded(C, α)` gives `Q(u) = θ (−u)^{1/α}`,
    /// i.e. shape `1/α` in both cases.
    pub fn limit_law(&self, rho_at_center: f64) -> Result<GevLimit, ObservableError> {
        if !(rho_at_center > 0.0) || !rho_at_center.is_finite() {
            return Err(ObservableError::DegenerateLimit { rho: rho_at_center });
        }
        let theta = 2.0 * rho_at_center;
        let family = match self.family {
            ObservableFamily::NegLog => GevFamily::Gumbel,
            ObservableFamily::Pareto { alpha } => GevFamily::Frechet { shape: 1.0 / alpha },
            ObservableFamily::Bounded { cap, alpha } => GevFamily::Weibull {
                shape: 1.0 / alpha,
                endpoint: cap,
            },
        };
        Ok(GevLimit::new(family, theta).expect("validated parameters"))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GevError {
    #[error("mass factor theta must be positive and finite, got {theta}")]
    BadTheta { theta: f64 },
    #[error("shape must be positive and finite, got {shape}")]
    BadShape { shape: f64 },
    #[error("{y} is outside the interior of the law's domain")]
    OutsideDomain { y: f64 },
    #[error("probability {p} outside (0,1)")]
    BadProbability { p: f64 },
}

/// The three limit types. Shapes are strictly positive; the Weibull
/// variant remembers the original cap of the bounded observable (its
/// normalized domain is still `(−∞, 0)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GevFamily {
    Gumbel,
    Frechet { shape: f64 },
    Weibull { shape: f64, endpoint: f64 },
}

/// A generalized extreme value CDF `G` with mass factor `θ`:
///
/// * Gumbel: `G(u) = exp(−θ e^{−u})` on `(−∞, ∞)`,
/// * Fréchet(ξ): `G(u) = exp(−θ u^{−ξ})` on `(0, ∞)`,
/// * Weibull(ξ): `G(u) = exp(−θ (−u)^{ξ})` on `(−∞, 0)`.
///
/// `Q(y) = −log G(y)` is finite and positive on the interior of the
/// domain, and `Q` is a decreasing bijection onto `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GevLimit {
    family: GevFamily,
    theta: f64,
}

impl GevLimit {
    pub fn new(family: GevFamily, theta: f64) -> Result<Self, GevError> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(GevError::BadTheta { theta });
        }
        match family {
            GevFamily::Gumbel => {}
            GevFamily::Frechet { shape } | GevFamily::Weibull { shape, .. } => {
                if !(shape > 0.0) || !shape.is_finite() {
                    return Err(GevError::BadShape { shape });
                }
            }
        }
        Ok(GevLimit { family, theta })
    }

    pub fn gumbel(theta: f64) -> Result<Self, GevError> {
        Self::new(GevFamily::Gumbel, theta)
    }

    pub fn frechet(shape: f64, theta: f64) -> Result<Self, GevError> {
        Self::new(GevFamily::Frechet { shape }, theta)
    }

    /// Weibull limit with normalized endpoint 0.
    pub fn weibull(shape: f64, theta: f64) -> Result<Self, GevError> {
        Self::new(GevFamily::Weibull { shape, endpoint: 0.0 }, theta)
    }

    pub fn family(&self) -> GevFamily {
        self.family
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The open domain `E` on which `G` increases from 0 to 1.
    pub fn domain(&self) -> (f64, f64) {
        match self.family {
            GevFamily::Gumbel => (f64::NEG_INFINITY, f64::INFINITY),
            GevFamily::Frechet { .. } => (0.0, f64::INFINITY),
            GevFamily::Weibull { .. } => (f64::NEG_INFINITY, 0.0),
        }
    }

    /// `−log G(u)` extended to all of ℝ: `+∞` below the domain, `0` above.
    pub fn neg_log_cdf(&self, u: f64) -> f64 {
        match self.family {
            GevFamily::Gumbel => self.theta * (-u).exp(),
            GevFamily::Frechet { shape } => {
                if u <= 0.0 {
                    f64::INFINITY
                } else {
                    self.theta * u.powf(-shape)
                }
            }
            GevFamily::Weibull { shape, .. } => {
                if u >= 0.0 {
                    0.0
                } else {
                    self.theta * (-u).powf(shape)
                }
            }
        }
    }

    /// `G(u)`, defined on all of ℝ (0 below the domain, 1 above).
    pub fn cdf(&self, u: f64) -> f64 {
        (-self.neg_log_cdf(u)).exp()
    }

    /// `Q(y) = −log G(y)` for `y` interior to the domain.
    pub fn q(&self, y: f64) -> Result<f64, GevError> {
        let (lo, hi) = self.domain();
        if !(y > lo && y < hi) {
            return Err(GevError::OutsideDomain { y });
        }
        Ok(self.neg_log_cdf(y))
    }

    /// Inverse of `Q`: the `y` with `Q(y) = q`, for `q ∈ (0, ∞)`.
    /// Arguments outside that range map to the corresponding domain
    /// endpoint (`q = 0` to the top, `q = ∞` to the bottom).
    pub fn q_inverse(&self, q: f64) -> f64 {
        let (lo, hi) = self.domain();
        if q <= 0.0 {
            return hi;
        }
        if q == f64::INFINITY {
            return lo;
        }
        match self.family {
            GevFamily::Gumbel => (self.theta / q).ln(),
            GevFamily::Frechet { shape } => (self.theta / q).powf(1.0 / shape),
            GevFamily::Weibull { shape, .. } => -(q / self.theta).powf(1.0 / shape),
        }
    }

    /// Quantile function: the `u` with `G(u) = p`, `p ∈ (0,1)`.
    pub fn quantile(&self, p: f64) -> Result<f64, GevError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(GevError::BadProbability { p });
        }
        Ok(self.q_inverse(-p.ln()))
    }
}
