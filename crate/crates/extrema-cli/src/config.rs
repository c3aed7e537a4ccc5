//! Experiment configuration: JSON file, flag overrides, resolution and
//! the provenance hash.

use extrema::dynamics::MapSystem;
use extrema::observables::{Observable, ObservableFamily, DEFAULT_CENTER};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

/// A configuration error; reported on exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// The JSON document. Every field is optional here; requiredness is
/// enforced after flag overrides are applied. The `provenance` and
/// `ignored_fields` entries exist so that an echoed `config.json` can be
/// fed straight back in; unknown fields still error by name.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub map: Option<String>,
    pub alpha: Option<f64>,
    pub observable: Option<String>,
    pub center: Option<f64>,
    pub n: Option<u64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub windows: Option<Vec<(f64, f64)>>,
    pub thresholds: Option<Vec<f64>>,
    pub output_dir: Option<String>,
    #[serde(default, skip_serializing)]
    pub provenance: Option<serde_json::Value>,
    #[serde(default, skip_serializing)]
    pub ignored_fields: Option<Vec<String>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("malformed config {}: {e}", path.display())))
    }
}

/// Flag-level overrides (a subset of the file fields).
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub map: Option<String>,
    pub alpha: Option<f64>,
    pub observable: Option<String>,
    pub center: Option<f64>,
    pub n: Option<u64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub output_dir: Option<String>,
}

/// The fully resolved configuration echoed into every output.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub map: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub observable: String,
    pub center: f64,
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    pub windows: Vec<(f64, f64)>,
    pub thresholds: Vec<f64>,
    pub output_dir: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ignored_fields: Vec<String>,
}

impl ResolvedConfig {
    /// Merges defaults, file values and flag overrides (flags win),
    /// checking requiredness and consistency.
    pub fn resolve(file: ConfigFile, flags: Overrides) -> Result<Self, ConfigError> {
        let map_name = flags
            .map
            .or(file.map)
            .ok_or_else(|| ConfigError("missing required field `map`".into()))?
            .to_lowercase();
        let observable = flags
            .observable
            .or(file.observable)
            .ok_or_else(|| ConfigError("missing required field `observable`".into()))?
            .to_lowercase();
        let n = flags
            .n
            .or(file.n)
            .ok_or_else(|| ConfigError("missing required field `n`".into()))?;
        let trials = flags
            .trials
            .or(file.trials)
            .ok_or_else(|| ConfigError("missing required field `trials`".into()))?;
        let seed = flags
            .seed
            .or(file.seed)
            .ok_or_else(|| ConfigError("missing required field `seed`".into()))?;
        if n == 0 {
            return err("`n` must be positive");
        }
        if trials == 0 {
            return err("`trials` must be positive");
        }
        let alpha = flags.alpha.or(file.alpha);
        let mut ignored = Vec::new();
        let needs_alpha = map_name == "lsv";
        if !needs_alpha && alpha.is_some() {
            ignored.push(format!(
                "alpha (map `{map_name}` has no parameter; value {} ignored)",
                alpha.unwrap()
            ));
        }
        let resolved = ResolvedConfig {
            map: map_name,
            alpha: if needs_alpha { alpha } else { None },
            observable,
            center: flags.center.or(file.center).unwrap_or(DEFAULT_CENTER),
            n,
            trials,
            seed,
            windows: file.windows.unwrap_or_else(|| vec![(0.25, 1.0)]),
            thresholds: file.thresholds.unwrap_or_else(|| vec![1.0]),
            output_dir: flags
                .output_dir
                .or(file.output_dir)
                .unwrap_or_else(|| "runs".into()),
            ignored_fields: ignored,
        };
        // Validate eagerly so bad values exit 2 before any work starts.
        resolved.map_system()?;
        resolved.observable_spec()?;
        Ok(resolved)
    }

    pub fn map_system(&self) -> Result<MapSystem, ConfigError> {
        match self.map.as_str() {
            "tent" => Ok(MapSystem::Tent),
            "doubling" => Ok(MapSystem::Doubling),
            "logistic4" => Ok(MapSystem::Logistic4),
            "lsv" => {
                let alpha = self
                    .alpha
                    .ok_or_else(|| ConfigError("map `lsv` requires `alpha`".into()))?;
                MapSystem::lsv(alpha).map_err(|e| ConfigError(e.to_string()))
            }
            other => err(format!(
                "unknown map `{other}` (expected tent, doubling, logistic4 or lsv)"
            )),
        }
    }

    pub fn observable_spec(&self) -> Result<Observable, ConfigError> {
        let family = parse_observable_family(&self.observable)?;
        Observable::new(family, self.center).map_err(|e| ConfigError(e.to_string()))
    }

    /// SHA-256 over the statistical content. The output directory is
    /// excluded so that a run replayed from its echoed config (into a
    /// different directory) reproduces identical result files.
    pub fn sha256(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!(
            "map={};alpha={:?};observable={};center={};n={};trials={};seed={};windows={:?};thresholds={:?}",
            self.map,
            self.alpha,
            self.observable,
            self.center,
            self.n,
            self.trials,
            self.seed,
            self.windows,
            self.thresholds,
        ));
        let digest = hasher.finalize();
        let mut out = String::with_capacity(64);
        for b in digest {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }
}

/// Observable syntax: `neglog`, `pareto:ALPHA`, `bounded:CAP:ALPHA`.
pub fn parse_observable_family(text: &str) -> Result<ObservableFamily, ConfigError> {
    let parts: Vec<&str> = text.split(':').collect();
    let parse_f64 = |s: &str, what: &str| {
        s.parse::<f64>()
            .map_err(|_| ConfigError(format!("bad {what} `{s}` in observable `{text}`")))
    };
    match parts.as_slice() {
        ["neglog"] => Ok(ObservableFamily::NegLog),
        ["pareto", alpha] => Ok(ObservableFamily::Pareto { alpha: parse_f64(alpha, "alpha")? }),
        ["bounded", cap, alpha] => Ok(ObservableFamily::Bounded {
            cap: parse_f64(cap, "cap")?,
            alpha: parse_f64(alpha, "alpha")?,
        }),
        _ => err(format!(
            "unknown observable `{text}` (expected neglog, pareto:ALPHA or bounded:CAP:ALPHA)"
        )),
    }
}

/// GEV syntax for the sampler subcommands: `gumbel`, `frechet:SHAPE`,
/// `weibull:SHAPE`.
pub fn parse_gev(
    family: &str,
    theta: f64,
) -> Result<extrema::observables::GevLimit, ConfigError> {
    use extrema::observables::GevLimit;
    let parts: Vec<&str> = family.split(':').collect();
    let mk = |r: Result<GevLimit, extrema::observables::GevError>| {
        r.map_err(|e| ConfigError(e.to_string()))
    };
    match parts.as_slice() {
        ["gumbel"] => mk(GevLimit::gumbel(theta)),
        ["frechet", shape] => {
            let s = shape
                .parse::<f64>()
                .map_err(|_| ConfigError(format!("bad shape `{shape}`")))?;
            mk(GevLimit::frechet(s, theta))
        }
        ["weibull", shape] => {
            let s = shape
                .parse::<f64>()
                .map_err(|_| ConfigError(format!("bad shape `{shape}`")))?;
            mk(GevLimit::weibull(s, theta))
        }
        _ => err(format!(
            "unknown GEV family `{family}` (expected gumbel, frechet:SHAPE or weibull:SHAPE)"
        )),
    }
}
