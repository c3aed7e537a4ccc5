//! Run directories, provenance headers and file writers.

use serde::Serialize;
use std::io;
use std::path::{Path, PathBuf};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance carried at the top of every output file: no wall-clock
/// fields, so identical runs produce identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub version: String,
    pub config_sha256: String,
    pub seed: u64,
}

impl Provenance {
    pub fn new(config_sha256: impl Into<String>, seed: u64) -> Self {
        Provenance {
            version: VERSION.to_string(),
            config_sha256: config_sha256.into(),
            seed,
        }
    }

    /// Comment header prepended to CSV files.
    pub fn csv_header(&self) -> String {
        format!(
            "# extrema v{}\n# config_sha256={}\n# seed={}\n",
            self.version, self.config_sha256, self.seed
        )
    }
}

/// Resolves the run directory: an explicit `--out` is used as-is, the
/// default is a timestamped subdirectory per invocation.
pub fn run_dir(
    explicit: Option<&Path>,
    output_dir: &str,
    subcommand: &str,
) -> io::Result<PathBuf> {
    let dir = match explicit {
        Some(d) => d.to_path_buf(),
        None => {
            let nanos = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_nanos())
                .unwrap_or(0);
            Path::new(output_dir).join(format!("{subcommand}-{nanos}"))
        }
    };
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// JSON output with the provenance object leading.
pub fn write_json<T: Serialize>(
    dir: &Path,
    name: &str,
    provenance: &Provenance,
    body: &T,
) -> io::Result<()> {
    #[derive(Serialize)]
    struct Document<'a, T> {
        provenance: &'a Provenance,
        #[serde(flatten)]
        body: &'a T,
    }
    let doc = Document { provenance, body };
    let text = serde_json::to_string_pretty(&doc).map_err(io::Error::other)?;
    std::fs::write(dir.join(name), text + "\n")
}

/// CSV output with the provenance comment lines leading.
pub fn write_csv(
    dir: &Path,
    name: &str,
    provenance: &Provenance,
    body: &str,
) -> io::Result<()> {
    std::fs::write(dir.join(name), provenance.csv_header() + body)
}
