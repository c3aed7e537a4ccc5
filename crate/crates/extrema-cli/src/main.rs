//! `extrema` — experiment front end for the simulation laboratory.
//!
//! Exit codes: 0 success, 2 configuration error, 3 an asserted
//! statistical check failed.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use commands::Outcome;
use config::{ConfigFile, Overrides, ResolvedConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "extrema", version, about = "Extremes, records and point processes of chaotic interval maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the orbit experiments; every value can also come from
/// `--config` (flags win).
#[derive(Args, Debug)]
struct ExperimentArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Map: tent, doubling, logistic4 or lsv
    #[arg(long)]
    map: Option<String>,
    /// LSV parameter (required for --map lsv)
    #[arg(long)]
    alpha: Option<f64>,
    /// Observable: neglog, pareto:ALPHA or bounded:CAP:ALPHA
    #[arg(long)]
    observable: Option<String>,
    /// Observable center (default 1/sqrt(2))
    #[arg(long)]
    center: Option<f64>,
    /// Series length per trial
    #[arg(long)]
    n: Option<u64>,
    /// Number of trials
    #[arg(long)]
    trials: Option<u64>,
    /// Base seed; trial i draws from stream (seed, i)
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: OUTPUT_DIR/<subcommand>-<timestamp>)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fail (exit 3) when a statistical check fails
    #[arg(long = "assert")]
    assert_stats: bool,
    /// Worker cap (EXTREMA_THREADS caps this further)
    #[arg(long)]
    threads: Option<usize>,
    /// Run even when the center is detected as low-period for the map
    #[arg(long)]
    allow_periodic_center: bool,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<ResolvedConfig, config::ConfigError> {
        let file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        ResolvedConfig::resolve(
            file,
            Overrides {
                map: self.map.clone(),
                alpha: self.alpha,
                observable: self.observable.clone(),
                center: self.center,
                n: self.n,
                trials: self.trials,
                seed: self.seed,
                output_dir: self.out.as_ref().map(|p| p.display().to_string()),
            },
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Rescaled maxima vs the limit law (KS test)
    SimulateMax(ExperimentArgs),
    /// Record time/value patterns, Poisson tests and growth diagnostics
    SimulateRecords(ExperimentArgs),
    /// Planar empirical process: rectangle counts and independence tests
    XiN(ExperimentArgs),
    /// Short-range recurrence diagnostic across block counts
    Dprime {
        #[command(flatten)]
        args: ExperimentArgs,
        /// Threshold level x (the threshold is u_n(x))
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        /// Block counts k (repeatable)
        #[arg(long = "k-block", default_values_t = [10u64, 100])]
        k_blocks: Vec<u64>,
    },
    /// Joint non-exceedance of block maxima over disjoint intervals
    BlockIndep(ExperimentArgs),
    /// Emit sample paths of the extremal limit process
    SampleExtremal {
        /// gumbel, frechet:SHAPE or weibull:SHAPE
        #[arg(long, default_value = "gumbel")]
        family: String,
        /// Mass factor theta = 2 rho(center)
        #[arg(long, default_value_t = 2.0)]
        theta: f64,
        #[arg(long, default_value_t = 0.05)]
        t_start: f64,
        #[arg(long, default_value_t = 2.0)]
        t_end: f64,
        #[arg(long, default_value_t = 10)]
        paths: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit Poisson random measure patterns
    SamplePrm {
        /// uniform:RATE, record-time, record-value or planar
        #[arg(long)]
        intensity: String,
        /// a,b for 1D intensities; a,b,c,d for planar
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// GEV family for record-value/planar intensities
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 10)]
        patterns: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distance between two path CSV files
    SkorokhodDist {
        path_a: PathBuf,
        path_b: PathBuf,
        /// Compact window a,b (default: intersection of the path windows)
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Use the whole-axis metric d_{0,inf} instead of d_{a,b}
        #[arg(long)]
        global: bool,
    },
    /// Run the full property battery
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "assert")]
        assert_stats: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn parse_floats(text: &str) -> Result<Vec<f64>, Box<dyn std::error::Error>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| -> Box<dyn std::error::Error> {
                    Box::new(config::ConfigError(format!("bad number `{s}` in `{text}`")))
                })
        })
        .collect()
}

/// Worker count: the flag (or all cores), capped by EXTREMA_THREADS.
fn init_threads(flag: Option<usize>) {
    let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut threads = flag.unwrap_or(avail).max(1);
    if let Ok(cap) = std::env::var("EXTREMA_THREADS") {
        if let Ok(cap) = cap.parse::<usize>() {
            threads = threads.min(cap.max(1));
        }
    }
    // Ignore the error if a pool already exists (tests call main twice).
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli);
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::AssertionFailed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            // Parameter-level failures exit 2; IO and the like exit 1.
            if e.is::<config::ConfigError>()
                || e.is::<extrema::dynamics::DynamicsError>()
                || e.is::<extrema::observables::ObservableError>()
                || e.is::<extrema::stats::StatsError>()
                || e.is::<extrema::experiments::ExperimentError>()
            {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run(cli: Cli) -> commands::CmdResult {
    match cli.command {
        Command::SimulateMax(args) => {
            init_threads(args.threads);
            let cfg = args.resolve()?;
            commands::simulate_max(
                &cfg,
                args.out.as_deref(),
                args.assert_stats,
                args.allow_periodic_center,
            )
        }
        Command::SimulateRecords(args) => {
            init_threads(args.threads);
            let cfg = args.resolve()?;
            commands::simulate_records(
                &cfg,
                args.out.as_deref(),
                args.assert_stats,
                args.allow_periodic_center,
            )
        }
        Command::XiN(args) => {
            init_threads(args.threads);
            let cfg = args.resolve()?;
            commands::xi_n(
                &cfg,
                args.out.as_deref(),
                args.assert_stats,
                args.allow_periodic_center,
            )
        }
        Command::Dprime { args, x, k_blocks } => {
            init_threads(args.threads);
            let cfg = args.resolve()?;
            commands::dprime(
                &cfg,
                args.out.as_deref(),
                x,
                &k_blocks,
                args.allow_periodic_center,
            )
        }
        Command::BlockIndep(args) => {
            init_threads(args.threads);
            let cfg = args.resolve()?;
            commands::block_indep(
                &cfg,
                args.out.as_deref(),
                args.assert_stats,
                args.allow_periodic_center,
            )
        }
        Command::SampleExtremal { family, theta, t_start, t_end, paths, seed, out } => {
            commands::sample_extremal(&family, theta, t_start, t_end, paths, seed, out.as_deref())
        }
        Command::SamplePrm { intensity, window, family, theta, patterns, seed, out } => {
            let window = parse_floats(&window)?;
            commands::sample_prm(
                &intensity,
                &window,
                family.as_deref(),
                theta,
                patterns,
                seed,
                out.as_deref(),
            )
        }
        Command::SkorokhodDist { path_a, path_b, window, global } => {
            let window = match window {
                Some(text) => {
                    let w = parse_floats(&text)?;
                    if w.len() != 2 {
                        return Err(Box::new(config::ConfigError(format!(
                            "--window expects `a,b`, got `{text}`"
                        ))));
                    }
                    Some((w[0], w[1]))
                }
                None => None,
            };
            commands::skorokhod_dist(&path_a, &path_b, window, global)
        }
        Command::Selftest { seed, out, assert_stats, threads } => {
            init_threads(threads);
            commands::selftest(seed, out.as_deref(), assert_stats)
        }
    }
}
