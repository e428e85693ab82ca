//! Command line and config file parsing into a validated [`RunConfig`].

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use freezelab_core::thermo::MAX_TOEPLITZ_N;
use freezelab_core::zetaline::{MAX_HEIGHT, MIN_INTERVAL_START};

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Extremes,
    Freeze,
    Moments,
    FhRatio,
    Table1,
    ZetaFreeze,
    Covariance,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Extremes => "extremes",
            Experiment::Freeze => "freeze",
            Experiment::Moments => "moments",
            Experiment::FhRatio => "fh-ratio",
            Experiment::Table1 => "table1",
            Experiment::ZetaFreeze => "zeta-freeze",
            Experiment::Covariance => "covariance",
        }
    }

    fn on_zeta(self) -> bool {
        matches!(self, Experiment::Table1 | Experiment::ZetaFreeze | Experiment::Covariance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Cue,
    Fourier,
    Zeta,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Cue => "cue",
            Model::Fourier => "fourier",
            Model::Zeta => "zeta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "freezelab",
    version,
    about = "Extreme values and freezing of CUE polynomials, log-correlated fields and zeta",
    after_help = "Flags override values read from --config. Output goes to stdout unless --out is given."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recentred maxima against the limit law (histogram and KS distance)
    Extremes(RunArgs),
    /// Scaled free energy -f(beta) of a sampled ensemble
    Freeze(RunArgs),
    /// Moments <Z^k> against the exact and asymptotic values
    Moments(RunArgs),
    /// Toeplitz moment over its Fisher-Hartwig asymptotic
    FhRatio(RunArgs),
    /// Mean maximum of |zeta| per 2 pi interval against the model means
    Table1(RunArgs),
    /// Scaled free energy of |zeta|^{2 beta} over consecutive intervals
    ZetaFreeze(RunArgs),
    /// Covariance of -2 log |zeta| along the critical line
    Covariance(RunArgs),
}

impl Command {
    pub fn split(&self) -> (Experiment, &RunArgs) {
        match self {
            Command::Extremes(a) => (Experiment::Extremes, a),
            Command::Freeze(a) => (Experiment::Freeze, a),
            Command::Moments(a) => (Experiment::Moments, a),
            Command::FhRatio(a) => (Experiment::FhRatio, a),
            Command::Table1(a) => (Experiment::Table1, a),
            Command::ZetaFreeze(a) => (Experiment::ZetaFreeze, a),
            Command::Covariance(a) => (Experiment::Covariance, a),
        }
    }
}

/// Options shared by every subcommand. Unset options fall back to the
/// config file, then to the per-experiment defaults.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunArgs {
    /// TOML file with any of these options (kebab-case keys)
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Experiment named in a config file; must match the subcommand
    #[arg(skip)]
    pub experiment: Option<Experiment>,
    /// Output file, written atomically [default: stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Root seed of every random stream [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; output does not depend on it [default: all cores]
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// cue | fourier for the ensembles, zeta for the critical line
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Matrix size or number of modes [default: 1024; 32 for moments]
    #[arg(long)]
    pub n: Option<usize>,
    /// Landscapes, or intervals on the critical line
    #[arg(long)]
    pub samples: Option<usize>,
    /// Comma-separated, strictly increasing inverse temperatures
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
    /// Grid points per unit of n [default: 16]
    #[arg(long)]
    pub grid_factor: Option<usize>,
    /// Moment order (moments) [default: 1]
    #[arg(long)]
    pub k: Option<u32>,
    /// Log-log constant used for recentring (extremes) [default: 1.5]
    #[arg(long)]
    pub c: Option<f64>,
    /// Comma-separated matrix sizes (fh-ratio) [default: 32,64,128,256]
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Centre height on the critical line [default: 3.6e7]
    #[arg(long)]
    pub t_center: Option<f64>,
    /// Length of the covariance window (covariance) [default: 1e4]
    #[arg(long)]
    pub window: Option<f64>,
    /// Comma-separated separations (covariance)
    #[arg(long, value_delimiter = ',')]
    pub separations: Option<Vec<f64>>,
}

impl RunArgs {
    /// Fills every unset option from `file`.
    fn or(self, file: RunArgs) -> RunArgs {
        RunArgs {
            config: self.config,
            experiment: self.experiment.or(file.experiment),
            out: self.out.or(file.out),
            seed: self.seed.or(file.seed),
            workers: self.workers.or(file.workers),
            format: self.format.or(file.format),
            model: self.model.or(file.model),
            n: self.n.or(file.n),
            samples: self.samples.or(file.samples),
            betas: self.betas.or(file.betas),
            grid_factor: self.grid_factor.or(file.grid_factor),
            k: self.k.or(file.k),
            c: self.c.or(file.c),
            sizes: self.sizes.or(file.sizes),
            t_center: self.t_center.or(file.t_center),
            window: self.window.or(file.window),
            separations: self.separations.or(file.separations),
        }
    }
}

/// A fully validated run. Fields that do not apply to the experiment keep
/// their defaults and are not echoed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub model: Model,
    pub n: usize,
    pub samples: usize,
    pub betas: Vec<f64>,
    pub grid_factor: usize,
    pub seed: u64,
    pub workers: usize,
    pub out_path: Option<PathBuf>,
    pub format: Format,
    pub k: u32,
    pub c: f64,
    pub sizes: Vec<usize>,
    pub t_center: f64,
    pub window: f64,
    pub separations: Vec<f64>,
}

pub const DEFAULT_T_CENTER: f64 = 3.6e7;
pub const DEFAULT_WINDOW: f64 = 1e4;
const DEFAULT_SEPARATIONS: [f64; 8] = [0.025, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0];

fn freeze_betas() -> Vec<f64> {
    (1..=8).map(|i| 0.25 * i as f64).collect()
}

/// Reads a TOML config file.
pub fn read_config_file(path: &Path) -> Result<RunArgs, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| HarnessError::Usage(vec![format!("{}: {e}", path.display())]))
}

/// Parses `argv` (program name first) into a validated config.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, HarnessError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(HarnessError::from_clap)?;
    let (experiment, args) = cli.command.split();
    let args = match &args.config {
        Some(path) => args.clone().or(read_config_file(path)?),
        None => args.clone(),
    };
    resolve(experiment, args)
}

struct Problems(Vec<String>);

impl Problems {
    fn check(&mut self, ok: bool, msg: impl fmt::Display) {
        if !ok {
            self.0.push(msg.to_string());
        }
    }

    fn not_applicable<T>(&mut self, value: &Option<T>, name: &str, experiment: Experiment) {
        if value.is_some() {
            self.0.push(format!("--{name} does not apply to {}", experiment.as_str()));
        }
    }
}

/// Applies defaults and validates every field, reporting all problems at once.
pub fn resolve(experiment: Experiment, args: RunArgs) -> Result<RunConfig, HarnessError> {
    use Experiment::*;
    let mut p = Problems(Vec::new());

    if let Some(named) = args.experiment {
        p.check(
            named == experiment,
            format!("config file names experiment {} but the subcommand is {}", named.as_str(), experiment.as_str()),
        );
    }

    let default_model = if experiment.on_zeta() { Model::Zeta } else { Model::Cue };
    let model = args.model.unwrap_or(default_model);
    match experiment {
        FhRatio => p.check(model == Model::Cue, "fh-ratio needs --model cue"),
        e if e.on_zeta() => p.check(model == Model::Zeta, format!("{} needs --model zeta", e.as_str())),
        e => p.check(model != Model::Zeta, format!("{} needs --model cue or fourier", e.as_str())),
    }

    if experiment.on_zeta() || experiment == FhRatio {
        p.not_applicable(&args.n, "n", experiment);
        p.not_applicable(&args.grid_factor, "grid-factor", experiment);
    }
    if experiment != Moments {
        p.not_applicable(&args.k, "k", experiment);
    }
    if experiment != Extremes {
        p.not_applicable(&args.c, "c", experiment);
    }
    if experiment != FhRatio {
        p.not_applicable(&args.sizes, "sizes", experiment);
    } else {
        p.not_applicable(&args.samples, "samples", experiment);
    }
    if !experiment.on_zeta() {
        p.not_applicable(&args.t_center, "t-center", experiment);
    }
    if experiment != Covariance {
        p.not_applicable(&args.window, "window", experiment);
        p.not_applicable(&args.separations, "separations", experiment);
    } else {
        p.not_applicable(&args.samples, "samples", experiment);
        p.not_applicable(&args.betas, "betas", experiment);
    }
    if experiment == Extremes || experiment == Table1 {
        p.not_applicable(&args.betas, "betas", experiment);
    }

    let n = args.n.unwrap_or(if experiment == Moments { 32 } else { 1024 });
    let min_n = if experiment == Extremes { 3 } else { 1 };
    p.check(n >= min_n, format!("--n must be at least {min_n}, got {n}"));

    let samples = args.samples.unwrap_or(match experiment {
        Moments => 100_000,
        ZetaFreeze => 10_000,
        _ => 20_000,
    });
    let min_samples = match experiment {
        Extremes => 10,
        Moments => 2,
        _ => 1,
    };
    p.check(
        samples >= min_samples,
        format!("--samples must be at least {min_samples}, got {samples}"),
    );

    let betas = args.betas.unwrap_or_else(|| match experiment {
        Moments => vec![0.4],
        FhRatio => vec![0.6],
        _ => freeze_betas(),
    });
    p.check(!betas.is_empty(), "--betas is empty");
    p.check(
        betas.iter().all(|b| b.is_finite() && *b > 0.0),
        "--betas must be positive and finite",
    );
    p.check(
        betas.windows(2).all(|w| w[1] > w[0]),
        "--betas must be strictly increasing",
    );

    let grid_factor = args.grid_factor.unwrap_or(16);
    p.check(grid_factor >= 4, format!("--grid-factor must be at least 4, got {grid_factor}"));

    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |w| w.get()));
    p.check(workers >= 1, "--workers must be at least 1");

    let k = args.k.unwrap_or(1);
    p.check(k >= 1, "--k must be at least 1");

    let c = args.c.unwrap_or(1.5);
    p.check(c.is_finite(), "--c must be finite");

    let sizes = args.sizes.unwrap_or_else(|| vec![32, 64, 128, 256]);
    p.check(!sizes.is_empty(), "--sizes is empty");
    p.check(
        sizes.iter().all(|&s| (1..=MAX_TOEPLITZ_N).contains(&s)),
        format!("--sizes must lie in 1..={MAX_TOEPLITZ_N}"),
    );

    let t_center = args.t_center.unwrap_or(DEFAULT_T_CENTER);
    let window = args.window.unwrap_or(DEFAULT_WINDOW);
    let separations = args.separations.unwrap_or_else(|| DEFAULT_SEPARATIONS.to_vec());
    if experiment.on_zeta() {
        let half_span = if experiment == Covariance {
            0.5 * window
        } else {
            std::f64::consts::PI * samples as f64
        };
        p.check(
            t_center.is_finite() && t_center - half_span >= MIN_INTERVAL_START && t_center + half_span <= MAX_HEIGHT,
            format!(
                "heights {:e}..{:e} leave the supported range {MIN_INTERVAL_START}..{MAX_HEIGHT:e}",
                t_center - half_span,
                t_center + half_span
            ),
        );
    }
    if experiment == Covariance {
        p.check(
            window > 0.0 && window < 0.01 * t_center,
            format!("--window must be positive and below t-center / 100, got {window}"),
        );
        p.check(!separations.is_empty(), "--separations is empty");
        p.check(
            separations.iter().all(|x| x.is_finite() && *x > 0.0),
            "--separations must be positive",
        );
    }

    if !p.0.is_empty() {
        return Err(HarnessError::Usage(p.0));
    }
    Ok(RunConfig {
        experiment,
        model,
        n,
        samples,
        betas,
        grid_factor,
        seed: args.seed.unwrap_or(0),
        workers,
        out_path: args.out,
        format: args.format.unwrap_or(Format::Csv),
        k,
        c,
        sizes,
        t_center,
        window,
        separations,
    })
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// The settings the output depends on, in a fixed order. Worker count
    /// and output path are left out so that they cannot change the bytes.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        use Experiment::*;
        let e = self.experiment;
        let mut out = vec![("experiment", e.as_str().to_owned()), ("model", self.model.as_str().to_owned())];
        if !e.on_zeta() && e != FhRatio {
            out.push(("n", self.n.to_string()));
            out.push(("grid_factor", self.grid_factor.to_string()));
        }
        if e != FhRatio && e != Covariance {
            out.push(("samples", self.samples.to_string()));
        }
        if !matches!(e, Extremes | Table1 | Covariance) {
            out.push(("betas", join(&self.betas)));
        }
        match e {
            Extremes => out.push(("c", self.c.to_string())),
            Moments => out.push(("k", self.k.to_string())),
            FhRatio => out.push(("sizes", join(&self.sizes))),
            Covariance => {
                out.push(("window", self.window.to_string()));
                out.push(("separations", join(&self.separations)));
            }
            _ => {}
        }
        if e.on_zeta() {
            out.push(("t_center", self.t_center.to_string()));
        }
        out.push(("seed", self.seed.to_string()));
        out.push(("format", self.format.as_str().to_owned()));
        out
    }
}
