//! Command-line front end.
//!
//! Settings come from flags, then from an optional `key=value` config file
//! (`--config`), then from defaults. File keys are the long flag names
//! without the dashes (`n-max` and `n_max` are both accepted).

mod config;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::constants::Constants;
use crate::free_motion::{free_params, node_trajectory, wave_value};
use crate::nodes::{beat_period, find_nodes, superposition_grid, track_superposition_nodes, DEFAULT_TOLERANCE};
use crate::output::{self, fmt_f64};
use crate::series::build_series;
use crate::state::{derive_state, AtomSpec};
use crate::verify::run_verification;
use crate::wronskian::{sample_wave, BoundWave, RadialGrid};

pub use config::parse_config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Parameters of the bound state (Z, n).
    State,
    /// Free plane wave and its node trajectories.
    Free,
    /// Sampled bound wave u₋, u₊ and R = u₋/r.
    Wave,
    /// Zero loci of R and their classification.
    Nodes,
    /// Node tracks of a superposition of stationary waves.
    Superpose,
    /// Run the verification suite.
    Verify,
    /// Figure data for n = 1, 2, 3.
    Figures,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::State => "state",
            Command::Free => "free",
            Command::Wave => "wave",
            Command::Nodes => "nodes",
            Command::Superpose => "superpose",
            Command::Verify => "verify",
            Command::Figures => "figures",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Nuclear charge Z.
    #[arg(long, global = true)]
    pub z: Option<u32>,
    /// Principal quantum number n.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Highest n checked by `verify`.
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<u32>,
    /// Outer radius of the grid, in units of r_o [default: 3.0].
    #[arg(long = "r-max", global = true)]
    pub r_max: Option<f64>,
    /// Number of radial samples [default: 1000].
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Exclusion half-width around singular points, in units of r_o [default: 1e-3].
    #[arg(long, global = true)]
    pub exclusion: Option<f64>,
    /// Output format [default: json].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (a directory for `figures`); stdout if omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Scale R so that max|R| = 1 [default: on for figures, off otherwise].
    #[arg(long, global = true, value_enum)]
    pub normalize: Option<Toggle>,
    /// key=value file with defaults for any of these flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Particle velocity for `free`.
    #[arg(long, global = true)]
    pub v: Option<f64>,
    /// Particle mass for `free`.
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    /// Time for `free`.
    #[arg(long, global = true)]
    pub t: Option<f64>,
    /// Comma-separated levels for `superpose` [default: 1,2].
    #[arg(long, global = true)]
    pub levels: Option<String>,
    /// Comma-separated weights for `superpose` [default: all 1].
    #[arg(long, global = true)]
    pub weights: Option<String>,
    /// Number of time samples for `superpose` [default: 64].
    #[arg(long = "time-steps", global = true)]
    pub time_steps: Option<usize>,
    /// Time span for `superpose` [default: one beat period].
    #[arg(long = "t-max", global = true)]
    pub t_max: Option<f64>,
}

#[derive(Debug, Parser)]
#[command(name = "vwave", version, about = "Trajectory waves of the hydrogen-like atom")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub atom: AtomSpec,
    pub n_max: u32,
    pub r_max: f64,
    pub samples: usize,
    pub exclusion: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub normalize: bool,
    pub v: f64,
    pub mass: f64,
    pub t: f64,
    pub levels: Vec<u32>,
    pub weights: Vec<f64>,
    pub time_steps: usize,
    pub t_max: Option<f64>,
}

/// Problems with the requested settings (reported with usage, exit 2).
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn from_file<T: std::str::FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, UsageError> {
    match file.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| usage(format!("config key '{key}': cannot parse '{raw}'"))),
    }
}

fn enum_from_file<T: ValueEnum>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, UsageError> {
    match file.get(key) {
        None => Ok(None),
        Some(raw) => T::from_str(raw, true)
            .map(Some)
            .map_err(|_| usage(format!("config key '{key}': invalid value '{raw}'"))),
    }
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, UsageError> {
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| usage(format!("invalid {what} entry '{}'", s.trim())))
        })
        .collect()
}

impl RunConfig {
    /// Merges flags over the config file over defaults and checks invariants.
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self, UsageError> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
                parse_config(&text).map_err(usage)?
            }
            None => BTreeMap::new(),
        };
        let z = flags.z.or(from_file(&file, "z")?).unwrap_or(1);
        let n = flags.n.or(from_file(&file, "n")?).unwrap_or(1);
        let atom = AtomSpec::new(z, n).map_err(|e| usage(e.to_string()))?;
        let n_max = flags.n_max.or(from_file(&file, "n-max")?).unwrap_or(3);
        if n_max == 0 {
            return Err(usage("--n-max must be at least 1"));
        }
        let r_max = flags.r_max.or(from_file(&file, "r-max")?).unwrap_or(3.0);
        let samples = flags.samples.or(from_file(&file, "samples")?).unwrap_or(1000);
        let exclusion = flags.exclusion.or(from_file(&file, "exclusion")?).unwrap_or(1e-3);
        let format = flags
            .format
            .or(enum_from_file(&file, "format")?)
            .unwrap_or(Format::Json);
        let out = flags.out.clone().or(from_file(&file, "out")?);
        let normalize = match flags.normalize.or(enum_from_file(&file, "normalize")?) {
            Some(t) => t == Toggle::On,
            None => command == Command::Figures,
        };
        let v = flags.v.or(from_file(&file, "v")?).unwrap_or(1.0);
        let mass = flags.mass.or(from_file(&file, "mass")?).unwrap_or(1.0);
        let t = flags.t.or(from_file(&file, "t")?).unwrap_or(0.0);
        let levels_raw = flags
            .levels
            .clone()
            .or(from_file(&file, "levels")?)
            .unwrap_or_else(|| "1,2".into());
        let levels: Vec<u32> = parse_list(&levels_raw, "level")?;
        let weights: Vec<f64> = match flags.weights.clone().or(from_file(&file, "weights")?) {
            Some(raw) => parse_list(&raw, "weight")?,
            None => vec![1.0; levels.len()],
        };
        let time_steps = flags.time_steps.or(from_file(&file, "time-steps")?).unwrap_or(64);
        let t_max = flags.t_max.or(from_file(&file, "t-max")?);

        let sampled = matches!(
            command,
            Command::Wave | Command::Nodes | Command::Figures | Command::Superpose
        );
        if sampled && samples < 200 {
            return Err(usage(format!("--samples must be at least 200, got {samples}")));
        }
        if !(r_max >= 1.5) || !r_max.is_finite() {
            return Err(usage(format!("--r-max must be at least 1.5, got {r_max}")));
        }
        if !(exclusion > 0.0 && exclusion < 0.1) {
            return Err(usage(format!("--exclusion must lie in (0, 0.1), got {exclusion}")));
        }
        if command == Command::Superpose {
            if levels.is_empty() || levels.contains(&0) {
                return Err(usage("--levels must list quantum numbers >= 1"));
            }
            if weights.len() != levels.len() {
                return Err(usage(format!("{} levels but {} weights", levels.len(), weights.len())));
            }
            if time_steps < 2 {
                return Err(usage("--time-steps must be at least 2"));
            }
            if let Some(tm) = t_max {
                if !(tm > 0.0) {
                    return Err(usage("--t-max must be positive"));
                }
            }
        }
        Ok(RunConfig {
            command,
            atom,
            n_max,
            r_max,
            samples,
            exclusion,
            format,
            out,
            normalize,
            v,
            mass,
            t,
            levels,
            weights,
            time_steps,
            t_max,
        })
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn sampled_wave(cfg: &RunConfig, atom: AtomSpec) -> anyhow::Result<BoundWave> {
    let sol = build_series(atom, Constants::ATOMIC);
    let grid = RadialGrid::for_state(&sol, cfg.r_max, cfg.samples, cfg.exclusion)?;
    Ok(sample_wave(&sol, &grid)?)
}

fn render(
    cfg: &RunConfig,
    json_value: Value,
    csv_text: impl FnOnce() -> csv::Result<String>,
) -> anyhow::Result<String> {
    Ok(match cfg.format {
        Format::Json => output::to_json(&json_value)?,
        Format::Csv => csv_text()?,
    })
}

/// Executes one run and returns the process exit code.
pub fn run(cfg: &RunConfig) -> anyhow::Result<i32> {
    let c = Constants::ATOMIC;
    let out = cfg.out.as_deref();
    match cfg.command {
        Command::State => {
            let state = derive_state(cfg.atom, c);
            let text = render(cfg, output::state_json(cfg.atom, &state), || {
                output::state_csv(cfg.atom, &state)
            })?;
            emit(out, &text)?;
        }
        Command::Free => {
            let p = free_params(cfg.v, cfg.mass, c)?;
            let nodes: Vec<Value> = (0..=5)
                .map(|b| json!({ "branch": b, "x": node_trajectory(&p, b, cfg.t) }))
                .collect();
            let mut doc = serde_json::to_value(p)?;
            doc["t"] = json!(cfg.t);
            doc["nodes"] = json!(nodes);
            let samples = cfg.samples.max(2);
            let text = render(cfg, doc, || {
                let span = 2.0 * p.lambda;
                let rows: Vec<Vec<String>> = (0..samples)
                    .map(|i| {
                        let x = span * i as f64 / (samples - 1) as f64;
                        vec![fmt_f64(x), fmt_f64(wave_value(x, cfg.t, &p))]
                    })
                    .collect();
                output::write_csv(&["x", "V"], &rows)
            })?;
            emit(out, &text)?;
        }
        Command::Wave => {
            let wave = sampled_wave(cfg, cfg.atom)?;
            let text = render(cfg, output::wave_json(&wave, cfg.normalize), || {
                output::wave_csv(&wave, cfg.normalize)
            })?;
            emit(out, &text)?;
        }
        Command::Nodes => {
            let wave = sampled_wave(cfg, cfg.atom)?;
            let report = find_nodes(&wave, DEFAULT_TOLERANCE)?;
            let text = render(cfg, output::nodes_json(cfg.atom, &report), || {
                output::nodes_csv(&report)
            })?;
            emit(out, &text)?;
        }
        Command::Superpose => {
            let z = cfg.atom.z;
            let states = cfg
                .levels
                .iter()
                .map(|&n| Ok(build_series(AtomSpec::new(z, n)?, c)))
                .collect::<crate::error::Result<Vec<_>>>()?;
            let span = match cfg.t_max {
                Some(t) => t,
                None => beat_period(z, &cfg.levels, c)?,
            };
            let times: Vec<f64> = (0..cfg.time_steps)
                .map(|i| span * i as f64 / (cfg.time_steps - 1) as f64)
                .collect();
            let grid = superposition_grid(&states, cfg.r_max, cfg.samples, cfg.exclusion)?;
            let result = track_superposition_nodes(&states, &cfg.weights, &times, &grid, DEFAULT_TOLERANCE)?;
            let text = render(cfg, output::tracks_json(z, &cfg.levels, &cfg.weights, &result), || {
                output::tracks_csv(&result)
            })?;
            emit(out, &text)?;
        }
        Command::Verify => {
            let report = run_verification(cfg.atom.z, cfg.n_max, cfg.samples, cfg.exclusion)?;
            let text = render(cfg, serde_json::to_value(&report)?, || {
                let rows: Vec<Vec<String>> = report
                    .checks
                    .iter()
                    .map(|c| {
                        vec![
                            c.name.clone(),
                            fmt_f64(c.value),
                            fmt_f64(c.threshold),
                            c.passed.to_string(),
                        ]
                    })
                    .collect();
                output::write_csv(&["name", "value", "threshold", "passed"], &rows)
            })?;
            emit(out, &text)?;
            if !report.passed {
                return Ok(1);
            }
        }
        Command::Figures => {
            let dir = out.unwrap_or(Path::new("."));
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for n in 1..=3 {
                let wave = sampled_wave(cfg, AtomSpec::new(cfg.atom.z, n)?)?;
                let path = dir.join(format!("figure_n{n}.csv"));
                fs::write(&path, output::figure_csv(&wave, cfg.normalize)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    Ok(0)
}

/// Parses `args`, runs, and returns the exit code (2 for bad flags).
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::resolve(cli.command, &cli.flags) {
        Ok(cfg) => cfg,
        Err(e) => {
            let mut cmd = Cli::command();
            eprintln!("error: {e}\n");
            eprintln!("{}", cmd.render_usage());
            return 2;
        }
    };
    match run(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("vwave {}: {e:#}", cfg.command.name());
            1
        }
    }
}
