//! `uplink`: batch front end for the UAV uplink models.
//!
//! Exit codes: 0 success, 1 failed validation or diff beyond tolerance, 2 bad config or
//! arguments, 3 numerical failure, 4 I/O failure. Errors are also reported as one JSON
//! object on stderr.

mod experiment;
mod grid;
mod manifest;

use clap::{Args, Parser, Subcommand};
use experiment::{check_spec, ExperimentSpec, Kind, SweepVariable};
use grid::Grid;
use manifest::{diff_runs, DiffOptions, Manifest, SCHEMA_VERSION};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;
use uplink_core::config::file::{load_scenario, parse_with_overrides};
use uplink_core::config::ScenarioFile;
use uplink_core::{Environment, Error, ScenarioConfig, Scheme};

/// Directory searched for scenario files given by bare name, and for `baseline.toml`
/// when no `--config` is passed.
const SCENARIO_DIR_VAR: &str = "UPLINK_SCENARIO_DIR";

#[derive(Parser)]
#[command(name = "uplink", version, about = "UAV uplink coverage, delay and energy experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario TOML file (path, or name inside $UPLINK_SCENARIO_DIR).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    trials: Option<u64>,
    /// Restrict to one scheme (default: both).
    #[arg(long)]
    scheme: Option<Scheme>,
    /// Replace the scenario's environment.
    #[arg(long)]
    env: Option<Environment>,
    /// Set a scenario key, e.g. `geometry.altitude_m=100`. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic success probability against the SINR threshold.
    SuccessSweep {
        #[command(flatten)]
        common: Common,
        /// Threshold grid in dB, `start:stop:step`.
        #[arg(long, default_value = "-20:65:1", allow_hyphen_values = true)]
        theta_db: Grid,
    },
    /// Meta distribution: share of devices whose success probability exceeds X.
    Meta {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "10", allow_hyphen_values = true)]
        theta_db: Grid,
        /// Reliability levels X.
        #[arg(long, default_value = "0.05:0.95:0.05")]
        levels: Grid,
    },
    /// Outage capacity in bits/s/Hz against the threshold.
    CapacitySweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "-20:65:1", allow_hyphen_values = true)]
        theta_db: Grid,
    },
    /// Queue length and delay against packet size.
    DelayTable {
        #[command(flatten)]
        common: Common,
        /// Packet sizes in bits.
        #[arg(long, default_value = "1e6:11e6:1e6")]
        packets: Grid,
    },
    /// Propulsion power, slot energy and energy efficiency over speed or bandwidth.
    EnergySweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "speed")]
        sweep: SweepVariable,
        /// Grid of the swept variable (default 0:80:1 m/s or 1e5:1e6:1e5 Hz).
        #[arg(long)]
        grid: Option<Grid>,
        /// Threshold for the capacity term, dB.
        #[arg(long, default_value = "20", allow_hyphen_values = true)]
        theta_db: Grid,
        /// Add the acceleration energy of the trapezoidal speed profile.
        #[arg(long)]
        surcharge: bool,
    },
    /// Greedy trajectory segment lengths, analytic and simulated.
    Trajectory {
        #[command(flatten)]
        common: Common,
        /// Cell radii in m.
        #[arg(long, default_value = "100:200:50")]
        radius: Grid,
        /// Mean device counts.
        #[arg(long, default_value = "25:150:25")]
        devices: Grid,
    },
    /// Monte Carlo success probability on the exact hexagonal network.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0:40:10", allow_hyphen_values = true)]
        theta_db: Grid,
        /// Rings of interfering cells around the reference cell.
        #[arg(long, default_value_t = uplink_core::sim::DEFAULT_RINGS)]
        rings: usize,
    },
    /// Run the acceptance checks and write a pass/fail table.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Comma-separated criterion numbers (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
        /// Smaller sample sizes for a fast smoke run.
        #[arg(long)]
        quick: bool,
    },
    /// Compare the CSV outputs of two runs.
    Diff {
        /// First manifest (or its directory).
        a: PathBuf,
        /// Second manifest (or its directory).
        b: PathBuf,
        /// Largest allowed absolute difference in a numeric column.
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
        /// Compare `value` within this multiple of the larger confidence half-width.
        #[arg(long)]
        ci_multiple: Option<f64>,
        /// Columns left out of the comparison. Repeatable.
        #[arg(long)]
        skip: Vec<String>,
    },
    /// Rerun the experiment recorded in a manifest.
    Replay {
        manifest: PathBuf,
        #[arg(long, default_value = "replay")]
        out: PathBuf,
    },
}

fn spec_from(kind: Kind, c: &Common) -> ExperimentSpec {
    let mut s = ExperimentSpec::new(kind);
    s.scenario_path = c.config.clone();
    s.overrides = c.overrides.clone();
    if let Some(env) = c.env {
        s.overrides.push(format!("environment={env}"));
    }
    s.scheme = c.scheme;
    s.seed = c.seed;
    s.trials = c.trials;
    s
}

fn resolve_config_path(p: &Path) -> PathBuf {
    if p.exists() || p.components().count() > 1 {
        return p.to_path_buf();
    }
    match std::env::var_os(SCENARIO_DIR_VAR) {
        Some(dir) => {
            let cand = Path::new(&dir).join(p);
            if cand.exists() {
                cand
            } else {
                Path::new(&dir).join(p).with_extension("toml")
            }
        }
        None => p.to_path_buf(),
    }
}

fn load(spec: &ExperimentSpec) -> uplink_core::Result<ScenarioConfig> {
    match &spec.scenario_path {
        Some(p) => load_scenario(&resolve_config_path(p), &spec.overrides),
        None => {
            if let Some(dir) = std::env::var_os(SCENARIO_DIR_VAR) {
                let base = Path::new(&dir).join("baseline.toml");
                if base.exists() {
                    return load_scenario(&base, &spec.overrides);
                }
            }
            parse_with_overrides("", &spec.overrides)
        }
    }
}

/// Run, write CSVs and the manifest. Returns whether validation checks all passed.
fn execute(spec: &ExperimentSpec, cfg: &ScenarioConfig, out: &Path) -> uplink_core::Result<bool> {
    check_spec(spec)?;
    std::fs::create_dir_all(out)?;
    let start = Instant::now();
    let outcome = experiment::run(spec, cfg, out)?;
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        tool: env!("CARGO_PKG_NAME").to_owned(),
        tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        kind: spec.kind,
        seed: spec.seed,
        spec: spec.clone(),
        scenario: ScenarioFile::from_config(cfg),
        outputs: outcome.outputs,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    manifest.write(out)?;
    for o in &manifest.outputs {
        println!("{}", out.join(&o.file).display());
    }
    Ok(outcome.all_passed)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => 4,
        e if e.is_numerical() => 3,
        _ => 2,
    }
}

fn kind_name(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid-input",
        Error::Config(_) => "config",
        Error::Quadrature { .. } => "quadrature",
        Error::SeriesNonConvergence { .. } => "series",
        Error::Singular(_) => "singular",
        Error::Verification(_) => "verification",
        Error::Unstable { .. } => "unstable",
        Error::Schema(_) => "schema",
        Error::Io(_) => "io",
    }
}

fn main_inner(cli: Cli) -> uplink_core::Result<bool> {
    let (spec, out) = match cli.command {
        Command::SuccessSweep { common, theta_db } => {
            let mut s = spec_from(Kind::SuccessSweep, &common);
            s.theta_db = Some(theta_db);
            (s, common.out)
        }
        Command::CapacitySweep { common, theta_db } => {
            let mut s = spec_from(Kind::CapacitySweep, &common);
            s.theta_db = Some(theta_db);
            (s, common.out)
        }
        Command::Meta { common, theta_db, levels } => {
            let mut s = spec_from(Kind::Meta, &common);
            s.theta_db = Some(theta_db);
            s.levels = Some(levels);
            (s, common.out)
        }
        Command::DelayTable { common, packets } => {
            let mut s = spec_from(Kind::DelayTable, &common);
            s.packets = Some(packets);
            (s, common.out)
        }
        Command::EnergySweep { common, sweep, grid, theta_db, surcharge } => {
            let mut s = spec_from(Kind::EnergySweep, &common);
            s.sweep = Some(sweep);
            s.grid = grid;
            s.theta_db = Some(theta_db);
            s.surcharge = surcharge;
            (s, common.out)
        }
        Command::Trajectory { common, radius, devices } => {
            let mut s = spec_from(Kind::Trajectory, &common);
            s.radius = Some(radius);
            s.devices = Some(devices);
            (s, common.out)
        }
        Command::Simulate { common, theta_db, rings } => {
            let mut s = spec_from(Kind::Simulate, &common);
            s.theta_db = Some(theta_db);
            s.rings = Some(rings);
            (s, common.out)
        }
        Command::Validate { common, criteria, quick } => {
            let mut s = spec_from(Kind::Validate, &common);
            s.criteria = criteria;
            s.quick = quick;
            (s, common.out)
        }
        Command::Diff { a, b, tol, ci_multiple, skip } => {
            let d = diff_runs(&a, &b, &DiffOptions { tolerance: tol, ci_multiple, skip })?;
            let text = serde_json::to_string_pretty(&d).map_err(|e| Error::Schema(e.to_string()))?;
            println!("{text}");
            return Ok(d.within_tolerance);
        }
        Command::Replay { manifest, out } => {
            let (m, _) = Manifest::read(&manifest)?;
            let cfg = m.scenario.resolve()?;
            return execute(&m.spec, &cfg, &out);
        }
    };
    let cfg = load(&spec)?;
    execute(&spec, &cfg, &out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let code = exit_code(&e);
            let diag = serde_json::json!({ "error": kind_name(&e), "message": e.to_string(), "exit_code": code });
            eprintln!("{diag}");
            ExitCode::from(code)
        }
    }
}
