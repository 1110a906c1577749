//! Experiment kinds and their CSV outputs.

use crate::grid::Grid;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use uplink_core::analysis::capacity::capacity_from_success;
use uplink_core::analysis::{success_probability, success_with_error, MetaEngine};
use uplink_core::energy::{energy_efficiency, propulsion_power, slot_energy, Viewpoint};
use uplink_core::geometry::{avg_segment_jensen, avg_segment_poisson, simulate_greedy_trajectory};
use uplink_core::queueing::{solve_queue, QueueOutcome};
use uplink_core::quadrature::QuadratureSpec;
use uplink_core::report::{
    write_csv_file, DelayRow, EnergyRow, MetaRow, SimRow, SweepRow, TrajectoryRow,
};
use uplink_core::rng::substream;
use uplink_core::sim::simulate_success_sweep;
use uplink_core::validate::{run_criterion, Budget, CRITERIA};
use uplink_core::{db_to_linear, Error, Result, ScenarioConfig, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    SuccessSweep,
    Meta,
    CapacitySweep,
    DelayTable,
    EnergySweep,
    Trajectory,
    Simulate,
    Validate,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::SuccessSweep => "success-sweep",
            Kind::Meta => "meta",
            Kind::CapacitySweep => "capacity-sweep",
            Kind::DelayTable => "delay-table",
            Kind::EnergySweep => "energy-sweep",
            Kind::Trajectory => "trajectory",
            Kind::Simulate => "simulate",
            Kind::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    Speed,
    Bandwidth,
}

/// Everything needed to rerun an experiment, apart from the scenario itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kind: Kind,
    /// Scenario file as given on the command line, for the record.
    pub scenario_path: Option<PathBuf>,
    pub overrides: Vec<String>,
    /// Restrict to one scheme; both when absent.
    pub scheme: Option<Scheme>,
    pub seed: u64,
    pub trials: Option<u64>,
    pub theta_db: Option<Grid>,
    pub levels: Option<Grid>,
    pub packets: Option<Grid>,
    pub sweep: Option<SweepVariable>,
    pub grid: Option<Grid>,
    pub radius: Option<Grid>,
    pub devices: Option<Grid>,
    pub rings: Option<usize>,
    pub surcharge: bool,
    pub criteria: Option<Vec<u8>>,
    pub quick: bool,
}

impl ExperimentSpec {
    pub fn new(kind: Kind) -> Self {
        ExperimentSpec {
            kind,
            scenario_path: None,
            overrides: Vec::new(),
            scheme: None,
            seed: 1,
            trials: None,
            theta_db: None,
            levels: None,
            packets: None,
            sweep: None,
            grid: None,
            radius: None,
            devices: None,
            rings: None,
            surcharge: false,
            criteria: None,
            quick: false,
        }
    }

    fn schemes(&self) -> Vec<Scheme> {
        self.scheme.map(|s| vec![s]).unwrap_or_else(|| Scheme::ALL.to_vec())
    }

    fn theta_grid(&self, default: &str) -> Grid {
        self.theta_db.unwrap_or_else(|| default.parse().expect("valid default grid"))
    }
}

/// One CSV written by a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub file: String,
    pub rows: usize,
}

/// Result of a run, before the manifest is written.
pub struct RunOutcome {
    pub outputs: Vec<OutputFile>,
    /// Validation runs report failures here; other kinds leave it `true`.
    pub all_passed: bool,
}

fn write<T: Serialize>(dir: &Path, name: &str, rows: &[T]) -> Result<OutputFile> {
    write_csv_file(&dir.join(name), rows)?;
    Ok(OutputFile { file: name.to_owned(), rows: rows.len() })
}

/// Run `spec` against an already resolved scenario, writing CSVs under `dir`.
pub fn run(spec: &ExperimentSpec, cfg: &ScenarioConfig, dir: &Path) -> Result<RunOutcome> {
    let quad = QuadratureSpec::default();
    let env = cfg.environment.environment.to_string();
    let h = cfg.geometry.altitude;
    let name = format!("{}.csv", spec.kind.as_str());
    let mut all_passed = true;
    let out = match spec.kind {
        Kind::SuccessSweep | Kind::CapacitySweep => {
            let mut rows = Vec::new();
            for scheme in spec.schemes() {
                for db in spec.theta_grid("-20:65:1").values() {
                    let th = db_to_linear(db);
                    let (s, err) = success_with_error(cfg, scheme, th, &quad)?;
                    let (value, est_error) = if spec.kind == Kind::SuccessSweep {
                        (s, err)
                    } else {
                        // spectral efficiency, bits/s/Hz
                        let per_hz = capacity_from_success(cfg, scheme, th, 1.0) / cfg.traffic.bandwidth;
                        (s * per_hz, err * per_hz)
                    };
                    rows.push(SweepRow { scheme: scheme.to_string(), env: env.clone(), h, theta_db: db, value, est_error });
                }
            }
            write(dir, &name, &rows)?
        }
        Kind::Meta => {
            let levels = spec.levels.unwrap_or_else(|| "0.05:0.95:0.05".parse().expect("valid grid"));
            let mut rows = Vec::new();
            for scheme in spec.schemes() {
                for db in spec.theta_grid("10").values() {
                    let engine = MetaEngine::new(cfg, scheme, db_to_linear(db), &quad)?;
                    for x in levels.values() {
                        let m = engine.ccdf(x)?;
                        rows.push(MetaRow {
                            scheme: scheme.to_string(),
                            env: env.clone(),
                            h,
                            theta_db: db,
                            x,
                            value: m.value,
                            raw: m.raw,
                            path: serde_json::to_value(m.path)
                                .ok()
                                .and_then(|v| v.as_str().map(str::to_owned))
                                .unwrap_or_default(),
                        });
                    }
                }
            }
            write(dir, &name, &rows)?
        }
        Kind::DelayTable => {
            let packets = spec.packets.unwrap_or_else(|| "1e6:11e6:1e6".parse().expect("valid grid"));
            let mut rows = Vec::new();
            for scheme in spec.schemes() {
                for bits in packets.values() {
                    let c = cfg.with_packet_bits(bits);
                    let d = c.derive()?;
                    let s = success_probability(&c, scheme, c.threshold(scheme)?, &quad)?;
                    let q = solve_queue(d.queue_devices, c.traffic.arrival_prob, s)?;
                    let (stable, q_l, q_w) = match q {
                        QueueOutcome::Stable { q_l, q_w_slots, .. } => (true, Some(q_l), Some(q_w_slots)),
                        QueueOutcome::Unstable => (false, None, None),
                    };
                    rows.push(DelayRow {
                        scheme: scheme.to_string(),
                        env: env.clone(),
                        h,
                        packet_bits: bits,
                        s_p: s,
                        stable,
                        q_l,
                        q_w_slots: q_w,
                        q_w_seconds: q_w.map(|w| w * c.traffic.slot_duration),
                    });
                }
            }
            write(dir, &name, &rows)?
        }
        Kind::EnergySweep => {
            let var = spec.sweep.unwrap_or(SweepVariable::Speed);
            let grid = spec.grid.unwrap_or_else(|| match var {
                SweepVariable::Speed => "0:80:1".parse().expect("valid grid"),
                SweepVariable::Bandwidth => "1e5:1e6:1e5".parse().expect("valid grid"),
            });
            let th = db_to_linear(spec.theta_grid("20").start);
            let mut rows = Vec::new();
            for scheme in spec.schemes() {
                // noise does not scale with bandwidth, so success is fixed across the sweep
                let s = success_probability(cfg, scheme, th, &quad)?;
                for x in grid.values() {
                    let mut c = *cfg;
                    match var {
                        SweepVariable::Speed => c.kinematics.speed = x,
                        SweepVariable::Bandwidth => c.traffic.bandwidth = x,
                    }
                    let cap = capacity_from_success(&c, scheme, th, s);
                    rows.push(EnergyRow {
                        scheme: scheme.to_string(),
                        variable: format!("{var:?}").to_lowercase(),
                        x,
                        p_t: propulsion_power(&c.rotorcraft, c.kinematics.speed),
                        e_slot: slot_energy(scheme, &c).total(spec.surcharge),
                        ee_uav: energy_efficiency(scheme, Viewpoint::Uav, cap, &c, spec.surcharge),
                        ee_device: energy_efficiency(scheme, Viewpoint::Device, cap, &c, spec.surcharge),
                    });
                }
            }
            write(dir, &name, &rows)?
        }
        Kind::Trajectory => {
            let radii = spec.radius.unwrap_or_else(|| "100:200:50".parse().expect("valid grid"));
            let devices = spec.devices.unwrap_or_else(|| "25:150:25".parse().expect("valid grid"));
            let trials = spec.trials.unwrap_or(10_000);
            let mut rows = Vec::new();
            let mut stream = 0u64;
            for r in radii.values() {
                for n in devices.values() {
                    let n = n.round() as usize;
                    let (mut total, mut hops) = (0.0, 0u64);
                    for _ in 0..trials {
                        let segs = simulate_greedy_trajectory(&mut substream(spec.seed, stream), n as f64, r);
                        stream += 1;
                        total += segs.iter().sum::<f64>();
                        hops += segs.len() as u64;
                    }
                    rows.push(TrajectoryRow {
                        r,
                        n: n as u64,
                        analytic_exact: avg_segment_poisson(n as f64, r)?,
                        analytic_jensen: avg_segment_jensen(n, r)?,
                        simulated_mean: if hops > 0 { total / hops as f64 } else { f64::NAN },
                        trials,
                    });
                }
            }
            write(dir, &name, &rows)?
        }
        Kind::Simulate => {
            let trials = spec.trials.unwrap_or(20_000);
            let rings = spec.rings.unwrap_or(uplink_core::sim::DEFAULT_RINGS);
            let dbs = spec.theta_grid("0:40:10").values();
            let ths: Vec<f64> = dbs.iter().map(|&d| db_to_linear(d)).collect();
            let mut rows = Vec::new();
            for scheme in spec.schemes() {
                let sims = simulate_success_sweep(spec.seed, cfg, scheme, &ths, trials, rings)?;
                for (db, s) in dbs.iter().zip(sims) {
                    rows.push(SimRow {
                        scheme: scheme.to_string(),
                        env: env.clone(),
                        h,
                        theta_db: *db,
                        value: s.estimate,
                        est_error: s.ci_half_width / 1.959_963_984_540_054,
                        trials: s.trials,
                        ci_halfwidth: s.ci_half_width,
                        seed: s.seed,
                    });
                }
            }
            write(dir, &name, &rows)?
        }
        Kind::Validate => {
            let mut budget = if spec.quick { Budget::quick() } else { Budget::full() };
            budget.seed = spec.seed;
            let ids: Vec<u8> = spec.criteria.clone().unwrap_or_else(|| CRITERIA.iter().map(|c| c.0).collect());
            let mut rows = Vec::new();
            for id in ids {
                let r = run_criterion(id, &budget)?;
                eprintln!("{}", r.summary());
                all_passed &= r.passed();
                for c in r.checks {
                    rows.push(ValidateRow {
                        criterion: id,
                        check: c.label,
                        value: c.value,
                        target: c.target,
                        tolerance: c.tolerance,
                        passed: c.passed,
                    });
                }
            }
            write(dir, &name, &rows)?
        }
    };
    Ok(RunOutcome { outputs: vec![out], all_passed })
}

#[derive(Debug, Serialize)]
struct ValidateRow {
    criterion: u8,
    check: String,
    value: f64,
    target: f64,
    tolerance: f64,
    passed: bool,
}

pub fn check_spec(spec: &ExperimentSpec) -> Result<()> {
    if let Some(t) = spec.trials {
        if t == 0 {
            return Err(Error::InvalidInput("--trials must be at least 1".into()));
        }
    }
    if let Some(levels) = spec.levels {
        if levels.start <= 0.0 || levels.stop >= 1.0 {
            return Err(Error::InvalidInput("reliability levels must lie in (0, 1)".into()));
        }
    }
    if let Some(ids) = &spec.criteria {
        if let Some(bad) = ids.iter().find(|&&i| !(1..=8).contains(&i)) {
            return Err(Error::InvalidInput(format!("no criterion {bad}")));
        }
    }
    if spec.rings == Some(0) {
        return Err(Error::InvalidInput("--rings must be at least 1".into()));
    }
    Ok(())
}
