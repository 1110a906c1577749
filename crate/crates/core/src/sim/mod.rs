//! Monte Carlo simulation of the exact hexagonal network.
//!
//! Unlike the analysis, interferers here are one device per cell of a finite hexagonal
//! lattice, uniform in its cell. Under the device-centric scheme each interferer is active
//! with probability `t_DC / T_s` and the receiving UAV hovers over the served device,
//! itself uniform in the reference cell. Under the UAV-centric scheme the UAV sits at the
//! centre of the reference cell and every cell has an active interferer.

pub mod queue;

pub use queue::{simulate_queue, QueueSimResult};

use crate::channel::{path_gain, sample_interferer_gain, GainMixture, LosModel, NakagamiPower};
use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::geometry::{hex_rings, HexCell, Point};
use crate::rng::{substream, StreamRng};
use crate::{LinkState, Scheme};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Default lattice size around the reference cell.
pub const DEFAULT_RINGS: usize = 15;

/// Success estimate with a 95% Wilson score half-width. Unlike the plain normal interval it
/// stays positive when every trial succeeds or every trial fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub theta: f64,
    pub estimate: f64,
    pub ci_half_width: f64,
    pub successes: u64,
    pub trials: u64,
    pub seed: u64,
}

impl SimEstimate {
    fn new(theta: f64, successes: u64, trials: u64, seed: u64) -> Self {
        let p = successes as f64 / trials as f64;
        SimEstimate { theta, estimate: p, ci_half_width: wilson_half_width(p, trials), successes, trials, seed }
    }
}

const Z95: f64 = 1.959_963_984_540_054;

fn wilson_half_width(p: f64, n: u64) -> f64 {
    let n = n as f64;
    let z2 = Z95 * Z95;
    Z95 / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// Serving link of one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServingLink {
    /// Horizontal position of the receiving UAV.
    pub uav: Point,
    /// Horizontal serving distance.
    pub distance: f64,
    pub state: LinkState,
}

/// Everything a trial needs that does not change between trials.
pub struct Network {
    cfg: ScenarioConfig,
    scheme: Scheme,
    cells: Vec<HexCell>,
    los: LosModel,
    mix: GainMixture,
    fading_los: NakagamiPower,
    fading_nlos: NakagamiPower,
    offset: Option<Normal<f64>>,
    activity: f64,
}

impl Network {
    pub fn new(cfg: &ScenarioConfig, scheme: Scheme, rings: usize) -> Result<Self> {
        cfg.validate()?;
        if rings == 0 {
            return Err(Error::InvalidInput("the lattice needs at least one ring".into()));
        }
        let offset = if cfg.geometry.offset_sd > 0.0 {
            Some(Normal::new(0.0, cfg.geometry.offset_sd).map_err(|e| Error::InvalidInput(e.to_string()))?)
        } else {
            None
        };
        Ok(Network {
            cfg: *cfg,
            scheme,
            cells: hex_rings(cfg.geometry.cell_radius, rings).into_iter().map(|(_, c)| c).collect(),
            los: LosModel::new(&cfg.environment, cfg.geometry.altitude),
            mix: GainMixture::from_antenna(&cfg.antenna),
            fading_los: NakagamiPower::new(cfg.channel.m_los)?,
            fading_nlos: NakagamiPower::new(cfg.channel.m_nlos)?,
            offset,
            activity: match scheme {
                Scheme::Urdc => cfg.traffic.tx_duration / cfg.traffic.slot_duration,
                Scheme::Suc => 1.0,
            },
        })
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Draw the serving geometry: UAV position, serving distance and LOS state.
    pub fn draw_serving(&self, rng: &mut StreamRng) -> ServingLink {
        let reference = HexCell::new([0.0, 0.0], self.cfg.geometry.cell_radius);
        let device = reference.sample_uniform(rng);
        let (uav, distance) = match self.scheme {
            Scheme::Urdc => {
                let r = self.offset.map(|n| n.sample(rng).abs()).unwrap_or(0.0);
                (device, r)
            }
            Scheme::Suc => ([0.0, 0.0], device[0].hypot(device[1])),
        };
        let state = if rng.random::<f64>() < self.los.p_los(distance) { LinkState::Los } else { LinkState::Nlos };
        ServingLink { uav, distance, state }
    }

    /// Received signal power over a serving link with fresh fading.
    pub fn signal(&self, link: &ServingLink, rng: &mut StreamRng) -> f64 {
        let ch = &self.cfg.channel;
        let h = match link.state {
            LinkState::Los => self.fading_los.sample(rng),
            LinkState::Nlos => self.fading_nlos.sample(rng),
        };
        ch.tx_power
            * self.cfg.antenna.serving_gain()
            * h
            * path_gain(link.distance, self.cfg.geometry.altitude, ch.exponent(link.state))
    }

    /// Aggregate interference at `uav`. Every cell consumes its random draws whether or
    /// not it is active, so a larger lattice reuses the draws of a smaller one.
    pub fn interference(&self, uav: Point, rng: &mut StreamRng) -> f64 {
        let ch = &self.cfg.channel;
        let h = self.cfg.geometry.altitude;
        let mut total = 0.0;
        for cell in &self.cells {
            let active = rng.random::<f64>() < self.activity;
            let p = cell.sample_uniform(rng);
            let d = (p[0] - uav[0]).hypot(p[1] - uav[1]);
            let los = rng.random::<f64>() < self.los.p_los(d);
            let (fade, alpha) = if los {
                (self.fading_los.sample(rng), ch.alpha_los)
            } else {
                (self.fading_nlos.sample(rng), ch.alpha_nlos)
            };
            let g = sample_interferer_gain(rng, &self.mix);
            if active {
                total += ch.tx_power * g * fade * path_gain(d, h, alpha);
            }
        }
        total
    }

    /// SINR of one full realization.
    pub fn trial_sinr(&self, rng: &mut StreamRng) -> f64 {
        let link = self.draw_serving(rng);
        let s = self.signal(&link, rng);
        let i = self.interference(link.uav, rng);
        s / (i + self.cfg.channel.noise_power)
    }
}

fn trial_sinrs(net: &Network, seed: u64, trials: u64) -> Vec<f64> {
    let run = |t: u64| net.trial_sinr(&mut substream(seed, t));
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials).map(run).collect()
    }
}

/// Success probability estimate at several thresholds from one set of realizations.
pub fn simulate_success_sweep(
    seed: u64,
    cfg: &ScenarioConfig,
    scheme: Scheme,
    thetas: &[f64],
    trials: u64,
    rings: usize,
) -> Result<Vec<SimEstimate>> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let net = Network::new(cfg, scheme, rings)?;
    let sinrs = trial_sinrs(&net, seed, trials);
    Ok(thetas
        .iter()
        .map(|&th| {
            let k = sinrs.iter().filter(|&&s| s >= th).count() as u64;
            SimEstimate::new(th, k, trials, seed)
        })
        .collect())
}

/// Success probability estimate at one threshold, on a lattice of [`DEFAULT_RINGS`] rings.
pub fn simulate_success(seed: u64, cfg: &ScenarioConfig, scheme: Scheme, theta: f64, trials: u64) -> Result<SimEstimate> {
    Ok(simulate_success_sweep(seed, cfg, scheme, &[theta], trials, DEFAULT_RINGS)?[0])
}

/// Per-geometry conditional success estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaSimResult {
    pub theta: f64,
    pub conditional: Vec<f64>,
    pub fadings: u64,
    pub seed: u64,
}

impl MetaSimResult {
    /// Fraction of geometries whose conditional success exceeds `x`.
    pub fn ccdf(&self, x: f64) -> f64 {
        self.conditional.iter().filter(|&&s| s > x).count() as f64 / self.conditional.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.conditional.iter().sum::<f64>() / self.conditional.len() as f64
    }
}

/// Empirical meta distribution: fix the serving geometry (distance and LOS state), then
/// estimate its success probability over `n_fadings` draws of serving fading and of the
/// whole interferer population.
pub fn simulate_meta(
    seed: u64,
    cfg: &ScenarioConfig,
    scheme: Scheme,
    theta: f64,
    n_geometries: u64,
    n_fadings: u64,
) -> Result<MetaSimResult> {
    if n_geometries < 100 || n_fadings < 100 {
        return Err(Error::InvalidInput("simulate_meta needs at least 100 geometries and 100 fadings".into()));
    }
    let net = Network::new(cfg, scheme, DEFAULT_RINGS)?;
    let run = |g: u64| {
        let mut rng = substream(seed, g);
        let link = net.draw_serving(&mut rng);
        let mut ok = 0u64;
        for _ in 0..n_fadings {
            let s = net.signal(&link, &mut rng);
            let i = net.interference(link.uav, &mut rng);
            if s / (i + cfg.channel.noise_power) >= theta {
                ok += 1;
            }
        }
        ok as f64 / n_fadings as f64
    };
    #[cfg(feature = "parallel")]
    let conditional: Vec<f64> = {
        use rayon::prelude::*;
        (0..n_geometries).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let conditional: Vec<f64> = (0..n_geometries).map(run).collect();
    Ok(MetaSimResult { theta, conditional, fadings: n_fadings, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_threshold_always_succeeds() {
        let cfg = ScenarioConfig::baseline();
        let e = simulate_success(1, &cfg, Scheme::Urdc, 1e-12, 200).unwrap();
        assert_eq!(e.estimate, 1.0);
    }

    #[test]
    fn reproducible() {
        let cfg = ScenarioConfig::baseline();
        let a = simulate_success(9, &cfg, Scheme::Suc, 1.0, 300).unwrap();
        let b = simulate_success(9, &cfg, Scheme::Suc, 1.0, 300).unwrap();
        assert_eq!(a, b);
    }
}
