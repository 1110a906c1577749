//! Ground-to-air channel: LOS probability, path loss, Nakagami fading and the sectored
//! antenna gain mixture.

use crate::config::{AntennaConfig, EnvironmentProfile};
use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Gamma};

/// Sigmoid LOS probability for one environment at a fixed UAV altitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosModel {
    pub a: f64,
    pub b: f64,
    pub altitude: f64,
}

impl LosModel {
    pub fn new(profile: &EnvironmentProfile, altitude: f64) -> Self {
        LosModel { a: profile.a, b: profile.b, altitude }
    }

    /// LOS probability at horizontal distance `r` (sign ignored). The elevation angle
    /// enters in degrees.
    pub fn p_los(&self, r: f64) -> f64 {
        let angle = (self.altitude / r).abs().atan().to_degrees();
        1.0 / (1.0 + self.a * (-self.b * (angle - self.a)).exp())
    }

    /// Limit of [`LosModel::p_los`] as the horizontal distance grows without bound.
    pub fn p_los_far(&self) -> f64 {
        1.0 / (1.0 + self.a * (self.a * self.b).exp())
    }
}

/// Distance-dependent path gain `(r² + h²)^(-alpha/2)`.
pub fn path_gain(r: f64, h: f64, alpha: f64) -> f64 {
    (r * r + h * h).powf(-0.5 * alpha)
}

/// Four-point distribution of the interfering-link antenna gain product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainMixture {
    /// `(gain, probability)` for main-main, main-side, side-main, side-side.
    pub entries: [(f64, f64); 4],
}

impl GainMixture {
    pub fn from_antenna(a: &AntennaConfig) -> Self {
        let (cd, cu) = (a.c_d(), a.c_u());
        GainMixture {
            entries: [
                (a.device_main * a.uav_main, cd * cu),
                (a.device_main * a.uav_side, cd * (1.0 - cu)),
                (a.device_side * a.uav_main, (1.0 - cd) * cu),
                (a.device_side * a.uav_side, (1.0 - cd) * (1.0 - cu)),
            ],
        }
    }

    pub fn mean_gain(&self) -> f64 {
        self.entries.iter().map(|(g, p)| g * p).sum()
    }
}

/// Unit-mean Gamma power gain with integer shape `m` (Nakagami-m amplitude).
pub fn sample_nakagami_power<R: Rng + ?Sized>(rng: &mut R, m: u32) -> Result<f64> {
    Ok(NakagamiPower::new(m)?.sample(rng))
}

/// Reusable unit-mean Gamma sampler.
#[derive(Debug, Clone, Copy)]
pub struct NakagamiPower {
    gamma: Gamma<f64>,
}

impl NakagamiPower {
    pub fn new(m: u32) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidInput("Nakagami shape must be at least 1".into()));
        }
        let gamma = Gamma::new(m as f64, 1.0 / m as f64).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(NakagamiPower { gamma })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.gamma.sample(rng)
    }
}

/// Draw the antenna gain product of one interfering link.
pub fn sample_interferer_gain<R: Rng + ?Sized>(rng: &mut R, mix: &GainMixture) -> f64 {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for &(g, p) in &mix.entries {
        acc += p;
        if u < acc {
            return g;
        }
    }
    // u landed in the rounding gap above the last cumulative sum
    mix.entries.iter().rev().find(|(_, p)| *p > 0.0).map(|e| e.0).unwrap_or(mix.entries[3].0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Environment;
    use crate::rng::substream;

    #[test]
    fn p_los_limits() {
        let m = LosModel::new(&Environment::Suburban.profile(), 30.0);
        assert!((m.p_los(0.0) - 1.0).abs() < 1e-8);
        assert_eq!(m.p_los(5.0), m.p_los(-5.0));
        assert!((m.p_los(1e12) - m.p_los_far()).abs() < 1e-9);
    }

    #[test]
    fn path_gain_values() {
        assert_eq!(path_gain(0.0, 1.0, 2.0), 1.0);
        assert!((path_gain(30.0, 30.0, 2.5) / 1800f64.powf(-1.25) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mixture_sums_to_one() {
        let mix = GainMixture::from_antenna(&crate::ScenarioConfig::baseline().antenna);
        let s: f64 = mix.entries.iter().map(|e| e.1).sum();
        assert!((s - 1.0).abs() < 1e-15);
        assert!((mix.entries[0].1 - 1.0 / 81.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_mixture() {
        let mut a = crate::ScenarioConfig::baseline().antenna;
        a.device_beamwidth = 2.0 * std::f64::consts::PI;
        a.uav_beamwidth = 2.0 * std::f64::consts::PI;
        let mix = GainMixture::from_antenna(&a);
        let mut rng = substream(0, 0);
        for _ in 0..1000 {
            assert_eq!(sample_interferer_gain(&mut rng, &mix), a.device_main * a.uav_main);
        }
    }

    #[test]
    fn nakagami_rejects_zero() {
        assert!(NakagamiPower::new(0).is_err());
    }
}
