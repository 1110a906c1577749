//! Scenario parameters and derived quantities.
//!
//! Everything in here is SI: metres, seconds, watts, hertz, bits, radians, linear gains.
//! Decibel and per-km² forms exist only in the file format (see [`file`]).

pub mod file;

use crate::error::{Error, Result};
use crate::Scheme;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

pub use file::ScenarioFile;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Environment class of the ground-to-air LOS sigmoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Environment {
    Suburban,
    Urban,
    DenseUrban,
    HighRiseUrban,
}

impl Environment {
    pub const ALL: [Environment; 4] =
        [Environment::Suburban, Environment::Urban, Environment::DenseUrban, Environment::HighRiseUrban];

    pub fn as_str(self) -> &'static str {
        match self {
            Environment::Suburban => "suburban",
            Environment::Urban => "urban",
            Environment::DenseUrban => "dense-urban",
            Environment::HighRiseUrban => "high-rise-urban",
        }
    }

    pub fn profile(self) -> EnvironmentProfile {
        let (a, b) = match self {
            Environment::Suburban => (4.88, 0.429),
            Environment::Urban => (9.612, 0.158),
            Environment::DenseUrban => (12.081, 0.114),
            Environment::HighRiseUrban => (27.23, 0.078),
        };
        EnvironmentProfile { environment: self, a, b }
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Environment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "suburban" => Ok(Environment::Suburban),
            "urban" => Ok(Environment::Urban),
            "dense-urban" | "denseurban" => Ok(Environment::DenseUrban),
            "high-rise-urban" | "high-rise" | "highrise" => Ok(Environment::HighRiseUrban),
            other => Err(Error::InvalidInput(format!(
                "unknown environment `{other}` (expected suburban, urban, dense-urban or high-rise-urban)"
            ))),
        }
    }
}

/// Sigmoid parameters `(a, b)` of the LOS probability for one environment class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentProfile {
    pub environment: Environment,
    pub a: f64,
    pub b: f64,
}

impl EnvironmentProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) || !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "environment parameters must be positive, got a={} b={}",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Look up the calibrated profile for a named environment.
pub fn environment_profile(name: &str) -> Result<EnvironmentProfile> {
    Ok(name.parse::<Environment>()?.profile())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    /// Hexagon circumradius `R` (m).
    pub cell_radius: f64,
    /// UAV altitude `h` (m).
    pub altitude: f64,
    /// Device intensity (devices/m²).
    pub device_intensity: f64,
    /// Standard deviation of the serving horizontal offset (m).
    pub offset_sd: f64,
    /// Simulated area (m²). Informational; the simulator uses a ring count instead.
    pub sim_area: f64,
}

impl GeometryConfig {
    pub fn cell_area(&self) -> f64 {
        1.5 * SQRT3 * self.cell_radius * self.cell_radius
    }

    /// Mean number of devices per cell.
    pub fn mean_devices(&self) -> f64 {
        self.device_intensity * self.cell_area()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub m_los: u32,
    pub m_nlos: u32,
    /// Noise power (W).
    pub noise_power: f64,
    /// Device transmit power (W).
    pub tx_power: f64,
}

impl ChannelConfig {
    pub fn exponent(&self, state: crate::LinkState) -> f64 {
        match state {
            crate::LinkState::Los => self.alpha_los,
            crate::LinkState::Nlos => self.alpha_nlos,
        }
    }

    pub fn shape(&self, state: crate::LinkState) -> u32 {
        match state {
            crate::LinkState::Los => self.m_los,
            crate::LinkState::Nlos => self.m_nlos,
        }
    }
}

/// Sectored antenna model, gains linear and beamwidths in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntennaConfig {
    pub device_main: f64,
    pub device_side: f64,
    pub uav_main: f64,
    pub uav_side: f64,
    pub device_beamwidth: f64,
    pub uav_beamwidth: f64,
}

impl AntennaConfig {
    /// Fraction of orientations in which the device main lobe points at the UAV.
    pub fn c_d(&self) -> f64 {
        self.device_beamwidth / (2.0 * PI)
    }

    pub fn c_u(&self) -> f64 {
        self.uav_beamwidth / (2.0 * PI)
    }

    /// Serving link gain: both main lobes aligned.
    pub fn serving_gain(&self) -> f64 {
        self.device_main * self.uav_main
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrafficTimingConfig {
    /// Packet size `L` (bits).
    pub packet_bits: f64,
    /// Per-slot packet generation probability.
    pub arrival_prob: f64,
    /// Bandwidth (Hz).
    pub bandwidth: f64,
    /// Practical-rate penalty `zeta`.
    pub rate_penalty: f64,
    /// Slot duration `T_s` (s).
    pub slot_duration: f64,
    /// Device-centric transmission sub-slot `t_DC` (s).
    pub tx_duration: f64,
    /// Mean travel time per trajectory segment `t_V` (s).
    pub travel_time: f64,
}

/// Which expression is used for short segments that never reach cruise speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TravelTimeFormula {
    /// `sqrt(d / (a_u + a_d))`, as published.
    #[default]
    AsPrinted,
    /// Triangular speed profile, `sqrt(2 d (a_u + a_d) / (a_u a_d))`.
    Triangular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicsConfig {
    /// Cruise speed (m/s).
    pub speed: f64,
    /// Acceleration (m/s²).
    pub accel: f64,
    /// Deceleration (m/s²).
    pub decel: f64,
    pub formula: TravelTimeFormula,
}

impl KinematicsConfig {
    pub fn accel_time(&self) -> f64 {
        self.speed / self.accel
    }

    pub fn decel_time(&self) -> f64 {
        self.speed / self.decel
    }

    pub fn accel_distance(&self) -> f64 {
        0.5 * self.speed * self.speed / self.accel
    }

    pub fn decel_distance(&self) -> f64 {
        0.5 * self.speed * self.speed / self.decel
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("speed", self.speed), ("accel", self.accel), ("decel", self.decel)] {
            positive(name, v)?;
        }
        Ok(())
    }
}

/// Rotary-wing aerodynamic parameters plus the communication power draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotorcraftParams {
    /// Aircraft weight (N).
    pub weight: f64,
    /// Air density (kg/m³).
    pub air_density: f64,
    /// Rotor radius (m).
    pub rotor_radius: f64,
    /// Rotor disc area (m²).
    pub disc_area: f64,
    /// Blade tip speed (m/s).
    pub tip_speed: f64,
    /// Mean induced velocity in hover (m/s).
    pub induced_velocity: f64,
    pub fuselage_drag_ratio: f64,
    pub solidity: f64,
    pub profile_drag: f64,
    /// Blade angular velocity (rad/s).
    pub angular_velocity: f64,
    pub induced_correction: f64,
    /// Communication circuit power (W).
    pub comm_power: f64,
}

impl RotorcraftParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("weight", self.weight),
            ("air_density", self.air_density),
            ("rotor_radius", self.rotor_radius),
            ("disc_area", self.disc_area),
            ("tip_speed", self.tip_speed),
            ("induced_velocity", self.induced_velocity),
            ("fuselage_drag_ratio", self.fuselage_drag_ratio),
            ("solidity", self.solidity),
            ("profile_drag", self.profile_drag),
            ("angular_velocity", self.angular_velocity),
            ("comm_power", self.comm_power),
        ] {
            positive(name, v)?;
        }
        if !(self.induced_correction >= 0.0 && self.induced_correction.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "induced_correction must be >= 0, got {}",
                self.induced_correction
            )));
        }
        Ok(())
    }
}

/// Complete scenario. Build with [`ScenarioConfig::baseline`] or from a file, then
/// call [`ScenarioConfig::validate`] (the file loader does this for you).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub environment: EnvironmentProfile,
    pub geometry: GeometryConfig,
    pub channel: ChannelConfig,
    pub antenna: AntennaConfig,
    pub traffic: TrafficTimingConfig,
    pub kinematics: KinematicsConfig,
    pub rotorcraft: RotorcraftParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedQuantities {
    /// Interferer intensity seen by the device-centric scheme (per m²).
    pub lambda_dc: f64,
    /// Interferer intensity seen by the UAV-centric scheme, one UAV per cell (per m²).
    pub lambda_uc: f64,
    pub theta_dc: f64,
    pub theta_uc: f64,
    /// Mean devices per cell.
    pub mean_devices: f64,
    /// Device count used by the queue model, `round(mean_devices)`.
    pub queue_devices: usize,
}

impl ScenarioConfig {
    /// Reference scenario: suburban, 30 m altitude, 100 devices per cell, 1 Mbit packets.
    pub fn baseline() -> Self {
        ScenarioConfig {
            environment: Environment::Suburban.profile(),
            geometry: GeometryConfig {
                cell_radius: 651.5,
                altitude: 30.0,
                device_intensity: 90.693e-6,
                offset_sd: 20.0,
                sim_area: 20_000e6,
            },
            channel: ChannelConfig {
                alpha_los: 2.5,
                alpha_nlos: 4.0,
                m_los: 3,
                m_nlos: 1,
                noise_power: crate::dbm_to_watts(-90.0),
                tx_power: 1e-3,
            },
            antenna: AntennaConfig {
                device_main: crate::db_to_linear(5.0),
                device_side: 1.0,
                uav_main: crate::db_to_linear(5.0),
                uav_side: 1.0,
                device_beamwidth: 40f64.to_radians(),
                uav_beamwidth: 40f64.to_radians(),
            },
            traffic: TrafficTimingConfig {
                packet_bits: 1e6,
                arrival_prob: 0.005,
                bandwidth: 125e3,
                rate_penalty: 0.8,
                slot_duration: 12.8729,
                tx_duration: 6.4365,
                travel_time: 6.4365,
            },
            kinematics: KinematicsConfig { speed: 22.0, accel: 11.0, decel: 11.0, formula: TravelTimeFormula::AsPrinted },
            rotorcraft: RotorcraftParams {
                weight: 100.0,
                air_density: 1.225,
                rotor_radius: 0.5,
                disc_area: 0.79,
                tip_speed: 200.0,
                induced_velocity: 7.2,
                fuselage_drag_ratio: 0.3,
                solidity: 0.05,
                profile_drag: 0.012,
                angular_velocity: 400.0,
                induced_correction: 0.1,
                comm_power: 0.05,
            },
        }
    }

    pub fn with_environment(mut self, env: Environment) -> Self {
        self.environment = env.profile();
        self
    }

    pub fn with_altitude(mut self, h: f64) -> Self {
        self.geometry.altitude = h;
        self
    }

    pub fn with_packet_bits(mut self, bits: f64) -> Self {
        self.traffic.packet_bits = bits;
        self
    }

    /// Check every field against its documented range.
    pub fn validate(&self) -> Result<()> {
        self.environment.validate()?;

        let g = &self.geometry;
        positive("cell_radius", g.cell_radius)?;
        positive("altitude", g.altitude)?;
        positive("device_intensity", g.device_intensity)?;
        positive("sim_area", g.sim_area)?;
        if !(g.offset_sd >= 0.0 && g.offset_sd.is_finite()) {
            return Err(Error::InvalidInput(format!("offset_sd must be >= 0, got {}", g.offset_sd)));
        }

        let c = &self.channel;
        positive("alpha_los", c.alpha_los)?;
        positive("alpha_nlos", c.alpha_nlos)?;
        if c.alpha_los <= 2.0 {
            return Err(Error::InvalidInput(format!(
                "alpha_los must exceed 2 for finite aggregate interference, got {}",
                c.alpha_los
            )));
        }
        if c.alpha_los >= c.alpha_nlos {
            return Err(Error::InvalidInput(format!(
                "alpha_los ({}) must be below alpha_nlos ({})",
                c.alpha_los, c.alpha_nlos
            )));
        }
        if c.m_nlos < 1 || c.m_los <= c.m_nlos {
            return Err(Error::InvalidInput(format!(
                "Nakagami shapes must satisfy m_los > m_nlos >= 1, got m_los={} m_nlos={}",
                c.m_los, c.m_nlos
            )));
        }
        if c.m_los > 170 {
            return Err(Error::InvalidInput(format!("m_los = {} overflows m! in f64", c.m_los)));
        }
        if !(c.noise_power >= 0.0 && c.noise_power.is_finite()) {
            return Err(Error::InvalidInput(format!("noise_power must be >= 0, got {}", c.noise_power)));
        }
        positive("tx_power", c.tx_power)?;

        let a = &self.antenna;
        positive("device_side", a.device_side)?;
        positive("uav_side", a.uav_side)?;
        if a.device_main < a.device_side || a.uav_main < a.uav_side {
            return Err(Error::InvalidInput("main-lobe gains must be at least the side-lobe gains".into()));
        }
        for (name, c) in [("device_beamwidth", a.c_d()), ("uav_beamwidth", a.c_u())] {
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::InvalidInput(format!("{name} must lie in (0, 2*pi]")));
            }
        }

        let t = &self.traffic;
        positive("packet_bits", t.packet_bits)?;
        positive("bandwidth", t.bandwidth)?;
        positive("slot_duration", t.slot_duration)?;
        positive("tx_duration", t.tx_duration)?;
        if !(t.arrival_prob > 0.0 && t.arrival_prob < 1.0) {
            return Err(Error::InvalidInput(format!("arrival_prob must lie in (0,1), got {}", t.arrival_prob)));
        }
        if !(t.rate_penalty > 0.0 && t.rate_penalty <= 1.0) {
            return Err(Error::InvalidInput(format!("rate_penalty must lie in (0,1], got {}", t.rate_penalty)));
        }
        if t.tx_duration >= t.slot_duration {
            return Err(Error::InvalidInput(format!(
                "tx_duration ({}) must be shorter than slot_duration ({})",
                t.tx_duration, t.slot_duration
            )));
        }
        if !(t.travel_time >= 0.0 && t.travel_time.is_finite()) {
            return Err(Error::InvalidInput(format!("travel_time must be >= 0, got {}", t.travel_time)));
        }

        self.kinematics.validate()?;
        self.rotorcraft.validate()?;
        Ok(())
    }

    /// Interferer intensities, thresholds and device counts.
    pub fn derive(&self) -> Result<DerivedQuantities> {
        derive(self)
    }

    /// Decoding threshold used by `scheme` for the configured packet size.
    pub fn threshold(&self, scheme: Scheme) -> Result<f64> {
        let d = self.derive()?;
        Ok(match scheme {
            Scheme::Urdc => d.theta_dc,
            Scheme::Suc => d.theta_uc,
        })
    }

    /// Interferer intensity seen by `scheme`.
    pub fn interferer_intensity(&self, scheme: Scheme) -> f64 {
        let lambda_uc = uav_intensity(self.geometry.cell_radius);
        match scheme {
            Scheme::Urdc => self.traffic.tx_duration / self.traffic.slot_duration * lambda_uc,
            Scheme::Suc => lambda_uc,
        }
    }

    /// Transmission duration available to a device under `scheme`.
    pub fn tx_window(&self, scheme: Scheme) -> f64 {
        match scheme {
            Scheme::Urdc => self.traffic.tx_duration,
            Scheme::Suc => self.traffic.slot_duration,
        }
    }
}

/// One UAV per hexagonal cell.
pub fn uav_intensity(cell_radius: f64) -> f64 {
    2.0 / (3.0 * SQRT3 * cell_radius * cell_radius)
}

/// Smallest SINR at which `bits` fit in `duration` seconds at `zeta * W * log2(1 + sinr)`.
pub fn rate_threshold(bits: f64, duration: f64, rate_penalty: f64, bandwidth: f64) -> f64 {
    (bits / (duration * rate_penalty * bandwidth) * std::f64::consts::LN_2).exp_m1()
}

pub fn derive(cfg: &ScenarioConfig) -> Result<DerivedQuantities> {
    let t = &cfg.traffic;
    if !(t.packet_bits > 0.0) || !(t.bandwidth > 0.0) || !(cfg.geometry.cell_radius > 0.0) {
        return Err(Error::InvalidInput("packet_bits, bandwidth and cell_radius must be positive".into()));
    }
    if !(t.tx_duration < t.slot_duration) || !(t.tx_duration > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tx_duration must lie in (0, slot_duration), got {} vs {}",
            t.tx_duration, t.slot_duration
        )));
    }
    let lambda_uc = uav_intensity(cfg.geometry.cell_radius);
    let mean_devices = cfg.geometry.mean_devices();
    Ok(DerivedQuantities {
        lambda_dc: t.tx_duration / t.slot_duration * lambda_uc,
        lambda_uc,
        theta_dc: rate_threshold(t.packet_bits, t.tx_duration, t.rate_penalty, t.bandwidth),
        theta_uc: rate_threshold(t.packet_bits, t.slot_duration, t.rate_penalty, t.bandwidth),
        mean_devices,
        queue_devices: mean_devices.round().max(1.0) as usize,
    })
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_validates() {
        ScenarioConfig::baseline().validate().unwrap();
    }

    #[test]
    fn baseline_derived_values() {
        let d = ScenarioConfig::baseline().derive().unwrap();
        assert!((d.lambda_uc * 1e6 / 0.90689 - 1.0).abs() < 1e-4);
        assert!((d.mean_devices - 100.0).abs() < 0.02);
        assert_eq!(d.queue_devices, 100);
        // 2^0.77683 - 1 by hand
        assert!((d.theta_uc - 0.71349).abs() < 2e-4, "{}", d.theta_uc);
        assert!(d.theta_dc > d.theta_uc);
    }

    #[test]
    fn equal_windows_give_equal_thresholds() {
        let mut c = ScenarioConfig::baseline();
        c.traffic.tx_duration = c.traffic.slot_duration;
        let th_dc = rate_threshold(c.traffic.packet_bits, c.traffic.tx_duration, 0.8, 125e3);
        let th_uc = rate_threshold(c.traffic.packet_bits, c.traffic.slot_duration, 0.8, 125e3);
        assert_eq!(th_dc, th_uc);
        // derive itself rejects the degenerate split
        assert!(c.derive().is_err());
    }

    #[test]
    fn profiles() {
        let p = environment_profile("suburban").unwrap();
        assert_eq!((p.a, p.b), (4.88, 0.429));
        let p = environment_profile("high-rise-urban").unwrap();
        assert_eq!((p.a, p.b), (27.23, 0.078));
        let p = environment_profile("urban").unwrap();
        assert_eq!((p.a, p.b), (9.612, 0.158));
        assert_eq!(environment_profile("high-rise").unwrap().environment, Environment::HighRiseUrban);
        assert!(environment_profile("rural").is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        let mut c = ScenarioConfig::baseline();
        c.channel.m_los = 1;
        assert!(c.validate().is_err());
        let mut c = ScenarioConfig::baseline();
        c.channel.alpha_los = 4.5;
        assert!(c.validate().is_err());
    }
}
