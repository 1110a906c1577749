//! Rotary-wing power and per-slot energy.

use crate::config::{KinematicsConfig, RotorcraftParams, ScenarioConfig};
use crate::quadrature::gauss_legendre_on;
use crate::Scheme;
use serde::{Deserialize, Serialize};

/// Blade profile power `P0` and induced power `Pi` in hover (W).
pub fn blade_and_induced_power(p: &RotorcraftParams) -> (f64, f64) {
    let p0 = p.profile_drag / 8.0 * p.air_density * p.solidity * p.disc_area * p.angular_velocity.powi(3)
        * p.rotor_radius.powi(3);
    let pi = (1.0 + p.induced_correction) * p.weight.powf(1.5) / (2.0 * p.air_density * p.disc_area).sqrt();
    (p0, pi)
}

/// Hover power `P0 + Pi` (W).
pub fn hover_power(p: &RotorcraftParams) -> f64 {
    let (p0, pi) = blade_and_induced_power(p);
    p0 + pi
}

/// Level-flight propulsion power at speed `v` (W).
pub fn propulsion_power(p: &RotorcraftParams, v: f64) -> f64 {
    let (p0, pi) = blade_and_induced_power(p);
    let v2 = v * v;
    let v02 = p.induced_velocity * p.induced_velocity;
    let blade = p0 * (1.0 + 3.0 * v2 / (p.tip_speed * p.tip_speed));
    let induced = pi * ((1.0 + v2 * v2 / (4.0 * v02 * v02)).sqrt() - v2 / (2.0 * v02)).sqrt();
    let parasite = 0.5 * p.fuselage_drag_ratio * p.air_density * p.solidity * p.disc_area * v2 * v;
    blade + induced + parasite
}

/// `∫_0^v P_t(w) dw` by fixed Gauss–Legendre (the integrand is smooth).
fn power_speed_integral(p: &RotorcraftParams, v: f64) -> f64 {
    gauss_legendre_on(48, 0.0, v).into_iter().map(|(w, wt)| wt * propulsion_power(p, w)).sum()
}

/// Segment length whose travel time is `t_v` on the trapezoidal profile.
pub fn segment_for_travel_time(kin: &KinematicsConfig, t_v: f64) -> f64 {
    let ramp = kin.accel_time() + kin.decel_time();
    if t_v >= ramp {
        kin.accel_distance() + kin.decel_distance() + (t_v - ramp) * kin.speed
    } else {
        // triangular profile
        let k = kin.accel * kin.decel / (kin.accel + kin.decel);
        0.5 * k * t_v * t_v
    }
}

/// Extra propulsion energy (J) of one segment flown on the trapezoidal speed profile
/// compared with cruising at `P_t(v)` for the whole travel time.
pub fn acceleration_surcharge(p: &RotorcraftParams, kin: &KinematicsConfig, d: f64, t_v: f64) -> f64 {
    let (au, ad) = (kin.accel, kin.decel);
    let s = kin.accel_distance() + kin.decel_distance();
    let v_peak = if d <= s { (2.0 * d * au * ad / (au + ad)).sqrt() } else { kin.speed };
    let ramps = (1.0 / au + 1.0 / ad) * power_speed_integral(p, v_peak);
    let cruise_time = if d > s { (d - s) / kin.speed } else { 0.0 };
    let flown = ramps + propulsion_power(p, kin.speed) * cruise_time;
    flown - propulsion_power(p, kin.speed) * t_v
}

/// Energy per slot, with the base formula always available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotEnergy {
    /// Cruise power over the travel time plus hover and communication over the rest (J).
    pub base: f64,
    /// Acceleration surcharge (J); zero for the hovering scheme.
    pub surcharge: f64,
}

impl SlotEnergy {
    pub fn total(&self, with_surcharge: bool) -> f64 {
        if with_surcharge {
            self.base + self.surcharge
        } else {
            self.base
        }
    }
}

/// UAV energy per slot under `scheme`.
pub fn slot_energy(scheme: Scheme, cfg: &ScenarioConfig) -> SlotEnergy {
    let p = &cfg.rotorcraft;
    let t = &cfg.traffic;
    let ph = hover_power(p);
    match scheme {
        Scheme::Suc => SlotEnergy { base: (ph + p.comm_power) * t.slot_duration, surcharge: 0.0 },
        Scheme::Urdc => {
            let pt = propulsion_power(p, cfg.kinematics.speed);
            let base = pt * t.travel_time + (ph + p.comm_power) * t.tx_duration;
            let d = segment_for_travel_time(&cfg.kinematics, t.travel_time);
            SlotEnergy { base, surcharge: acceleration_surcharge(p, &cfg.kinematics, d, t.travel_time) }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Viewpoint {
    Uav,
    Device,
}

/// Bits delivered per joule. `capacity` is the outage capacity in bits/s; the UAV view
/// divides a slot's worth of bits by the slot energy, the device view by the radiated
/// energy.
pub fn energy_efficiency(
    scheme: Scheme,
    viewpoint: Viewpoint,
    capacity: f64,
    cfg: &ScenarioConfig,
    with_surcharge: bool,
) -> f64 {
    let t = &cfg.traffic;
    match viewpoint {
        Viewpoint::Uav => capacity * t.slot_duration / slot_energy(scheme, cfg).total(with_surcharge),
        Viewpoint::Device => match scheme {
            Scheme::Urdc => capacity * t.slot_duration / (cfg.channel.tx_power * t.tx_duration),
            Scheme::Suc => capacity / cfg.channel.tx_power,
        },
    }
}

/// Speed minimizing propulsion power on a grid of step `step` over `[0, v_max]`.
pub fn optimal_speed(p: &RotorcraftParams, v_max: f64, step: f64) -> f64 {
    let n = (v_max / step).round() as usize;
    (0..=n)
        .map(|i| i as f64 * step)
        .min_by(|a, b| propulsion_power(p, *a).total_cmp(&propulsion_power(p, *b)))
        .unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hover_values() {
        let p = ScenarioConfig::baseline().rotorcraft;
        let (p0, pi) = blade_and_induced_power(&p);
        assert!((p0 - 580.65).abs() < 0.05, "{p0}");
        assert!((pi - 790.67).abs() < 0.05, "{pi}");
        assert_eq!(propulsion_power(&p, 0.0), p0 + pi);
    }

    #[test]
    fn scaling_laws() {
        let mut p = ScenarioConfig::baseline().rotorcraft;
        let (_, pi) = blade_and_induced_power(&p);
        p.weight *= 4.0;
        assert!((blade_and_induced_power(&p).1 / pi - 8.0).abs() < 1e-12);
        p.profile_drag = 0.0;
        assert_eq!(blade_and_induced_power(&p).0, 0.0);
    }

    #[test]
    fn surcharge_vanishes_without_ramps() {
        let cfg = ScenarioConfig::baseline();
        let mut kin = cfg.kinematics;
        kin.accel = 1e9;
        kin.decel = 1e9;
        let s = acceleration_surcharge(&cfg.rotorcraft, &kin, 100.0, 100.0 / kin.speed);
        assert!(s.abs() < 1e-3, "{s}");
    }

    #[test]
    fn schemes_coincide_without_travel() {
        let mut cfg = ScenarioConfig::baseline();
        cfg.traffic.travel_time = 0.0;
        cfg.traffic.tx_duration = cfg.traffic.slot_duration;
        let a = slot_energy(Scheme::Urdc, &cfg).base;
        let b = slot_energy(Scheme::Suc, &cfg).base;
        assert!((a - b).abs() < 1e-9);
    }
}
