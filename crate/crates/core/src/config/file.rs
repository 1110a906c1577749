//! TOML scenario files.
//!
//! Every section and key is optional and falls back to the baseline scenario, but unknown
//! keys are rejected. Units are spelled out in the key names (`_m`, `_dbm`, `_dbi`, ...).
//!
//! ```toml
//! environment = "urban"
//!
//! [geometry]
//! altitude_m = 100.0
//!
//! [traffic]
//! packet_bits = 2e6
//! ```
//!
//! Timing: with `timing_source = "explicit"` (the default) the slot and transmission
//! durations are read from `slot_s` and `tx_s` and `travel_s` defaults to their difference.
//! With `timing_source = "kinematics"` the travel time is derived from the kinematics and
//! the mean trajectory segment of `round(N)` devices, then `tx = tx_to_travel_ratio * travel`
//! and `slot = travel + tx`; the explicit duration keys must then be absent.

use super::*;
use crate::geometry;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default = "default_environment")]
    pub environment: Environment,
    #[serde(default)]
    pub geometry: GeometrySection,
    #[serde(default)]
    pub channel: ChannelSection,
    #[serde(default)]
    pub antenna: AntennaSection,
    #[serde(default)]
    pub traffic: TrafficSection,
    #[serde(default)]
    pub kinematics: KinematicsSection,
    #[serde(default)]
    pub rotorcraft: RotorcraftSection,
}

fn default_environment() -> Environment {
    Environment::Suburban
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometrySection {
    pub cell_radius_m: f64,
    pub altitude_m: f64,
    pub device_intensity_per_km2: f64,
    pub offset_sd_m: f64,
    pub sim_area_km2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelSection {
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub m_los: u32,
    pub m_nlos: u32,
    pub noise_dbm: f64,
    pub tx_power_dbm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AntennaSection {
    pub device_main_dbi: f64,
    pub device_side_dbi: f64,
    pub uav_main_dbi: f64,
    pub uav_side_dbi: f64,
    pub device_beamwidth_deg: f64,
    pub uav_beamwidth_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrafficSection {
    pub packet_bits: f64,
    pub arrival_prob: f64,
    pub bandwidth_hz: f64,
    pub rate_penalty: f64,
    pub timing_source: TimingSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slot_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tx_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub travel_s: Option<f64>,
    pub tx_to_travel_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimingSource {
    #[default]
    Explicit,
    Kinematics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KinematicsSection {
    pub speed_mps: f64,
    pub accel_mps2: f64,
    pub decel_mps2: f64,
    pub travel_formula: TravelTimeFormula,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RotorcraftSection {
    pub weight_n: f64,
    pub air_density_kgm3: f64,
    pub rotor_radius_m: f64,
    pub disc_area_m2: f64,
    pub tip_speed_mps: f64,
    pub induced_velocity_mps: f64,
    pub fuselage_drag_ratio: f64,
    pub solidity: f64,
    pub profile_drag: f64,
    pub angular_velocity_radps: f64,
    pub induced_correction: f64,
    pub comm_power_w: f64,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        ScenarioFile::from_config(&ScenarioConfig::baseline())
    }
}

macro_rules! section_default {
    ($t:ty, $field:ident) => {
        impl Default for $t {
            fn default() -> Self {
                ScenarioFile::from_config(&ScenarioConfig::baseline()).$field
            }
        }
    };
}
section_default!(GeometrySection, geometry);
section_default!(ChannelSection, channel);
section_default!(AntennaSection, antenna);
section_default!(KinematicsSection, kinematics);
section_default!(RotorcraftSection, rotorcraft);

impl Default for TrafficSection {
    fn default() -> Self {
        let b = ScenarioConfig::baseline().traffic;
        TrafficSection {
            packet_bits: b.packet_bits,
            arrival_prob: b.arrival_prob,
            bandwidth_hz: b.bandwidth,
            rate_penalty: b.rate_penalty,
            timing_source: TimingSource::Explicit,
            slot_s: None,
            tx_s: None,
            travel_s: None,
            tx_to_travel_ratio: 1.0,
        }
    }
}

impl ScenarioFile {
    /// Full, explicit file representation of a resolved scenario.
    pub fn from_config(c: &ScenarioConfig) -> Self {
        ScenarioFile {
            environment: c.environment.environment,
            geometry: GeometrySection {
                cell_radius_m: c.geometry.cell_radius,
                altitude_m: c.geometry.altitude,
                device_intensity_per_km2: c.geometry.device_intensity * 1e6,
                offset_sd_m: c.geometry.offset_sd,
                sim_area_km2: c.geometry.sim_area / 1e6,
            },
            channel: ChannelSection {
                alpha_los: c.channel.alpha_los,
                alpha_nlos: c.channel.alpha_nlos,
                m_los: c.channel.m_los,
                m_nlos: c.channel.m_nlos,
                noise_dbm: crate::watts_to_dbm(c.channel.noise_power),
                tx_power_dbm: crate::watts_to_dbm(c.channel.tx_power),
            },
            antenna: AntennaSection {
                device_main_dbi: crate::linear_to_db(c.antenna.device_main),
                device_side_dbi: crate::linear_to_db(c.antenna.device_side),
                uav_main_dbi: crate::linear_to_db(c.antenna.uav_main),
                uav_side_dbi: crate::linear_to_db(c.antenna.uav_side),
                device_beamwidth_deg: c.antenna.device_beamwidth.to_degrees(),
                uav_beamwidth_deg: c.antenna.uav_beamwidth.to_degrees(),
            },
            traffic: TrafficSection {
                packet_bits: c.traffic.packet_bits,
                arrival_prob: c.traffic.arrival_prob,
                bandwidth_hz: c.traffic.bandwidth,
                rate_penalty: c.traffic.rate_penalty,
                timing_source: TimingSource::Explicit,
                slot_s: Some(c.traffic.slot_duration),
                tx_s: Some(c.traffic.tx_duration),
                travel_s: Some(c.traffic.travel_time),
                tx_to_travel_ratio: 1.0,
            },
            kinematics: KinematicsSection {
                speed_mps: c.kinematics.speed,
                accel_mps2: c.kinematics.accel,
                decel_mps2: c.kinematics.decel,
                travel_formula: c.kinematics.formula,
            },
            rotorcraft: RotorcraftSection {
                weight_n: c.rotorcraft.weight,
                air_density_kgm3: c.rotorcraft.air_density,
                rotor_radius_m: c.rotorcraft.rotor_radius,
                disc_area_m2: c.rotorcraft.disc_area,
                tip_speed_mps: c.rotorcraft.tip_speed,
                induced_velocity_mps: c.rotorcraft.induced_velocity,
                fuselage_drag_ratio: c.rotorcraft.fuselage_drag_ratio,
                solidity: c.rotorcraft.solidity,
                profile_drag: c.rotorcraft.profile_drag,
                angular_velocity_radps: c.rotorcraft.angular_velocity,
                induced_correction: c.rotorcraft.induced_correction,
                comm_power_w: c.rotorcraft.comm_power,
            },
        }
    }

    /// Convert to SI and validate.
    pub fn resolve(&self) -> Result<ScenarioConfig> {
        let g = &self.geometry;
        let geometry = GeometryConfig {
            cell_radius: g.cell_radius_m,
            altitude: g.altitude_m,
            device_intensity: g.device_intensity_per_km2 * 1e-6,
            offset_sd: g.offset_sd_m,
            sim_area: g.sim_area_km2 * 1e6,
        };
        let k = &self.kinematics;
        let kinematics =
            KinematicsConfig { speed: k.speed_mps, accel: k.accel_mps2, decel: k.decel_mps2, formula: k.travel_formula };
        let t = &self.traffic;
        let (slot, tx, travel) = resolve_timing(t, &geometry, &kinematics)?;
        let c = &self.channel;
        let a = &self.antenna;
        let r = &self.rotorcraft;
        let cfg = ScenarioConfig {
            environment: self.environment.profile(),
            geometry,
            channel: ChannelConfig {
                alpha_los: c.alpha_los,
                alpha_nlos: c.alpha_nlos,
                m_los: c.m_los,
                m_nlos: c.m_nlos,
                noise_power: crate::dbm_to_watts(c.noise_dbm),
                tx_power: crate::dbm_to_watts(c.tx_power_dbm),
            },
            antenna: AntennaConfig {
                device_main: crate::db_to_linear(a.device_main_dbi),
                device_side: crate::db_to_linear(a.device_side_dbi),
                uav_main: crate::db_to_linear(a.uav_main_dbi),
                uav_side: crate::db_to_linear(a.uav_side_dbi),
                device_beamwidth: a.device_beamwidth_deg.to_radians(),
                uav_beamwidth: a.uav_beamwidth_deg.to_radians(),
            },
            traffic: TrafficTimingConfig {
                packet_bits: t.packet_bits,
                arrival_prob: t.arrival_prob,
                bandwidth: t.bandwidth_hz,
                rate_penalty: t.rate_penalty,
                slot_duration: slot,
                tx_duration: tx,
                travel_time: travel,
            },
            kinematics,
            rotorcraft: RotorcraftParams {
                weight: r.weight_n,
                air_density: r.air_density_kgm3,
                rotor_radius: r.rotor_radius_m,
                disc_area: r.disc_area_m2,
                tip_speed: r.tip_speed_mps,
                induced_velocity: r.induced_velocity_mps,
                fuselage_drag_ratio: r.fuselage_drag_ratio,
                solidity: r.solidity,
                profile_drag: r.profile_drag,
                angular_velocity: r.angular_velocity_radps,
                induced_correction: r.induced_correction,
                comm_power: r.comm_power_w,
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }
}

fn resolve_timing(t: &TrafficSection, g: &GeometryConfig, k: &KinematicsConfig) -> Result<(f64, f64, f64)> {
    match t.timing_source {
        TimingSource::Explicit => {
            let b = ScenarioConfig::baseline().traffic;
            let slot = t.slot_s.unwrap_or(b.slot_duration);
            let tx = t.tx_s.unwrap_or(b.tx_duration);
            let travel = match (t.travel_s, t.slot_s, t.tx_s) {
                (Some(v), _, _) => v,
                (None, None, None) => b.travel_time,
                _ => slot - tx,
            };
            Ok((slot, tx, travel))
        }
        TimingSource::Kinematics => {
            if t.slot_s.is_some() || t.tx_s.is_some() || t.travel_s.is_some() {
                return Err(Error::Config(
                    "timing_source = \"kinematics\" derives slot_s, tx_s and travel_s; remove them".into(),
                ));
            }
            if !(t.tx_to_travel_ratio > 0.0 && t.tx_to_travel_ratio.is_finite()) {
                return Err(Error::Config(format!(
                    "tx_to_travel_ratio must be positive, got {}",
                    t.tx_to_travel_ratio
                )));
            }
            k.validate()?;
            let n = g.mean_devices().round();
            if !(n >= 1.0) {
                return Err(Error::Config("cannot derive travel time: fewer than one device per cell".into()));
            }
            let d = geometry::avg_segment_jensen(n as usize, g.cell_radius)?;
            let travel = geometry::travel_time(d, k);
            let tx = t.tx_to_travel_ratio * travel;
            Ok((travel + tx, tx, travel))
        }
    }
}

/// Parse a scenario document. Unknown keys are errors.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    parse_with_overrides(text, &[])
}

/// Parse a scenario document after applying `section.key=value` overrides.
pub fn parse_with_overrides(text: &str, overrides: &[String]) -> Result<ScenarioConfig> {
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    for ov in overrides {
        apply_override(&mut table, ov)?;
    }
    let file: ScenarioFile =
        toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    file.resolve()
}

pub fn load_scenario(path: &Path, overrides: &[String]) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_with_overrides(&text, overrides)
}

/// Apply one `a.b.c=value` override. The value is read as a TOML literal when it parses
/// as one and as a bare string otherwise, so `environment=urban` works unquoted.
pub fn apply_override(table: &mut toml::Table, spec: &str) -> Result<()> {
    let (key, raw) =
        spec.split_once('=').ok_or_else(|| Error::Config(format!("override `{spec}` is not of the form key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("override key `{key}` is malformed")));
    }
    let mut cur = table;
    for p in &parts[..parts.len() - 1] {
        let entry = cur.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override key `{key}`: `{p}` is not a section")))?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_baseline() {
        let c = parse_scenario("").unwrap();
        let b = ScenarioConfig::baseline();
        assert_eq!(c.traffic, b.traffic);
        assert_eq!(c.environment, b.environment);
        assert!((c.channel.noise_power - b.channel.noise_power).abs() < 1e-25);
        assert!((c.antenna.device_main - b.antenna.device_main).abs() < 1e-12);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(parse_scenario("colour = 3").is_err());
        assert!(parse_scenario("[geometry]\nradius = 3").is_err());
        assert!(parse_scenario("[nonsense]\n").is_err());
    }

    #[test]
    fn overrides_apply() {
        let c = parse_with_overrides("", &["geometry.altitude_m=100".into(), "environment=urban".into()]).unwrap();
        assert_eq!(c.geometry.altitude, 100.0);
        assert_eq!(c.environment.environment, Environment::Urban);
        assert!(parse_with_overrides("", &["geometry.bogus=1".into()]).is_err());
        assert!(parse_with_overrides("", &["nokey".into()]).is_err());
    }

    #[test]
    fn timing_from_kinematics() {
        let c = parse_scenario("[traffic]\ntiming_source = \"kinematics\"\n").unwrap();
        assert!((c.traffic.travel_time - 6.4365).abs() / 6.4365 < 5e-3, "{}", c.traffic.travel_time);
        assert!((c.traffic.tx_duration + c.traffic.travel_time - c.traffic.slot_duration).abs() < 1e-12);
        assert!(parse_scenario("[traffic]\ntiming_source = \"kinematics\"\nslot_s = 10.0\n").is_err());
        let c = parse_scenario("[traffic]\nslot_s = 10.0\ntx_s = 4.0\n").unwrap();
        assert_eq!(c.traffic.travel_time, 6.0);
    }

    #[test]
    fn round_trip() {
        let b = ScenarioConfig::baseline();
        let s = ScenarioFile::from_config(&b).to_toml().unwrap();
        let c = parse_scenario(&s).unwrap();
        assert!((c.geometry.device_intensity - b.geometry.device_intensity).abs() < 1e-18);
        assert!((c.antenna.uav_beamwidth - b.antenna.uav_beamwidth).abs() < 1e-14);
        assert_eq!(c.traffic, b.traffic);
    }
}
