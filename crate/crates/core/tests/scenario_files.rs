//! The shipped scenario files parse and mean what they say.

use std::path::PathBuf;
use uplink_core::config::file::{load_scenario, parse_scenario};
use uplink_core::{Environment, ScenarioConfig};

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

#[test]
fn baseline_file_is_the_baseline() {
    let cfg = load_scenario(&scenario("baseline.toml"), &[]).unwrap();
    assert_eq!(cfg, ScenarioConfig::baseline());
}

#[test]
fn high_altitude_only_moves_the_uav() {
    let cfg = load_scenario(&scenario("high-altitude.toml"), &[]).unwrap();
    assert_eq!(cfg, ScenarioConfig::baseline().with_altitude(100.0));
}

#[test]
fn kinematic_timing_reproduces_the_reference_durations() {
    let cfg = load_scenario(&scenario("urban-kinematic.toml"), &[]).unwrap();
    assert_eq!(cfg.environment.environment, Environment::Urban);
    assert!((cfg.traffic.travel_time - 6.4365).abs() < 0.005 * 6.4365);
    assert!((cfg.traffic.slot_duration - 2.0 * cfg.traffic.travel_time).abs() < 1e-12);
}

#[test]
fn overrides_apply_and_bad_ones_fail() {
    let path = scenario("baseline.toml");
    let cfg = load_scenario(&path, &["traffic.packet_bits=2e6".into(), "environment=\"dense-urban\"".into()]).unwrap();
    assert_eq!(cfg.traffic.packet_bits, 2e6);
    assert_eq!(cfg.environment.environment, Environment::DenseUrban);
    assert!(load_scenario(&path, &["traffic.no_such_key=1".into()]).is_err());
    assert!(load_scenario(&path, &["channel.m_los=0".into()]).is_err());
    assert!(parse_scenario("[geometry]\naltitude_m = \"high\"\n").is_err());
}
