//! Browser bindings: a handful of closed-form curves, cheap enough to recompute on every
//! slider move. Everything is returned as flat `Float64Array`s; the page does the plotting.

use uplink_core::analysis::success_probability;
use uplink_core::config::file::parse_with_overrides;
use uplink_core::energy::{hover_power, optimal_speed, propulsion_power};
use uplink_core::queueing::{solve_queue, QueueOutcome};
use uplink_core::quadrature::QuadratureSpec;
use uplink_core::{db_to_linear, ScenarioConfig, Scheme};
use wasm_bindgen::prelude::*;

fn err(e: uplink_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn scenario(env: &str, altitude: f64) -> Result<ScenarioConfig, JsError> {
    let ov = vec![format!("environment={env}"), format!("geometry.altitude_m={altitude}")];
    parse_with_overrides("", &ov).map_err(err)
}

/// Looser than the batch default so a slider drag stays responsive; the curves agree to
/// about three digits.
fn demo_quad() -> QuadratureSpec {
    QuadratureSpec { rel_tol: 1e-5, offset_nodes: 24, cell_positions: 60, ..QuadratureSpec::default() }
}

fn scheme(s: &str) -> Result<Scheme, JsError> {
    s.parse().map_err(|_| JsError::new(&format!("unknown scheme `{s}`")))
}

fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, JsError> {
    if !(step > 0.0) || stop < start || (stop - start) / step > 10_000.0 {
        return Err(JsError::new("bad grid"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

/// Success probability for thresholds `start..=stop` dB. Returns `[theta_db, p, ...]`.
#[wasm_bindgen]
pub fn success_curve(env: &str, scheme_name: &str, altitude: f64, start: f64, stop: f64, step: f64) -> Result<Vec<f64>, JsError> {
    let cfg = scenario(env, altitude)?;
    let sc = scheme(scheme_name)?;
    let quad = demo_quad();
    let mut out = Vec::new();
    for db in grid(start, stop, step)? {
        out.push(db);
        out.push(success_probability(&cfg, sc, db_to_linear(db), &quad).map_err(err)?);
    }
    Ok(out)
}

/// Propulsion power over speed `0..=v_max`. Returns `[v, watts, ...]`.
#[wasm_bindgen]
pub fn propulsion_curve(v_max: f64, step: f64) -> Result<Vec<f64>, JsError> {
    let p = scenario("suburban", 30.0)?.rotorcraft;
    let mut out = Vec::new();
    for v in grid(0.0, v_max, step)? {
        out.push(v);
        out.push(propulsion_power(&p, v));
    }
    Ok(out)
}

/// `[hover power, power-minimising speed]` for the default rotorcraft.
#[wasm_bindgen]
pub fn propulsion_summary() -> Result<Vec<f64>, JsError> {
    let p = scenario("suburban", 30.0)?.rotorcraft;
    Ok(vec![hover_power(&p), optimal_speed(&p, 60.0, 0.01)])
}

/// Mean queueing delay in slots against packet size in Mbit. Returns
/// `[mbit, success, delay, ...]`; delay is NaN where the queue is unstable.
#[wasm_bindgen]
pub fn delay_curve(env: &str, scheme_name: &str, altitude: f64, max_mbit: f64) -> Result<Vec<f64>, JsError> {
    let base = scenario(env, altitude)?;
    let sc = scheme(scheme_name)?;
    let quad = demo_quad();
    let mut out = Vec::new();
    for mbit in grid(1.0, max_mbit, 1.0)? {
        let c = base.with_packet_bits(mbit * 1e6);
        let d = c.derive().map_err(err)?;
        let s = success_probability(&c, sc, c.threshold(sc).map_err(err)?, &quad).map_err(err)?;
        let w = match solve_queue(d.queue_devices, c.traffic.arrival_prob, s).map_err(err)? {
            QueueOutcome::Stable { q_w_slots, .. } => q_w_slots,
            QueueOutcome::Unstable => f64::NAN,
        };
        out.extend([mbit, s, w]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_have_expected_shape() {
        let s = success_curve("suburban", "urdc", 30.0, 0.0, 20.0, 10.0).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s[1] >= s[3] && s[3] >= s[5]);
        let p = propulsion_curve(40.0, 1.0).unwrap();
        assert_eq!(p.len(), 82);
        let sum = propulsion_summary().unwrap();
        assert!((sum[0] - 1371.3).abs() < 0.1);
        let d = delay_curve("suburban", "urdc", 30.0, 3.0).unwrap();
        assert_eq!(d.len(), 9);
        assert!((d[2] - 149.5).abs() < 1.0);
    }

    #[test]
    fn demo_quadrature_tracks_the_default() {
        for env in ["urban", "high-rise-urban"] {
            let cfg = scenario(env, 30.0).unwrap();
            for sc in [Scheme::Urdc, Scheme::Suc] {
                for db in [0.0, 20.0] {
                    let th = db_to_linear(db);
                    let a = success_probability(&cfg, sc, th, &QuadratureSpec::default()).unwrap();
                    let b = success_probability(&cfg, sc, th, &demo_quad()).unwrap();
                    assert!((a - b).abs() < 5e-3, "{env} {sc} {db}: {a} vs {b}");
                }
            }
        }
    }
}
