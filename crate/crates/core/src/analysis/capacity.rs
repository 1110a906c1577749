//! Outage capacity.

use super::success::success_probability;
use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::quadrature::QuadratureSpec;
use crate::Scheme;

/// Fraction of the slot during which a device transmits under `scheme`.
pub fn duty_factor(cfg: &ScenarioConfig, scheme: Scheme) -> f64 {
    match scheme {
        Scheme::Urdc => cfg.traffic.tx_duration / cfg.traffic.slot_duration,
        Scheme::Suc => 1.0,
    }
}

/// Capacity (bits/s) from a known success probability.
pub fn capacity_from_success(cfg: &ScenarioConfig, scheme: Scheme, theta: f64, success: f64) -> f64 {
    success * duty_factor(cfg, scheme) * cfg.traffic.rate_penalty * cfg.traffic.bandwidth * theta.ln_1p()
        / std::f64::consts::LN_2
}

/// Success probability times duty factor times `zeta W log2(1 + theta)`, in bits/s. The
/// UAV-centric scheme uses the cell-mean success probability.
pub fn outage_capacity(cfg: &ScenarioConfig, scheme: Scheme, theta: f64, quad: &QuadratureSpec) -> Result<f64> {
    let s = success_probability(cfg, scheme, theta, quad)?;
    Ok(capacity_from_success(cfg, scheme, theta, s))
}
