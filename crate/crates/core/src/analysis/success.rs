//! Transmission success probability.

use super::laplace::InterferenceField;
use super::{par_map, ServingGeometry};
use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::{LinkState, Scheme};
use serde::{Deserialize, Serialize};

/// `m (m!)^(-1/m)`, the Alzer constant for a Gamma tail of integer shape `m`.
pub fn alzer_constant(m: u32) -> f64 {
    let ln_fact: f64 = (2..=m).map(|k| (k as f64).ln()).sum();
    m as f64 * (-ln_fact / m as f64).exp()
}

/// Binomial coefficient as f64.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c.round()
}

/// Laplace argument of the `n`-th Alzer term for a serving link at horizontal distance
/// `r_x`: `g n theta d^alpha / (P G_serving)`.
pub fn alzer_argument(cfg: &ScenarioConfig, theta: f64, r_x: f64, state: LinkState, n: u32) -> f64 {
    let ch = &cfg.channel;
    let h = cfg.geometry.altitude;
    let g = alzer_constant(ch.shape(state));
    let d2 = r_x * r_x + h * h;
    g * n as f64 * theta * d2.powf(0.5 * ch.exponent(state)) / (ch.tx_power * cfg.antenna.serving_gain())
}

/// Product of noise and interference factors `exp(-s σ²) L_IL(s) L_IN(s)` together with
/// its propagated quadrature error.
pub fn noise_interference_factor(
    field: &InterferenceField,
    s: f64,
    quad: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let l = field.laplace(s, LinkState::Los, quad)?;
    let n = field.laplace(s, LinkState::Nlos, quad)?;
    let noise = (-s * field.channel.noise_power).exp();
    Ok((noise * l.value * n.value, noise * (l.abs_error * n.value + n.abs_error * l.value)))
}

/// Success probability of a serving link in state `state` at horizontal distance `r_x`,
/// `Σ_{n=1}^{m} (-1)^{n+1} C(m,n) exp(-s_n σ²) L_IL(s_n) L_IN(s_n)`.
pub fn conditional_success(
    cfg: &ScenarioConfig,
    field: &InterferenceField,
    theta: f64,
    r_x: f64,
    state: LinkState,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::InvalidInput(format!("threshold must be positive and finite, got {theta}")));
    }
    let m = cfg.channel.shape(state);
    let mut acc = 0.0;
    for n in 1..=m {
        let s = alzer_argument(cfg, theta, r_x, state, n);
        let (t, _) = noise_interference_factor(field, s, quad)?;
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        acc += sign * binomial(m as u64, n as u64) * t;
    }
    Ok(acc.clamp(0.0, 1.0))
}

/// LOS-mixed success at serving distance `r_x`.
pub fn link_success(
    cfg: &ScenarioConfig,
    field: &InterferenceField,
    theta: f64,
    r_x: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let p = field.los.p_los(r_x);
    let sl = conditional_success(cfg, field, theta, r_x, LinkState::Los, quad)?;
    let sn = conditional_success(cfg, field, theta, r_x, LinkState::Nlos, quad)?;
    Ok(p * sl + (1.0 - p) * sn)
}

fn average(cfg: &ScenarioConfig, field: &InterferenceField, theta: f64, geo: &ServingGeometry, quad: &QuadratureSpec) -> Result<Vec<f64>> {
    par_map(&geo.nodes, |&(r, _)| link_success(cfg, field, theta, r, quad)).into_iter().collect()
}

/// Device-centric success probability, averaged over the Gaussian serving offset.
pub fn success_probability_urdc(cfg: &ScenarioConfig, theta: f64, quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    let field = InterferenceField::for_scheme(cfg, Scheme::Urdc);
    let geo = ServingGeometry::gaussian_offset(cfg.geometry.offset_sd, quad.offset_nodes);
    let vals = average(cfg, &field, theta, &geo, quad)?;
    Ok(geo.nodes.iter().zip(&vals).map(|((_, w), v)| w * v).sum::<f64>().clamp(0.0, 1.0))
}

/// UAV-centric success probability of a device at fixed distance `r_x` from the cell centre.
pub fn success_probability_suc(cfg: &ScenarioConfig, theta: f64, r_x: f64, quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    if !(r_x >= 0.0) {
        return Err(Error::InvalidInput(format!("r_x must be >= 0, got {r_x}")));
    }
    let field = InterferenceField::for_scheme(cfg, Scheme::Suc);
    link_success(cfg, &field, theta, r_x, quad)
}

/// Mean and population standard deviation over device positions in the cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub mean: f64,
    pub sd: f64,
    pub positions: usize,
}

/// UAV-centric success probability across a deterministic low-discrepancy set of
/// `n_positions` device positions in the cell.
pub fn success_probability_suc_cell_stats(
    cfg: &ScenarioConfig,
    theta: f64,
    quad: &QuadratureSpec,
    n_positions: usize,
) -> Result<CellStats> {
    quad.validate()?;
    if n_positions < 100 {
        return Err(Error::InvalidInput(format!("need at least 100 positions, got {n_positions}")));
    }
    let field = InterferenceField::for_scheme(cfg, Scheme::Suc);
    let geo = ServingGeometry::hexagon_cell(cfg.geometry.cell_radius, n_positions);
    let vals = average(cfg, &field, theta, &geo, quad)?;
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok(CellStats { mean, sd: var.sqrt(), positions: n_positions })
}

/// Scheme-level success probability: the offset average for `Urdc`, the cell mean over
/// `quad.cell_positions` positions for `Suc`.
pub fn success_probability(cfg: &ScenarioConfig, scheme: Scheme, theta: f64, quad: &QuadratureSpec) -> Result<f64> {
    match scheme {
        Scheme::Urdc => success_probability_urdc(cfg, theta, quad),
        Scheme::Suc => Ok(success_probability_suc_cell_stats(cfg, theta, quad, quad.cell_positions.max(100))?.mean),
    }
}

/// Scheme-level success probability with an error estimate: the change from halving the
/// offset quadrature for `Urdc`, the standard error of the cell mean for `Suc`.
pub fn success_with_error(cfg: &ScenarioConfig, scheme: Scheme, theta: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    match scheme {
        Scheme::Urdc => {
            let full = success_probability_urdc(cfg, theta, quad)?;
            let mut coarse = *quad;
            coarse.offset_nodes = (quad.offset_nodes / 2).max(4);
            let half = success_probability_urdc(cfg, theta, &coarse)?;
            Ok((full, (full - half).abs()))
        }
        Scheme::Suc => {
            let st = success_probability_suc_cell_stats(cfg, theta, quad, quad.cell_positions.max(100))?;
            Ok((st.mean, st.sd / (st.positions as f64).sqrt()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        assert_eq!(alzer_constant(1), 1.0);
        assert!((alzer_constant(3) - 3.0 * 6f64.powf(-1.0 / 3.0)).abs() < 1e-14);
        assert_eq!(binomial(6, 3), 20.0);
        assert_eq!(binomial(3, 5), 0.0);
    }

    #[test]
    fn tiny_threshold_gives_one() {
        let cfg = ScenarioConfig::baseline();
        let q = QuadratureSpec::fast();
        let v = success_probability_urdc(&cfg, 1e-12, &q).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
        let v = success_probability_suc(&cfg, 1e-12, 0.0, &q).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn rejects_bad_threshold() {
        let cfg = ScenarioConfig::baseline();
        assert!(success_probability_urdc(&cfg, 0.0, &QuadratureSpec::fast()).is_err());
    }
}
