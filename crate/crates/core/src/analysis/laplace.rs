//! Laplace transform of the aggregate LOS and NLOS interference.

use crate::channel::{GainMixture, LosModel};
use crate::config::{ChannelConfig, ScenarioConfig};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, Estimate, QuadratureSpec};
use crate::{LinkState, Scheme};
use std::f64::consts::PI;

/// Poisson approximation of the interferers seen by a receiving UAV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceField {
    /// Interferer intensity (per m²).
    pub intensity: f64,
    /// No interferer closer than this horizontal distance (m).
    pub exclusion_radius: f64,
    pub mix: GainMixture,
    pub los: LosModel,
    pub channel: ChannelConfig,
}

impl InterferenceField {
    /// Field seen under `scheme`: intensity scaled by the transmit duty factor and an
    /// exclusion disc of `R/2` for the device-centric scheme, full intensity and `R` for
    /// the UAV-centric scheme.
    pub fn for_scheme(cfg: &ScenarioConfig, scheme: Scheme) -> Self {
        let r = cfg.geometry.cell_radius;
        InterferenceField {
            intensity: cfg.interferer_intensity(scheme),
            exclusion_radius: match scheme {
                Scheme::Urdc => 0.5 * r,
                Scheme::Suc => r,
            },
            mix: GainMixture::from_antenna(&cfg.antenna),
            los: LosModel::new(&cfg.environment, cfg.geometry.altitude),
            channel: cfg.channel,
        }
    }

    /// `E[exp(-s I_k)]` for interference component `k`. The error is the propagated
    /// quadrature error of the exponent.
    pub fn laplace(&self, s: f64, component: LinkState, quad: &QuadratureSpec) -> Result<Estimate> {
        laplace_interference(self, s, component, quad)
    }

    /// `-ln L(s)`, finite where `L(s)` itself underflows.
    pub fn laplace_exponent(&self, s: f64, component: LinkState, quad: &QuadratureSpec) -> Result<Estimate> {
        laplace_exponent(self, s, component, quad)
    }
}

/// Laplace transform of one interference component.
pub fn laplace_interference(
    field: &InterferenceField,
    s: f64,
    component: LinkState,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let e = laplace_exponent(field, s, component, quad)?;
    let value = (-e.value).exp();
    Ok(Estimate { value, abs_error: value * e.abs_error, evaluations: e.evaluations })
}

/// Minus the log of `exp(-2πλ Σ_ε P_ε ∫_excl^∞ w(r) (1 - (1 + s P G_ε d(r)^-α / m)^-m) r dr)` with `w` the
/// LOS or NLOS probability of the interfering link and `d(r) = sqrt(r² + h²)`.
pub fn laplace_exponent(
    field: &InterferenceField,
    s: f64,
    component: LinkState,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    if !(s >= 0.0) {
        return Err(Error::InvalidInput(format!("Laplace argument must be >= 0, got {s}")));
    }
    if s == 0.0 || field.intensity == 0.0 {
        return Ok(Estimate { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    let alpha = field.channel.exponent(component);
    let m = field.channel.shape(component) as f64;
    let h2 = field.los.altitude * field.los.altitude;
    let coef: [(f64, f64); 4] = field.mix.entries.map(|(g, p)| (s * field.channel.tx_power * g / m, p));
    let integrand = |r: f64| {
        let p = field.los.p_los(r);
        let w = match component {
            LinkState::Los => p,
            LinkState::Nlos => 1.0 - p,
        };
        if w == 0.0 {
            return 0.0;
        }
        let pg = (r * r + h2).powf(-0.5 * alpha);
        let mut acc = 0.0;
        for &(c, pe) in &coef {
            // 1 - (1+x)^-m without cancellation for small x
            acc += pe * -(-m * (c * pg).ln_1p()).exp_m1();
        }
        w * acc * r
    };
    let est = integrate_semi_infinite(integrand, field.exclusion_radius, alpha, quad)?;
    let k = 2.0 * PI * field.intensity;
    Ok(Estimate { value: k * est.value, abs_error: k * est.abs_error, evaluations: est.evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> InterferenceField {
        InterferenceField::for_scheme(&ScenarioConfig::baseline(), Scheme::Urdc)
    }

    #[test]
    fn trivial_cases() {
        let q = QuadratureSpec::default();
        let f = field();
        assert_eq!(f.laplace(0.0, LinkState::Los, &q).unwrap().value, 1.0);
        let mut z = f;
        z.intensity = 0.0;
        assert_eq!(z.laplace(1e9, LinkState::Nlos, &q).unwrap().value, 1.0);
        assert!(f.laplace(-1.0, LinkState::Los, &q).is_err());
    }

    #[test]
    fn bounded_and_monotone() {
        let q = QuadratureSpec::default();
        let f = field();
        for c in LinkState::BOTH {
            let mut prev = 1.0;
            for k in 0..30 {
                let s = 10f64.powf(k as f64 * 0.5);
                let v = f.laplace(s, c, &q).unwrap().value;
                assert!(v > 0.0 && v <= 1.0);
                assert!(v <= prev + 1e-12, "{c:?} s={s}");
                prev = v;
            }
        }
    }
}
