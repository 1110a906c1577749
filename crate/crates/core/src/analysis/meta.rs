//! Meta distribution of the conditional success probability.
//!
//! Two ways to get the moments `M_b = E[S^b]`:
//!
//! * the binomial series in `Z_z = E[out^z]`, where `out` is the Alzer outage given the
//!   interference and `E` runs over interference and serving geometry;
//! * a direct average of `S(r)^b` over serving-geometry atoms, where `S(r)` is the
//!   LOS-state success probability at serving distance `r`.
//!
//! The series suffers cancellation in the alternating sums behind `Z_z`; every `Z_z`
//! carries an error bound and the series is declared non-convergent once that bound
//! swamps the requested accuracy. The CCDF is obtained by Gil-Pelaez inversion of the
//! imaginary moments.

use super::laplace::InterferenceField;
use super::success::{alzer_argument, binomial, conditional_success, noise_interference_factor};
use super::{par_map, ServingGeometry};
use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::{LinkState, Scheme};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cell::Cell;
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Coefficient convention of the generalized binomial series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorialConvention {
    /// `(b)_z / z!` with the falling factorial `b (b-1) ... (b-z+1)`.
    #[default]
    Falling,
    /// `b (b+1) ... (b+z-1) / z!`.
    Rising,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentPath {
    Series,
    Direct,
}

/// A complex moment with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub value: Complex64,
    /// Magnitude of the last series term kept (zero for the direct path).
    pub truncation_tail: f64,
    /// Bound on cancellation and quadrature error carried by the series.
    pub rounding_bound: f64,
    pub terms: usize,
    pub path: MomentPath,
}

/// CCDF value at one reliability level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetaDistribution {
    /// Reliability level `X`.
    pub x: f64,
    /// `raw` clamped to `[0, 1]`.
    pub value: f64,
    pub raw: f64,
    pub clamped: bool,
    pub path: MomentPath,
    /// Upper end of the Gil-Pelaez integral.
    pub t_max: f64,
}

/// Series terms whose error bound exceeds this are not computed.
const BOUND_STOP: f64 = 1e-3;
/// Largest acceptable accumulated error bound of a series moment.
const SERIES_TOL: f64 = 1e-6;
const TERM_TOL: f64 = 1e-9;
/// Gil-Pelaez upper limit is at most `max(200, GP_K / |ln X|)`.
const GP_K: f64 = 2000.0;
const GP_DECAY: f64 = 1e-6;
const GP_DECAY_PANELS: usize = 5;

struct SeriesTables {
    /// `Z_z` for `z = 0..=z_avail`.
    z: Vec<f64>,
    bound: Vec<f64>,
}

struct DirectAtoms {
    /// `(weight, ln S)`, `ln S = -inf` for a link that never succeeds.
    atoms: Vec<(f64, f64)>,
}

/// Precomputes what the moment and CCDF evaluations for one `(scenario, scheme, theta)`
/// share, so sweeping `b`, `t` or `X` does not redo the radial integrals.
pub struct MetaEngine {
    cfg: ScenarioConfig,
    scheme: Scheme,
    theta: f64,
    quad: QuadratureSpec,
    field: InterferenceField,
    pub convention: FactorialConvention,
    /// Cap on the series order.
    pub z_max: usize,
    series: OnceLock<SeriesTables>,
    direct: OnceLock<DirectAtoms>,
}

impl MetaEngine {
    pub fn new(cfg: &ScenarioConfig, scheme: Scheme, theta: f64, quad: &QuadratureSpec) -> Result<Self> {
        quad.validate()?;
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidInput(format!("threshold must be positive and finite, got {theta}")));
        }
        Ok(MetaEngine {
            cfg: *cfg,
            scheme,
            theta,
            quad: *quad,
            field: InterferenceField::for_scheme(cfg, scheme),
            convention: FactorialConvention::Falling,
            z_max: 200,
            series: OnceLock::new(),
            direct: OnceLock::new(),
        })
    }

    pub fn with_convention(mut self, c: FactorialConvention) -> Self {
        self.convention = c;
        self
    }

    fn geometry(&self) -> ServingGeometry {
        match self.scheme {
            Scheme::Urdc => ServingGeometry::gaussian_offset(self.cfg.geometry.offset_sd, self.quad.offset_nodes),
            Scheme::Suc => ServingGeometry::hexagon_cell(self.cfg.geometry.cell_radius, self.quad.cell_positions),
        }
    }

    fn atom_geometry(&self) -> ServingGeometry {
        match self.scheme {
            Scheme::Urdc => ServingGeometry::gaussian_offset_atoms(self.cfg.geometry.offset_sd, self.quad.meta_atoms),
            Scheme::Suc => ServingGeometry::hexagon_cell(self.cfg.geometry.cell_radius, self.quad.cell_positions),
        }
    }

    fn series(&self) -> Result<&SeriesTables> {
        if let Some(t) = self.series.get() {
            return Ok(t);
        }
        let geo = self.geometry();
        let per_node: Vec<Result<NodeSeries>> = par_map(&geo.nodes, |&(r, _)| {
            let p = self.field.los.p_los(r);
            let l = node_series(&self.cfg, &self.field, self.theta, r, LinkState::Los, &self.quad, self.z_max)?;
            let n = node_series(&self.cfg, &self.field, self.theta, r, LinkState::Nlos, &self.quad, self.z_max)?;
            Ok(NodeSeries { p, los: l, nlos: n })
        });
        let per_node: Vec<NodeSeries> = per_node.into_iter().collect::<Result<_>>()?;
        let avail =
            per_node.iter().map(|n| n.los.0.len().min(n.nlos.0.len())).min().unwrap_or(1).saturating_sub(1);
        let mut z = vec![0.0; avail + 1];
        let mut bound = vec![0.0; avail + 1];
        for (node, &(_, w)) in per_node.iter().zip(&geo.nodes) {
            for k in 0..=avail {
                z[k] += w * (node.p * node.los.0[k] + (1.0 - node.p) * node.nlos.0[k]);
                bound[k] += w * (node.p * node.los.1[k] + (1.0 - node.p) * node.nlos.1[k]);
            }
        }
        let _ = self.series.set(SeriesTables { z, bound });
        Ok(self.series.get().expect("just set"))
    }

    fn direct(&self) -> Result<&DirectAtoms> {
        if let Some(d) = self.direct.get() {
            return Ok(d);
        }
        let geo = self.atom_geometry();
        let vals: Vec<Result<[(f64, f64); 2]>> = par_map(&geo.nodes, |&(r, w)| {
            let p = self.field.los.p_los(r);
            let sl = conditional_success(&self.cfg, &self.field, self.theta, r, LinkState::Los, &self.quad)?;
            let sn = conditional_success(&self.cfg, &self.field, self.theta, r, LinkState::Nlos, &self.quad)?;
            Ok([(w * p, sl.ln()), (w * (1.0 - p), sn.ln())])
        });
        let mut atoms = Vec::with_capacity(2 * vals.len());
        for v in vals {
            for a in v? {
                if a.0 > 0.0 {
                    atoms.push(a);
                }
            }
        }
        let _ = self.direct.set(DirectAtoms { atoms });
        Ok(self.direct.get().expect("just set"))
    }

    /// Largest series order with a usable error bound.
    pub fn series_order(&self) -> Result<usize> {
        Ok(self.series()?.z.len() - 1)
    }

    /// `Z_z = E[out^z]` and its error bound.
    pub fn outage_moment(&self, z: usize) -> Result<(f64, f64)> {
        let t = self.series()?;
        match (t.z.get(z), t.bound.get(z)) {
            (Some(&v), Some(&b)) => Ok((v, b)),
            _ => Err(Error::SeriesNonConvergence { z_max: t.z.len() - 1, last_term: f64::NAN, rounding: f64::INFINITY }),
        }
    }

    /// `M_b` for complex order `b` by the binomial series.
    pub fn series_moment(&self, b: Complex64) -> Result<MomentEstimate> {
        let t = self.series()?;
        let mut coef = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(t.z[0], 0.0);
        let mut rounding = t.bound[0];
        let mut last = 0.0;
        for z in 1..t.z.len() {
            let zf = (z - 1) as f64;
            coef *= match self.convention {
                FactorialConvention::Falling => b - zf,
                FactorialConvention::Rising => b + zf,
            } / z as f64;
            if coef == Complex64::new(0.0, 0.0) {
                // integer order, falling factorial: the series terminates
                return Ok(MomentEstimate { value: sum, truncation_tail: 0.0, rounding_bound: rounding, terms: z, path: MomentPath::Series });
            }
            let sign = if z % 2 == 1 { -1.0 } else { 1.0 };
            let term = coef * (sign * t.z[z]);
            sum += term;
            rounding += coef.norm() * t.bound[z];
            last = term.norm();
            if rounding > SERIES_TOL {
                break;
            }
            if last < TERM_TOL * sum.norm() {
                return Ok(MomentEstimate { value: sum, truncation_tail: last, rounding_bound: rounding, terms: z + 1, path: MomentPath::Series });
            }
        }
        Err(Error::SeriesNonConvergence { z_max: t.z.len() - 1, last_term: last, rounding })
    }

    /// `M_b = E[S^b]` over the direct atoms.
    pub fn direct_moment(&self, b: Complex64) -> Result<MomentEstimate> {
        let d = self.direct()?;
        let mut sum = Complex64::new(0.0, 0.0);
        for &(w, ln_s) in &d.atoms {
            sum += w * atom_power(ln_s, b);
        }
        Ok(MomentEstimate { value: sum, truncation_tail: 0.0, rounding_bound: 0.0, terms: d.atoms.len(), path: MomentPath::Direct })
    }

    /// Integer moment, series first and direct average if the series cannot meet its
    /// error budget.
    pub fn moment(&self, b: u32) -> Result<MomentEstimate> {
        if b == 0 {
            return Ok(MomentEstimate { value: Complex64::new(1.0, 0.0), truncation_tail: 0.0, rounding_bound: 0.0, terms: 1, path: MomentPath::Series });
        }
        match self.series_moment(Complex64::new(b as f64, 0.0)) {
            Err(Error::SeriesNonConvergence { .. }) => self.direct_moment(Complex64::new(b as f64, 0.0)),
            r => r,
        }
    }

    /// `M_{jt}` by the series.
    pub fn imaginary_moment(&self, t: f64) -> Result<MomentEstimate> {
        if !(t >= 0.0) {
            return Err(Error::InvalidInput(format!("t must be >= 0, got {t}")));
        }
        if t == 0.0 {
            return Ok(MomentEstimate { value: Complex64::new(1.0, 0.0), truncation_tail: 0.0, rounding_bound: 0.0, terms: 1, path: MomentPath::Series });
        }
        self.series_moment(Complex64::new(0.0, t))
    }

    fn t_cap(x: f64) -> f64 {
        (GP_K / x.ln().abs()).max(200.0)
    }

    /// `P(S > X)` by Gil-Pelaez inversion, series moments if they hold up over the whole
    /// `t` range and direct atoms otherwise.
    pub fn ccdf(&self, x: f64) -> Result<MetaDistribution> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::InvalidInput(format!("reliability must lie in (0,1), got {x}")));
        }
        match self.ccdf_series(x) {
            Err(Error::SeriesNonConvergence { .. }) => self.ccdf_direct(x),
            r => r,
        }
    }

    /// Gil-Pelaez with numerically integrated series moments.
    pub fn ccdf_series(&self, x: f64) -> Result<MetaDistribution> {
        let c = x.ln();
        let cap = Self::t_cap(x);
        let width = (PI / c.abs()).clamp(1.0, 50.0);
        let failure: Cell<Option<Error>> = Cell::new(None);
        let integrand = |t: f64| -> f64 {
            let t = t.max(1e-9);
            match self.imaginary_moment(t) {
                Ok(m) => (Complex64::new(0.0, -t * c).exp() * m.value).im / t,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        };
        let panel_quad = QuadratureSpec { rel_tol: 1e-9, abs_tol: 1e-11, max_subdivisions: 200, ..self.quad };
        let mut total = 0.0;
        let mut a = 0.0;
        let mut small = 0;
        while a < cap {
            let b = (a + width).min(cap);
            let est = integrate(integrand, a, b, &panel_quad)?;
            if let Some(e) = failure.take() {
                return Err(e);
            }
            total += est.value;
            a = b;
            if self.imaginary_moment(a)?.value.norm() < GP_DECAY {
                small += 1;
                if small >= GP_DECAY_PANELS {
                    break;
                }
            } else {
                small = 0;
            }
        }
        Ok(finish(x, 0.5 + total / PI, MomentPath::Series, a))
    }

    /// Gil-Pelaez over the direct atoms. Their moment is a finite exponential sum, so the
    /// truncated inversion integral is a sum of sine integrals and is evaluated in closed
    /// form at `t_max = max(200, 2000/|ln X|)`.
    pub fn ccdf_direct(&self, x: f64) -> Result<MetaDistribution> {
        let d = self.direct()?;
        let c = x.ln();
        let t_max = Self::t_cap(x);
        let mut s = 0.0;
        for &(w, ln_s) in &d.atoms {
            s += w * sine_integral(t_max * (ln_s - c));
        }
        Ok(finish(x, 0.5 + s / PI, MomentPath::Direct, t_max))
    }

    /// Empirical-style CCDF of the direct atoms without inversion: `Σ w [S > X]`.
    pub fn atom_ccdf(&self, x: f64) -> Result<f64> {
        let d = self.direct()?;
        let c = x.ln();
        Ok(d.atoms.iter().filter(|a| a.1 > c).map(|a| a.0).sum())
    }
}

fn finish(x: f64, raw: f64, path: MomentPath, t_max: f64) -> MetaDistribution {
    let value = raw.clamp(0.0, 1.0);
    MetaDistribution { x, value, raw, clamped: value != raw, path, t_max }
}

fn atom_power(ln_s: f64, b: Complex64) -> Complex64 {
    if b == Complex64::new(0.0, 0.0) {
        return Complex64::new(1.0, 0.0);
    }
    if ln_s == f64::NEG_INFINITY {
        return if b.re > 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::new(f64::NAN, f64::NAN) };
    }
    (b * ln_s).exp()
}

struct NodeSeries {
    p: f64,
    los: (Vec<f64>, Vec<f64>),
    nlos: (Vec<f64>, Vec<f64>),
}

/// `E_I[out^z]` for `z = 0, 1, ...` at one serving distance and link state, with error
/// bounds, stopping once the bound passes `BOUND_STOP` or `z_max` is reached.
fn node_series(
    cfg: &ScenarioConfig,
    field: &InterferenceField,
    theta: f64,
    r: f64,
    state: LinkState,
    quad: &QuadratureSpec,
    z_max: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = cfg.channel.shape(state) as usize;
    // terms[n] = exp(-s_n σ²) L_IL(s_n) L_IN(s_n), s_n = n s_1
    let mut terms = vec![(1.0, 0.0)];
    let mut vals = vec![1.0];
    let mut bounds = vec![0.0];
    for z in 1..=z_max {
        let top = m * z;
        while terms.len() <= top {
            let n = terms.len() as u32;
            let s = alzer_argument(cfg, theta, r, state, n);
            terms.push(noise_interference_factor(field, s, quad)?);
        }
        let mut v = 0.0;
        let mut abs = 0.0;
        let mut qerr = 0.0;
        for (n, &(t, e)) in terms.iter().enumerate().take(top + 1) {
            let c = binomial(top as u64, n as u64);
            v += if n % 2 == 0 { c * t } else { -c * t };
            abs += c * t;
            qerr += c * e;
        }
        let bound = (top as f64 + 2.0) * f64::EPSILON * abs + qerr;
        vals.push(v);
        bounds.push(bound);
        if bound > BOUND_STOP {
            break;
        }
    }
    Ok((vals, bounds))
}

/// Sine integral `Si(x) = ∫_0^x sin(t)/t dt`.
pub fn sine_integral(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x.is_infinite() {
        return 0.5 * PI;
    }
    if x <= 2.0 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut k = 1;
        loop {
            term *= -x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            let add = term / (2 * k + 1) as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                return sum;
            }
            k += 1;
        }
    }
    // continued fraction for E1(ix), modified Lentz
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 2..10_000 {
        let a = -((i - 1) * (i - 1)) as f64;
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (d * a + b);
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(x.cos(), -x.sin());
    0.5 * PI + h.im
}

/// `M_b` for integer `b`.
pub fn meta_moment(cfg: &ScenarioConfig, scheme: Scheme, theta: f64, b: u32, quad: &QuadratureSpec) -> Result<f64> {
    Ok(MetaEngine::new(cfg, scheme, theta, quad)?.moment(b)?.value.re)
}

/// `M_{jt}` by the binomial series truncated at `z_max`.
pub fn meta_moment_imaginary(
    cfg: &ScenarioConfig,
    scheme: Scheme,
    theta: f64,
    t: f64,
    z_max: usize,
    quad: &QuadratureSpec,
) -> Result<MomentEstimate> {
    if z_max == 0 {
        return Err(Error::InvalidInput("z_max must be at least 1".into()));
    }
    let mut e = MetaEngine::new(cfg, scheme, theta, quad)?;
    e.z_max = z_max;
    e.imaginary_moment(t)
}

/// `P(S > X)` over the serving geometry.
pub fn meta_distribution(
    cfg: &ScenarioConfig,
    scheme: Scheme,
    theta: f64,
    x: f64,
    quad: &QuadratureSpec,
) -> Result<MetaDistribution> {
    MetaEngine::new(cfg, scheme, theta, quad)?.ccdf(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_integral_values() {
        // Si(1), Si(5), Si(20) from tables
        assert!((sine_integral(1.0) - 0.946_083_070_367_183).abs() < 1e-14);
        assert!((sine_integral(5.0) - 1.549_931_244_944_674).abs() < 1e-13);
        assert!((sine_integral(20.0) - 1.548_241_701_043_44).abs() < 1e-12);
        assert!((sine_integral(2.0) - 1.605_412_976_802_695).abs() < 1e-14);
        assert!((sine_integral(2.000_001) - 1.605_413_431_451_5).abs() < 1e-9);
        assert_eq!(sine_integral(-3.0), -sine_integral(3.0));
        assert_eq!(sine_integral(f64::NEG_INFINITY), -0.5 * PI);
    }
}
