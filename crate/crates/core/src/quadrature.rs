//! Numerical integration: globally adaptive Gauss–Kronrod, semi-infinite maps and fixed
//! Gauss–Legendre rules.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BinaryHeap;

/// Panel rule used by the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PanelRule {
    /// 7-point Gauss nested in 15-point Kronrod.
    GaussKronrod15,
}

/// Change of variables taking `[a, ∞)` onto a finite interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SemiInfiniteMap {
    /// `r = a + scale * u / (1 - u)`, `u ∈ [0, 1)`.
    Rational { scale: f64 },
    /// `r = a * w^(-q)`, `w ∈ (0, 1]`. With `q = 1/(alpha - 2)` an `r^(1-alpha)` tail
    /// becomes a constant in `w`, which keeps the integrand bounded at the far end.
    PowerTail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: PanelRule,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub semi_infinite_map: SemiInfiniteMap,
    /// Gauss–Legendre order of the fixed rule over the serving offset.
    pub offset_nodes: usize,
    /// Number of low-discrepancy positions used for cell averages.
    pub cell_positions: usize,
    /// Equal-weight serving-offset atoms used by the direct meta-distribution path.
    pub meta_atoms: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: PanelRule::GaussKronrod15,
            rel_tol: 1e-8,
            abs_tol: 1e-14,
            max_subdivisions: 400,
            semi_infinite_map: SemiInfiniteMap::PowerTail,
            offset_nodes: 64,
            cell_positions: 400,
            meta_atoms: 1000,
        }
    }
}

impl QuadratureSpec {
    /// Looser settings for interactive use and large sweeps.
    pub fn fast() -> Self {
        QuadratureSpec { rel_tol: 1e-6, offset_nodes: 32, cell_positions: 200, meta_atoms: 300, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidInput("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 || self.offset_nodes == 0 || self.cell_positions == 0 || self.meta_atoms == 0 {
            return Err(Error::InvalidInput("quadrature sizes must be positive".into()));
        }
        if let SemiInfiniteMap::Rational { scale } = self.semi_infinite_map {
            if !(scale > 0.0) {
                return Err(Error::InvalidInput("rational map scale must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Integral value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&o.error)
    }
}

/// Globally adaptive integration of `f` over `[a, b]`: the panel with the largest error
/// estimate is bisected until the total error meets `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, error: e });
    let (mut total, mut err) = (v, e);
    let mut evals = 15;
    let mut splits = 0;
    loop {
        if !total.is_finite() || !err.is_finite() {
            return Err(Error::Quadrature { estimate: total, error: err, subdivisions: splits });
        }
        if err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(Estimate { value: total, abs_error: err, evaluations: evals });
        }
        if splits >= spec.max_subdivisions {
            return Err(Error::Quadrature { estimate: total, error: err, subdivisions: splits });
        }
        let p = heap.pop().expect("heap holds at least one panel");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // panel below floating-point resolution; accept what we have
            return Ok(Estimate { value: total, abs_error: err, evaluations: evals });
        }
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        evals += 30;
        splits += 1;
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Panel { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Panel { a: m, b: p.b, value: v2, error: e2 });
        if splits % 64 == 0 {
            // resum to shed accumulated cancellation in the running totals
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
        }
    }
}

/// Integrate `f` over `[a, ∞)`.
///
/// `tail_exponent` is the decay power `alpha` of an `r^(1-alpha)` integrand tail, used by
/// [`SemiInfiniteMap::PowerTail`] (which also needs `a > 0`; otherwise the rational map is
/// used with unit scale).
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    tail_exponent: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    match spec.semi_infinite_map {
        SemiInfiniteMap::PowerTail if a > 0.0 && tail_exponent > 2.0 => {
            let q = 1.0 / (tail_exponent - 2.0);
            integrate(
                |w: f64| {
                    if w <= 0.0 {
                        return 0.0;
                    }
                    let r = a * w.powf(-q);
                    let v = f(r);
                    if v == 0.0 {
                        0.0
                    } else {
                        v * q * r / w
                    }
                },
                0.0,
                1.0,
                spec,
            )
        }
        SemiInfiniteMap::PowerTail => rational(f, a, 1.0, spec),
        SemiInfiniteMap::Rational { scale } => rational(f, a, scale, spec),
    }
}

fn rational<F: FnMut(f64) -> f64>(mut f: F, a: f64, scale: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    integrate(
        |u: f64| {
            if u >= 1.0 {
                return 0.0;
            }
            let t = 1.0 - u;
            let v = f(a + scale * u / t);
            if v == 0.0 {
                0.0
            } else {
                v * scale / (t * t)
            }
        },
        0.0,
        1.0,
        spec,
    )
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter().zip(&w).map(|(xi, wi)| (c + h * xi, h * wi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_exact_for_polynomials() {
        for n in [1, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
            let deg = 2 * n - 1;
            let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32 - 1)).sum();
            let exact = if (deg - 1) % 2 == 0 { 2.0 / deg as f64 } else { 0.0 };
            assert!((v - exact).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn adaptive_basic() {
        let spec = QuadratureSpec::default();
        let e = integrate(|x| x.sin(), 0.0, std::f64::consts::PI, &spec).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12);
        let e = integrate(|x| x.sqrt(), 0.0, 1.0, &spec).unwrap();
        assert!((e.value - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn semi_infinite_tails() {
        let spec = QuadratureSpec::default();
        // ∫_1^∞ r^{-1.5} dr = 2
        let e = integrate_semi_infinite(|r| r.powf(-1.5), 1.0, 2.5, &spec).unwrap();
        assert!((e.value - 2.0).abs() < 1e-8, "{}", e.value);
        let rat = QuadratureSpec { semi_infinite_map: SemiInfiniteMap::Rational { scale: 1.0 }, ..spec };
        let e = integrate_semi_infinite(|r| (-r).exp(), 0.0, 0.0, &rat).unwrap();
        assert!((e.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn reports_failure() {
        let spec = QuadratureSpec { max_subdivisions: 3, ..Default::default() };
        let r = integrate(|x| (1.0 / x).sin(), 1e-6, 1.0, &spec);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
