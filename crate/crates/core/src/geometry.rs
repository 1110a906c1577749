//! Hexagonal cells, point processes, the greedy trajectory model and travel kinematics.
//!
//! Cells are flat-top hexagons: vertices at `(±R, 0)` and `(±R/2, ±√3R/2)`. The
//! reference cell is centred at the origin.

use crate::config::{KinematicsConfig, TravelTimeFormula};
use crate::error::{Error, Result};
use rand::Rng;
use std::f64::consts::PI;

const SQRT3: f64 = 1.732_050_807_568_877_2;

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HexCell {
    pub center: Point,
    pub radius: f64,
}

impl HexCell {
    pub fn new(center: Point, radius: f64) -> Self {
        HexCell { center, radius }
    }

    pub fn area(&self) -> f64 {
        1.5 * SQRT3 * self.radius * self.radius
    }

    pub fn contains(&self, p: Point) -> bool {
        let x = (p[0] - self.center[0]).abs();
        let y = (p[1] - self.center[1]).abs();
        let r = self.radius;
        y <= 0.5 * SQRT3 * r && SQRT3 * x + y <= SQRT3 * r
    }

    /// Uniform point by rejection from the bounding box (acceptance 3/4).
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let r = self.radius;
        loop {
            let x = (2.0 * rng.random::<f64>() - 1.0) * r;
            let y = (2.0 * rng.random::<f64>() - 1.0) * 0.5 * SQRT3 * r;
            if SQRT3 * x.abs() + y.abs() <= SQRT3 * r {
                return [self.center[0] + x, self.center[1] + y];
            }
        }
    }
}

/// Centre of the cell at axial coordinates `(q, r)` of a flat-top lattice.
pub fn axial_center(q: i64, r: i64, radius: f64) -> Point {
    [1.5 * radius * q as f64, SQRT3 * radius * (r as f64 + 0.5 * q as f64)]
}

/// Cells of the lattice within `rings` rings of the origin, excluding the origin itself,
/// ordered by ring. Ring `k` holds `6k` cells.
pub fn hex_rings(radius: f64, rings: usize) -> Vec<(usize, HexCell)> {
    let n = rings as i64;
    let mut cells = Vec::with_capacity(3 * rings * (rings + 1));
    for q in -n..=n {
        for r in (-n).max(-q - n)..=n.min(-q + n) {
            if q == 0 && r == 0 {
                continue;
            }
            let ring = q.abs().max(r.abs()).max((q + r).abs()) as usize;
            cells.push((ring, HexCell::new(axial_center(q, r, radius), radius)));
        }
    }
    // stable: keeps the axial scan order inside each ring
    cells.sort_by_key(|(ring, _)| *ring);
    cells
}

/// Sampling region for [`sample_ppp`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Rectangle { min: Point, max: Point },
    Disk { center: Point, radius: f64 },
    Annulus { center: Point, inner: f64, outer: f64 },
    Hexagon(HexCell),
}

impl Region {
    pub fn area(&self) -> f64 {
        match *self {
            Region::Rectangle { min, max } => (max[0] - min[0]) * (max[1] - min[1]),
            Region::Disk { radius, .. } => PI * radius * radius,
            Region::Annulus { inner, outer, .. } => PI * (outer * outer - inner * inner),
            Region::Hexagon(h) => h.area(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Region::Rectangle { min, max } => max[0] >= min[0] && max[1] >= min[1],
            Region::Disk { radius, .. } => radius >= 0.0,
            Region::Annulus { inner, outer, .. } => inner >= 0.0 && outer >= inner,
            Region::Hexagon(h) => h.radius >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("degenerate region {self:?}")))
        }
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match *self {
            Region::Rectangle { min, max } => [
                min[0] + (max[0] - min[0]) * rng.random::<f64>(),
                min[1] + (max[1] - min[1]) * rng.random::<f64>(),
            ],
            Region::Disk { center, radius } => {
                polar(center, radius * rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>())
            }
            Region::Annulus { center, inner, outer } => {
                let u: f64 = rng.random();
                let rho = (inner * inner + u * (outer * outer - inner * inner)).sqrt();
                polar(center, rho.clamp(inner, outer), 2.0 * PI * rng.random::<f64>())
            }
            Region::Hexagon(h) => h.sample_uniform(rng),
        }
    }
}

fn polar(c: Point, rho: f64, phi: f64) -> Point {
    [c[0] + rho * phi.cos(), c[1] + rho * phi.sin()]
}

/// Homogeneous Poisson point process of `intensity` points per unit area on `region`.
pub fn sample_ppp<R: Rng + ?Sized>(rng: &mut R, intensity: f64, region: &Region) -> Result<Vec<Point>> {
    if !(intensity >= 0.0) || !intensity.is_finite() {
        return Err(Error::InvalidInput(format!("intensity must be finite and >= 0, got {intensity}")));
    }
    region.validate()?;
    let n = crate::rng::poisson(rng, intensity * region.area());
    Ok((0..n).map(|_| region.sample_uniform(rng)).collect())
}

fn segment_sum(n: usize, radius: f64) -> f64 {
    // contact distance of a PPP of intensity 2k/(3√3R²) has mean sqrt(3√3R²/(8k))
    let c = 3.0 * SQRT3 * radius * radius / 8.0;
    (1..=n).map(|k| (c / k as f64).sqrt()).sum::<f64>() / n as f64
}

/// Average greedy-trajectory segment length for `n_devices` devices in a cell of radius
/// `radius`: the i-th hop is modelled as the contact distance to the `n - i` devices left.
pub fn avg_segment_exact(n_devices: usize, radius: f64) -> Result<f64> {
    if n_devices == 0 {
        return Err(Error::InvalidInput("avg_segment_exact needs at least one device".into()));
    }
    Ok(segment_sum(n_devices, radius))
}

/// Same sum evaluated at the mean device count, a lower bound on the expectation of
/// [`avg_segment_exact`] over a Poisson device count.
pub fn avg_segment_jensen(mean_devices: usize, radius: f64) -> Result<f64> {
    if mean_devices == 0 {
        return Err(Error::InvalidInput("avg_segment_jensen needs a mean of at least one device".into()));
    }
    Ok(segment_sum(mean_devices, radius))
}

/// Expectation of [`avg_segment_exact`] over `N_d ~ Poisson(mean_devices)`, conditioned on
/// at least one device.
pub fn avg_segment_poisson(mean_devices: f64, radius: f64) -> Result<f64> {
    if !(mean_devices > 0.0) || !mean_devices.is_finite() {
        return Err(Error::InvalidInput(format!("mean device count must be positive, got {mean_devices}")));
    }
    let top = (mean_devices + 12.0 * mean_devices.sqrt() + 30.0).ceil() as usize;
    let ln_mean = mean_devices.ln();
    let mut ln_fact = 0.0;
    let (mut num, mut mass) = (0.0, 0.0);
    for n in 1..=top {
        ln_fact += (n as f64).ln();
        let p = (n as f64 * ln_mean - mean_devices - ln_fact).exp();
        num += p * segment_sum(n, radius);
        mass += p;
    }
    Ok(num / mass)
}

/// Simulate one greedy nearest-neighbour tour: `Poisson(mean_devices)` devices uniform in
/// the cell, start at a uniform point, always hop to the closest unvisited device (ties to
/// the lowest index). Returns the hop lengths in visiting order.
pub fn simulate_greedy_trajectory<R: Rng + ?Sized>(rng: &mut R, mean_devices: f64, radius: f64) -> Vec<f64> {
    let cell = HexCell::new([0.0, 0.0], radius);
    let n = crate::rng::poisson(rng, mean_devices) as usize;
    let devices: Vec<Point> = (0..n).map(|_| cell.sample_uniform(rng)).collect();
    let start = cell.sample_uniform(rng);
    greedy_tour(start, &devices).into_iter().map(|(_, d)| d).collect()
}

/// Greedy tour from `start` over `devices`; returns `(device index, hop length)` per hop.
pub fn greedy_tour(start: Point, devices: &[Point]) -> Vec<(usize, f64)> {
    let mut visited = vec![false; devices.len()];
    let mut pos = start;
    let mut out = Vec::with_capacity(devices.len());
    for _ in 0..devices.len() {
        let mut best = usize::MAX;
        let mut best_d2 = f64::INFINITY;
        for (i, p) in devices.iter().enumerate() {
            if visited[i] {
                continue;
            }
            let d2 = (p[0] - pos[0]).powi(2) + (p[1] - pos[1]).powi(2);
            if d2 < best_d2 {
                best_d2 = d2;
                best = i;
            }
        }
        visited[best] = true;
        pos = devices[best];
        out.push((best, best_d2.sqrt()));
    }
    out
}

/// Travel time over a segment of length `d` with trapezoidal speed profile.
///
/// Segments shorter than the combined acceleration and braking distance use the short
/// branch selected by `kin.formula`.
pub fn travel_time(d: f64, kin: &KinematicsConfig) -> f64 {
    let (printed, triangular) = short_branch_times(d, kin);
    let s = kin.accel_distance() + kin.decel_distance();
    if d <= s {
        match kin.formula {
            TravelTimeFormula::AsPrinted => printed,
            TravelTimeFormula::Triangular => triangular,
        }
    } else {
        kin.accel_time() + kin.decel_time() + (d - s) / kin.speed
    }
}

/// The two candidate short-segment expressions at distance `d`:
/// `(sqrt(d/(a_u+a_d)), sqrt(2d(a_u+a_d)/(a_u a_d)))`.
pub fn short_branch_times(d: f64, kin: &KinematicsConfig) -> (f64, f64) {
    let (au, ad) = (kin.accel, kin.decel);
    ((d / (au + ad)).sqrt(), (2.0 * d * (au + ad) / (au * ad)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn segment_values() {
        assert!((avg_segment_exact(1, 100.0).unwrap() - 80.594).abs() < 2e-3);
        assert!((avg_segment_exact(25, 100.0).unwrap() - 27.851).abs() < 1e-3);
        assert!((avg_segment_exact(150, 100.0).unwrap() - 12.398).abs() < 1e-3);
        assert!((avg_segment_jensen(25, 200.0).unwrap() - 55.701).abs() < 1e-3);
        assert!(avg_segment_exact(0, 1.0).is_err());
    }

    #[test]
    fn jensen_is_a_lower_bound() {
        for mean in [3usize, 25, 100] {
            let e = avg_segment_poisson(mean as f64, 100.0).unwrap();
            assert!(e >= avg_segment_jensen(mean, 100.0).unwrap());
        }
        // nearly deterministic count
        let e = avg_segment_poisson(1e-6, 100.0).unwrap();
        assert!((e - avg_segment_exact(1, 100.0).unwrap()).abs() < 1e-3);
    }

    #[test]
    fn lattice_counts() {
        let cells = hex_rings(1.0, 3);
        assert_eq!(cells.len(), 6 + 12 + 18);
        assert!(cells.windows(2).all(|w| w[0].0 <= w[1].0));
        // neighbouring centres are √3 R apart
        let d = cells[0].1.center;
        assert!(((d[0] * d[0] + d[1] * d[1]).sqrt() - SQRT3).abs() < 1e-12);
    }

    #[test]
    fn hexagon_membership() {
        let h = HexCell::new([0.0, 0.0], 1.0);
        assert!(h.contains([0.99, 0.0]));
        assert!(!h.contains([0.0, 0.9]));
        assert!(h.contains([0.5, 0.86]));
        let mut rng = substream(3, 0);
        for _ in 0..1000 {
            assert!(h.contains(h.sample_uniform(&mut rng)));
        }
    }

    #[test]
    fn travel_time_baseline() {
        let kin = crate::ScenarioConfig::baseline().kinematics;
        let d = avg_segment_jensen(100, 651.5).unwrap();
        assert!((d - 97.61).abs() < 0.01, "{d}");
        let t = travel_time(d, &kin);
        assert!((t - 6.4365).abs() / 6.4365 < 5e-3, "{t}");
        assert_eq!(travel_time(0.0, &kin), 0.0);
    }

    #[test]
    fn greedy_single_device_at_start() {
        let tour = greedy_tour([0.0, 0.0], &[[0.0, 0.0]]);
        assert_eq!(tour, vec![(0, 0.0)]);
    }

    #[test]
    fn ppp_region_bounds() {
        let mut rng = substream(5, 0);
        let reg = Region::Annulus { center: [0.0, 0.0], inner: 2.0, outer: 5.0 };
        let pts = sample_ppp(&mut rng, 10.0, &reg).unwrap();
        assert!(!pts.is_empty());
        for p in pts {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((2.0 - 1e-12..=5.0 + 1e-12).contains(&r));
        }
        assert!(sample_ppp(&mut rng, 0.0, &reg).unwrap().is_empty());
        assert!(sample_ppp(&mut rng, -1.0, &reg).is_err());
    }
}
