//! Analytical performance model.
//!
//! Interferers are approximated by a Poisson field outside an exclusion disc around the
//! receiving UAV (`R/2` for the device-centric scheme, `R` for the UAV-centric one). The
//! success probability of a link is assembled from the Laplace transforms of the LOS and
//! NLOS interference, averaged over the serving geometry.

pub mod capacity;
pub mod laplace;
pub mod meta;
pub mod success;

pub use capacity::outage_capacity;
pub use laplace::{laplace_exponent, laplace_interference, InterferenceField};
pub use meta::{
    meta_distribution, meta_moment, meta_moment_imaginary, FactorialConvention, MetaDistribution, MetaEngine,
    MomentPath,
};
pub use success::{
    conditional_success, success_probability, success_probability_suc, success_probability_suc_cell_stats,
    success_probability_urdc, success_with_error, CellStats,
};

use crate::geometry::HexCell;
use crate::quadrature::gauss_legendre_on;

/// Weighted set of serving horizontal distances that stands in for the serving geometry
/// distribution. Weights sum to one (up to truncation of the Gaussian tail).
#[derive(Debug, Clone, PartialEq)]
pub struct ServingGeometry {
    pub nodes: Vec<(f64, f64)>,
}

impl ServingGeometry {
    /// `|r_x|` with `r_x ~ N(0, sd²)`: Gauss–Legendre on `[0, 8 sd]` against the folded
    /// density.
    pub fn gaussian_offset(sd: f64, n: usize) -> Self {
        if sd == 0.0 {
            return ServingGeometry { nodes: vec![(0.0, 1.0)] };
        }
        let norm = (2.0 / std::f64::consts::PI).sqrt() / sd;
        let nodes = gauss_legendre_on(n, 0.0, 8.0 * sd)
            .into_iter()
            .map(|(r, w)| (r, w * norm * (-0.5 * (r / sd).powi(2)).exp()))
            .collect();
        ServingGeometry { nodes }
    }

    /// Equal-weight quantile atoms of `|r_x|`, `r_x ~ N(0, sd²)`.
    pub fn gaussian_offset_atoms(sd: f64, n: usize) -> Self {
        if sd == 0.0 {
            return ServingGeometry { nodes: vec![(0.0, 1.0)] };
        }
        let w = 1.0 / n as f64;
        let nodes = (0..n)
            .map(|i| {
                let u = (i as f64 + 0.5) / n as f64;
                (sd * std::f64::consts::SQRT_2 * statrs::function::erf::erf_inv(u), w)
            })
            .collect();
        ServingGeometry { nodes }
    }

    /// Distances from the centre of `n` Halton(2,3) points inside a hexagon of radius
    /// `radius`, equally weighted.
    pub fn hexagon_cell(radius: f64, n: usize) -> Self {
        let w = 1.0 / n as f64;
        let nodes = hexagon_points(radius, n).into_iter().map(|p| (p[0].hypot(p[1]), w)).collect();
        ServingGeometry { nodes }
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.1).sum()
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// First `n` points of the Halton(2,3) sequence on the bounding box that fall inside the
/// hexagon centred at the origin.
pub fn hexagon_points(radius: f64, n: usize) -> Vec<[f64; 2]> {
    let cell = HexCell::new([0.0, 0.0], radius);
    let half_h = 0.5 * 3f64.sqrt() * radius;
    let mut out = Vec::with_capacity(n);
    let mut i = 1u64;
    while out.len() < n {
        let p = [(2.0 * radical_inverse(i, 2) - 1.0) * radius, (2.0 * radical_inverse(i, 3) - 1.0) * half_h];
        if cell.contains(p) {
            out.push(p);
        }
        i += 1;
    }
    out
}

/// Map `f` over `items`, in parallel when the `parallel` feature is on. Order is kept.
pub(crate) fn par_map<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offset_weights_sum_to_one() {
        let g = ServingGeometry::gaussian_offset(20.0, 64);
        assert!((g.total_weight() - 1.0).abs() < 1e-12);
        // E|r_x| = sd sqrt(2/pi)
        let m: f64 = g.nodes.iter().map(|(r, w)| r * w).sum();
        assert!((m - 20.0 * (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-10);
        let a = ServingGeometry::gaussian_offset_atoms(20.0, 2000);
        let m: f64 = a.nodes.iter().map(|(r, w)| r * w).sum();
        assert!((m - 20.0 * (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-2);
    }

    #[test]
    fn hexagon_points_inside() {
        let pts = hexagon_points(10.0, 500);
        let cell = HexCell::new([0.0, 0.0], 10.0);
        assert!(pts.iter().all(|p| cell.contains(*p)));
        // E[r²] over a hexagon = 5R²/12
        let m2: f64 = pts.iter().map(|p| p[0] * p[0] + p[1] * p[1]).sum::<f64>() / 500.0;
        assert!((m2 / (5.0 * 100.0 / 12.0) - 1.0).abs() < 0.02, "{m2}");
    }
}
