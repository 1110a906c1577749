//! Device buffer as a discrete-time Geo/PH/1 queue.
//!
//! Packets arrive with probability `alpha` per slot. The head-of-buffer packet walks
//! through `N_d` phases, one per slot, and at the end of the last phase is delivered with
//! probability `S_p` or restarts from the first phase. The queue is a quasi-birth-death
//! chain with a scalar empty level; its rate matrix has a closed form because the
//! down-block `A2` has rank one.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, RowDVector};
use serde::{Deserialize, Serialize};

/// Phase-type service of the round-robin cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct PhService {
    /// Initial phase distribution, `e_1`.
    pub beta: RowDVector<f64>,
    /// Transient transitions: superdiagonal ones, last row `[1 - S_p, 0, ..., 0]`.
    pub s: DMatrix<f64>,
    /// Absorption column `[0, ..., 0, S_p]`.
    pub exit: DVector<f64>,
    pub success: f64,
}

pub fn build_ph_service(n_d: usize, success: f64) -> Result<PhService> {
    if n_d == 0 {
        return Err(Error::InvalidInput("the service cycle needs at least one device".into()));
    }
    if !(0.0..=1.0).contains(&success) {
        return Err(Error::InvalidInput(format!("success probability must lie in [0,1], got {success}")));
    }
    let mut s = DMatrix::zeros(n_d, n_d);
    for i in 0..n_d - 1 {
        s[(i, i + 1)] = 1.0;
    }
    s[(n_d - 1, 0)] += 1.0 - success;
    let mut exit = DVector::zeros(n_d);
    exit[n_d - 1] = success;
    let mut beta = RowDVector::zeros(n_d);
    beta[0] = 1.0;
    Ok(PhService { beta, s, exit, success })
}

impl PhService {
    pub fn phases(&self) -> usize {
        self.s.nrows()
    }

    /// Mean number of slots to absorption, `beta (I - S)^-1 1`.
    pub fn mean_service_time(&self) -> Result<f64> {
        let n = self.phases();
        let m = DMatrix::identity(n, n) - &self.s;
        let x = m.lu().solve(&DVector::from_element(n, 1.0)).ok_or(Error::Singular("I - S"))?;
        Ok((&self.beta * x)[0])
    }
}

/// Stability: arrivals strictly slower than departures, `alpha < S_p / N_d`.
pub fn is_stable(alpha: f64, n_d: usize, success: f64) -> bool {
    n_d > 0 && alpha < success / n_d as f64
}

/// Transition blocks of the QBD. Level 0 is the single empty state.
#[derive(Debug, Clone, PartialEq)]
pub struct QbdBlocks {
    pub alpha: f64,
    pub ph: PhService,
    /// Empty to empty.
    pub b: f64,
    /// Empty to level 1.
    pub c: RowDVector<f64>,
    /// Level 1 to empty.
    pub e: DVector<f64>,
    /// Level up.
    pub a0: DMatrix<f64>,
    /// Same level.
    pub a1: DMatrix<f64>,
    /// Level down.
    pub a2: DMatrix<f64>,
}

pub fn build_blocks(ph: &PhService, alpha: f64) -> Result<QbdBlocks> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidInput(format!("arrival probability must lie in [0,1), got {alpha}")));
    }
    let sb = &ph.exit * &ph.beta;
    Ok(QbdBlocks {
        alpha,
        ph: ph.clone(),
        b: 1.0 - alpha,
        c: &ph.beta * alpha,
        e: &ph.exit * (1.0 - alpha),
        a0: &ph.s * alpha,
        a1: &sb * alpha + &ph.s * (1.0 - alpha),
        a2: sb * (1.0 - alpha),
    })
}

impl QbdBlocks {
    pub fn phases(&self) -> usize {
        self.a0.nrows()
    }

    pub fn is_stable(&self) -> bool {
        is_stable(self.alpha, self.phases(), self.ph.success)
    }
}

/// Minimal non-negative solution of `R = A0 + R A1 + R² A2`, from the closed form
/// `R = alpha S (I - alpha s beta - (1 - alpha) S - alpha S 1 beta)^-1`. The result is
/// rejected unless the quadratic residual is below `1e-10`.
pub fn rate_matrix(blocks: &QbdBlocks) -> Result<DMatrix<f64>> {
    if !blocks.is_stable() {
        return Err(Error::Unstable {
            alpha: blocks.alpha,
            service_rate: blocks.ph.success / blocks.phases() as f64,
        });
    }
    let n = blocks.phases();
    let ph = &blocks.ph;
    let a = blocks.alpha;
    let one = DVector::from_element(n, 1.0);
    let inner = DMatrix::identity(n, n) - &ph.exit * &ph.beta * a - &ph.s * (1.0 - a) - &ph.s * &one * &ph.beta * a;
    let inv = inner.try_inverse().ok_or(Error::Singular("rate-matrix inner matrix"))?;
    let r = &ph.s * a * inv;
    let res = quadratic_residual(blocks, &r);
    if !(res < 1e-10) {
        return Err(Error::Verification(format!("rate matrix residual {res:.3e} exceeds 1e-10")));
    }
    Ok(r)
}

/// `‖R - (A0 + R A1 + R² A2)‖_∞`.
pub fn quadratic_residual(blocks: &QbdBlocks, r: &DMatrix<f64>) -> f64 {
    let rhs = &blocks.a0 + r * &blocks.a1 + r * r * &blocks.a2;
    inf_norm(&(r - rhs))
}

fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter().map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Stationary distribution in matrix-geometric form, `pi_q = pi_1 R^(q-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub pi0: f64,
    pub pi1: RowDVector<f64>,
    pub r: DMatrix<f64>,
    /// Largest global-balance residual on the truncated chain.
    pub balance_residual: f64,
    /// Levels used for the balance check.
    pub checked_levels: usize,
}

const MAX_CHECK_LEVELS: usize = 200_000;

pub fn steady_state(blocks: &QbdBlocks, r: &DMatrix<f64>) -> Result<SteadyState> {
    if !blocks.is_stable() {
        return Err(Error::Unstable {
            alpha: blocks.alpha,
            service_rate: blocks.ph.success / blocks.phases() as f64,
        });
    }
    let n = blocks.phases();
    let id = DMatrix::identity(n, n);
    let one = DVector::from_element(n, 1.0);
    let m = (&id - &blocks.a1 - r * &blocks.a2).try_inverse().ok_or(Error::Singular("I - A1 - R A2"))?;
    let tail = (&id - r).lu().solve(&one).ok_or(Error::Singular("I - R"))?;
    let c_m = &blocks.c * &m;
    let pi0 = 1.0 / (1.0 + (&c_m * &tail)[0]);
    let pi1 = c_m * pi0;
    if !(pi0 > 0.0 && pi0 <= 1.0) || pi1.iter().any(|x| *x < -1e-14) {
        return Err(Error::Verification(format!("steady state is not a distribution (pi0 = {pi0})")));
    }
    let total = pi0 + (&pi1 * &tail)[0];
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::Verification(format!("steady state sums to {total}")));
    }
    let (res, levels) = balance_check(blocks, pi0, &pi1, r);
    if !(res < 1e-8) {
        return Err(Error::Verification(format!("global balance residual {res:.3e} exceeds 1e-8")));
    }
    Ok(SteadyState { pi0, pi1, r: r.clone(), balance_residual: res, checked_levels: levels })
}

/// Global balance residual of `pi P = pi`, level by level, until the level mass drops
/// below `1e-12`.
fn balance_check(blocks: &QbdBlocks, pi0: f64, pi1: &RowDVector<f64>, r: &DMatrix<f64>) -> (f64, usize) {
    let mut worst = (pi0 - (pi0 * blocks.b + (pi1 * &blocks.e)[0])).abs();
    let mut prev = RowDVector::zeros(pi1.len());
    let mut cur = pi1.clone();
    let mut next = pi1 * r;
    let mut level = 1;
    loop {
        let inflow_up = if level == 1 { &blocks.c * pi0 } else { &prev * &blocks.a0 };
        let rhs = inflow_up + &cur * &blocks.a1 + &next * &blocks.a2;
        let res = (&cur - rhs).iter().map(|x| x.abs()).fold(0.0, f64::max);
        worst = worst.max(res);
        if cur.iter().map(|x| x.abs()).sum::<f64>() < 1e-12 || level >= MAX_CHECK_LEVELS {
            return (worst, level);
        }
        prev = cur;
        cur = next;
        next = &cur * r;
        level += 1;
    }
}

/// Mean queue length `Q_L = pi_1 (I - R)^-2 1` and mean delay `Q_W = Q_L / alpha` in slots.
pub fn mean_queue_and_delay(ss: &SteadyState, alpha: f64) -> Result<(f64, f64)> {
    let n = ss.r.nrows();
    let id = DMatrix::identity(n, n);
    let lu = (&id - &ss.r).lu();
    let one = DVector::from_element(n, 1.0);
    let x = lu.solve(&one).ok_or(Error::Singular("I - R"))?;
    let x = lu.solve(&x).ok_or(Error::Singular("I - R"))?;
    let q_l = (&ss.pi1 * x)[0];
    let q_w = if alpha > 0.0 { q_l / alpha } else { 0.0 };
    Ok((q_l, q_w))
}

/// Queue metrics, or the unstable tag when arrivals outpace the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum QueueOutcome {
    Stable { q_l: f64, q_w_slots: f64, pi0: f64 },
    Unstable,
}

impl QueueOutcome {
    pub fn delay_slots(&self) -> f64 {
        match self {
            QueueOutcome::Stable { q_w_slots, .. } => *q_w_slots,
            QueueOutcome::Unstable => f64::INFINITY,
        }
    }

    pub fn queue_length(&self) -> f64 {
        match self {
            QueueOutcome::Stable { q_l, .. } => *q_l,
            QueueOutcome::Unstable => f64::INFINITY,
        }
    }

    pub fn is_stable(&self) -> bool {
        matches!(self, QueueOutcome::Stable { .. })
    }
}

/// End-to-end solve for `(N_d, alpha, S_p)`.
pub fn solve_queue(n_d: usize, alpha: f64, success: f64) -> Result<QueueOutcome> {
    let ph = build_ph_service(n_d, success)?;
    if alpha == 0.0 {
        return Ok(QueueOutcome::Stable { q_l: 0.0, q_w_slots: 0.0, pi0: 1.0 });
    }
    if !is_stable(alpha, n_d, success) {
        return Ok(QueueOutcome::Unstable);
    }
    let blocks = build_blocks(&ph, alpha)?;
    let r = rate_matrix(&blocks)?;
    let ss = steady_state(&blocks, &r)?;
    let (q_l, q_w) = mean_queue_and_delay(&ss, alpha)?;
    Ok(QueueOutcome::Stable { q_l, q_w_slots: q_w, pi0: ss.pi0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_phase() {
        let ph = build_ph_service(1, 0.7).unwrap();
        assert!((ph.s[(0, 0)] - 0.3).abs() < 1e-15);
        assert_eq!(ph.exit[0], 0.7);
        assert!(build_ph_service(0, 0.5).is_err());
        assert!(build_ph_service(2, 1.5).is_err());
    }

    #[test]
    fn mean_service() {
        let ph = build_ph_service(3, 1.0).unwrap();
        assert!((ph.mean_service_time().unwrap() - 3.0).abs() < 1e-12);
        let ph = build_ph_service(7, 0.3).unwrap();
        assert!((ph.mean_service_time().unwrap() - 7.0 / 0.3).abs() < 1e-9);
    }

    #[test]
    fn stability_boundary() {
        assert!(is_stable(0.005, 100, 1.0));
        assert!(!is_stable(0.01, 100, 1.0));
        assert!(!is_stable(1e-9, 3, 0.0));
    }

    #[test]
    fn block_stochasticity() {
        let ph = build_ph_service(5, 0.8).unwrap();
        let b = build_blocks(&ph, 0.03).unwrap();
        let sum = &b.a0 + &b.a1 + &b.a2;
        for row in sum.row_iter() {
            assert!((row.sum() - 1.0).abs() < 1e-12);
        }
        assert!((b.b + b.c.sum() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_device_empty_probability() {
        // N_d = 1, S_p = 1: every packet leaves the slot after it arrives
        match solve_queue(1, 0.3, 1.0).unwrap() {
            QueueOutcome::Stable { pi0, .. } => assert!((pi0 - 0.7).abs() < 1e-12),
            QueueOutcome::Unstable => panic!("stable point reported unstable"),
        }
    }

    #[test]
    fn baseline_delay() {
        let q = solve_queue(100, 0.005, 1.0).unwrap();
        assert!((q.delay_slots() - 149.5).abs() < 1e-6, "{q:?}");
    }
}
