//! Slot-by-slot simulation of the device buffer.

use crate::rng::substream;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueueSimResult {
    /// Time-average number of packets at slot ends.
    pub q_l: f64,
    /// Mean sojourn (slots) of packets that departed.
    pub q_w: f64,
    pub departures: u64,
    /// Time-average queue length over the first and second halves of the run.
    pub first_half_q_l: f64,
    pub second_half_q_l: f64,
    pub final_queue: usize,
}

/// Bernoulli(`alpha`) arrivals into a FIFO buffer. The head-of-buffer packet is attempted
/// `n_d` slots after it reaches the head and every `n_d` slots after a failure; each
/// attempt succeeds with probability `success`. A packet arriving to an empty buffer
/// reaches the head at the end of its arrival slot.
pub fn simulate_queue(seed: u64, n_d: usize, alpha: f64, success: f64, slots: u64) -> QueueSimResult {
    let mut rng = substream(seed, 0);
    let mut buf: VecDeque<u64> = VecDeque::new();
    let mut phase = 0usize;
    let mut area = [0.0f64; 2];
    let mut sojourn = 0.0;
    let mut departures = 0u64;
    let half = slots / 2;
    for slot in 0..slots {
        let mut new_head = false;
        if !buf.is_empty() {
            if phase < n_d {
                phase += 1;
            }
            if phase == n_d {
                if rng.random::<f64>() < success {
                    let arrived = buf.pop_front().expect("nonempty buffer");
                    sojourn += (slot - arrived) as f64;
                    departures += 1;
                    new_head = true;
                } else {
                    phase = 0;
                }
            }
        }
        let was_empty = buf.is_empty();
        if rng.random::<f64>() < alpha {
            buf.push_back(slot);
            if was_empty {
                new_head = true;
            }
        }
        if new_head {
            phase = 0;
        }
        area[usize::from(slot >= half)] += buf.len() as f64;
    }
    let first = half.max(1) as f64;
    let second = (slots - half).max(1) as f64;
    QueueSimResult {
        q_l: (area[0] + area[1]) / slots.max(1) as f64,
        q_w: if departures > 0 { sojourn / departures as f64 } else { 0.0 },
        departures,
        first_half_q_l: area[0] / first,
        second_half_q_l: area[1] / second,
        final_queue: buf.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_arrivals() {
        let r = simulate_queue(1, 3, 0.0, 0.9, 10_000);
        assert_eq!(r.q_l, 0.0);
        assert_eq!(r.departures, 0);
    }

    #[test]
    fn deterministic_service() {
        // N_d = 1, S_p = 1: a packet leaves in the slot after it arrives
        let r = simulate_queue(4, 1, 0.3, 1.0, 200_000);
        assert!((r.q_w - 1.0).abs() < 1e-12);
    }
}
