//! Invariants of the exact-network and queue simulators.

use uplink_core::analysis::{meta_moment, success_probability_urdc};
use uplink_core::quadrature::QuadratureSpec;
use uplink_core::queueing::solve_queue;
use uplink_core::sim::{simulate_meta, simulate_queue, simulate_success, simulate_success_sweep, DEFAULT_RINGS};
use uplink_core::{db_to_linear, ScenarioConfig, Scheme};

#[test]
fn tiny_threshold_gives_certain_success() {
    let cfg = ScenarioConfig::baseline();
    for scheme in Scheme::ALL {
        let e = simulate_success(3, &cfg, scheme, 1e-15, 300).unwrap();
        assert_eq!(e.estimate, 1.0);
        // Wilson interval at p = 1 reaches exactly up to 1
        let z2 = 1.959_963_984_540_054_f64.powi(2);
        assert!((e.ci_half_width - z2 / 2.0 / (300.0 + z2)).abs() < 1e-15);
    }
    let m = simulate_meta(3, &cfg, Scheme::Suc, 1e-15, 100, 100).unwrap();
    assert_eq!(m.ccdf(0.5), 1.0);
}

#[test]
fn zero_trials_rejected() {
    let cfg = ScenarioConfig::baseline();
    assert!(simulate_success(1, &cfg, Scheme::Urdc, 1.0, 0).is_err());
    assert!(simulate_meta(1, &cfg, Scheme::Urdc, 1.0, 99, 100).is_err());
}

#[test]
fn one_more_ring_barely_matters() {
    let cfg = ScenarioConfig::baseline();
    for (scheme, db) in [(Scheme::Urdc, 40.0), (Scheme::Suc, 0.0)] {
        let th = [db_to_linear(db)];
        let a = simulate_success_sweep(5, &cfg, scheme, &th, 4000, DEFAULT_RINGS).unwrap()[0];
        let b = simulate_success_sweep(5, &cfg, scheme, &th, 4000, DEFAULT_RINGS + 1).unwrap()[0];
        assert!((a.estimate - b.estimate).abs() < 0.005, "{scheme}: {} vs {}", a.estimate, b.estimate);
    }
}

#[test]
fn confidence_interval_shrinks_as_inverse_root() {
    let cfg = ScenarioConfig::baseline();
    let th = db_to_linear(10.0);
    let small = simulate_success(8, &cfg, Scheme::Suc, th, 1000).unwrap();
    let large = simulate_success(8, &cfg, Scheme::Suc, th, 4000).unwrap();
    let ratio = small.ci_half_width / large.ci_half_width;
    assert!((ratio / 2.0 - 1.0).abs() < 0.15, "ratio {ratio}");
}

#[test]
fn sweep_shares_realizations() {
    let cfg = ScenarioConfig::baseline();
    let ths = [1.0, 10.0, 100.0, 1000.0];
    let sweep = simulate_success_sweep(2, &cfg, Scheme::Urdc, &ths, 1500, DEFAULT_RINGS).unwrap();
    assert!(sweep.windows(2).all(|w| w[1].successes <= w[0].successes));
    let single = simulate_success_sweep(2, &cfg, Scheme::Urdc, &ths[2..3], 1500, DEFAULT_RINGS).unwrap();
    assert_eq!(single[0], sweep[2]);
}

#[test]
fn seeds_change_estimates_within_their_intervals() {
    let cfg = ScenarioConfig::baseline();
    let th = db_to_linear(5.0);
    let a = simulate_success(100, &cfg, Scheme::Suc, th, 3000).unwrap();
    let b = simulate_success(101, &cfg, Scheme::Suc, th, 3000).unwrap();
    assert_ne!(a.estimate, b.estimate);
    assert!((a.estimate - b.estimate).abs() < 2.0 * (a.ci_half_width + b.ci_half_width));
}

#[test]
fn device_centric_simulation_tracks_analysis_at_40_db() {
    let cfg = ScenarioConfig::baseline();
    let th = db_to_linear(40.0);
    let sim = simulate_success(11, &cfg, Scheme::Urdc, th, 20_000).unwrap();
    let an = success_probability_urdc(&cfg, th, &QuadratureSpec::default()).unwrap();
    assert!((sim.estimate - an).abs() <= sim.ci_half_width.max(0.015), "{} vs {an}", sim.estimate);
}

#[test]
fn conditional_mean_matches_first_moment() {
    let cfg = ScenarioConfig::baseline();
    let th = db_to_linear(40.0);
    let sim = simulate_meta(21, &cfg, Scheme::Urdc, th, 150, 150).unwrap();
    let m1 = meta_moment(&cfg, Scheme::Urdc, th, 1, &QuadratureSpec::default()).unwrap();
    assert!((sim.mean() - m1).abs() < 0.01, "{} vs {m1}", sim.mean());
}

#[test]
fn queue_simulation_matches_solver() {
    let (n, a, s) = (3, 0.05, 0.9);
    let des = simulate_queue(1, n, a, s, 2_000_000);
    let an = solve_queue(n, a, s).unwrap();
    assert!((des.q_w / an.delay_slots() - 1.0).abs() < 0.02);
    assert!((des.q_l / an.queue_length() - 1.0).abs() < 0.03);
}

#[test]
fn unstable_queue_drifts_upward() {
    let r = simulate_queue(4, 3, 0.5, 0.9, 1_000_000);
    assert!(solve_queue(3, 0.5, 0.9).map(|q| !q.is_stable()).unwrap());
    assert!(r.second_half_q_l > 2.0 * r.first_half_q_l);
    // net drift alpha - S_p/N_d = 0.2 packets per slot
    assert!(r.final_queue > 150_000);
}
