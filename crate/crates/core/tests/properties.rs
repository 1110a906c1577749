//! Property tests over randomly drawn inputs.

use proptest::prelude::*;
use uplink_core::analysis::success::{alzer_constant, binomial};
use uplink_core::analysis::{meta::sine_integral, success_probability_suc, InterferenceField};
use uplink_core::config::file::{parse_scenario, parse_with_overrides, ScenarioFile};
use uplink_core::config::rate_threshold;
use uplink_core::energy::{blade_and_induced_power, hover_power, propulsion_power};
use uplink_core::geometry::{avg_segment_exact, greedy_tour, HexCell};
use uplink_core::quadrature::QuadratureSpec;
use uplink_core::queueing::{build_blocks, build_ph_service, quadratic_residual, rate_matrix, solve_queue, steady_state};
use uplink_core::rng::substream;
use uplink_core::{db_to_linear, linear_to_db, Environment, LinkState, ScenarioConfig, Scheme};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn db_round_trip(x in -200.0f64..200.0) {
        prop_assert!((linear_to_db(db_to_linear(x)) - x).abs() < 1e-10);
    }

    #[test]
    fn hexagon_samples_stay_inside(seed in any::<u64>(), cx in -1e4f64..1e4, cy in -1e4f64..1e4, r in 1.0f64..2000.0) {
        let cell = HexCell::new([cx, cy], r);
        let mut rng = substream(seed, 0);
        for _ in 0..50 {
            prop_assert!(cell.contains(cell.sample_uniform(&mut rng)));
        }
    }

    #[test]
    fn segment_length_decreasing_and_linear(n in 1usize..400, r in 1.0f64..5000.0) {
        let a = avg_segment_exact(n, r).unwrap();
        let b = avg_segment_exact(n + 1, r).unwrap();
        prop_assert!(b < a);
        let scaled = avg_segment_exact(n, 3.0 * r).unwrap();
        prop_assert!((scaled - 3.0 * a).abs() < 1e-9 * scaled);
    }

    #[test]
    fn greedy_tour_is_a_permutation(seed in any::<u64>(), n in 0usize..60) {
        let cell = HexCell::new([0.0, 0.0], 100.0);
        let mut rng = substream(seed, 1);
        let pts: Vec<_> = (0..n).map(|_| cell.sample_uniform(&mut rng)).collect();
        let tour = greedy_tour(cell.sample_uniform(&mut rng), &pts);
        let mut idx: Vec<usize> = tour.iter().map(|t| t.0).collect();
        idx.sort_unstable();
        prop_assert_eq!(idx, (0..n).collect::<Vec<_>>());
        prop_assert!(tour.iter().all(|t| t.1 >= 0.0));
    }

    #[test]
    fn propulsion_positive_and_hover_at_rest(w in 10.0f64..100.0, v in 0.0f64..80.0) {
        let mut p = ScenarioConfig::baseline().rotorcraft;
        p.weight = w;
        prop_assert!(propulsion_power(&p, v) > 0.0);
        let (p0, pi) = blade_and_induced_power(&p);
        prop_assert_eq!(propulsion_power(&p, 0.0), p0 + pi);
        prop_assert_eq!(hover_power(&p), p0 + pi);
    }

    #[test]
    fn threshold_grows_with_packet_size(bits in 1e3f64..1e7, extra in 1.0f64..1e6) {
        let a = rate_threshold(bits, 6.0, 0.9, 2e6);
        let b = rate_threshold(bits + extra, 6.0, 0.9, 2e6);
        prop_assert!(a > 0.0 && b > a);
    }

    #[test]
    fn sine_integral_is_odd_and_bounded(x in -1e4f64..1e4) {
        let s = sine_integral(x);
        prop_assert!((s + sine_integral(-x)).abs() < 1e-12);
        prop_assert!(s.abs() <= 1.851_937_052_284_07);
    }

    #[test]
    fn alzer_constant_collapses_at_one(m in 1u32..40) {
        let g = alzer_constant(m);
        prop_assert!(g >= 1.0 - 1e-12 && g <= m as f64 + 1e-9);
        if m == 1 {
            prop_assert_eq!(g, 1.0);
        }
        let sum: f64 = (0..=m as u64).map(|k| binomial(m as u64, k)).sum();
        prop_assert!((sum - 2f64.powi(m as i32)).abs() < 1e-6 * sum);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stable_queues_solve_cleanly(n in 1usize..30, s in 0.05f64..1.0, load in 0.01f64..0.95) {
        let alpha = load * s / n as f64;
        let blocks = build_blocks(&build_ph_service(n, s).unwrap(), alpha).unwrap();
        let r = rate_matrix(&blocks).unwrap();
        prop_assert!(quadratic_residual(&blocks, &r) < 1e-10);
        prop_assert!(r.iter().all(|&x| x >= -1e-14));
        let ss = steady_state(&blocks, &r).unwrap();
        prop_assert!(ss.balance_residual < 1e-8);
        let q = solve_queue(n, alpha, s).unwrap();
        // waiting adds to the mean service time, never subtracts
        prop_assert!(q.delay_slots() >= n as f64 / s * (1.0 - 1e-9));
    }

    #[test]
    fn queues_at_or_past_capacity_are_unstable(n in 1usize..30, s in 0.05f64..1.0, over in 1.0f64..3.0) {
        let alpha = (over * s / n as f64).min(0.999);
        prop_assume!(alpha >= s / n as f64);
        prop_assert!(!solve_queue(n, alpha, s).unwrap().is_stable());
    }

    #[test]
    fn unknown_keys_are_rejected(key in "[a-z]{3,12}") {
        prop_assume!(!["geometry", "channel", "antenna", "traffic", "kinematics", "rotorcraft", "environment"].contains(&key.as_str()));
        let text = format!("{key} = 1\n");
        prop_assert!(parse_scenario(&text).is_err());
        let nested = format!("[geometry]\n{key}_x = 1\n");
        prop_assert!(parse_scenario(&nested).is_err());
    }

    #[test]
    fn altitude_override_round_trips(h in 10.0f64..300.0) {
        let cfg = parse_with_overrides("", &[format!("geometry.altitude_m={h}")]).unwrap();
        prop_assert_eq!(cfg.geometry.altitude, h);
        let text = ScenarioFile::from_config(&cfg).to_toml().unwrap();
        prop_assert_eq!(parse_scenario(&text).unwrap(), cfg);
    }
}

proptest! {
    // each case integrates several Laplace transforms
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn laplace_bounded_and_monotone(ls1 in -3.0f64..16.0, dl in 0.0f64..3.0, env in 0usize..4, suc in any::<bool>()) {
        let cfg = ScenarioConfig::baseline().with_environment(Environment::ALL[env]);
        let scheme = if suc { Scheme::Suc } else { Scheme::Urdc };
        let field = InterferenceField::for_scheme(&cfg, scheme);
        let q = QuadratureSpec::default();
        for c in LinkState::BOTH {
            let a = field.laplace(10f64.powf(ls1), c, &q).unwrap().value;
            let b = field.laplace(10f64.powf(ls1 + dl), c, &q).unwrap().value;
            prop_assert!((0.0..=1.0).contains(&a) && b <= a + 1e-12);
            let e = field.laplace_exponent(10f64.powf(ls1), c, &q).unwrap().value;
            prop_assert!(e.is_finite() && e >= 0.0);
        }
    }

    #[test]
    fn success_monotone_in_threshold(db in -20.0f64..50.0, step in 0.1f64..10.0, r in 0.0f64..650.0) {
        let cfg = ScenarioConfig::baseline();
        let q = QuadratureSpec::default();
        let a = success_probability_suc(&cfg, db_to_linear(db), r, &q).unwrap();
        let b = success_probability_suc(&cfg, db_to_linear(db + step), r, &q).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a + 1e-12);
    }
}
