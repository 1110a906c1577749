//! Independent oracles for the analytic modules.

use num_complex::Complex64;
use rand::Rng;
use uplink_core::analysis::{InterferenceField, MetaEngine};
use uplink_core::channel::{sample_interferer_gain, NakagamiPower};
use uplink_core::geometry::{sample_ppp, Region};
use uplink_core::quadrature::QuadratureSpec;
use uplink_core::queueing::{build_blocks, build_ph_service, quadratic_residual, rate_matrix, solve_queue};
use uplink_core::rng::substream;
use uplink_core::{db_to_linear, LinkState, ScenarioConfig, Scheme};

/// Minimal solution by successive substitution from R = 0.
fn iterate_r(n: usize, alpha: f64, s: f64) -> nalgebra::DMatrix<f64> {
    let blocks = build_blocks(&build_ph_service(n, s).unwrap(), alpha).unwrap();
    let mut r = nalgebra::DMatrix::zeros(n, n);
    for _ in 0..1_000_000 {
        let next = &blocks.a0 + &r * &blocks.a1 + &r * &r * &blocks.a2;
        let step = (&next - &r).abs().max();
        r = next;
        if step < 1e-15 {
            break;
        }
    }
    r
}

#[test]
fn rate_matrix_matches_fixed_point_iteration() {
    for (n, a, s) in [(3, 0.05, 0.9), (5, 0.1, 0.8), (8, 0.08, 0.7), (1, 0.4, 0.5)] {
        let blocks = build_blocks(&build_ph_service(n, s).unwrap(), a).unwrap();
        let closed = rate_matrix(&blocks).unwrap();
        let iter = iterate_r(n, a, s);
        let gap = (&closed - &iter).abs().max();
        assert!(gap < 1e-8, "N_d={n} alpha={a} S_p={s}: gap {gap:e}");
        assert!(quadratic_residual(&blocks, &closed) < 1e-10);
    }
}

#[test]
fn light_traffic_delay_is_service_time() {
    // one packet at a time: N_d slots per attempt, geometric number of attempts
    for (n, s) in [(4usize, 0.5), (10, 0.9), (100, 1.0)] {
        let q = solve_queue(n, 1e-9, s).unwrap();
        let service = n as f64 / s;
        assert!((q.delay_slots() - service).abs() < 1e-4 * service, "{n} {s}: {}", q.delay_slots());
    }
}

#[test]
fn laplace_matches_monte_carlo_over_an_annulus() {
    let cfg = ScenarioConfig::baseline();
    let quad = QuadratureSpec::default();
    let field = InterferenceField::for_scheme(&cfg, Scheme::Urdc);
    let outer = 8_000.0;
    let mut far = field;
    far.exclusion_radius = outer;
    let s = 1e11;
    let exact: f64 = LinkState::BOTH
        .iter()
        .map(|&c| field.laplace(s, c, &quad).unwrap().value / far.laplace(s, c, &quad).unwrap().value)
        .product();

    let ch = cfg.channel;
    let h = cfg.geometry.altitude;
    let los = NakagamiPower::new(ch.m_los).unwrap();
    let nlos = NakagamiPower::new(ch.m_nlos).unwrap();
    let region = Region::Annulus { center: [0.0, 0.0], inner: field.exclusion_radius, outer };
    let trials = 20_000u64;
    let mut acc = 0.0;
    for t in 0..trials {
        let mut rng = substream(77, t);
        let pts = sample_ppp(&mut rng, field.intensity, &region).unwrap();
        let mut i = 0.0;
        for p in pts {
            let r = p[0].hypot(p[1]);
            let d2 = r * r + h * h;
            let (fade, alpha) = if rng.random::<f64>() < field.los.p_los(r) {
                (los.sample(&mut rng), ch.alpha_los)
            } else {
                (nlos.sample(&mut rng), ch.alpha_nlos)
            };
            i += ch.tx_power * sample_interferer_gain(&mut rng, &field.mix) * fade * d2.powf(-0.5 * alpha);
        }
        acc += (-s * i).exp();
    }
    let mc = acc / trials as f64;
    // the sample mean of a [0,1] variable has SD at most 0.5/sqrt(n)
    assert!((mc - exact).abs() < 4.0 * 0.5 / (trials as f64).sqrt(), "MC {mc} vs {exact}");
}

#[test]
fn imaginary_moments_are_linear_near_zero() {
    // M_jt ~ 1 + jt E[ln S] for small t, along both the series and the direct path
    let cfg = ScenarioConfig::baseline();
    let quad = QuadratureSpec::default();
    let e = MetaEngine::new(&cfg, Scheme::Urdc, db_to_linear(10.0), &quad).unwrap();
    let (h1, h2) = (1e-4, 1e-3);
    for direct in [false, true] {
        let at = |t: f64| {
            if direct {
                e.direct_moment(Complex64::new(0.0, t)).unwrap().value
            } else {
                e.imaginary_moment(t).unwrap().value
            }
        };
        let (m1, m2) = (at(h1), at(h2));
        assert!(m1.norm() <= 1.0 + 1e-12 && m2.norm() <= 1.0 + 1e-12);
        let (d1, d2) = (m1.im / h1, m2.im / h2);
        assert!(d1 < 0.0, "E[ln S] must be negative");
        assert!((d1 - d2).abs() < 0.25 * d1.abs(), "direct={direct}: {d1} vs {d2}");
        assert!((1.0 - m2.re).abs() < 1e-6);
    }
}
