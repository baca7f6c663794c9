mod common;

use common::*;
use gauss_avqfi::gaussian::{tmsv, GaussianState};
use gauss_avqfi::qfi::*;
use gauss_avqfi::{EncodingParams, Error, SingleModeProbeParams};
use rand::Rng;
use std::f64::consts::PI;

#[test]
fn tmsv_noiseless_value_any_theta() {
    let probe = tmsv(1f64.asinh());
    for theta in [0.0, 0.4, 1.3, 2.9] {
        let r = qfi_two_mode(&probe, &EncodingParams::unitary(0.3, theta).unwrap()).unwrap();
        assert!(r.regularized);
        assert!((r.value - 10.0).abs() < 1e-6, "θ={theta}: {}", r.value);
    }
}

#[test]
fn two_mode_vacuum_is_two() {
    let r = qfi_two_mode(&GaussianState::vacuum(2), &EncodingParams::unitary(0.0, 0.0).unwrap()).unwrap();
    assert!((r.value - 2.0).abs() < 1e-6, "{}", r.value);
}

#[test]
fn ancilla_temperature_is_irrelevant() {
    let mut g = rng(11);
    for eta in [1.0, 0.7] {
        let a = random_single_mode(&mut g).to_state().unwrap();
        let p = EncodingParams::new(0.6, 0.9, eta).unwrap();
        let vals: Vec<f64> = [1.5, 3.0, 10.0]
            .iter()
            .map(|&nb| {
                let probe = GaussianState::product(&a, &GaussianState::thermal(nb).unwrap()).unwrap();
                qfi_two_mode(&probe, &p).unwrap().value
            })
            .collect();
        for v in &vals {
            assert!(rel_err(*v, vals[0]) < 1e-7, "{vals:?}");
        }
    }
}

#[test]
fn single_mode_examples() {
    let v = qfi_single_mode(&GaussianState::vacuum(1), &EncodingParams::unitary(0.2, 0.0).unwrap()).unwrap();
    assert!((v.value - 2.0).abs() < 1e-12);
    let sq = SingleModeProbeParams::new(1.0, 1f64.asinh(), 0.0, 0.0, 0.0).unwrap().to_state().unwrap();
    let r = qfi_single_mode(&sq, &EncodingParams::unitary(0.5, PI / 4.0).unwrap()).unwrap();
    assert!((r.value - 18.0).abs() < 1e-9, "{}", r.value);
}

#[test]
fn single_mode_matches_two_mode_with_thermal_ancilla() {
    let mut g = rng(12);
    for _ in 0..50 {
        let p = random_single_mode(&mut g);
        let a = p.to_state().unwrap();
        let b = GaussianState::thermal(1.2 + 4.0 * g.gen::<f64>()).unwrap();
        let eta = if g.gen::<bool>() { 1.0 } else { 0.2 + 0.79 * g.gen::<f64>() };
        let params = EncodingParams::new(0.1 + g.gen::<f64>(), g.gen::<f64>() * 2.0 * PI, eta).unwrap();
        let one = qfi_single_mode(&a, &params).unwrap().value;
        let two = qfi_two_mode(&GaussianState::product(&a, &b).unwrap(), &params).unwrap().value;
        assert!(rel_err(one, two) < 1e-8, "{one} vs {two} ({p:?}, {params:?})");
    }
}

#[test]
fn two_mode_matches_kronecker_oracle_on_mixed_states() {
    let mut g = rng(13);
    for _ in 0..50 {
        let s = random_two_mode(&mut g, 3.0);
        let eta = 0.3 + 0.7 * g.gen::<f64>();
        let (eps, theta) = (2.0 * g.gen::<f64>() - 1.0, g.gen::<f64>() * 2.0 * PI);
        let params = EncodingParams::new(eps, theta, eta).unwrap();
        let got = qfi_two_mode(&s, &params).unwrap().value;
        let want = monras_qfi(s.gamma(), s.xi(), eps, theta, eta);
        assert!(rel_err(got, want) < 1e-6, "{got} vs {want}");
    }
}

#[test]
fn pure_two_mode_matches_pure_state_oracle() {
    let mut g = rng(14);
    for _ in 0..30 {
        let s = random_two_mode_with(&mut g, 1.0, 1.0);
        let (eps, theta) = (g.gen::<f64>(), g.gen::<f64>() * 2.0 * PI);
        let r = qfi_two_mode(&s, &EncodingParams::unitary(eps, theta).unwrap()).unwrap();
        let want = pure_qfi(s.gamma(), s.xi(), eps, theta, 1.0);
        assert!(r.regularized);
        assert!(rel_err(r.value, want) < 1e-6, "{} vs {want}", r.value);
    }
}

#[test]
fn single_mode_matches_kronecker_oracle() {
    let mut g = rng(15);
    for _ in 0..50 {
        let s = random_single_mode(&mut g).to_state().unwrap();
        let eta = if g.gen::<bool>() { 1.0 } else { 0.1 + 0.9 * g.gen::<f64>() };
        let (eps, theta) = (2.0 * g.gen::<f64>() - 1.0, g.gen::<f64>() * 2.0 * PI);
        let got = qfi_single_mode(&s, &EncodingParams::new(eps, theta, eta).unwrap()).unwrap().value;
        let want = monras_qfi(s.gamma(), s.xi(), eps, theta, eta);
        assert!(rel_err(got, want) < 1e-6, "{got} vs {want}");
    }
}

#[test]
fn analytic_derivatives_match_finite_differences() {
    let mut g = rng(16);
    for _ in 0..50 {
        let s = random_two_mode(&mut g, 3.0);
        let p = EncodingParams::unitary(2.0 * g.gen::<f64>() - 1.0, g.gen::<f64>() * 2.0 * PI).unwrap();
        let a = encoded_derivatives(&s, &p, DerivativeMode::Analytic).unwrap();
        let f = encoded_derivatives(&s, &p, DerivativeMode::FiniteDifference).unwrap();
        let scale = a.dgamma.amax().max(1.0);
        assert!((&a.dgamma - &f.dgamma).amax() / scale < 1e-7);
        assert_eq!(a.dnus, vec![0.0, 0.0]);
        assert!(f.dnus.iter().all(|d| d.abs() < 1e-6));
    }
}

#[test]
fn finite_difference_pipeline_reproduces_engine() {
    let mut g = rng(17);
    for _ in 0..20 {
        let s = random_two_mode(&mut g, 3.0);
        let p = EncodingParams::new(0.4, g.gen::<f64>() * 6.0, 0.5 + 0.5 * g.gen::<f64>()).unwrap();
        let a = qfi_two_mode_with(&s, &p, DerivativeMode::Analytic).unwrap().value;
        let f = qfi_two_mode_with(&s, &p, DerivativeMode::FiniteDifference).unwrap().value;
        assert!(rel_err(a, f) < 1e-7, "{a} vs {f}");
    }
}

#[test]
fn identity_residuals() {
    let mut g = rng(18);
    for eta in [1.0, 0.8] {
        for _ in 0..20 {
            let s = random_single_mode(&mut g).to_state().unwrap();
            let r = verify_single_mode_identity(&s, &EncodingParams::new(1.0, g.gen::<f64>() * 6.0, eta).unwrap()).unwrap();
            assert!(r.residual < 1e-7 * r.lhs.abs().max(1.0), "{r:?}");
        }
    }
    let v = verify_single_mode_identity(&GaussianState::vacuum(1), &EncodingParams::unitary(0.5, 0.0).unwrap()).unwrap();
    assert!(v.residual < 1e-10, "{v:?}");
}

#[test]
fn unitary_eigenvalue_term_is_exactly_zero() {
    let mut g = rng(19);
    for _ in 0..20 {
        let s = random_two_mode(&mut g, 4.0);
        let r = qfi_two_mode(&s, &EncodingParams::unitary(0.3, g.gen::<f64>() * 6.0).unwrap()).unwrap();
        assert_eq!(r.term_eigenvalues, 0.0);
        assert_eq!(r.value, r.term_covariance + r.term_eigenvalues + r.term_displacement);
    }
}

#[test]
fn unitary_qfi_does_not_depend_on_epsilon() {
    let mut g = rng(20);
    for _ in 0..20 {
        let s = random_two_mode(&mut g, 3.0);
        let th = g.gen::<f64>() * 6.0;
        let vals: Vec<f64> = [0.1, 0.5, 1.0]
            .iter()
            .map(|&e| qfi_two_mode(&s, &EncodingParams::unitary(e, th).unwrap()).unwrap().value)
            .collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(0.0, f64::max);
        assert!((hi - lo) / lo < 1e-6, "{vals:?}");
    }
}

#[test]
fn partial_trace_never_increases_qfi() {
    let mut g = rng(21);
    for _ in 0..200 {
        let s = random_two_mode(&mut g, 3.0);
        let eta = if g.gen::<bool>() { 1.0 } else { 0.3 + 0.7 * g.gen::<f64>() };
        let p = EncodingParams::new(g.gen::<f64>(), g.gen::<f64>() * 6.0, eta).unwrap();
        let two = qfi_two_mode(&s, &p).unwrap().value;
        let one = qfi_single_mode(&s.partial_trace(0).unwrap(), &p).unwrap().value;
        assert!(two >= one - 1e-7, "{two} < {one}");
    }
}

#[test]
fn displacement_term_recomputed_independently() {
    let mut g = rng(22);
    for _ in 0..20 {
        let s = random_two_mode(&mut g, 3.0);
        let (eps, th, eta) = (0.5, g.gen::<f64>() * 6.0, 0.9);
        let r = qfi_two_mode(&s, &EncodingParams::new(eps, th, eta).unwrap()).unwrap();
        let (gt, _) = common::encode(s.gamma(), s.xi(), eps, th, eta);
        let (_, dx) = fd_derivatives(s.gamma(), s.xi(), eps, th, eta);
        let want = 2.0 * dx.dot(&(gt.try_inverse().unwrap() * &dx));
        assert!(rel_err(r.term_displacement, want) < 1e-8);
    }
}

#[test]
fn degenerate_spectrum_limit() {
    // Product of thermal states tuned so that both encoded eigenvalues coincide.
    let a = GaussianState::thermal(2.0).unwrap();
    let p = EncodingParams::new(0.7, 0.3, 0.6).unwrap();
    let nu_a = encode_state(&a, &p);
    let exact = GaussianState::product(&a, &GaussianState::thermal(nu_a).unwrap()).unwrap();
    let at = qfi_two_mode(&exact, &p).unwrap().value;
    let near = GaussianState::product(&a, &GaussianState::thermal(nu_a + 1e-4).unwrap()).unwrap();
    let next = qfi_two_mode(&near, &p).unwrap().value;
    let single = qfi_single_mode(&a, &p).unwrap().value;
    assert!(rel_err(at, single) < 1e-6, "{at} vs {single}");
    assert!(rel_err(next, single) < 1e-6, "{next} vs {single}");
    let oracle = monras_qfi(exact.gamma(), exact.xi(), p.epsilon, p.theta, p.eta);
    assert!(rel_err(at, oracle) < 1e-6);
}

fn encode_state(a: &GaussianState, p: &EncodingParams) -> f64 {
    gauss_avqfi::qfi::encode(a, p).unwrap().symplectic_eigenvalues().unwrap()[0]
}

#[test]
fn lossy_rank_change_window_is_rejected() {
    // A squeezed vacuum with η slightly below one lands barely above purity.
    let s = SingleModeProbeParams::new(1.0, 0.5, 0.0, 0.0, 0.0).unwrap().to_state().unwrap();
    let p = EncodingParams::new(0.0, 0.0, 1.0 - 1e-8).unwrap();
    match qfi_single_mode(&s, &p) {
        Err(Error::RankChange { .. }) => {}
        other => panic!("expected rank-change error, got {other:?}"),
    }
}

#[test]
fn stationary_pure_ancilla_is_tolerated() {
    let a = random_single_mode(&mut rng(23)).to_state().unwrap();
    let probe = GaussianState::product(&a, &GaussianState::vacuum(1)).unwrap();
    let p = EncodingParams::new(0.4, 1.0, 0.7).unwrap();
    let two = qfi_two_mode(&probe, &p).unwrap().value;
    let one = qfi_single_mode(&a, &p).unwrap().value;
    assert!(rel_err(two, one) < 1e-8, "{two} vs {one}");
}

#[test]
fn full_loss_gives_zero() {
    let s = random_two_mode(&mut rng(24), 3.0);
    assert_eq!(qfi_two_mode(&s, &EncodingParams::new(0.3, 0.2, 0.0).unwrap()).unwrap().value, 0.0);
}

#[test]
fn wrong_mode_count_is_rejected() {
    let p = EncodingParams::unitary(0.1, 0.0).unwrap();
    assert!(matches!(qfi_two_mode(&GaussianState::vacuum(1), &p), Err(Error::Dimension(_))));
    assert!(matches!(qfi_single_mode(&GaussianState::vacuum(2), &p), Err(Error::Dimension(_))));
}

#[test]
fn state_json_round_trip() {
    let mut rng = rng(21);
    let s = random_two_mode(&mut rng, 3.0);
    let text = serde_json::to_string(&s).unwrap();
    let back: GaussianState = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s);
    let p = EncodingParams::new(0.4, 0.9, 0.6).unwrap();
    assert_eq!(qfi(&back, &p).unwrap(), qfi(&s, &p).unwrap());

    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["modes"], 2);
    assert_eq!(v["gamma"].as_array().unwrap().len(), 4);
    assert_eq!(v["gamma"][0][1].as_f64().unwrap(), s.gamma()[(0, 1)]);

    let bad = r#"{"modes": 1, "gamma": [[0.5, 0], [0, 0.5]], "xi": [0, 0]}"#;
    assert!(serde_json::from_str::<GaussianState>(bad).is_err());
}
