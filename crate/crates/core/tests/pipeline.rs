//! End-to-end checks through the public API: model → A(t,0) → intermediate
//! map → Choi spectrum, against scalar closed forms.

use std::f64::consts::PI;

use dynmap::dynmaps::{concurrence, jamiolkowski_state, Verdict};
use dynmap::models::{kappa_magnitude, Model, NoiseProfile, OpticalParams, SpinBathParams, TwoQubitParams};
use dynmap::sweep::{evaluate, SweepVerdict};

const TOL: f64 = 2e-9;

fn eigs(model: &Model, t1: f64, t2: f64) -> [f64; 4] {
    evaluate(model, t1, t2, TOL).unwrap().eigenvalues.expect("invertible at t1")
}

#[test]
fn werner_cos2_pipeline() {
    let m = Model::Werner(NoiseProfile::cos_pow_2m(1, 1.0).unwrap());
    let q = 2.0f64.cos().powi(2) / 1.0f64.cos().powi(2);
    assert!((q - 0.59323).abs() < 1e-5);
    let e = eigs(&m, 1.0, 2.0);
    assert!((e[0] - (1.0 - q) / 2.0).abs() < 1e-9);
    assert!((e[0] - 0.20338).abs() < 1e-5);
    assert!((e[3] - (1.0 + 3.0 * q) / 2.0).abs() < 1e-9);

    let r = evaluate(&m, 1.4, 2.8, TOL).unwrap();
    assert_eq!(r.verdict, SweepVerdict::Ncp);
}

#[test]
fn optical_pipeline() {
    let p = OpticalParams::new(0.3, 0.0, 1.0).unwrap();
    assert!((kappa_magnitude(&p, PI / 4.0) - 0.58f64.sqrt()).abs() < 1e-15);
    assert!((0.58f64.sqrt() - 0.76158).abs() < 1e-5);
    let m = Model::Optical(p);

    // |κ₁| = 0.4, |κ₂| = 1 → 1 − 2.5
    let e = eigs(&m, PI / 2.0, PI);
    assert!((e[0] + 1.5).abs() < 1e-9);

    let e = eigs(&m, PI / 4.0, PI / 2.0);
    assert!((e[2] - (1.0 - 0.4 / 0.58f64.sqrt())).abs() < 1e-9);
    assert!(e[0].abs() < 1e-9);
}

#[test]
fn spin_bath_pipeline() {
    let m = Model::SpinBath(SpinBathParams::new(4, 1.0).unwrap());
    let (x1, x2) = (0.3f64.cos().powi(4), 0.6f64.cos().powi(4));
    assert!((x1 - 0.83296).abs() < 1e-5 && (x2 - 0.46401).abs() < 1e-5);
    let e = eigs(&m, 0.3, 0.6);
    assert!((e[2] - (1.0 - x2 / x1)).abs() < 1e-9);
    assert!((e[2] - 0.44294).abs() < 1e-5);
}

#[test]
fn two_qubit_pipeline() {
    let m = Model::TwoQubit(TwoQubitParams::new(1.0).unwrap());
    let e = eigs(&m, 1.0, 2.0);
    assert!((e[2] - 0.22979).abs() < 1e-5);
    let e = eigs(&m, 1.4, 2.8);
    assert!((e[0] + 4.5436).abs() < 1e-4);
    assert_eq!(evaluate(&m, PI / 2.0, 2.0, TOL).unwrap().verdict, SweepVerdict::Singular);
}

#[test]
fn jamiolkowski_concurrence_of_werner() {
    let m = Model::Werner(NoiseProfile::exp(1.0).unwrap());
    for t in [0.0f64, 0.2, 0.5, 1.0, 2.0] {
        let p = (-t).exp();
        let s = jamiolkowski_state(&m.a_map(t).unwrap()).unwrap();
        assert!(s.is_state);
        let c = concurrence(&s.matrix).unwrap();
        assert!((c - (0.0f64).max((3.0 * p - 1.0) / 2.0)).abs() < 1e-10, "t={t}");
    }
    let report = m.a_map(0.5).unwrap().to_dynamical().cp_classify_default().unwrap();
    assert_eq!(report.verdict, Verdict::Cp);
}
