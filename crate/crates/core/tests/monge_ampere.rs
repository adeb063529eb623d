mod common;

use std::f64::consts::PI;

use bergman_model::monge_ampere::{
    ball_check, ball_field, ball_kernel, bergman_invariant, j_log_form, j_operator, ke_kernel_check, Point, ScalarField,
    BALL_INVARIANT,
};
use common::sample;
use num_complex::Complex64;
use proptest::prelude::*;

fn pt(a: f64, b: f64, c: f64, d: f64) -> Point {
    [Complex64::new(a, b), Complex64::new(c, d)]
}

#[test]
fn ball_constants() {
    assert!((BALL_INVARIANT - 9.0 * PI * PI / 2.0).abs() < 1e-12);
    assert!((BALL_INVARIANT - 44.4132198049).abs() < 1e-9);
    let k = ball_field();
    for z in [pt(0.0, 0.0, 0.0, 0.0), pt(0.3, 0.0, 0.1, 0.0), pt(0.5, 0.0, 0.2, 0.0)] {
        assert!((bergman_invariant(&k, &z, None).unwrap() - BALL_INVARIANT).abs() < 1e-4 * BALL_INVARIANT);
        assert!(ke_kernel_check(&k, &z, None).unwrap() < 1e-4);
    }
    assert!(ball_kernel(&pt(0.8, 0.0, 0.6, 0.0)).is_err());
}

#[test]
fn operator_and_log_form_agree() {
    let u = ScalarField::new(|z: &Point| 1.0 - z[0].norm_sqr() - z[1].norm_sqr());
    let pts = sample((-0.5..0.5f64, -0.5..0.5f64, -0.5..0.5f64, -0.5..0.5f64), 20);
    for (a, b, c, d) in pts {
        let z = pt(a, b, c, d);
        let j = j_operator(&u, &z, None).unwrap();
        assert!((j - j_log_form(&u, &z, None).unwrap()).abs() <= 1e-6 * j.abs());
        assert!((j - 1.0).abs() < 1e-8);
    }
}

#[test]
fn perturbed_kernel_is_detected() {
    let k = ScalarField::new(|z: &Point| ball_kernel(z).unwrap_or(f64::NAN) * (1.0 + 0.1 * z[0].re));
    assert!(ke_kernel_check(&k, &pt(0.5, 0.0, 0.2, 0.0), None).unwrap() > 1e-2);
}

#[test]
fn ball_check_record() {
    let rec = ball_check(&pt(0.0, 0.0, 0.0, 0.0), None).unwrap();
    assert!((rec.b - BALL_INVARIANT).abs() < 1e-4 * BALL_INVARIANT);
    assert!((rec.k - 2.0 / (PI * PI)).abs() < 1e-15);
    let json = serde_json::to_value(&rec).unwrap();
    for key in ["B", "J", "K", "residual"] {
        assert!(json.get(key).is_some(), "{key}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scaling_by_two_multiplies_j_by_eight(a in -0.4..0.4f64, b in -0.4..0.4f64, c in -0.4..0.4f64, d in -0.4..0.4f64) {
        let z = pt(a, b, c, d);
        let u = ScalarField::new(|z: &Point| 1.0 - z[0].norm_sqr() - z[1].norm_sqr());
        let u2 = ScalarField::new(|z: &Point| 2.0 * (1.0 - z[0].norm_sqr() - z[1].norm_sqr()));
        let ratio = j_operator(&u2, &z, None).unwrap() / j_operator(&u, &z, None).unwrap();
        prop_assert!((ratio - 8.0).abs() < 1e-6);
    }
}
