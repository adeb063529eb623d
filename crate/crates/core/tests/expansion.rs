mod common;

use bergman_model::expansion::{b_coeffs, eval_b};
use bergman_model::poly::{parse_poly, GaussianRational};
use common::{arb_quartic_weight, EPS_WEIGHT};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn epsilon_example_values() {
    let c = b_coeffs(&parse_poly(EPS_WEIGHT).unwrap()).unwrap();
    let one = GaussianRational::from_int(1);
    assert_eq!(c.b0.eval(&one, &one), GaussianRational::from_int(22));
    assert_eq!(c.b1.eval(&one, &one).unwrap(), GaussianRational::from_ratio(-3, 11));
    let v = eval_b(&c, Complex64::new(1.0, 0.0)).unwrap();
    assert!((v[1].re + 0.2727272727).abs() < 1e-10);
}

#[test]
fn monomial_weights_have_only_leading_term() {
    for w in ["1/2*(z*w)^2", "3*(z*w)^3", "5/2*z*w"] {
        assert!(b_coeffs(&parse_poly(w).unwrap()).unwrap().all_higher_vanish(), "{w}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coefficients_are_hermitian_and_scale(p in arb_quartic_weight(), n in 1i64..5, d in 1i64..4) {
        let c = b_coeffs(&p).unwrap();
        prop_assert!(c.b1.is_hermitian() && c.b2.is_hermitian() && c.b3.is_hermitian());
        let t = GaussianRational::from_ratio(n, d);
        let ct = b_coeffs(&p.scale(&t)).unwrap();
        let ti = t.inv().unwrap();
        prop_assert!(ct.b1.equals(&c.b1));
        prop_assert!(ct.b2.equals(&c.b2.scale(&ti)));
    }
}
