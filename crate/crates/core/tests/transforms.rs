use std::f64::consts::PI;

use bergman_model::model_kernel::{KernelConfig, KernelModel, MonomialKernel};
use bergman_model::numerics::{gamma, QuadSpec};
use bergman_model::poly::parse_poly;
use bergman_model::transforms::{
    b_tilde, b_tilde_deriv, ke_determinant, quadratic_root_check, watson_coeffs, watson_transform, watson_vs_quadrature,
    KernelSource,
};
use num_complex::Complex64;
use num_rational::BigRational;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn mono(cc: f64, r: u32) -> KernelSource<'static> {
    KernelSource::Monomial(MonomialKernel::new(cc, r).unwrap())
}

#[test]
fn gaussian_transform_is_constant() {
    let spec = QuadSpec::default();
    let src = mono(1.0, 2);
    for z1 in [c(0.0, 0.0), c(0.4, -0.3), c(1.2, 0.5)] {
        assert!((b_tilde(&src, 0, z1, &spec).unwrap() - 2.0 / (PI * PI)).abs() < 1e-12);
        for (a1, a2) in [(1, 0), (0, 1), (1, 1)] {
            assert!(b_tilde_deriv(&src, 0, a1, a2, z1, &spec).unwrap().norm() < 1e-10);
        }
    }
}

#[test]
fn quartic_transform_at_origin() {
    let spec = QuadSpec::default();
    let src = mono(1.0, 4);
    let b0 = b_tilde(&src, 0, c(0.0, 0.0), &spec).unwrap();
    let expect = gamma(2.5).unwrap() * 2.0 / (PI * PI.powf(1.5));
    assert!((b0 - expect).abs() < 1e-14);
    assert!((b0 - 0.1519817755).abs() < 1e-10);
    let b1 = b_tilde(&src, 1, c(0.0, 0.0), &spec).unwrap();
    assert!((b1 / b0 - 2.5).abs() < 1e-12);
    assert!(b_tilde_deriv(&src, 0, 1, 0, c(0.0, 0.0), &spec).unwrap().norm() < 1e-14);
    let v = b_tilde_deriv(&src, 0, 0, 0, c(0.2, 0.1), &spec).unwrap();
    assert!((v.re - b_tilde(&src, 0, c(0.2, 0.1), &spec).unwrap()).abs() < 1e-15);
}

#[test]
fn transform_ratio_in_alpha() {
    let spec = QuadSpec::default();
    for r in [4u32, 6] {
        let src = mono(1.0, r);
        let rf = r as f64;
        for a0 in 0..2u32 {
            let lo = b_tilde(&src, a0, c(0.0, 0.0), &spec).unwrap();
            let hi = b_tilde(&src, a0 + 1, c(0.0, 0.0), &spec).unwrap();
            let expect = gamma(3.0 + 2.0 / rf + a0 as f64).unwrap() / gamma(2.0 + 2.0 / rf + a0 as f64).unwrap();
            assert!((hi / lo - expect).abs() < 1e-8 * expect);
        }
    }
}

#[test]
fn off_origin_transform_matches_model_source() {
    let spec = QuadSpec::default();
    let km = KernelModel::new(&parse_poly("1/2*(z*w)^2").unwrap(), &KernelConfig::default()).unwrap();
    let z1 = c(0.15, -0.1);
    let a = b_tilde(&KernelSource::Model(&km), 1, z1, &spec).unwrap();
    let b = b_tilde(&mono(1.0, 4), 1, z1, &spec).unwrap();
    assert!((a - b).abs() < 1e-9 * b);
    assert!(b_tilde(&KernelSource::Model(&km), 0, c(2.0, 0.0), &spec).is_err());
    assert!(b_tilde(&mono(1.0, 4), 3, z1, &spec).is_err());
}

#[test]
fn gaussian_determinant_identity() {
    let spec = QuadSpec::default();
    for cc in [0.5, 1.0, 2.0] {
        let res = ke_determinant(&mono(cc, 2), c(0.2, 0.1), &spec).unwrap();
        let exact = 72.0 * cc.powi(4) / PI.powi(6);
        assert!((res.lhs - exact).abs() < 1e-8 * exact && (res.rhs - exact).abs() < 1e-8 * exact);
        assert!(res.residual.abs() < 1e-8 * exact);
    }
}

#[test]
fn monomial_determinant_ratio_matches_quadratic() {
    let spec = QuadSpec::default();
    for r in [4u32, 6] {
        let q = quadratic_root_check(r).unwrap();
        let expect = (q.lhs.clone() / q.rhs.clone()).to_string();
        let (n, d) = expect.split_once('/').unwrap();
        let expect = n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap();
        let res = ke_determinant(&mono(1.0, r), c(0.0, 0.0), &spec).unwrap();
        assert!((res.ratio - expect).abs() < 1e-5 * expect, "r = {r}");
    }
}

#[test]
fn quadratic_examples() {
    let q = quadratic_root_check(2).unwrap();
    assert_eq!((q.lhs, q.rhs, q.equal), (rat(9, 1), rat(9, 1), true));
    let q = quadratic_root_check(4).unwrap();
    assert_eq!((q.lhs, q.rhs, q.equal), (rat(5, 1), rat(81, 16), false));
    let q = quadratic_root_check(6).unwrap();
    assert_eq!((q.lhs, q.rhs, q.equal), (rat(35, 9), rat(4, 1), false));
    for r in (2..=20).step_by(2) {
        assert_eq!(quadratic_root_check(r).unwrap().equal, r == 2);
    }
    assert!(quadratic_root_check(0).is_err());
}

#[test]
fn watson_coefficients() {
    let cc = 1.5;
    let w = watson_coeffs(&[2.0 * cc, 0.0, 0.0, 0.0], 0, 2, 3).unwrap();
    let bt = b_tilde(&mono(cc, 2), 0, c(0.0, 0.0), &QuadSpec::default()).unwrap();
    assert!((w.c[0] - bt).abs() < 1e-15);
    assert_eq!(w.d0, 0.0);
    let w = watson_coeffs(&[0.0, 0.0, 0.0, 1.0], 0, 4, 3).unwrap();
    assert!((w.d0 - 1.0 / (2.0 * PI * PI)).abs() < 1e-16);
    let w = watson_coeffs(&[0.7, 0.2], 1, 4, 1).unwrap();
    assert!((w.c[0] - 3.0 * 0.7 / (PI * PI)).abs() < 1e-15);
    assert!((w.c[1] - 2.0 * 0.2 / (2.0 * PI * PI)).abs() < 1e-15);
}

#[test]
fn watson_against_quadrature() {
    let spec = QuadSpec::with_tol(1e-12);
    let rep = watson_vs_quadrature(&[1.0], 0, 4, &[100.0], &spec).unwrap();
    assert!(rep.max_rel_deviation < 1e-3);
    let rep = watson_vs_quadrature(&[1.0, -0.5, 0.25], 1, 4, &[50.0, 100.0, 200.0], &spec).unwrap();
    assert!(rep.max_rel_deviation < 1e-3);
    // zero symbol: the transform vanishes with the cutoff
    let v = watson_transform(&[], 0, 100.0, &spec).unwrap();
    assert!(v.abs() < 1e-12);
}
