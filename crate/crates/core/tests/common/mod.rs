#![allow(dead_code)]

use bergman_model::divisibility::{div_class, rule_combine, rule_derivative, CombineOp, DivClass};
use bergman_model::model_kernel::KernelModel;
use bergman_model::numerics::gauss_legendre;
use bergman_model::poly::{BiPoly, GaussianRational, RationalFn, Var};
use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

pub const EPS_WEIGHT: &str = "(z*w)^2 + 1/4*(z^3*w + z*w^3)";

pub fn g(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

/// Small random polynomial in z, w of total degree at most `deg`.
pub fn arb_poly(deg: u32) -> impl Strategy<Value = BiPoly> {
    prop::collection::vec(((0..=deg), (0..=deg), -4i64..=4, 1i64..=3), 1..5).prop_map(move |terms| {
        let mut p = BiPoly::zero();
        for (i, j, n, d) in terms {
            if i + j <= deg {
                p.add_term((i, j), GaussianRational::from_ratio(n, d));
            }
        }
        p
    })
}

/// `(z + a w)^k1 h1 / ((z + a w)^k2 h2)` with `h1(−a, 1) ≠ 0 ≠ h2(−a, 1)`.
pub fn arb_rational(a: GaussianRational) -> impl Strategy<Value = RationalFn> {
    (0u32..4, 0u32..3, arb_poly(2), arb_poly(2)).prop_filter_map("degenerate", move |(k1, k2, h1, h2)| {
        if h1.eval(&-&a, &g(1)).is_zero() || h2.eval(&-&a, &g(1)).is_zero() {
            return None;
        }
        let lin = BiPoly::linear_form(&a);
        RationalFn::new(&lin.pow(k1) * &h1, &lin.pow(k2) * &h2).ok()
    })
}

/// Deterministic sample of `n` values from a strategy.
pub fn sample<S: Strategy>(s: S, n: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..n).map(|_| s.new_tree(&mut runner).expect("strategy").current()).collect()
}

fn compare(direct: &DivClass, rule: &DivClass, what: &str) -> Result<(), String> {
    if rule.lambda.is_zero() {
        if direct.k < rule.k {
            return Err(format!("{what}: degraded rule k {} but direct k {}", rule.k, direct.k));
        }
    } else if direct != rule {
        return Err(format!("{what}: direct {direct:?} vs rule {rule:?}"));
    }
    Ok(())
}

/// The calculus of classes against direct computation on `f`, `g`.
pub fn check_div_rules(f: &RationalFn, h: &RationalFn, a: &GaussianRational) -> Result<(), String> {
    let e = |x: bergman_model::Error| x.to_string();
    let cf = div_class(f, a).map_err(e)?;
    let ch = div_class(h, a).map_err(e)?;
    for v in [Var::Z, Var::W] {
        let d = f.d(v);
        if !d.is_zero() {
            compare(&div_class(&d, a).map_err(e)?, &rule_derivative(&cf, v), "derivative")?;
        }
    }
    compare(&div_class(&f.mul(h), a).map_err(e)?, &rule_combine(&cf, &ch, CombineOp::Mul).map_err(e)?, "product")?;
    let sum = f.add(h);
    if !sum.is_zero() {
        compare(&div_class(&sum, a).map_err(e)?, &rule_combine(&cf, &ch, CombineOp::Add).map_err(e)?, "sum")?;
    }
    compare(&div_class(&f.div(h).map_err(e)?, a).map_err(e)?, &rule_combine(&cf, &ch, CombineOp::Div).map_err(e)?, "quotient")?;
    Ok(())
}

/// Largest relative error of `∫ K(z, ζ) ζ^α e^{−p(ζ)} dA(ζ) = z^α e^{−p(z)}`
/// over `α ≤ amax`, by Gauss-Legendre in the radius and the trapezoid rule in θ.
pub fn reproducing_error(km: &KernelModel, z: Complex64, amax: u32, r_max: f64, nr: usize, nt: usize) -> f64 {
    let (x, wx) = gauss_legendre(nr).unwrap();
    let pf = km.weight().to_float();
    let mut acc = vec![Complex64::new(0.0, 0.0); amax as usize + 1];
    for (xi, wi) in x.iter().zip(&wx) {
        let r = 0.5 * r_max * (xi + 1.0);
        let wr = 0.5 * r_max * wi * r * 2.0 * std::f64::consts::PI / nt as f64;
        for k in 0..nt {
            let zeta = Complex64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / nt as f64);
            let base = km.kernel_eval(z, zeta) * (-pf.eval_diag(zeta).re).exp() * wr;
            let mut pw = Complex64::new(1.0, 0.0);
            for a in acc.iter_mut() {
                *a += base * pw;
                pw *= zeta;
            }
        }
    }
    let ez = (-pf.eval_diag(z).re).exp();
    let mut worst: f64 = 0.0;
    let mut pw = Complex64::new(1.0, 0.0);
    for a in &acc {
        let target = pw * ez;
        worst = worst.max((a - target).norm() / target.norm().max(1e-300));
        pw *= z;
    }
    worst
}

pub fn arb_gauss() -> impl Strategy<Value = GaussianRational> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| {
        &GaussianRational::from_ratio(a, b) + &(&GaussianRational::from_ratio(c, d) * &GaussianRational::i())
    })
}

/// Polynomial with Gaussian-rational coefficients of total degree at most `deg`.
pub fn arb_complex_poly(deg: u32) -> impl Strategy<Value = BiPoly> {
    prop::collection::vec(((0..=deg), (0..=deg), arb_gauss()), 0..6).prop_map(move |terms| {
        let mut p = BiPoly::zero();
        for (i, j, c) in terms {
            if i + j <= deg {
                p.add_term((i, j), c);
            }
        }
        p
    })
}

/// `a (zw)² + b z³w + b̄ zw³` with `a > 0`.
pub fn arb_quartic_weight() -> impl Strategy<Value = BiPoly> {
    (1i64..=6, 1i64..=3, arb_gauss()).prop_map(|(n, d, b)| {
        let mut p = BiPoly::zero();
        p.add_term((2, 2), GaussianRational::from_ratio(n, d));
        p.add_term((3, 1), b.clone());
        p.add_term((1, 3), b.conj());
        p
    })
}
