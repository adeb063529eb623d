//! Acceptance criteria. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use bergman_model::divisibility::{obstruction_certificate, Verdict};
use bergman_model::expansion::b3_identity_bridge;
use bergman_model::model_kernel::{
    fit_expansion, log_grid, monomial_kernel, scaling_residual, KernelConfig, KernelModel, LocalConfig, MonomialKernel,
};
use bergman_model::monge_ampere::{ball_field, ball_kernel, bergman_invariant, ke_kernel_check, Point, BALL_INVARIANT};
use bergman_model::numerics::{gamma, QuadSpec};
use bergman_model::poly::{big_q_of, parse_poly, GaussianRational};
use bergman_model::transforms::{b_tilde, ke_determinant, quadratic_root_check, watson_vs_quadrature, KernelSource};
use common::{check_div_rules, g, reproducing_error, sample, EPS_WEIGHT};
use num_complex::Complex64;
use num_rational::BigRational;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn closed_form_vs_numeric() -> Outcome {
    let p = parse_poly("1/2*(z*w)^2").map_err(err)?;
    let km = KernelModel::new(&p, &KernelConfig::default()).map_err(err)?;
    let mut worst: f64 = 0.0;
    for r in [0.0, 0.3, 0.6] {
        for k in 0..8 {
            let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / 8.0 + 0.1);
            let exact = monomial_kernel(1.0, 4, z, z).map_err(err)?.re;
            worst = worst.max(rel(km.diag(z), exact));
        }
    }
    let origin = 2.0 / PI.powf(1.5);
    let e0 = rel(km.diag(c(0.0, 0.0)), origin).max(rel(monomial_kernel(1.0, 4, c(0.0, 0.0), c(0.0, 0.0)).map_err(err)?.re, origin));
    ensure(worst <= 1e-6 && e0 <= 1e-6, format!("max rel diff {worst:.2e}, origin rel err {e0:.2e}"))
}

fn gaussian_baseline() -> Outcome {
    let spec = QuadSpec::default();
    let mut kern: f64 = 0.0;
    let mut trans: f64 = 0.0;
    for (cc, w) in [(1.0, "1/2*z*w"), (2.5, "5/4*z*w")] {
        let p = parse_poly(w).map_err(err)?;
        let km = KernelModel::new(&p, &KernelConfig::default()).map_err(err)?;
        for z in [c(0.0, 0.0), c(0.5, -0.2), c(-1.0, 1.0)] {
            kern = kern.max((km.diag(z) - cc / PI).abs());
        }
        let src = KernelSource::Model(&km);
        for a0 in 0..3 {
            let expect = cc * gamma(3.0 + a0 as f64).map_err(err)? / (PI * PI);
            for z1 in [c(0.0, 0.0), c(0.1, 0.05), c(-0.3, 0.2)] {
                trans = trans.max(rel(b_tilde(&src, a0, z1, &spec).map_err(err)?, expect));
            }
        }
    }
    ensure(kern <= 1e-8 && trans <= 1e-7, format!("kernel abs err {kern:.2e}, transform rel err {trans:.2e}"))
}

fn scaling_law() -> Outcome {
    let p = parse_poly(EPS_WEIGHT).map_err(err)?;
    let cfg = KernelConfig::default();
    let base = KernelModel::new(&p, &cfg).map_err(err)?;
    let z = c(0.5, 0.0);
    let mut worst: f64 = 0.0;
    for t in [2i64, 5, 10] {
        let scaled = KernelModel::new(&p.scale(&g(t)), &cfg).map_err(err)?;
        worst = worst.max(scaling_residual(t as f64, z, z, &base, &scaled).map_err(err)?);
    }
    ensure(worst <= 1e-6, format!("max residual {worst:.2e}"))
}

fn expansion_fit() -> Outcome {
    let p = parse_poly(EPS_WEIGHT).map_err(err)?;
    let grid = log_grid(20.0, 200.0, 12).map_err(err)?;
    let fit = fit_expansion(&p, c(1.0, 0.0), &grid, 4, &LocalConfig::default()).map_err(err)?;
    let e0 = rel(fit.estimates[0], 22.0);
    let e1 = rel(fit.estimates[1], -3.0 / 11.0);
    ensure(
        e0 <= 1e-2 && e1 <= 1e-2,
        format!("b0 = {:.10}, b1 = {:.7} (rel err {e0:.1e}, {e1:.1e})", fit.estimates[0], fit.estimates[1]),
    )
}

fn exact_dichotomy() -> Outcome {
    for (q, c0, m) in [("2*z*w", 2, 1), ("(z*w)^3", 1, 3), ("5*z*w", 5, 1)] {
        let cert = obstruction_certificate(&parse_poly(q).map_err(err)?, None).map_err(err)?;
        if cert.verdict != Verdict::Monomial || cert.monomial != Some((BigRational::from_integer(c0.into()), m)) {
            return Err(format!("{q}: {cert:?}"));
        }
    }
    let cert = obstruction_certificate(&parse_poly("4*z*w + 3/4*z^2 + 3/4*w^2").map_err(err)?, None).map_err(err)?;
    if cert.verdict != Verdict::Nonvanishing {
        return Err(format!("ε-example: {cert:?}"));
    }
    let cert = obstruction_certificate(&parse_poly("(z+w)^2*(z*w+4)").map_err(err)?, Some(&g(1))).map_err(err)?;
    let w = cert.witness.ok_or("no witness")?;
    let ok = cert.verdict == Verdict::Nonvanishing && w.t == g(-112) && w.lhs_class.k == -12 && w.lhs_class.lambda == g(-112);
    ensure(ok, format!("witness k = {}, λ = {}, T = {}, lhs class ({}, {})", w.k, w.lambda, w.t, w.lhs_class.k, w.lhs_class.lambda))
}

fn ke_identity() -> Outcome {
    let spec = QuadSpec::default();
    let target = 72.0 / PI.powi(6);
    let gauss = KernelModel::new(&parse_poly("1/2*z*w").map_err(err)?, &KernelConfig::default()).map_err(err)?;
    let mut msgs = Vec::new();
    let mut ok = true;
    for (name, src) in [
        ("model", KernelSource::Model(&gauss)),
        ("closed form", KernelSource::Monomial(MonomialKernel::new(1.0, 2).map_err(err)?)),
    ] {
        let res = ke_determinant(&src, c(0.0, 0.0), &spec).map_err(err)?;
        let e = rel(res.lhs, target).max(rel(res.rhs, target)).max(res.residual.abs() / res.rhs);
        ok &= e <= 1e-8;
        msgs.push(format!("r=2 {name} rel err {e:.1e}"));
    }
    for (r, expect) in [(4, 80.0 / 81.0), (6, 35.0 / 36.0)] {
        let res = ke_determinant(&KernelSource::Monomial(MonomialKernel::new(1.0, r).map_err(err)?), c(0.0, 0.0), &spec)
            .map_err(err)?;
        ok &= (res.ratio - expect).abs() <= 1e-5;
        msgs.push(format!("r={r} ratio {:.10}", res.ratio));
    }
    let roots: Vec<u32> = (1..=20)
        .filter(|&r| quadratic_root_check(r).map(|q| q.equal).unwrap_or(false))
        .collect();
    ok &= roots == [2];
    msgs.push(format!("quadratic roots {roots:?}"));
    ensure(ok, msgs.join(", "))
}

fn watson_log() -> Outcome {
    let grid = log_grid(50.0, 500.0, 12).map_err(err)?;
    let rep = watson_vs_quadrature(&[0.0, 0.0, 0.0, 1.0], 0, 4, &grid, &QuadSpec::with_tol(1e-12)).map_err(err)?;
    let coeff = rep.fitted_log_coeff.ok_or("no log fit")?;
    let expect = 1.0 / (2.0 * PI * PI);
    let e = rel(coeff, expect);
    ensure(e <= 2e-2, format!("log coefficient {coeff:.7} vs {expect:.7} (rel err {e:.1e})"))
}

fn ball_points(n: usize) -> Vec<Point> {
    let s = (0.0..0.8f64, 0.0..1.0f64, 0.0..2.0 * PI, 0.0..2.0 * PI);
    sample(s, n)
        .into_iter()
        .map(|(r, u, a, b)| {
            let (s1, s2) = (u.sqrt(), (1.0 - u).sqrt());
            [Complex64::from_polar(r * s1, a), Complex64::from_polar(r * s2, b)]
        })
        .collect()
}

fn ball_constants() -> Outcome {
    let field = ball_field();
    let mut inv: f64 = 0.0;
    let mut ke: f64 = 0.0;
    for z in ball_points(50) {
        ball_kernel(&z).map_err(err)?;
        inv = inv.max(rel(bergman_invariant(&field, &z, None).map_err(err)?, BALL_INVARIANT));
        ke = ke.max(ke_kernel_check(&field, &z, None).map_err(err)?);
    }
    ensure(inv <= 1e-4 && ke <= 1e-4, format!("invariant rel err {inv:.1e}, KE residual {ke:.1e}"))
}

fn property_suites() -> Outcome {
    let p = parse_poly(EPS_WEIGHT).map_err(err)?;
    let km = KernelModel::new(&p, &KernelConfig::default()).map_err(err)?;
    let pts = sample(((-0.8..0.8f64), (-0.8..0.8f64), (-0.8..0.8f64), (-0.8..0.8f64)), 40);
    let mut herm: f64 = 0.0;
    for (a, b, x, y) in pts {
        let (z, w) = (c(a, b), c(x, y));
        let k = km.kernel_eval(z, w);
        herm = herm.max((k - km.kernel_eval(w, z).conj()).norm() / k.norm());
    }
    let mut repro: f64 = 0.0;
    for z in [c(0.8, 0.3), c(-0.6, 0.5)] {
        repro = repro.max(reproducing_error(&km, z, 20, 4.0, 200, 128));
    }

    let a = GaussianRational::from_ratio(3, 2);
    let fns = sample(common::arb_rational(a.clone()), 100);
    let mut div_cases = 0;
    for pair in fns.chunks(2).take(50) {
        check_div_rules(&pair[0], &pair[1], &a)?;
        div_cases += 1;
    }

    let mut bridged = 0;
    for w in ["1/2*(z*w)^2", EPS_WEIGHT, "3/2*z*w", "(z*w)^3 + 1/10*(z^4*w^2 + z^2*w^4)", "(z*w)^2 + 1/3*z^2*w^2 + 1/5*(z^3*w + z*w^3)"] {
        let pw = parse_poly(w).map_err(err)?;
        let lhs = b3_identity_bridge(&pw).map_err(|e| format!("{w}: {e}"))?;
        if lhs.is_zero() != big_q_of(&pw.d_zw()).is_zero() {
            return Err(format!("{w}: bridge vanishing disagrees with Q"));
        }
        bridged += 1;
    }
    ensure(
        herm <= 1e-12 && repro <= 1e-6,
        format!("hermitian {herm:.1e}, reproducing {repro:.1e}, {div_cases} divisibility cases, {bridged} bridge identities"),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, u64); 9] = [
        ("closed form vs numeric kernel", closed_form_vs_numeric, 10),
        ("Gaussian baseline", gaussian_baseline, 5),
        ("scaling law", scaling_law, 30),
        ("expansion fit", expansion_fit, 60),
        ("exact dichotomy", exact_dichotomy, 10),
        ("KE identity and failure", ke_identity, 60),
        ("Watson log coefficient", watson_log, 30),
        ("ball constants", ball_constants, 20),
        ("property suites", property_suites, 120),
    ];
    let mut failed = Vec::new();
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let out = f();
        let dt = t0.elapsed();
        let within = dt <= Duration::from_secs(*limit);
        let (pass, detail) = match &out {
            Ok(m) => (within, m.clone()),
            Err(m) => (false, m.clone()),
        };
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {tag} {name}: {detail} [{:.2} s, limit {limit} s]", i + 1, dt.as_secs_f64());
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
