//! Boundary-limit transforms
//! `B̃_{α₀}(z₁) = (1/π) ∫₀^∞ e^{−s} s^{1+2/r+α₀} B_p(s^{1/r} z₁) ds`,
//! their Wirtinger derivatives, the comparing-coefficients determinant and the
//! Watson-lemma bookkeeping of the large-dilation expansion.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model_kernel::{KernelModel, MonomialKernel};
use crate::numerics::{gamma, quad_finite, quad_semiinf, QuadSpec};
use crate::poly::{rat_string, BiPoly, GaussianRational};

/// The transform integrand is dropped once `e^{−s}` falls below `1e−16`.
pub const S_MAX: f64 = 36.841361487904734;
pub const MAX_TRANSFORM_ORDER: u32 = 2;

pub enum KernelSource<'a> {
    Model(&'a KernelModel),
    Monomial(MonomialKernel),
}

impl KernelSource<'_> {
    pub fn degree(&self) -> Result<u32> {
        match self {
            KernelSource::Model(km) => km
                .degree()
                .filter(|&r| r >= 2)
                .ok_or_else(|| Error::Invalid("transforms need a homogeneous weight of degree ≥ 2".into())),
            KernelSource::Monomial(mk) => Ok(mk.r),
        }
    }

    pub fn weight(&self) -> Result<BiPoly> {
        match self {
            KernelSource::Model(km) => Ok(km.weight().clone()),
            KernelSource::Monomial(mk) => MonomialKernel::weight_poly(mk.c, mk.r),
        }
    }

    fn diag_derivative(&self, a1: u32, a2: u32, z: Complex64) -> Result<Complex64> {
        match self {
            KernelSource::Model(km) => km.diag_derivative(a1, a2, z),
            KernelSource::Monomial(mk) => mk.diag_derivative(a1, a2, z),
        }
    }

    fn check_reach(&self, z1: Complex64, r: u32) -> Result<()> {
        if let KernelSource::Model(km) = self {
            let reach = S_MAX.powf(1.0 / r as f64) * z1.norm();
            if reach > km.validated_radius() {
                return Err(Error::Domain(format!(
                    "transform at |z1| = {} reaches |z| = {reach:.4} beyond the validated radius {}",
                    z1.norm(),
                    km.validated_radius()
                )));
            }
        }
        Ok(())
    }
}

pub fn b_tilde(source: &KernelSource, alpha0: u32, z1: Complex64, spec: &QuadSpec) -> Result<f64> {
    b_tilde_deriv(source, alpha0, 0, 0, z1, spec).map(|v| v.re)
}

/// `∂^{a1}_{z₁} ∂^{a2}_{z̄₁} B̃_{α₀}(z₁)`, differentiating under the integral.
pub fn b_tilde_deriv(source: &KernelSource, alpha0: u32, a1: u32, a2: u32, z1: Complex64, spec: &QuadSpec) -> Result<Complex64> {
    if alpha0 > 2 {
        return Err(Error::Invalid(format!("alpha0 must be 0, 1 or 2, got {alpha0}")));
    }
    if a1 + a2 > MAX_TRANSFORM_ORDER {
        return Err(Error::UnsupportedOrder(a1, a2));
    }
    let r = source.degree()?;
    source.check_reach(z1, r)?;
    let rf = r as f64;
    let power = 1.0 + (2.0 + (a1 + a2) as f64) / rf + alpha0 as f64;
    if z1.norm() == 0.0 {
        // the integrand is e^{−s} s^{power} times a constant
        let v = source.diag_derivative(a1, a2, z1)?;
        return Ok(v * gamma(power + 1.0)? / PI);
    }
    let err = std::cell::Cell::new(None);
    let f = |s: f64| {
        let dz = z1 * s.powf(1.0 / rf);
        match source.diag_derivative(a1, a2, dz) {
            Ok(v) => v * ((-s).exp() * s.powf(power)),
            Err(e) => {
                err.set(Some(e));
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let res = quad_finite(f, 0.0, S_MAX, spec)?;
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok(res.value / PI)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KEResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub ratio: f64,
    pub z1: [f64; 2],
}

/// `det[[B̃₀, ∂̄B̃₀, B̃₁], [∂B̃₀, ∂∂̄B̃₀ + (Δp/2)B̃₁, ∂B̃₁], [B̃₁, ∂̄B̃₁, B̃₂]]`
/// against `(9π²/2) B̃₀⁴`.
pub fn ke_determinant(source: &KernelSource, z1: Complex64, spec: &QuadSpec) -> Result<KEResidual> {
    let bt = |alpha0: u32, a1: u32, a2: u32| b_tilde_deriv(source, alpha0, a1, a2, z1, spec);
    let b0 = bt(0, 0, 0)?;
    let b1 = bt(1, 0, 0)?;
    let b2 = bt(2, 0, 0)?;
    let b0_z = bt(0, 1, 0)?;
    let b0_zb = bt(0, 0, 1)?;
    let b0_zzb = bt(0, 1, 1)?;
    let b1_z = bt(1, 1, 0)?;
    let b1_zb = bt(1, 0, 1)?;
    let q = source.weight()?.d_zw();
    let lap = 4.0 * exact_diag_value(&q, z1)?;
    let m = Matrix3::new(
        b0, b0_zb, b1,
        b0_z, b0_zzb + b1 * (0.5 * lap), b1_z,
        b1, b1_zb, b2,
    );
    let lhs = m.determinant().re;
    let rhs = 4.5 * PI * PI * b0.re.powi(4);
    Ok(KEResidual { lhs, rhs, residual: lhs - rhs, ratio: lhs / rhs, z1: [z1.re, z1.im] })
}

/// `f(z, z̄)` evaluated in exact arithmetic at the binary value of `z`.
fn exact_diag_value(f: &BiPoly, z: Complex64) -> Result<f64> {
    let zq = GaussianRational::from_f64(z.re, z.im).ok_or_else(|| Error::Domain(format!("non-finite point {z}")))?;
    Ok(f.eval(&zq, &zq.conj()).to_complex().re)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticCheck {
    #[serde(serialize_with = "ser_rat")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub rhs: BigRational,
    pub equal: bool,
}

fn ser_rat<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rat_string(r))
}

/// `(1 + 4/r)(2 + 2/r)` against `(9/4)(1 + 2/r)²` in exact arithmetic.
pub fn quadratic_root_check(r: u32) -> Result<QuadraticCheck> {
    if r < 2 || r % 2 != 0 {
        return Err(Error::Invalid(format!("r must be an even integer ≥ 2, got {r}")));
    }
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let ri = r as i64;
    let one = q(1, 1);
    let lhs = (&one + q(4, ri)) * (q(2, 1) + q(2, ri));
    let t = &one + q(2, ri);
    let rhs = q(9, 4) * &t * &t;
    let equal = lhs == rhs;
    Ok(QuadraticCheck { lhs, rhs, equal })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WatsonExpansion {
    pub c: Vec<f64>,
    pub d0: f64,
    pub alpha0: u32,
    pub r: u32,
}

/// Coefficients of `N(t) ~ Σ_{j<3+α₀} c_j t^{−j} + d₀ t^{−(3+α₀)} ln t` for the
/// symbol `(τ/2π) Σ_j b_j τ^{−j}`; `n` caps the number of `b_j` used.
pub fn watson_coeffs(b: &[f64], alpha0: u32, r: u32, n: usize) -> Result<WatsonExpansion> {
    let n = n.min(b.len().saturating_sub(1));
    let k = 3 + alpha0 as usize;
    let mut c = Vec::new();
    for (j, &bj) in b.iter().enumerate().take((n + 1).min(k)) {
        c.push(gamma((k - j) as f64)? * bj / (2.0 * PI * PI));
    }
    let d0 = if k <= n && k < b.len() { b[k] / (2.0 * PI * PI) } else { 0.0 };
    Ok(WatsonExpansion { c, d0, alpha0, r })
}

/// Smooth step: 0 on `(−∞, 1/2]`, 1 on `[1, ∞)`.
pub fn cutoff(tau: f64) -> f64 {
    let x = 2.0 * tau - 1.0;
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let f = |u: f64| (-1.0 / u).exp();
    f(x) / (f(x) + f(1.0 - x))
}

fn symbol(b: &[f64], tau: f64) -> f64 {
    let s: f64 = b.iter().enumerate().map(|(j, bj)| bj * tau.powi(-(j as i32))).sum();
    cutoff(tau) * tau * s / (2.0 * PI)
}

/// `N(t) = (1/π) t^{−(3+α₀)} ∫₀^∞ e^{−τ/t} τ^{1+α₀} σ(τ) dτ`.
pub fn watson_transform(b: &[f64], alpha0: u32, t: f64, spec: &QuadSpec) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let a = 1 + alpha0 as i32;
    let g = |tau: f64| (-tau / t).exp() * tau.powi(a) * symbol(b, tau);
    let inner = quad_finite(g, 0.5, 1.0, spec)?.value;
    let outer = quad_semiinf(|s: f64| g(1.0 + t * s) * t, spec)?.value;
    Ok((inner + outer) / PI * t.powi(-(3 + alpha0 as i32)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WatsonRow {
    pub t: f64,
    pub numeric: f64,
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WatsonReport {
    pub expansion: WatsonExpansion,
    /// `max |N − prediction| / |prediction|` (absolute where the prediction vanishes).
    pub max_rel_deviation: f64,
    /// `max t^{3+α₀} |N − prediction|`, the size of the discarded remainder.
    pub remainder_scale: f64,
    /// `d` from fitting `t^{3+α₀}(N − Σ c_j t^{−j}) ≈ d ln t + e₀ + e₁/t`.
    pub fitted_log_coeff: Option<f64>,
    pub rows: Vec<WatsonRow>,
}

pub fn watson_vs_quadrature(b: &[f64], alpha0: u32, r: u32, t_grid: &[f64], spec: &QuadSpec) -> Result<WatsonReport> {
    let expansion = watson_coeffs(b, alpha0, r, b.len().saturating_sub(1))?;
    let k = 3 + alpha0 as i32;
    let mut rows = Vec::with_capacity(t_grid.len());
    let (mut max_rel, mut rem) = (0f64, 0f64);
    let mut fit_rows = Vec::new();
    for &t in t_grid {
        let numeric = watson_transform(b, alpha0, t, spec)?;
        let smooth: f64 = expansion.c.iter().enumerate().map(|(j, cj)| cj * t.powi(-(j as i32))).sum();
        let predicted = smooth + expansion.d0 * t.powi(-k) * t.ln();
        let dev = (numeric - predicted).abs();
        max_rel = max_rel.max(if predicted != 0.0 { dev / predicted.abs() } else { dev });
        rem = rem.max(dev * t.powi(k));
        fit_rows.push((t, (numeric - smooth) * t.powi(k)));
        rows.push(WatsonRow { t, numeric, predicted });
    }
    let fitted_log_coeff = if fit_rows.len() >= 3 {
        let a = nalgebra::DMatrix::from_fn(fit_rows.len(), 3, |i, j| {
            let t = fit_rows[i].0;
            [t.ln(), 1.0, 1.0 / t][j]
        });
        let y = nalgebra::DVector::from_iterator(fit_rows.len(), fit_rows.iter().map(|r| r.1));
        let sol = a.svd(true, true).solve(&y, 0.0).map_err(|e| Error::Conditioning(e.to_string()))?;
        Some(sol[0])
    } else {
        None
    };
    Ok(WatsonReport { expansion, max_rel_deviation: max_rel, remainder_scale: rem, fitted_log_coeff, rows })
}
