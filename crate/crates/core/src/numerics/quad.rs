//! Doubly-exponential quadrature on `[0,∞)` and `[a,b]`, and the periodic
//! trapezoid rule.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Values a quadrature rule can accumulate.
pub trait QuadValue: Clone {
    fn scaled(&self, w: f64) -> Self;
    fn add_scaled(&mut self, w: f64, x: &Self);
    fn magnitude(&self) -> f64;
    fn distance(&self, other: &Self) -> f64;
    fn is_finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn scaled(&self, w: f64) -> Self {
        self * w
    }
    fn add_scaled(&mut self, w: f64, x: &Self) {
        *self += w * x;
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl QuadValue for Complex64 {
    fn scaled(&self, w: f64) -> Self {
        self * w
    }
    fn add_scaled(&mut self, w: f64, x: &Self) {
        *self += x * w;
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
    fn is_finite(&self) -> bool {
        Complex64::is_finite(*self)
    }
}

impl QuadValue for Vec<f64> {
    fn scaled(&self, w: f64) -> Self {
        self.iter().map(|x| x * w).collect()
    }
    fn add_scaled(&mut self, w: f64, x: &Self) {
        for (a, b) in self.iter_mut().zip(x) {
            *a += b * w;
        }
    }
    fn magnitude(&self) -> f64 {
        self.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
    fn distance(&self, other: &Self) -> f64 {
        self.iter().zip(other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

impl QuadValue for Vec<Complex64> {
    fn scaled(&self, w: f64) -> Self {
        self.iter().map(|x| x * w).collect()
    }
    fn add_scaled(&mut self, w: f64, x: &Self) {
        for (a, b) in self.iter_mut().zip(x) {
            *a += b * w;
        }
    }
    fn magnitude(&self) -> f64 {
        self.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
    fn distance(&self, other: &Self) -> f64 {
        self.iter().zip(other).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|x| x.is_finite())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transform {
    /// `x = exp(π/2 · sinh t)`.
    ExpSinh,
    /// `ρ = u^{1/r}` followed by exp-sinh in `u`; for integrands decaying like `e^{−cρ^r}`.
    RadialPower { r: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadSpec {
    /// Nodes per unit length in the transformed variable at level 0 is `abscissas / 8`.
    pub abscissas: usize,
    pub transform: Transform,
    /// Convergence tolerance; absolute for results of magnitude ≤ 1, relative above.
    pub tol: f64,
    pub max_levels: u32,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self { abscissas: 16, transform: Transform::ExpSinh, tol: 1e-10, max_levels: 8 }
    }
}

impl QuadSpec {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Invalid(format!("quadrature tolerance must be positive, got {}", self.tol)));
        }
        if self.abscissas < 16 {
            return Err(Error::Invalid(format!("abscissa count must be at least 16, got {}", self.abscissas)));
        }
        if let Transform::RadialPower { r } = self.transform {
            if r == 0 {
                return Err(Error::Invalid("radial power must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub levels: u32,
}

const T_MAX: f64 = 6.5;
const MIN_LEVELS: u32 = 3;

/// Sum of `w(t)·f(x(t))` over `t = t0 + k·step`, walking outward from `t0`
/// in both directions until the terms are negligible.
fn de_sweep<T: QuadValue>(
    map: &dyn Fn(f64) -> Option<(f64, f64)>,
    f: &dyn Fn(f64) -> T,
    start: f64,
    step: f64,
    acc: &mut Option<T>,
) -> Result<()> {
    for dir in [1.0, -1.0] {
        let mut k = if dir < 0.0 && start == 0.0 { 1 } else { 0 };
        let mut small = 0;
        loop {
            let t = dir * (start + k as f64 * step);
            if t.abs() > T_MAX {
                break;
            }
            k += 1;
            let Some((x, w)) = map(t) else { break };
            if w == 0.0 {
                continue;
            }
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::Quadrature { levels: 0, estimate: f64::NAN, error: f64::INFINITY });
            }
            let term = v.magnitude() * w;
            match acc {
                Some(a) => a.add_scaled(w, &v),
                None => *acc = Some(v.scaled(w)),
            }
            let scale = acc.as_ref().map(|a| a.magnitude()).unwrap_or(0.0);
            if term <= 1e-18 * scale || term == 0.0 {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
    }
    Ok(())
}

fn de_integrate<T: QuadValue>(
    map: &dyn Fn(f64) -> Option<(f64, f64)>,
    f: &dyn Fn(f64) -> T,
    spec: &QuadSpec,
) -> Result<QuadResult<T>> {
    spec.validate()?;
    let mut h = 8.0 / spec.abscissas as f64;
    let mut sum: Option<T> = None;
    de_sweep(map, f, 0.0, h, &mut sum)?;
    let mut prev = sum.clone().map(|s| s.scaled(h));
    for level in 1..=spec.max_levels {
        // new nodes sit halfway between the old ones
        let mut odd: Option<T> = None;
        de_sweep(map, f, h / 2.0, h, &mut odd)?;
        h /= 2.0;
        if let Some(o) = odd {
            match &mut sum {
                Some(s) => s.add_scaled(1.0, &o),
                None => sum = Some(o),
            }
        }
        let cur = sum.clone().map(|s| s.scaled(h));
        if let (Some(c), Some(p)) = (&cur, &prev) {
            let err = c.distance(p);
            if level >= MIN_LEVELS && err <= spec.tol * c.magnitude().max(1.0) {
                return Ok(QuadResult { value: c.clone(), error: err, levels: level });
            }
            if level == spec.max_levels {
                return Err(Error::Quadrature { levels: level, estimate: c.magnitude(), error: err });
            }
        }
        prev = cur;
    }
    match prev {
        Some(v) => Ok(QuadResult { value: v, error: 0.0, levels: spec.max_levels }),
        None => Err(Error::Quadrature { levels: spec.max_levels, estimate: 0.0, error: f64::INFINITY }),
    }
}

fn exp_sinh(t: f64) -> Option<(f64, f64)> {
    let s = FRAC_PI_2 * t.sinh();
    if !(-700.0..=700.0).contains(&s) {
        return None;
    }
    let x = s.exp();
    Some((x, FRAC_PI_2 * t.cosh() * x))
}

/// `∫₀^∞ f(x) dx` for integrands with at most an integrable singularity at 0
/// and (at least) exponential decay.
pub fn quad_semiinf<T: QuadValue>(f: impl Fn(f64) -> T, spec: &QuadSpec) -> Result<QuadResult<T>> {
    match spec.transform {
        Transform::ExpSinh => de_integrate(&exp_sinh, &f, spec),
        Transform::RadialPower { r } => {
            let inv = 1.0 / r as f64;
            let g = |u: f64| f(u.powf(inv)).scaled(inv * u.powf(inv - 1.0));
            de_integrate(&exp_sinh, &g, spec)
        }
    }
}

/// `∫ₐᵇ f(x) dx` by the tanh-sinh rule.
pub fn quad_finite<T: QuadValue>(f: impl Fn(f64) -> T, a: f64, b: f64, spec: &QuadSpec) -> Result<QuadResult<T>> {
    if !(b > a) {
        return Err(Error::Invalid(format!("empty interval [{a}, {b}]")));
    }
    let half = 0.5 * (b - a);
    let map = move |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let ch = u.cosh();
        // distance to the nearer endpoint, 1 − tanh|u|, without cancellation
        let comp = 1.0 / (u.abs().exp() * ch);
        let w = half * FRAC_PI_2 * t.cosh() / (ch * ch);
        if !w.is_finite() || comp == 0.0 {
            return None;
        }
        let x = if t >= 0.0 { b - half * comp } else { a + half * comp };
        if x <= a || x >= b {
            return None;
        }
        Some((x, w))
    };
    de_integrate(&map, &f, spec)
}

/// `∫₀^{2π} f(θ) dθ` by the `n`-point trapezoid rule.
pub fn quad_periodic<T: QuadValue>(f: impl Fn(f64) -> T, n: usize) -> T {
    let h = 2.0 * PI / n as f64;
    let mut acc = f(0.0).scaled(h);
    for k in 1..n {
        acc.add_scaled(h, &f(k as f64 * h));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_moments() {
        let spec = QuadSpec::with_tol(1e-13);
        let r = quad_semiinf(|s: f64| (-s).exp(), &spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = quad_semiinf(|s: f64| (-s).exp() * s * s, &spec).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let r = quad_semiinf(|s: f64| (-s).exp() / s.sqrt(), &spec).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn radial_power_transform() {
        // 2π∫ρ e^{−ρ⁴} dρ = (π/2)Γ(1/2)
        let spec = QuadSpec { transform: Transform::RadialPower { r: 4 }, ..QuadSpec::with_tol(1e-12) };
        let r = quad_semiinf(|rho: f64| 2.0 * PI * rho * (-rho.powi(4)).exp(), &spec).unwrap();
        assert!((r.value - PI.powf(1.5) / 2.0).abs() < 1e-11);
    }

    #[test]
    fn finite_interval() {
        let spec = QuadSpec::with_tol(1e-13);
        let r = quad_finite(|x: f64| x.sqrt(), 0.0, 4.0, &spec).unwrap();
        assert!((r.value - 16.0 / 3.0).abs() < 1e-12);
        let r = quad_finite(|x: f64| x.ln(), 0.0, 1.0, &spec).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
        assert!(quad_finite(|x: f64| x, 1.0, 1.0, &spec).is_err());
    }

    #[test]
    fn complex_values() {
        let spec = QuadSpec::with_tol(1e-12);
        let r = quad_semiinf(|s: f64| Complex64::new(0.0, s).exp() * (-s).exp(), &spec).unwrap();
        assert!((r.value - Complex64::new(0.5, 0.5)).norm() < 1e-11);
    }

    #[test]
    fn nonconvergence_reported() {
        let spec = QuadSpec { max_levels: 4, ..QuadSpec::with_tol(1e-15) };
        let r = quad_semiinf(|s: f64| (-s).exp() * (40.0 * s).sin().abs(), &spec);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn periodic_rule() {
        let v = quad_periodic(|t: f64| t.cos().powi(2), 16);
        assert!((v - PI).abs() < 1e-14);
        let v = quad_periodic(|t: f64| Complex64::new(0.0, 3.0 * t).exp(), 16);
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadSpec { abscissas: 8, ..QuadSpec::default() }.validate().is_err());
        assert!(QuadSpec::with_tol(0.0).validate().is_err());
    }
}
