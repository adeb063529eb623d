//! Fefferman's complex Monge-Ampère operator in `ℂ²`,
//! `J(u) = (−1)ⁿ det [[u, u_β̄], [u_α, u_αβ̄]]`, the Bergman invariant
//! `B = det(∂∂̄ ln K)/K`, and the unit-ball reference kernel.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Point = [Complex64; 2];

/// Value, `∂_α u` and `∂_α ∂_β̄ u` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivatives {
    pub value: f64,
    pub grad: [Complex64; 2],
    pub hess: [[Complex64; 2]; 2],
}

type Eval<'a> = Box<dyn Fn(&Point) -> f64 + 'a>;
type Domain<'a> = Box<dyn Fn(&Point) -> bool + 'a>;
type Analytic<'a> = Box<dyn Fn(&Point) -> Derivatives + 'a>;

pub struct ScalarField<'a> {
    eval: Eval<'a>,
    domain: Option<Domain<'a>>,
    analytic: Option<Analytic<'a>>,
}

impl<'a> ScalarField<'a> {
    pub fn new(eval: impl Fn(&Point) -> f64 + 'a) -> Self {
        Self { eval: Box::new(eval), domain: None, analytic: None }
    }

    pub fn with_domain(mut self, domain: impl Fn(&Point) -> bool + 'a) -> Self {
        self.domain = Some(Box::new(domain));
        self
    }

    pub fn with_derivatives(mut self, d: impl Fn(&Point) -> Derivatives + 'a) -> Self {
        self.analytic = Some(Box::new(d));
        self
    }

    pub fn value(&self, z: &Point) -> f64 {
        (self.eval)(z)
    }

    fn inside(&self, z: &Point) -> bool {
        self.domain.as_ref().is_none_or(|d| d(z))
    }

    /// Finite-difference derivatives, ignoring any analytic callback.
    pub fn fd_derivatives(&self, z: &Point, h: f64) -> Result<Derivatives> {
        if !(h > 0.0) {
            return Err(Error::Invalid(format!("FD step must be positive, got {h}")));
        }
        let coarse = self.raw_fd(z, h)?;
        let fine = self.raw_fd(z, h / 2.0)?;
        let rich = |c: f64, f: f64| (4.0 * f - c) / 3.0;
        let d1: [f64; 4] = std::array::from_fn(|i| rich(coarse.0[i], fine.0[i]));
        let d2: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| rich(coarse.1[i][j], fine.1[i][j])));
        // real coordinates ordered (x1, y1, x2, y2)
        let grad = std::array::from_fn(|a| Complex64::new(0.5 * d1[2 * a], -0.5 * d1[2 * a + 1]));
        let hess = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
                Complex64::new(d2[xa][xb] + d2[ya][yb], d2[xa][yb] - d2[ya][xb]) * 0.25
            })
        });
        Ok(Derivatives { value: self.value(z), grad, hess })
    }

    pub fn derivatives(&self, z: &Point, h: f64) -> Result<Derivatives> {
        match &self.analytic {
            Some(d) => Ok(d(z)),
            None => self.fd_derivatives(z, h),
        }
    }

    fn at(&self, z: &Point, offs: &[(usize, f64)]) -> Result<f64> {
        let mut x = [z[0].re, z[0].im, z[1].re, z[1].im];
        for &(i, d) in offs {
            x[i] += d;
        }
        let p = [Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3])];
        if !self.inside(&p) {
            return Err(Error::Domain(format!("FD stencil leaves the domain at {p:?}")));
        }
        Ok(self.value(&p))
    }

    /// Central differences: gradient and Hessian in the real coordinates.
    fn raw_fd(&self, z: &Point, h: f64) -> Result<([f64; 4], [[f64; 4]; 4])> {
        let f0 = self.at(z, &[])?;
        let mut d1 = [0.0; 4];
        let mut d2 = [[0.0; 4]; 4];
        for i in 0..4 {
            let fp = self.at(z, &[(i, h)])?;
            let fm = self.at(z, &[(i, -h)])?;
            d1[i] = (fp - fm) / (2.0 * h);
            d2[i][i] = (fp - 2.0 * f0 + fm) / (h * h);
            for j in 0..i {
                let v = (self.at(z, &[(i, h), (j, h)])? - self.at(z, &[(i, h), (j, -h)])?
                    - self.at(z, &[(i, -h), (j, h)])?
                    + self.at(z, &[(i, -h), (j, -h)])?)
                    / (4.0 * h * h);
                d2[i][j] = v;
                d2[j][i] = v;
            }
        }
        Ok((d1, d2))
    }
}

pub fn point_norm(z: &Point) -> f64 {
    (z[0].norm_sqr() + z[1].norm_sqr()).sqrt()
}

/// Default step `1e−3`, shrunk by `1 − |z|` inside the unit ball.
pub fn default_step(z: &Point) -> f64 {
    let r = point_norm(z);
    if r < 1.0 {
        1e-3 * (1.0 - r)
    } else {
        1e-3
    }
}

fn bordered(d: &Derivatives) -> Matrix3<Complex64> {
    let u = Complex64::new(d.value, 0.0);
    Matrix3::new(
        u, d.grad[0].conj(), d.grad[1].conj(),
        d.grad[0], d.hess[0][0], d.hess[0][1],
        d.grad[1], d.hess[1][0], d.hess[1][1],
    )
}

/// `J(u)(z)` for `n = 2`.
pub fn j_operator(u: &ScalarField, z: &Point, h: Option<f64>) -> Result<f64> {
    let d = u.derivatives(z, h.unwrap_or_else(|| default_step(z)))?;
    // (−1)² = 1
    Ok(bordered(&d).determinant().re)
}

fn levi_det(hess: &[[Complex64; 2]; 2]) -> f64 {
    Matrix2::new(hess[0][0], hess[0][1], hess[1][0], hess[1][1]).determinant().re
}

/// `u^{n+1} det ∂∂̄(−ln u)`.
pub fn j_log_form(u: &ScalarField, z: &Point, h: Option<f64>) -> Result<f64> {
    let u0 = u.value(z);
    if !(u0 > 0.0) {
        return Err(Error::Domain(format!("log form needs u > 0, got {u0}")));
    }
    let neg_log = ScalarField { eval: Box::new(|p: &Point| -u.value(p).ln()), domain: None, analytic: None };
    let neg_log = match &u.domain {
        Some(dom) => neg_log.with_domain(|p: &Point| dom(p)),
        None => neg_log,
    };
    let d = neg_log.fd_derivatives(z, h.unwrap_or_else(|| default_step(z)))?;
    Ok(u0.powi(3) * levi_det(&d.hess))
}

/// Bergman kernel of the unit ball in `ℂ²` on the diagonal.
pub fn ball_kernel(z: &Point) -> Result<f64> {
    let s = z[0].norm_sqr() + z[1].norm_sqr();
    if s >= 1.0 {
        return Err(Error::Domain(format!("|z| = {} is not inside the unit ball", s.sqrt())));
    }
    Ok(2.0 / (PI * PI * (1.0 - s).powi(3)))
}

pub fn ball_field() -> ScalarField<'static> {
    ScalarField::new(|z: &Point| ball_kernel(z).unwrap_or(f64::NAN)).with_domain(|z: &Point| point_norm(z) < 1.0)
}

/// `(n+1)ⁿ πⁿ / n!` at `n = 2`.
pub const BALL_INVARIANT: f64 = 4.5 * PI * PI;

/// `B(z) = det(∂∂̄ ln K)/K`.
pub fn bergman_invariant(k: &ScalarField, z: &Point, h: Option<f64>) -> Result<f64> {
    let k0 = k.value(z);
    if !(k0 > 0.0) {
        return Err(Error::Domain(format!("kernel must be positive, got {k0}")));
    }
    let log_k = ScalarField::new(|p: &Point| k.value(p).ln());
    let log_k = match &k.domain {
        Some(dom) => log_k.with_domain(|p: &Point| dom(p)),
        None => log_k,
    };
    let d = log_k.fd_derivatives(z, h.unwrap_or_else(|| default_step(z)))?;
    let g = levi_det(&d.hess);
    if !g.is_finite() {
        return Err(Error::Conditioning("singular finite-difference Hessian".into()));
    }
    Ok(g / k0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallCheck {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub residual: f64,
}

/// `|J(K) − (9π²/2) K⁴| / ((9π²/2) K⁴)`.
pub fn ke_kernel_check(k: &ScalarField, z: &Point, h: Option<f64>) -> Result<f64> {
    let k0 = k.value(z);
    if !(k0 > 0.0) {
        return Err(Error::Domain(format!("kernel must be positive, got {k0}")));
    }
    let target = BALL_INVARIANT * k0.powi(4);
    Ok((j_operator(k, z, h)? - target).abs() / target)
}

pub fn ball_check(z: &Point, h: Option<f64>) -> Result<BallCheck> {
    let field = ball_field();
    let k = ball_kernel(z)?;
    Ok(BallCheck {
        b: bergman_invariant(&field, z, h)?,
        j: j_operator(&field, z, h)?,
        k,
        residual: ke_kernel_check(&field, z, h)?,
    })
}
