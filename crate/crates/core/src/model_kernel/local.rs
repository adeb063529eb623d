use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;
use crate::poly::{BiPoly, FloatPoly};

/// Discretization of the local model around a point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalConfig {
    /// Polynomial degree of the local basis in the centered variable.
    pub degree: usize,
    /// Disk radius in units of the Gaussian length `1/√(2 t q(z₀))`.
    pub radius_scale: f64,
    pub n_radial: usize,
    pub n_theta: usize,
}

impl Default for LocalConfig {
    fn default() -> Self {
        Self { degree: 24, radius_scale: 12.0, n_radial: 160, n_theta: 128 }
    }
}

/// Diagonal value `B_{tp}(z₀, z₀)` from the kernel of a disk around `z₀`.
///
/// The weight is gauged by the holomorphic polarization `H(z) = P(z, z̄₀)`:
/// `φ = p − 2 Re H + p(z₀)` vanishes at `z₀` and `f ↦ f e^{−2tH + t p(z₀)}` is an
/// isometry onto the `e^{−2tφ}`-weighted space, so the diagonal value at `z₀`
/// is unchanged. The `e^{−2tφ}` weight concentrates in a disk of radius
/// `O(t^{−1/2})`; the basis is orthonormalized by Arnoldi iteration in the
/// centered, scaled variable.
#[derive(Clone, Debug)]
pub struct LocalKernel {
    p: BiPoly,
    pf: FloatPoly,
    q: FloatPoly,
    config: LocalConfig,
    radial: (Vec<f64>, Vec<f64>),
}

impl LocalKernel {
    pub fn new(p: &BiPoly, config: LocalConfig) -> Result<Self> {
        if !p.is_hermitian() {
            return Err(Error::Invalid("weight is not Hermitian".into()));
        }
        if config.degree == 0 || config.n_theta <= config.degree || config.n_radial < 8 || !(config.radius_scale > 0.0) {
            return Err(Error::Invalid(format!("bad local discretization {config:?}")));
        }
        let radial = gauss_legendre(config.n_radial)?;
        Ok(Self { p: p.clone(), pf: p.to_float(), q: p.d_zw().to_float(), config, radial })
    }

    pub fn weight(&self) -> &BiPoly {
        &self.p
    }

    pub fn diag(&self, t: f64, z0: Complex64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("t must be positive, got {t}")));
        }
        let q0 = self.q.eval_diag(z0).re;
        if !(q0 > 0.0) {
            return Err(Error::Domain(format!("q(z0) = {q0} must be positive for the local model")));
        }
        let zc = z0.conj();
        let p0 = self.pf.eval_diag(z0).re;
        let len = 1.0 / (2.0 * t * q0).sqrt();
        let radius = self.config.radius_scale * len;
        let (xs, ws) = &self.radial;
        let nt = self.config.n_theta;
        let mut u = Vec::with_capacity(xs.len() * nt);
        let mut weight = Vec::with_capacity(xs.len() * nt);
        for (x, wx) in xs.iter().zip(ws) {
            let rho = 0.5 * (x + 1.0) * radius;
            let wr = 0.5 * radius * wx * rho * 2.0 * PI / nt as f64;
            for k in 0..nt {
                let d = Complex64::from_polar(rho, 2.0 * PI * k as f64 / nt as f64);
                let z = z0 + d;
                let phi = self.pf.eval_diag(z).re - 2.0 * self.pf.eval(z, zc).re + p0;
                u.push(d / len);
                weight.push(wr * (-2.0 * t * phi).exp());
            }
        }
        let values = arnoldi_center_values(&u, &weight, self.config.degree)?;
        Ok(values.iter().map(|v| v.norm_sqr()).sum())
    }
}

/// Values at `u = 0` of the orthonormal polynomials `ψ_0..ψ_n` for the
/// discrete measure `Σ w_k δ_{u_k}`.
fn arnoldi_center_values(u: &[Complex64], w: &[f64], n: usize) -> Result<Vec<Complex64>> {
    let m = u.len();
    let sw: DVector<f64> = DVector::from_iterator(m, w.iter().map(|x| x.sqrt()));
    let mut basis = DMatrix::<Complex64>::zeros(m, n + 1);
    let mut center = vec![Complex64::new(0.0, 0.0); n + 1];
    let norm0 = sw.norm();
    if !(norm0 > 0.0) {
        return Err(Error::Conditioning("local weight vanishes on the disk".into()));
    }
    for i in 0..m {
        basis[(i, 0)] = Complex64::new(sw[i] / norm0, 0.0);
    }
    center[0] = Complex64::new(1.0 / norm0, 0.0);
    for k in 0..n {
        let mut v: DVector<Complex64> = DVector::from_iterator(m, (0..m).map(|i| u[i] * basis[(i, k)]));
        // ψ_{k+1}(0) h = 0·ψ_k(0) − Σ_j h_jk ψ_j(0)
        let mut c = Complex64::new(0.0, 0.0);
        for _ in 0..2 {
            for j in 0..=k {
                let col = basis.column(j);
                let h = col.dotc(&v);
                v.axpy(-h, &col, Complex64::new(1.0, 0.0));
                c -= h * center[j];
            }
        }
        let h = v.norm();
        if !(h > 0.0) {
            return Err(Error::Conditioning(format!("Arnoldi breakdown at degree {}", k + 1)));
        }
        basis.set_column(k + 1, &(v / Complex64::new(h, 0.0)));
        center[k + 1] = c / h;
    }
    Ok(center)
}
