use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::moments::build_moments;
use crate::error::{Error, Result};
use crate::numerics::QuadSpec;
use crate::poly::{BiPoly, FloatPoly, Var};

/// Extra basis elements used to probe truncation error.
pub const PROBE_EXTRA: usize = 8;
/// Relative diagonal change tolerated inside the validated radius.
pub const VALIDATION_TOL: f64 = 1e-8;
pub const MAX_DERIV_ORDER: u32 = 4;

const RADIUS_STEP: f64 = 0.01;
const RADIUS_MAX: f64 = 50.0;
const RADIUS_ANGLES: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelConfig {
    pub dmax: usize,
    pub quad: QuadSpec,
    pub ntheta: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self { dmax: 40, quad: QuadSpec::default(), ntheta: 256 }
    }
}

/// Weighted Bergman kernel of `e^{−2p}` on the monomials `0..=dmax`.
#[derive(Clone, Debug)]
pub struct KernelModel {
    p: BiPoly,
    pf: FloatPoly,
    degree: Option<u32>,
    config: KernelConfig,
    /// Cholesky factor of the equilibrated Gram matrix, including the probe block.
    l: DMatrix<Complex64>,
    /// Equilibration `1/√M[α][α]`.
    scale: Vec<f64>,
    condition: f64,
    validated_radius: f64,
    /// `e^{−2p}·E_{ij}` factors: `∂^i ∂̄^j e^{−2p} = e^{−2p} E_{ij}`.
    leibniz: Vec<Vec<FloatPoly>>,
}

/// A kernel value with the validated-radius flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub within_validated_radius: bool,
}

/// Polynomials `E_{ij}` with `∂_z^i ∂_w^j e^{−2p} = e^{−2p} E_{ij}`, `i + j ≤ order`.
pub(crate) fn exp_weight_factors(p: &BiPoly, order: u32) -> Vec<Vec<FloatPoly>> {
    let two = crate::poly::GaussianRational::from_int(2);
    let pz = p.d(Var::Z).scale(&two);
    let pw = p.d(Var::W).scale(&two);
    let n = order as usize + 1;
    let mut table: Vec<Vec<BiPoly>> = vec![vec![BiPoly::zero(); n]; n];
    table[0][0] = BiPoly::one();
    for i in 0..n {
        for j in 0..n - i {
            if i == 0 && j == 0 {
                continue;
            }
            table[i][j] = if j > 0 {
                let prev = &table[i][j - 1];
                &prev.d(Var::W) - &(&pw * prev)
            } else {
                let prev = &table[i - 1][j];
                &prev.d(Var::Z) - &(&pz * prev)
            };
        }
    }
    table.into_iter().map(|row| row.iter().map(BiPoly::to_float).collect()).collect()
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl KernelModel {
    pub fn new(p: &BiPoly, config: &KernelConfig) -> Result<Self> {
        let total = config.dmax + PROBE_EXTRA;
        let moments = build_moments(p, total, &config.quad, config.ntheta)?;
        let n = total + 1;
        let scale: Vec<f64> = (0..n).map(|a| 1.0 / moments.entries[(a, a)].re.sqrt()).collect();
        let mut eq = moments.entries.clone();
        for a in 0..n {
            for b in 0..n {
                eq[(a, b)] *= scale[a] * scale[b];
            }
        }
        let head = eq.view((0, 0), (config.dmax + 1, config.dmax + 1)).into_owned();
        let eig = SymmetricEigen::new(head).eigenvalues;
        let (lo, hi) = eig.iter().fold((f64::INFINITY, 0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        let chol = nalgebra::Cholesky::new(eq).ok_or_else(|| {
            Error::Conditioning(format!(
                "moment matrix is not numerically positive definite at dmax = {} (+{PROBE_EXTRA} probe); reduce dmax",
                config.dmax
            ))
        })?;
        let mut km = Self {
            p: p.clone(),
            pf: p.to_float(),
            degree: p.homogeneous_degree()?,
            config: config.clone(),
            l: chol.l(),
            scale,
            condition,
            validated_radius: 0.0,
            leibniz: exp_weight_factors(p, MAX_DERIV_ORDER),
        };
        km.validated_radius = km.find_validated_radius();
        Ok(km)
    }

    pub fn weight(&self) -> &BiPoly {
        &self.p
    }

    pub fn dmax(&self) -> usize {
        self.config.dmax
    }

    pub fn config(&self) -> &KernelConfig {
        &self.config
    }

    /// Homogeneous degree `r` of the weight, if any.
    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    /// Spectral condition number of the equilibrated Gram matrix.
    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn validated_radius(&self) -> f64 {
        self.validated_radius
    }

    /// `L⁻¹ D conj(∂^k v(z))` over the full probe basis.
    fn coeffs(&self, z: Complex64, k: u32) -> DVector<Complex64> {
        let n = self.l.nrows();
        let zc = z.conj();
        let mut v = DVector::<Complex64>::zeros(n);
        let mut pw = Complex64::new(1.0, 0.0);
        for a in (k as usize)..n {
            let falling = (0..k).fold(1.0, |acc, i| acc * (a as f64 - i as f64));
            v[a] = pw * falling * self.scale[a];
            pw *= zc;
        }
        self.l.solve_lower_triangular(&v).expect("Cholesky factor has a positive diagonal")
    }

    fn weight_at(&self, z: Complex64) -> f64 {
        self.pf.eval_diag(z).re
    }

    fn pairing(&self, x: &DVector<Complex64>, y: &DVector<Complex64>, len: usize) -> Complex64 {
        (0..len).map(|i| x[i].conj() * y[i]).sum()
    }

    fn diag_truncation(&self, z: Complex64) -> (f64, f64) {
        let b = self.coeffs(z, 0);
        let n0 = self.config.dmax + 1;
        let head: f64 = (0..n0).map(|i| b[i].norm_sqr()).sum();
        let tail: f64 = (n0..b.len()).map(|i| b[i].norm_sqr()).sum();
        (head, tail)
    }

    fn find_validated_radius(&self) -> f64 {
        let mut last_ok = 0.0;
        let mut k = 1;
        loop {
            let rho = k as f64 * RADIUS_STEP;
            if rho > RADIUS_MAX {
                return last_ok;
            }
            let ok = (0..RADIUS_ANGLES).all(|j| {
                let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / RADIUS_ANGLES as f64;
                let (head, tail) = self.diag_truncation(Complex64::from_polar(rho, th));
                head.is_finite() && tail <= VALIDATION_TOL * head
            });
            if !ok {
                return last_ok;
            }
            last_ok = rho;
            k += 1;
        }
    }

    pub fn within(&self, z: Complex64) -> bool {
        z.norm() <= self.validated_radius
    }

    /// `B_p(z, w)` (linear in `z`, antilinear in `w` up to the weight factors).
    pub fn kernel_eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let bz = self.coeffs(z, 0);
        let bw = self.coeffs(w, 0);
        let s = self.pairing(&bz, &bw, self.config.dmax + 1);
        s * (-self.weight_at(z) - self.weight_at(w)).exp()
    }

    pub fn kernel_eval_checked(&self, z: Complex64, w: Complex64) -> KernelValue {
        KernelValue { value: self.kernel_eval(z, w), within_validated_radius: self.within(z) && self.within(w) }
    }

    pub fn diag(&self, z: Complex64) -> f64 {
        self.kernel_eval(z, z).re
    }

    /// `∂_z^{a1} ∂_z̄^{a2}` of the diagonal function `z ↦ B_p(z, z)`.
    pub fn diag_derivative(&self, a1: u32, a2: u32, z: Complex64) -> Result<Complex64> {
        if a1 + a2 > MAX_DERIV_ORDER {
            return Err(Error::UnsupportedOrder(a1, a2));
        }
        let n0 = self.config.dmax + 1;
        let b: Vec<DVector<Complex64>> = (0..=a1.max(a2)).map(|k| self.coeffs(z, k)).collect();
        let zc = z.conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..=a1 {
            for j in 0..=a2 {
                let e = self.leibniz[(a1 - i) as usize][(a2 - j) as usize].eval(z, zc);
                // ∂^i ∂̄^j Σ |b_k|² = Σ conj(b^{(i)}_k) b^{(j)}_k
                let r = self.pairing(&b[i as usize], &b[j as usize], n0);
                acc += binomial(a1, i) * binomial(a2, j) * e * r;
            }
        }
        Ok(acc * (-2.0 * self.weight_at(z)).exp())
    }
}

/// `|B_p(t^{1/r} z, t^{1/r} w) − t^{−2/r} B_{tp}(z, w)| / |t^{−2/r} B_{tp}(z, w)|`.
pub fn scaling_residual(t: f64, z: Complex64, w: Complex64, base: &KernelModel, scaled: &KernelModel) -> Result<f64> {
    let r = base
        .degree()
        .filter(|&r| r > 0)
        .ok_or_else(|| Error::Invalid("scaling law needs a homogeneous weight".into()))?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("dilation t must be positive, got {t}")));
    }
    let s = t.powf(1.0 / r as f64);
    let lhs = base.kernel_eval(z * s, w * s);
    let rhs = scaled.kernel_eval(z, w) * t.powf(-2.0 / r as f64);
    Ok((lhs - rhs).norm() / rhs.norm())
}
