use std::f64::consts::PI;

use num_complex::Complex64;

use super::model::{binomial, exp_weight_factors, MAX_DERIV_ORDER};
use crate::error::{Error, Result};
use crate::numerics::{gamma, ln_gamma, lower_series_complex, regularized_lower};
use crate::poly::{BiPoly, FloatPoly, GaussianRational};

fn check_params(c: f64, r: u32) -> Result<()> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("monomial weight needs c > 0, got {c}")));
    }
    if r < 2 || r % 2 != 0 {
        return Err(Error::Domain(format!("monomial weight needs an even degree r ≥ 2, got {r}")));
    }
    Ok(())
}

/// Closed-form kernel of `p = (c/2)|z|^r`:
/// `B_p(z,w) = (r c^{2/r}/2π) e^{−p(z)−p(w)} G(c^{2/r} z w̄)` with
/// `G(x) = Σ_{α<r/2} x^α/Γ(a_α) + x^{r/2−1} e^{x^{r/2}} Σ_{α<r/2} [Γ(a_α) − Γ(a_α, x^{r/2})]/Γ(a_α)`,
/// `a_α = 2(α+1)/r`.
///
/// Off the nonnegative real axis of `x` the incomplete gamma is replaced by its
/// entire series, which is used only where `Re x^{r/2} > 0` or `|x^{r/2}| ≤ 1`.
pub fn monomial_kernel(c: f64, r: u32, z: Complex64, w: Complex64) -> Result<Complex64> {
    check_params(c, r)?;
    let rf = r as f64;
    let half = (r / 2) as i32;
    let shift = 0.5 * c * (z.norm().powi(r as i32) + w.norm().powi(r as i32));
    let zw = z * w.conj();
    let x = zw * c.powf(2.0 / rf);
    let y = x.powi(half);
    let pref = rf * c.powf(2.0 / rf) / (2.0 * PI);
    let a = |k: i32| 2.0 * (k as f64 + 1.0) / rf;

    if zw.im == 0.0 && zw.re >= 0.0 {
        let (xr, yr) = (x.re, y.re);
        let mut finite = 0.0;
        let mut tail = 0.0;
        for k in 0..half {
            finite += xr.powi(k) / gamma(a(k))?;
            tail += regularized_lower(a(k), yr)?;
        }
        let g = finite * (-shift).exp() + xr.powi(half - 1) * (yr - shift).exp() * tail;
        return Ok(Complex64::new(pref * g, 0.0));
    }
    if !(y.re > 0.0 || y.norm() <= 1.0) {
        return Err(Error::OutsideSector(format!("x^(r/2) = {y} has nonpositive real part")));
    }
    if y.norm() > 700.0 {
        return Err(Error::OutsideSector(format!("|x^(r/2)| = {} too large for the series form", y.norm())));
    }
    // Σ_m y^m/Γ(a+m) = (1 + y·S(a,y))/Γ(a), S the entire lower-gamma series
    let mut g = Complex64::new(0.0, 0.0);
    for k in 0..half {
        let s = lower_series_complex(a(k), y)?;
        g += x.powi(k) * (Complex64::new(1.0, 0.0) + y * s) / gamma(a(k))?;
    }
    Ok(g * pref * (-shift).exp())
}

/// `ln M[α][α] = ln((2π/r) c^{−2(α+1)/r} Γ(2(α+1)/r))` for `p = (c/2)|z|^r`.
pub fn monomial_log_moment(c: f64, r: u32, alpha: usize) -> Result<f64> {
    check_params(c, r)?;
    let a = 2.0 * (alpha as f64 + 1.0) / r as f64;
    Ok((2.0 * PI / r as f64).ln() - a * c.ln() + ln_gamma(a)?)
}

/// Monomial-weight kernel evaluated through its diagonal orthogonal series,
/// used for diagonal derivatives.
#[derive(Clone, Debug)]
pub struct MonomialKernel {
    pub c: f64,
    pub r: u32,
    pf: FloatPoly,
    leibniz: Vec<Vec<FloatPoly>>,
}

const SERIES_MAX: usize = 100_000;

impl MonomialKernel {
    pub fn new(c: f64, r: u32) -> Result<Self> {
        check_params(c, r)?;
        let p = Self::weight_poly(c, r)?;
        Ok(Self { c, r, pf: p.to_float(), leibniz: exp_weight_factors(&p, MAX_DERIV_ORDER) })
    }

    /// `(c/2)(zw)^{r/2}` with `c` converted exactly from its binary value.
    pub fn weight_poly(c: f64, r: u32) -> Result<BiPoly> {
        let cq = GaussianRational::from_f64(c, 0.0).ok_or_else(|| Error::Domain(format!("c = {c} is not finite")))?;
        Ok(BiPoly::monomial(&cq * &GaussianRational::from_ratio(1, 2), r / 2, r / 2))
    }

    pub fn diag(&self, z: Complex64) -> Result<f64> {
        monomial_kernel(self.c, self.r, z, z).map(|v| v.re)
    }

    /// `e^{−2p(z)} ∂^i ∂̄^j Σ_α |z^α|²/M[α][α]`.
    fn weighted_series(&self, i: u32, j: u32, z: Complex64) -> Result<Complex64> {
        let x = z.norm();
        let two_p = self.c * x.powi(self.r as i32);
        let phase = Complex64::from_polar(1.0, (j as f64 - i as f64) * z.arg());
        let lead = i.max(j) as usize;
        if x == 0.0 {
            if i != j {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let f = (1..=i).map(|k| k as f64).product::<f64>();
            return Ok(phase * f * f / monomial_log_moment(self.c, self.r, i as usize)?.exp());
        }
        let mut sum = 0.0;
        let mut peaked = false;
        let mut prev = 0.0;
        for alpha in lead..SERIES_MAX {
            let af = alpha as f64;
            let falling = |k: u32| (0..k).map(|m| (af - m as f64).ln()).sum::<f64>();
            let ln_term = falling(i) + falling(j) + (2.0 * af - i as f64 - j as f64) * x.ln()
                - monomial_log_moment(self.c, self.r, alpha)?
                - two_p;
            let term = ln_term.exp();
            sum += term;
            if term < prev {
                peaked = true;
            }
            if peaked && term <= 1e-17 * sum {
                return Ok(phase * sum);
            }
            prev = term;
        }
        Err(Error::Domain(format!("orthogonal series did not converge at |z| = {x}")))
    }

    pub fn diag_derivative(&self, a1: u32, a2: u32, z: Complex64) -> Result<Complex64> {
        if a1 + a2 > MAX_DERIV_ORDER {
            return Err(Error::UnsupportedOrder(a1, a2));
        }
        let zc = z.conj();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..=a1 {
            for j in 0..=a2 {
                let e = self.leibniz[(a1 - i) as usize][(a2 - j) as usize].eval(z, zc);
                if e.norm() == 0.0 {
                    continue;
                }
                acc += binomial(a1, i) * binomial(a2, j) * e * self.weighted_series(i, j, z)?;
            }
        }
        Ok(acc)
    }

    pub fn weight_at(&self, z: Complex64) -> f64 {
        self.pf.eval_diag(z).re
    }
}
