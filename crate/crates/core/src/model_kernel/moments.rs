use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ln_gamma, quad_semiinf, QuadSpec, Transform};
use crate::poly::{BiPoly, FloatPoly};

/// Hermitian Gram matrix `M[α][β] = ∫ z^β z̄^α e^{−2p} dA` of the monomials `0..=dmax`.
#[derive(Clone, Debug)]
pub struct MomentMatrix {
    pub dmax: usize,
    pub entries: DMatrix<Complex64>,
}

/// Angular profile `h(θ) = p(e^{iθ})` of a homogeneous weight.
fn circle_profile(pf: &FloatPoly) -> impl Fn(f64) -> f64 + '_ {
    move |th: f64| pf.eval_diag(Complex64::from_polar(1.0, th)).re
}

pub fn build_moments(p: &BiPoly, dmax: usize, spec: &QuadSpec, ntheta: usize) -> Result<MomentMatrix> {
    spec.validate()?;
    if ntheta < 16 {
        return Err(Error::Invalid(format!("ntheta must be at least 16, got {ntheta}")));
    }
    if !p.is_hermitian() {
        return Err(Error::Invalid("weight is not Hermitian".into()));
    }
    let pf = p.to_float();
    let n = dmax + 1;
    // radial[θ-node][s] for s = α + β, integrand exponent ρ^{s+1}
    let nodes: Vec<f64> = (0..ntheta).map(|k| 2.0 * PI * k as f64 / ntheta as f64).collect();
    let radial: Vec<Vec<f64>> = match p.homogeneous_degree()? {
        Some(r) if r > 0 => {
            let h = circle_profile(&pf);
            let rf = r as f64;
            nodes
                .iter()
                .map(|&th| {
                    let hv = h(th);
                    if !(hv > 0.0) {
                        return Err(Error::Domain(format!("e^(-2p) is not integrable: p(e^(i{th})) = {hv}")));
                    }
                    // ∫ρ^{s+1} e^{−2hρ^r} dρ = Γ((s+2)/r) / (r (2h)^{(s+2)/r})
                    Ok((0..2 * n - 1)
                        .map(|s| {
                            let e = (s as f64 + 2.0) / rf;
                            (ln_gamma(e).unwrap_or(f64::NAN) - e * (2.0 * hv).ln()).exp() / rf
                        })
                        .collect())
                })
                .collect::<Result<_>>()?
        }
        _ => {
            let r = p.degree().unwrap_or(0).max(2);
            let rspec = QuadSpec { transform: Transform::RadialPower { r }, ..*spec };
            nodes
                .iter()
                .map(|&th| {
                    let dir = Complex64::from_polar(1.0, th);
                    let f = |rho: f64| {
                        let wgt = (-2.0 * pf.eval_diag(dir * rho).re).exp();
                        let mut out = Vec::with_capacity(2 * n - 1);
                        let mut acc = rho * wgt;
                        for _ in 0..2 * n - 1 {
                            out.push(acc);
                            acc *= rho;
                        }
                        out
                    };
                    quad_semiinf(f, &rspec).map(|res| res.value)
                })
                .collect::<Result<_>>()?
        }
    };
    // trapezoid rule in θ; the phase e^{i(β−α)θ} is read from a table
    let h = 2.0 * PI / ntheta as f64;
    let phase: Vec<Complex64> = (0..ntheta).map(|j| Complex64::from_polar(h, nodes[j])).collect();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let k = b as i64 - a as i64;
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, rad) in radial.iter().enumerate() {
                let idx = (k * j as i64).rem_euclid(ntheta as i64) as usize;
                acc += phase[idx] * rad[a + b];
            }
            m[(a, b)] = acc;
        }
    }
    let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    for a in 0..n {
        if !(herm[(a, a)].re > 0.0) || !herm[(a, a)].re.is_finite() {
            return Err(Error::Conditioning(format!("moment M[{a}][{a}] = {} is not positive", herm[(a, a)].re)));
        }
    }
    Ok(MomentMatrix { dmax, entries: herm })
}
