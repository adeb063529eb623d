//! Exact diagonal expansion coefficients `b₀…b₃` of the model kernel,
//!
//! ```text
//! b₀ = 4q,  b₁ = q⁻²Q,  b₂ = ⅙ ∂∂̄[q⁻³Q],
//! b₃ = (q/48){[q⁻¹∂∂̄]² q⁻³Q − q⁻⁴Q ∂∂̄ q⁻³Q − q⁻¹ ∂̄(q⁻³Q) ∂(q⁻³Q)}
//! ```
//!
//! built with the generic quotient rule (followed by cancellation of known
//! powers of `q`). The divisibility module computes the braces of `b₃`
//! independently over pure powers of `q`; [`b3_identity_bridge`] ties the two.

use num_complex::Complex64;

use crate::divisibility::eqncomb3_lhs;
use crate::error::{Error, Result};
use crate::poly::{q_and_big_q, BiPoly, GaussianRational, RationalFn, Var};

/// Below this `|q(z, z̄)|` the expansion is not evaluated.
pub const Q_ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct BCoeffs {
    pub q: BiPoly,
    pub big_q: BiPoly,
    pub b0: BiPoly,
    pub b1: RationalFn,
    pub b2: RationalFn,
    pub b3: RationalFn,
}

fn d_cancel(g: &RationalFn, v: Var, q: &BiPoly) -> Result<RationalFn> {
    g.d(v).cancel_factor(q)
}

fn d_zw_cancel(g: &RationalFn, q: &BiPoly) -> Result<RationalFn> {
    d_cancel(&d_cancel(g, Var::Z, q)?, Var::W, q)
}

fn over_q(g: &RationalFn, q: &BiPoly, n: u32) -> Result<RationalFn> {
    RationalFn::new(g.num().clone(), g.den() * &q.pow(n))
}

pub fn b_coeffs(p: &BiPoly) -> Result<BCoeffs> {
    let (q, big_q) = q_and_big_q(p)?;
    if q.is_zero() {
        return Err(Error::HarmonicWeight);
    }
    let b0 = q.scale(&GaussianRational::from_int(4));
    let b1 = RationalFn::new(big_q.clone(), q.pow(2))?;

    // R = q⁻³Q, the scalar curvature in this normalization
    let r = RationalFn::new(big_q.clone(), q.pow(3))?;
    let r_zw = d_zw_cancel(&r, &q)?;
    let b2 = r_zw.scale(&GaussianRational::from_ratio(1, 6));

    let lap_r = over_q(&r_zw, &q, 1)?;
    let term1 = over_q(&d_zw_cancel(&lap_r, &q)?, &q, 1)?;
    let term2 = RationalFn::new(big_q.clone(), q.pow(4))?.mul(&r_zw);
    let grads = d_cancel(&r, Var::W, &q)?.mul(&d_cancel(&r, Var::Z, &q)?);
    let term3 = over_q(&grads, &q, 1)?;
    let braces = term1.sub(&term2).sub(&term3).cancel_factor(&q)?;
    let b3 = RationalFn::from_poly(q.clone())
        .mul(&braces)
        .scale(&GaussianRational::from_ratio(1, 48))
        .cancel_factor(&q)?;

    Ok(BCoeffs { q, big_q, b0, b1, b2, b3 })
}

impl BCoeffs {
    pub fn all_higher_vanish(&self) -> bool {
        self.b1.is_zero() && self.b2.is_zero() && self.b3.is_zero()
    }
}

/// Floating values `(b₀, b₁, b₂, b₃)` on the diagonal `w = z̄`.
pub fn eval_b(c: &BCoeffs, z: Complex64) -> Result<[Complex64; 4]> {
    let qv = c.q.eval_diag(z);
    if qv.norm() <= Q_ZERO_TOL {
        return Err(Error::Domain(format!("q vanishes at z = {z}")));
    }
    Ok([c.b0.eval_diag(z), c.b1.eval_diag(z)?, c.b2.eval_diag(z)?, c.b3.eval_diag(z)?])
}

/// `(48/q)·b₃`, checked against the independently computed left side of the
/// complexified `b₃ = 0` identity.
pub fn b3_identity_bridge(p: &BiPoly) -> Result<RationalFn> {
    let c = b_coeffs(p)?;
    let scaled = c
        .b3
        .mul(&RationalFn::new(BiPoly::constant(GaussianRational::from_int(48)), c.q.clone())?);
    let lhs = eqncomb3_lhs(&c.q)?;
    if !scaled.equals(&lhs) {
        return Err(Error::Invalid("(48/q) b3 differs from the divisibility-side identity".into()));
    }
    Ok(scaled)
}
