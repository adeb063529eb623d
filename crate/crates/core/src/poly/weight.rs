//! Weight-level derived quantities: `q = p_{zw}`, `Q = q·q_{zw} − q_z·q_w`, and
//! the admissibility report for a boundary-model weight.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::bipoly::{BiPoly, Var};
use super::gaussian::GaussianRational;
use crate::error::{Error, Result};

/// θ-grid size for the floating subharmonicity check.
pub const SUBHARMONIC_GRID: usize = 4096;
/// Lower margin accepted for `q` on the unit circle.
pub const SUBHARMONIC_MARGIN: f64 = -1e-9;

pub fn wirtinger_d(f: &BiPoly, v: Var) -> BiPoly {
    f.d(v)
}

/// `(q, Q)` for a Hermitian weight `p`.
pub fn q_and_big_q(p: &BiPoly) -> Result<(BiPoly, BiPoly)> {
    if !p.is_hermitian() {
        return Err(Error::Invalid("weight is not Hermitian".into()));
    }
    let q = p.d_zw();
    let big_q = big_q_of(&q);
    Ok((q, big_q))
}

/// `Q = q·q_{zw} − q_z·q_w` computed from `q` directly.
pub fn big_q_of(q: &BiPoly) -> BiPoly {
    &(q * &q.d_zw()) - &(&q.d(Var::Z) * &q.d(Var::W))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubharmonicEvidence {
    /// Circle restriction `Σ a_m e^{imθ}` with `a_0 ≥ Σ_{m≠0} (|Re a_m| + |Im a_m|)`.
    ExactDominance,
    /// Minimum of `q` over the θ-grid.
    Grid { min: f64 },
    /// `q` is not homogeneous, so circle values do not determine its sign.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightReport {
    pub hermitian: bool,
    pub degree: Option<u32>,
    pub even_degree: bool,
    pub no_pure_terms: bool,
    pub subharmonic: bool,
    pub evidence: SubharmonicEvidence,
    pub nonharmonic: bool,
}

impl WeightReport {
    pub fn admissible(&self) -> bool {
        self.hermitian && self.even_degree && self.no_pure_terms && self.subharmonic && self.nonharmonic
    }
}

pub fn admissible_weight_check(p: &BiPoly) -> WeightReport {
    let hermitian = p.is_hermitian();
    let degree = p.homogeneous_degree().ok().flatten();
    let even_degree = degree.is_some_and(|r| r >= 2 && r % 2 == 0);
    let no_pure_terms = p.terms().all(|(&(i, j), _)| !((i >= 1 && j == 0) || (i == 0 && j >= 1)));
    let q = p.d_zw();
    let nonharmonic = !q.is_zero();
    let (subharmonic, evidence) = subharmonic_on_circle(&q);
    WeightReport { hermitian, degree, even_degree, no_pure_terms, subharmonic, evidence, nonharmonic }
}

fn subharmonic_on_circle(q: &BiPoly) -> (bool, SubharmonicEvidence) {
    if q.is_zero() {
        return (true, SubharmonicEvidence::ExactDominance);
    }
    if !matches!(q.homogeneous_degree(), Ok(Some(_))) {
        return (false, SubharmonicEvidence::NotApplicable);
    }
    // q(e^{iθ}, e^{-iθ}) = Σ_m a_m e^{imθ}, m = i − j
    let mut coeffs: BTreeMap<i64, GaussianRational> = BTreeMap::new();
    for (&(i, j), c) in q.terms() {
        *coeffs.entry(i as i64 - j as i64).or_insert_with(GaussianRational::zero) += c;
    }
    let a0 = coeffs.get(&0).cloned().unwrap_or_else(GaussianRational::zero);
    let off: BigRational = coeffs
        .iter()
        .filter(|(m, _)| **m != 0)
        .map(|(_, c)| c.re.abs() + c.im.abs())
        .fold(BigRational::zero(), |a, b| a + b);
    if a0.im.is_zero() && !a0.re.is_negative() && a0.re >= off {
        return (true, SubharmonicEvidence::ExactDominance);
    }
    let qf = q.to_float();
    let min = (0..SUBHARMONIC_GRID)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / SUBHARMONIC_GRID as f64;
            qf.eval_diag(Complex64::from_polar(1.0, th)).re
        })
        .fold(f64::INFINITY, f64::min);
    (min >= SUBHARMONIC_MARGIN, SubharmonicEvidence::Grid { min })
}
