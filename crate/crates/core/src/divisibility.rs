//! Divisibility classes `D_a(k, λ)` and the exact certificate deciding whether
//! the third expansion coefficient can vanish.
//!
//! `f ∼ D_a(k, λ)` means `f = (z + a·w)^k · h` with `h(−a, 1) = λ`. For
//! rational functions `k` is the difference of the numerator and denominator
//! multiplicities and `λ` the quotient of their cofactor values.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{big_q_of, rat_string, BiPoly, ExactComplex, GaussianRational, PowerBase, PowerQuotient, RationalFn, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivClass {
    pub a: GaussianRational,
    pub k: i64,
    pub lambda: GaussianRational,
}

impl DivClass {
    pub fn new(a: GaussianRational, k: i64, lambda: GaussianRational) -> Self {
        Self { a, k, lambda }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    Mul,
    Add,
    Div,
}

/// Multiplicity of `z + a·w` in `f` together with the cofactor.
pub fn multiplicity(f: &BiPoly, a: &GaussianRational) -> Result<(u32, BiPoly)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lin = BiPoly::linear_form(a);
    let mut k = 0;
    let mut cof = f.clone();
    while let Some(next) = cof.div_exact(&lin)? {
        cof = next;
        k += 1;
    }
    Ok((k, cof))
}

/// Point `(z, w) = (−a, 1)` where cofactors are read off.
fn anchor(a: &GaussianRational) -> (GaussianRational, GaussianRational) {
    (-a, GaussianRational::one())
}

pub fn poly_class(f: &BiPoly, a: &GaussianRational) -> Result<DivClass> {
    let (k, cof) = multiplicity(f, a)?;
    let (z, w) = anchor(a);
    Ok(DivClass::new(a.clone(), k as i64, cof.eval(&z, &w)))
}

pub fn div_class(g: &RationalFn, a: &GaussianRational) -> Result<DivClass> {
    let n = poly_class(g.num(), a)?;
    let d = poly_class(g.den(), a)?;
    if d.lambda.is_zero() {
        // only possible for a non-homogeneous denominator
        return Err(Error::DivisionByZero("denominator cofactor"));
    }
    Ok(DivClass::new(a.clone(), n.k - d.k, n.lambda.checked_div(&d.lambda)?))
}

/// `∂_z: (k, λ) ↦ (k−1, kλ)`, `∂_w: (k, λ) ↦ (k−1, a·k·λ)`.
pub fn rule_derivative(c: &DivClass, v: Var) -> DivClass {
    let k = GaussianRational::from_int(c.k);
    let lambda = match v {
        Var::Z => &k * &c.lambda,
        Var::W => &(&c.a * &k) * &c.lambda,
    };
    DivClass::new(c.a.clone(), c.k - 1, lambda)
}

pub fn rule_scalar(c: &DivClass, s: &GaussianRational) -> DivClass {
    DivClass::new(c.a.clone(), c.k, s * &c.lambda)
}

pub fn rule_combine(c1: &DivClass, c2: &DivClass, op: CombineOp) -> Result<DivClass> {
    if c1.a != c2.a {
        return Err(Error::MismatchedBase(c1.a.to_string(), c2.a.to_string()));
    }
    let a = c1.a.clone();
    Ok(match op {
        CombineOp::Mul => DivClass::new(a, c1.k + c2.k, &c1.lambda * &c2.lambda),
        CombineOp::Add => match c1.k.cmp(&c2.k) {
            std::cmp::Ordering::Equal => DivClass::new(a, c1.k, &c1.lambda + &c2.lambda),
            std::cmp::Ordering::Less => c1.clone(),
            std::cmp::Ordering::Greater => c2.clone(),
        },
        CombineOp::Div => {
            if c2.lambda.is_zero() {
                return Err(Error::DivisionByZero("class coefficient"));
            }
            DivClass::new(a, c1.k - c2.k, c1.lambda.checked_div(&c2.lambda)?)
        }
    })
}

/// `[q⁻¹∂_z∂_w]² q⁻³Q − q⁻⁴Q [∂_z∂_w] q⁻³Q − q⁻¹ [∂_w(q⁻³Q)] [∂_z(q⁻³Q)]`
/// as a quotient over a power of `q`.
pub fn eqncomb3_power_form(q: &BiPoly) -> Result<(PowerBase, PowerQuotient)> {
    let base = PowerBase::new(q.clone())?;
    let big_q = big_q_of(q);
    let f = PowerQuotient { num: big_q.clone(), pow: 3 };
    let f_zw = base.d_zw(&f);

    let inner = base.div_q(&f_zw, 1);
    let term1 = base.div_q(&base.d_zw(&inner), 1);
    let term2 = base.mul(&PowerQuotient { num: big_q, pow: 4 }, &f_zw);
    let term3 = base.div_q(&base.mul(&base.d(&f, Var::W), &base.d(&f, Var::Z)), 1);

    let lhs = base.sub(&base.sub(&term1, &term2), &term3);
    Ok((base, lhs))
}

pub fn eqncomb3_lhs(q: &BiPoly) -> Result<RationalFn> {
    let (base, lhs) = eqncomb3_power_form(q)?;
    Ok(base.to_rational(&lhs))
}

/// `T = −(a³k(k+2)/λ³)·[k(k+2) + (k+3)(2k+4)(2k+5) + k(k+3)]`.
pub fn t_formula(a: &GaussianRational, k: i64, lambda: &GaussianRational) -> Result<GaussianRational> {
    if lambda.is_zero() {
        return Err(Error::DivisionByZero("lambda"));
    }
    if k < 1 {
        return Err(Error::Invalid(format!("t_formula needs k >= 1, got {k}")));
    }
    let bracket = k * (k + 2) + (k + 3) * (2 * k + 4) * (2 * k + 5) + k * (k + 3);
    let scalar = GaussianRational::from_int(-(k * (k + 2) * bracket));
    (&scalar * &a.pow(3)).checked_div(&lambda.pow(3))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Monomial,
    Nonvanishing,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub a: GaussianRational,
    pub k: i64,
    pub lambda: GaussianRational,
    pub t: GaussianRational,
    pub lhs_class: DivClass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionCertificate {
    pub verdict: Verdict,
    /// `(c₀, m)` with `q = c₀ (zw)^m`.
    pub monomial: Option<(BigRational, u32)>,
    pub witness: Option<Witness>,
    /// Why a requested witness could not be produced.
    pub note: Option<String>,
}

pub fn obstruction_certificate(q: &BiPoly, hint_a: Option<&GaussianRational>) -> Result<ObstructionCertificate> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !q.is_hermitian() {
        return Err(Error::Invalid("q is not Hermitian".into()));
    }
    let lhs = eqncomb3_lhs(q)?;
    if lhs.is_zero() {
        let mut terms = q.terms();
        let (&(i, j), c) = terms.next().expect("nonzero q");
        if terms.next().is_some() || i != j || !c.is_real() {
            return Err(Error::Invalid(format!("identity vanishes but q = {q} is not of the form c0 (zw)^m")));
        }
        if !c.re.is_positive() {
            return Err(Error::Invalid("q = c0 (zw)^m with c0 <= 0 is not subharmonic".into()));
        }
        return Ok(ObstructionCertificate {
            verdict: Verdict::Monomial,
            monomial: Some((c.re.clone(), i)),
            witness: None,
            note: None,
        });
    }

    let mut cert = ObstructionCertificate { verdict: Verdict::Nonvanishing, monomial: None, witness: None, note: None };
    let Some(a) = hint_a else {
        return Ok(cert);
    };
    let (z0, w0) = anchor(a);
    if !q.eval(&z0, &w0).is_zero() {
        return Err(Error::NotARoot(a.to_string()));
    }
    if a.is_zero() {
        cert.note = Some("a = 0 yields T = 0; a nonzero Gaussian-rational root is needed for a witness".into());
        return Ok(cert);
    }
    let qc = poly_class(q, a)?;
    if qc.lambda.is_zero() {
        cert.note = Some("cofactor of q vanishes at (-a, 1)".into());
        return Ok(cert);
    }
    let t = t_formula(a, qc.k, &qc.lambda)?;
    let lhs_class = div_class(&lhs, a)?;
    let expected = DivClass::new(a.clone(), -3 * qc.k - 6, t.clone());
    if lhs_class != expected {
        return Err(Error::Invalid(format!(
            "divisibility calculus mismatch: direct ({}, {}) vs rule ({}, {})",
            lhs_class.k, lhs_class.lambda, expected.k, expected.lambda
        )));
    }
    cert.witness = Some(Witness { a: a.clone(), k: qc.k, lambda: qc.lambda, t, lhs_class });
    Ok(cert)
}

/// Flat JSON record of a certificate. Exact values are strings; complex values
/// are `{"re": "p/q", "im": "p/q"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub verdict: Verdict,
    pub c0: Option<String>,
    pub m: Option<u32>,
    pub a: Option<ExactComplex>,
    pub k: Option<i64>,
    pub lambda: Option<ExactComplex>,
    #[serde(rename = "T")]
    pub t: Option<ExactComplex>,
    pub lhs_k: Option<i64>,
    pub lhs_lambda: Option<ExactComplex>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl From<&ObstructionCertificate> for CertificateRecord {
    fn from(c: &ObstructionCertificate) -> Self {
        let w = c.witness.as_ref();
        Self {
            verdict: c.verdict,
            c0: c.monomial.as_ref().map(|(c0, _)| rat_string(c0)),
            m: c.monomial.as_ref().map(|(_, m)| *m),
            a: w.map(|w| (&w.a).into()),
            k: w.map(|w| w.k),
            lambda: w.map(|w| (&w.lambda).into()),
            t: w.map(|w| (&w.t).into()),
            lhs_k: w.map(|w| w.lhs_class.k),
            lhs_lambda: w.map(|w| (&w.lhs_class.lambda).into()),
            note: c.note.clone(),
        }
    }
}
