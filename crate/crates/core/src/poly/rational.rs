//! Unreduced quotients of [`BiPoly`]. Equality and zero tests go through
//! cross-multiplication, so no multivariate gcd is ever needed.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use super::bipoly::{BiPoly, Var};
use super::gaussian::GaussianRational;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RationalFn {
    num: BiPoly,
    den: BiPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RationalFn {
    pub fn new(num: BiPoly, den: BiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("polynomial"));
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: BiPoly) -> Self {
        Self { num: p, den: BiPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(BiPoly::zero())
    }

    pub fn num(&self) -> &BiPoly {
        &self.num
    }

    pub fn den(&self) -> &BiPoly {
        &self.den
    }

    pub fn into_parts(self) -> (BiPoly, BiPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact equality `a/b == c/d  ⇔  a·d − c·b ≡ 0`.
    pub fn equals(&self, other: &Self) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self { num: &self.num + &other.num, den: self.den.clone() };
        }
        Self {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { num: &self.num * &other.num, den: &self.den * &other.den }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.num.is_zero() {
            return Err(Error::DivisionByZero("rational function"));
        }
        Ok(Self { num: &self.num * &other.den, den: &self.den * &other.num })
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn arith(&self, other: &Self, op: RfOp) -> Result<Self> {
        Ok(match op {
            RfOp::Add => self.add(other),
            RfOp::Sub => self.sub(other),
            RfOp::Mul => self.mul(other),
            RfOp::Div => self.div(other)?,
        })
    }

    /// Quotient rule `(n/d)' = (n'd − nd')/d²`.
    pub fn d(&self, v: Var) -> Self {
        if self.den.degree_in(v) == 0 {
            return Self { num: self.num.d(v), den: self.den.clone() };
        }
        let num = &(&self.num.d(v) * &self.den) - &(&self.num * &self.den.d(v));
        Self { num, den: &self.den * &self.den }
    }

    /// Cancel `factor` from numerator and denominator as long as it divides both.
    pub fn cancel_factor(&self, factor: &BiPoly) -> Result<Self> {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        loop {
            if num.is_zero() {
                return Ok(Self { num, den: BiPoly::one() });
            }
            match (num.div_exact(factor)?, den.div_exact(factor)?) {
                (Some(n), Some(d)) => {
                    num = n;
                    den = d;
                }
                _ => return Ok(Self { num, den }),
            }
        }
    }

    pub fn eval(&self, z: &GaussianRational, w: &GaussianRational) -> Result<GaussianRational> {
        let d = self.den.eval(z, w);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        self.num.eval(z, w).checked_div(&d)
    }

    pub fn eval_f64(&self, z: Complex64, w: Complex64) -> Result<Complex64> {
        let d = self.den.eval_f64(z, w);
        if d.norm() == 0.0 {
            return Err(Error::Pole);
        }
        Ok(self.num.eval_f64(z, w) / d)
    }

    pub fn eval_diag(&self, z: Complex64) -> Result<Complex64> {
        self.eval_f64(z, z.conj())
    }

    pub fn is_hermitian(&self) -> bool {
        // g* = g  ⇔  n*·d − n·d* ≡ 0
        (&self.num.hermitian_adjoint() * &self.den) == (&self.num * &self.den.hermitian_adjoint())
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// `num / base^pow` for a fixed base polynomial. Differentiation keeps the
/// denominator a pure power of the base, avoiding the squaring of the generic
/// quotient rule.
#[derive(Clone, Debug)]
pub struct PowerQuotient {
    pub num: BiPoly,
    pub pow: u32,
}

/// Shared base `q` with its first derivatives.
#[derive(Clone, Debug)]
pub struct PowerBase {
    pub q: BiPoly,
    q_z: BiPoly,
    q_w: BiPoly,
}

impl PowerBase {
    pub fn new(q: BiPoly) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self { q_z: q.d(Var::Z), q_w: q.d(Var::W), q })
    }

    pub fn poly(&self, p: BiPoly) -> PowerQuotient {
        PowerQuotient { num: p, pow: 0 }
    }

    /// `(n/q^k)_v = (n_v·q − k·n·q_v) / q^{k+1}`.
    pub fn d(&self, f: &PowerQuotient, v: Var) -> PowerQuotient {
        if f.pow == 0 {
            return PowerQuotient { num: f.num.d(v), pow: 0 };
        }
        let qv = if v == Var::Z { &self.q_z } else { &self.q_w };
        let k = GaussianRational::from_int(f.pow as i64);
        let num = &(&f.num.d(v) * &self.q) - &(&f.num * qv).scale(&k);
        PowerQuotient { num, pow: f.pow + 1 }
    }

    pub fn d_zw(&self, f: &PowerQuotient) -> PowerQuotient {
        self.d(&self.d(f, Var::Z), Var::W)
    }

    /// Multiply by `q^{-n}`.
    pub fn div_q(&self, f: &PowerQuotient, n: u32) -> PowerQuotient {
        PowerQuotient { num: f.num.clone(), pow: f.pow + n }
    }

    pub fn mul(&self, a: &PowerQuotient, b: &PowerQuotient) -> PowerQuotient {
        PowerQuotient { num: &a.num * &b.num, pow: a.pow + b.pow }
    }

    fn lift(&self, f: &PowerQuotient, pow: u32) -> BiPoly {
        &f.num * &self.q.pow(pow - f.pow)
    }

    pub fn add(&self, a: &PowerQuotient, b: &PowerQuotient) -> PowerQuotient {
        let pow = a.pow.max(b.pow);
        PowerQuotient { num: &self.lift(a, pow) + &self.lift(b, pow), pow }
    }

    pub fn sub(&self, a: &PowerQuotient, b: &PowerQuotient) -> PowerQuotient {
        let pow = a.pow.max(b.pow);
        PowerQuotient { num: &self.lift(a, pow) - &self.lift(b, pow), pow }
    }

    pub fn scale(&self, f: &PowerQuotient, c: &GaussianRational) -> PowerQuotient {
        PowerQuotient { num: f.num.scale(c), pow: f.pow }
    }

    /// Multiply by `q^n` (numerator side).
    pub fn mul_q(&self, f: &PowerQuotient, n: u32) -> PowerQuotient {
        let cancel = n.min(f.pow);
        PowerQuotient { num: &f.num * &self.q.pow(n - cancel), pow: f.pow - cancel }
    }

    pub fn to_rational(&self, f: &PowerQuotient) -> RationalFn {
        RationalFn { num: f.num.clone(), den: self.q.pow(f.pow) }
    }
}
