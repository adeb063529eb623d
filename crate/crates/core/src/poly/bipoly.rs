//! Exact polynomials in two variables `z` and `w` over the Gaussian rationals.
//!
//! `w` stands for the complexified conjugate variable: a real-valued function
//! `f(z, z̄)` is stored as `f(z, w)` and evaluated on the diagonal `w = z̄`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use crate::error::{Error, Result};

/// Differentiation variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Z,
    W,
}

/// Sparse map `(i, j) -> coefficient of z^i w^j`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), GaussianRational>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: GaussianRational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    pub fn z() -> Self {
        Self::monomial(GaussianRational::one(), 1, 0)
    }

    pub fn w() -> Self {
        Self::monomial(GaussianRational::one(), 0, 1)
    }

    /// `z + a·w`.
    pub fn linear_form(a: &GaussianRational) -> Self {
        let mut f = Self::z();
        f.add_term((0, 1), a.clone());
        f
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), GaussianRational)>,
    {
        let mut f = Self::zero();
        for (e, c) in terms {
            f.add_term(e, c);
        }
        f
    }

    pub fn add_term(&mut self, e: (u32, u32), c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&e) {
            Some(v) => {
                *v += &c;
                v.is_zero()
            }
            None => {
                self.terms.insert(e, c);
                false
            }
        };
        if remove {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> GaussianRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|&(i, j)| if v == Var::Z { i } else { j })
            .max()
            .unwrap_or(0)
    }

    /// `Some(r)` when every term has total degree `r`.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut degs = self.terms.keys().map(|&(i, j)| i + j);
        let first = degs.next().ok_or(Error::ZeroPolynomial)?;
        Ok(degs.all(|d| d == first).then_some(first))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn d(&self, v: Var) -> Self {
        let mut out = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            let (k, e) = match v {
                Var::Z if i > 0 => (i, (i - 1, j)),
                Var::W if j > 0 => (j, (i, j - 1)),
                _ => continue,
            };
            out.insert(e, c * &GaussianRational::from_int(k as i64));
        }
        Self { terms: out }
    }

    /// `d_z d_w`.
    pub fn d_zw(&self) -> Self {
        self.d(Var::Z).d(Var::W)
    }

    /// The polynomial `f*(z, w) = conj(f(w̄, z̄))`: coefficients conjugated and exponents swapped.
    /// `f` is Hermitian iff `f* = f`.
    pub fn hermitian_adjoint(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.conj())).collect() }
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.iter().all(|(&(i, j), c)| self.terms.get(&(j, i)).is_some_and(|d| *d == c.conj()))
    }

    pub fn eval(&self, z: &GaussianRational, w: &GaussianRational) -> GaussianRational {
        let zp = exact_powers(z, self.degree_in(Var::Z));
        let wp = exact_powers(w, self.degree_in(Var::W));
        let mut acc = GaussianRational::zero();
        for (&(i, j), c) in &self.terms {
            acc += &(&(c * &zp[i as usize]) * &wp[j as usize]);
        }
        acc
    }

    pub fn eval_f64(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.to_float().eval(z, w)
    }

    /// Value on the diagonal `w = z̄`.
    pub fn eval_diag(&self, z: Complex64) -> Complex64 {
        self.eval_f64(z, z.conj())
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly::from_terms(self.terms.iter().map(|(&e, c)| (e, c.to_complex())))
    }

    /// Exact division `self / g`; `None` when `g` does not divide `self`.
    pub fn div_exact(&self, g: &Self) -> Result<Option<Self>> {
        let (&lead_e, lead_c) = g.terms.iter().next_back().ok_or(Error::DivisionByZero("polynomial"))?;
        let lead_inv = lead_c.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((&e, c)) = rem.terms.iter().next_back() {
            if e.0 < lead_e.0 || e.1 < lead_e.1 {
                return Ok(None);
            }
            let t = Self::monomial(c * &lead_inv, e.0 - lead_e.0, e.1 - lead_e.1);
            rem = &rem - &(&t * g);
            quot = &quot + &t;
        }
        Ok(Some(quot))
    }

    /// Substitute `z ↦ s·z`, `w ↦ s·w` with a common real scale, i.e. `f(s z, s w)`.
    pub fn dilate(&self, s: &GaussianRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), c)| ((i, j), c * &s.pow(i + j))))
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut acc: BTreeMap<(u32, u32), GaussianRational> = BTreeMap::new();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                let e = (i1 + i2, j1 + j2);
                let prod = c1 * c2;
                acc.entry(e).and_modify(|v| *v += &prod).or_insert(prod);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        BiPoly { terms: acc }
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            match i {
                0 => {}
                1 => write!(f, "*z")?,
                _ => write!(f, "*z^{i}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "*w")?,
                _ => write!(f, "*w^{j}")?,
            }
        }
        Ok(())
    }
}

/// Floating-point shadow of a [`BiPoly`] for fast repeated evaluation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FloatPoly {
    terms: Vec<((u32, u32), Complex64)>,
}

impl FloatPoly {
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Complex64)>>(it: I) -> Self {
        Self { terms: it.into_iter().filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).collect() }
    }

    pub fn terms(&self) -> &[((u32, u32), Complex64)] {
        &self.terms
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        let dz = self.terms.iter().map(|t| t.0 .0).max().unwrap_or(0) as usize;
        let dw = self.terms.iter().map(|t| t.0 .1).max().unwrap_or(0) as usize;
        let zp = powers(z, dz);
        let wp = powers(w, dw);
        self.terms.iter().map(|&((i, j), c)| c * zp[i as usize] * wp[j as usize]).sum()
    }

    pub fn eval_diag(&self, z: Complex64) -> Complex64 {
        self.eval(z, z.conj())
    }

    pub fn d(&self, v: Var) -> Self {
        Self::from_terms(self.terms.iter().filter_map(|&((i, j), c)| match v {
            Var::Z if i > 0 => Some(((i - 1, j), c * i as f64)),
            Var::W if j > 0 => Some(((i, j - 1), c * j as f64)),
            _ => None,
        }))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|&(e, c)| (e, c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut map: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        for &(e, c) in self.terms.iter().chain(other.terms.iter()) {
            *map.entry(e).or_default() += c;
        }
        Self::from_terms(map)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut map: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        for &((i1, j1), c1) in &self.terms {
            for &((i2, j2), c2) in &other.terms {
                *map.entry((i1 + i2, j1 + j2)).or_default() += c1 * c2;
            }
        }
        Self::from_terms(map)
    }
}

fn exact_powers(x: &GaussianRational, n: u32) -> Vec<GaussianRational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(GaussianRational::one());
    for k in 0..n as usize {
        let next = &out[k] * x;
        out.push(next);
    }
    out
}

pub(crate) fn powers(z: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        out.push(acc);
        acc *= z;
    }
    out
}
