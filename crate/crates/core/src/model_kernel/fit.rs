use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::local::{LocalConfig, LocalKernel};
use crate::error::{Error, Result};
use crate::poly::BiPoly;

/// Fits with a larger Vandermonde condition number are flagged.
pub const FIT_CONDITION_LIMIT: f64 = 1e8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitRow {
    pub t: f64,
    pub value: f64,
    pub fitted: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionFit {
    /// `(b̂₀, …, b̂_{n−1})`.
    pub estimates: Vec<f64>,
    pub residual: f64,
    pub condition: f64,
    pub flagged: bool,
    pub rows: Vec<FitRow>,
}

/// `count` log-spaced points on `[min, max]`.
pub fn log_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if !(min > 0.0) || !(max > min) || count < 2 {
        return Err(Error::Invalid(format!("bad t-grid ({min}, {max}, {count})")));
    }
    let (a, b) = (min.ln(), max.ln());
    Ok((0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect())
}

/// Least-squares fit of `2π B_{tp}(z,z)/t ≈ Σ_{j<n} b_j t^{−j}` over `t_grid`.
pub fn fit_expansion(p: &BiPoly, z: Complex64, t_grid: &[f64], n_terms: usize, config: &LocalConfig) -> Result<ExpansionFit> {
    if n_terms == 0 {
        return Err(Error::Invalid("n_terms must be positive".into()));
    }
    if t_grid.len() < n_terms + 2 {
        return Err(Error::Invalid(format!("t-grid needs at least {} points, got {}", n_terms + 2, t_grid.len())));
    }
    let (lo, hi) = t_grid.iter().fold((f64::INFINITY, 0f64), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    if !(lo > 0.0) || hi < 10.0 * lo * (1.0 - 1e-9) {
        return Err(Error::Invalid("t-grid must be positive and span at least one decade".into()));
    }
    let local = LocalKernel::new(p, config.clone())?;
    let values: Vec<f64> = t_grid
        .iter()
        .map(|&t| local.diag(t, z).map(|b| 2.0 * PI * b / t))
        .collect::<Result<_>>()?;

    let m = t_grid.len();
    let a = DMatrix::from_fn(m, n_terms, |i, j| t_grid[i].powi(-(j as i32)));
    let y = DVector::from_column_slice(&values);
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (smin, smax) = sv.iter().fold((f64::INFINITY, 0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let coef = svd.solve(&y, 0.0).map_err(|e| Error::Conditioning(e.to_string()))?;
    let fitted = &a * &coef;
    let rows: Vec<FitRow> = (0..m)
        .map(|i| FitRow { t: t_grid[i], value: values[i], fitted: fitted[i], residual: values[i] - fitted[i] })
        .collect();
    let residual = rows.iter().map(|r| r.residual * r.residual).sum::<f64>().sqrt();
    Ok(ExpansionFit {
        estimates: coef.iter().copied().collect(),
        residual,
        condition,
        flagged: condition > FIT_CONDITION_LIMIT,
        rows,
    })
}
