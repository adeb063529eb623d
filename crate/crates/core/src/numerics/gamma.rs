//! Gamma and incomplete gamma functions.

use num_complex::Complex64;

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

/// `Γ(a)` for real `a > 0`.
pub fn gamma(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("gamma needs a > 0, got {a}")));
    }
    // shift into [1, 2) where the Lanczos core is most accurate
    let mut x = a;
    let mut scale = 1.0;
    while x < 1.0 {
        scale /= x;
        x += 1.0;
    }
    while x >= 2.0 {
        x -= 1.0;
        scale *= x;
    }
    Ok(scale * statrs::function::gamma::gamma(x))
}

pub fn ln_gamma(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("ln_gamma needs a > 0, got {a}")));
    }
    Ok(statrs::function::gamma::ln_gamma(a))
}

fn check(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() || !(x >= 0.0) || x.is_nan() {
        return Err(Error::Domain(format!("incomplete gamma needs a > 0, x ≥ 0 (a = {a}, x = {x})")));
    }
    Ok(())
}

/// `Σ_{n≥0} xⁿ / (a(a+1)…(a+n))`, so that `γ(a,x) = xᵃ e^{−x} · series`.
fn lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    for n in 1..MAX_ITER {
        term *= x / (a + n as f64);
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum
}

/// Lentz continued fraction for `Γ(a,x) eˣ x^{−a}`.
fn upper_cf(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

fn prefactor(a: f64, x: f64) -> f64 {
    (a * x.ln() - x).exp()
}

/// Lower incomplete gamma `γ(a,x)` by the power series.
pub fn lower_incomplete_gamma_series(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(prefactor(a, x) * lower_series(a, x))
}

/// Upper incomplete gamma `Γ(a,x) = ∫ₓ^∞ t^{a−1}e^{−t} dt`.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    let g = gamma(a)?;
    if x == 0.0 {
        return Ok(g);
    }
    if x < a + 1.0 {
        Ok(g - prefactor(a, x) * lower_series(a, x))
    } else {
        Ok(prefactor(a, x) * upper_cf(a, x))
    }
}

/// Regularized lower incomplete gamma `P(a,x) = γ(a,x)/Γ(a)`.
pub fn regularized_lower(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        Ok((a * x.ln() - x - ln_gamma(a)?).exp() * lower_series(a, x))
    } else {
        Ok(1.0 - (a * x.ln() - x - ln_gamma(a)?).exp() * upper_cf(a, x))
    }
}

/// `Σ_{n≥0} yⁿ / (a(a+1)…(a+n))` for complex `y`; equals `eʸ γ(a,y) y^{−a}` on
/// the principal branch. Entire in `y`.
pub fn lower_series_complex(a: f64, y: Complex64) -> Result<Complex64> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("series needs a > 0, got {a}")));
    }
    let mut term = Complex64::new(1.0 / a, 0.0);
    let mut sum = term;
    for n in 1..MAX_ITER {
        term *= y / (a + n as f64);
        sum += term;
        if term.norm() < sum.norm() * EPS && n as f64 > y.norm() {
            return Ok(sum);
        }
    }
    Err(Error::Domain(format!("series did not converge at y = {y}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn known_values() {
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(3.0).unwrap(), 2.0) < 1e-14);
        assert!(rel(gamma(2.5).unwrap(), 0.75 * PI.sqrt()) < 1e-14);
        // 49!
        assert!(rel(gamma(50.0).unwrap(), 6.082818640342675e62) < 1e-13);
        assert!(rel(gamma(0.1).unwrap(), 9.513507698668732) < 1e-14);
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.5).is_err());
    }

    #[test]
    fn recurrence() {
        for k in 1..=100 {
            let a = 0.1 * k as f64;
            assert!(rel(gamma(a + 1.0).unwrap(), a * gamma(a).unwrap()) < 1e-12, "{a}");
        }
    }

    #[test]
    fn upper_examples() {
        for x in [0.0, 0.3, 1.0, 2.5, 10.0, 40.0] {
            assert!(rel(upper_incomplete_gamma(1.0, x).unwrap(), (-x).exp()) < 1e-13, "{x}");
        }
        assert_eq!(upper_incomplete_gamma(2.5, 0.0).unwrap(), gamma(2.5).unwrap());
        assert!(upper_incomplete_gamma(0.0, 1.0).is_err());
        assert!(upper_incomplete_gamma(1.0, -1.0).is_err());
    }

    #[test]
    fn split_consistency() {
        for a in [0.5, 1.0, 1.5, 3.0, 7.25] {
            for x in [0.1, 0.9, a + 1.5, 6.0, 15.0] {
                let up = upper_incomplete_gamma(a, x).unwrap();
                let lo = lower_incomplete_gamma_series(a, x).unwrap();
                let g = gamma(a).unwrap();
                assert!(rel(up + lo, g) < 1e-11, "a={a} x={x}");
                assert!((regularized_lower(a, x).unwrap() - lo / g).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn complex_series_matches_real() {
        let a = 0.75;
        let y = 3.2;
        let s = lower_series_complex(a, Complex64::new(y, 0.0)).unwrap();
        let lo = lower_incomplete_gamma_series(a, y).unwrap();
        assert!(rel(s.re, lo * y.exp() * y.powf(-a)) < 1e-13);
        assert_eq!(s.im, 0.0);
    }
}
