//! Special functions and quadrature engines.

mod gamma;
mod gauss;
mod quad;

pub use gamma::{
    gamma, ln_gamma, lower_incomplete_gamma_series, lower_series_complex, regularized_lower,
    upper_incomplete_gamma,
};
pub use gauss::gauss_legendre;
pub use quad::{quad_finite, quad_periodic, quad_semiinf, QuadResult, QuadSpec, QuadValue, Transform};
