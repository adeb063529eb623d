//! Model Bergman kernels for homogeneous subharmonic weights on the plane.
//!
//! The crate covers the exact side (expansion coefficients `b₀…b₃` as rational
//! functions, the `D_a(k, λ)` divisibility calculus and its obstruction
//! certificate) and the numerical side (weighted kernels, boundary transforms,
//! the Kähler-Einstein determinant and Fefferman's Monge-Ampère operator).

pub mod error;
pub mod expansion;
pub mod model_kernel;
pub mod monge_ampere;
pub mod numerics;
pub mod cli;
pub mod divisibility;
pub mod poly;
pub mod transforms;

pub use error::{Error, Result};
