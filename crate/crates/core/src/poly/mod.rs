//! Exact bivariate polynomial and rational-function algebra over the Gaussian
//! rationals, with Wirtinger differentiation and weight checks.

mod bipoly;
mod gaussian;
mod parse;
mod rational;
mod weight;

pub use bipoly::{BiPoly, FloatPoly, Var};
pub use gaussian::{parse_rat, rat_string, ExactComplex, GaussianRational};
pub use parse::{parse_poly, MAX_DEGREE};
pub use rational::{PowerBase, PowerQuotient, RationalFn, RfOp};
pub use weight::{
    admissible_weight_check, big_q_of, q_and_big_q, wirtinger_d, SubharmonicEvidence, WeightReport,
    SUBHARMONIC_GRID, SUBHARMONIC_MARGIN,
};

