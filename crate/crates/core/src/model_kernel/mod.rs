//! Numerical model Bergman kernel `B_p` of the weight `e^{−2p}`: Gram-matrix
//! construction on monomials, the closed form for `p = (c/2)|z|^r`, diagonal
//! Wirtinger derivatives, the dilation law and the large-`t` coefficient fit.

mod fit;
mod local;
mod model;
mod moments;
mod monomial;

pub use fit::{fit_expansion, log_grid, ExpansionFit, FitRow, FIT_CONDITION_LIMIT};
pub use local::{LocalConfig, LocalKernel};
pub use model::{
    scaling_residual, KernelConfig, KernelModel, KernelValue, MAX_DERIV_ORDER, PROBE_EXTRA, VALIDATION_TOL,
};
pub use moments::{build_moments, MomentMatrix};
pub use monomial::{monomial_kernel, monomial_log_moment, MonomialKernel};
