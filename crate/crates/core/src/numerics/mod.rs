//! Special functions and distribution kernels shared by every vote formula.
//!
//! All functions are generic over the floating-point type ([`Real`](crate::Real)),
//! pure and deterministic. Probabilities are clamped to `[0, 1]`.

pub mod discrete;
pub mod invert;
pub mod mixture;
pub mod quadrature;
pub mod special;

pub use discrete::{
    binomial_cdf, binomial_mid_cdf, binomial_pmf, ln_choose, poisson_cdf, poisson_mid_cdf, poisson_pmf,
};
pub use invert::invert_cdf;
pub use mixture::{
    negative_binomial_mixture, poisson_mixture_cdf, MixtureSeriesSpec, MixtureSum, DEFAULT_TAIL_TOLERANCE,
};
pub use special::{
    beta_prime_cdf, ln_beta, ln_gamma, normal_cdf, normal_pdf, reg_inc_beta, reg_inc_gamma,
    reg_inc_gamma_upper, student_cdf, student_pdf,
};
