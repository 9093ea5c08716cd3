//! Log-domain quadrature and special functions.

mod quadrature;
mod special;

pub use quadrature::{
    log_integrate_finite, log_integrate_semiinfinite, LogIntegralResult, QuadratureConfig,
    QuadratureStatus,
};
pub use special::{ln_add_exp, log_gamma, log_lower_incomplete_gamma, log_sum_exp};
