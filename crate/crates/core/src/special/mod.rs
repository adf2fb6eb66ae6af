//! Scalar special functions and quadrature engines.

mod bessel;
pub(crate) mod dd;
mod erf;
mod gamma;
mod planar;
mod quad;

pub use bessel::{bessel, bessel_i_reduced, bessel_j_reduced, bessel_k, bessel_k_scaled, BesselKind};
pub use erf::{erf, erf_c};
pub use gamma::{
    double_factorial, gamma, ln_double_factorial, ln_factorial, log_gamma, pochhammer, regularized_upper_gamma, rgamma,
    upper_incomplete_gamma,
};
pub(crate) use gamma::ln_gamma_pos;
pub use planar::{planar_rule, quad_planar, quad_planar_deg, truncation_radius, RuleOptions};
pub use quad::{composite_on, gauss_legendre, gauss_legendre_on, integrate_interval, DomainTag, QuadratureRule};
