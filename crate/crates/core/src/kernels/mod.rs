//! Pre-kernels, matrix kernels, correlation functions and the limiting
//! Hermite and Laguerre kernels near the origin.

mod grid;
mod hermite;
mod laguerre;
mod prekernel;
mod series;
mod unfold;

pub use grid::{GridMeta, KernelGrid, GRID_HEADER};
pub use hermite::{
    f_hermite, f_hermite_series, g_hermite, g_hermite_series, mehler_kernel, mehler_series, s_hermite_limit,
    s_hermite_series,
};
pub use laguerre::{
    f_laguerre, f_laguerre_series, g_laguerre, g_laguerre_series, laguerre_poisson, laguerre_poisson_series,
    s_laguerre_limit, s_laguerre_series,
};
pub use prekernel::{
    corr_fn, corr_fn_with, one_point, pre_kernel, reproducing_check, reproducing_value, two_point, MatrixKernel, PreKernel,
};
pub use series::SERIES_CAP;
pub use unfold::{
    hermite_cocycle, hermite_target, laguerre_cocycle, laguerre_target, macroscopic_density, unfold_hermite,
    unfold_laguerre,
};
