//! Skew-orthogonal polynomials in the complex plane, the Pfaffian kernels of
//! symplectic eigenvalue ensembles built from them, and numerical checks.

pub mod christoffel;
pub mod classical_op;
pub mod ensemble;
pub mod error;
pub mod kernels;
pub mod poly;
pub mod sampler;
pub mod skew;
pub mod special;
pub mod verify;

pub use ensemble::EnsembleSpec;
pub use error::{Error, Result};
pub use num_complex::Complex64;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub struct BookIntroduction;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/ensembles.md")]
pub struct BookEnsembles;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/skew.md")]
pub struct BookSkew;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/kernels.md")]
pub struct BookKernels;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/christoffel.md")]
pub struct BookChristoffel;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/sampling.md")]
pub struct BookSampling;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/verification.md")]
pub struct BookVerification;
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub struct BookCli;
