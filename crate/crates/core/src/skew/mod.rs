//! The skew-product, its moments, and skew-orthogonal polynomial systems.

mod construct;
pub(crate) mod io;
mod pfaffian;
mod product;

pub use construct::{op_from_sop, partition_function, ln_partition_function, sop_from_gram, sop_from_recurrence, sop_radial, MomentSource};
pub use io::{fmt_f64, parse_f64, read_system, write_system, SCHEMA_VERSION};
pub use pfaffian::{pfaffian, pfaffian_elimination, pfaffian_expansion};
pub use product::{partition_function_quadrature, skew_gram, skew_moment, skew_moment_closed, skew_product, SkewGram, SkewIntegrator};

use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::poly::Poly;
use num_complex::Complex64;

/// Monic skew-orthogonal polynomials `q_0, …, q_{2N−1}` with skew-norms `r_0, …, r_{N−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewSystem {
    pub q: Vec<Poly<f64>>,
    pub r: Vec<f64>,
    pub ensemble: EnsembleSpec,
    /// Constants `d_n` added as `q_{2n+1} + d_n q_{2n}` on top of the constructor's gauge.
    pub odd_shift: Vec<f64>,
    /// `λ_k` with `p_{2k+2} = q_{2k+2} − λ_k q_{2k}`, when known.
    pub lambda: Option<Vec<f64>>,
}

impl SkewSystem {
    /// Number of pairs `N`.
    pub fn size(&self) -> usize {
        self.r.len()
    }

    /// Checks monicity, degrees and positivity of the skew-norms.
    pub fn validate(&self) -> Result<()> {
        if self.q.len() != 2 * self.r.len() {
            return Err(Error::InvalidParameter(format!("{} polynomials for {} skew-norms", self.q.len(), self.r.len())));
        }
        for (n, q) in self.q.iter().enumerate() {
            if q.degree() != n || q.leading() != 1.0 {
                return Err(Error::InvalidParameter(format!("q_{n} is not monic of degree {n}")));
            }
        }
        for (k, &r) in self.r.iter().enumerate() {
            if !(r > 0.0) {
                return Err(Error::NonPositiveSkewNorm { k, value: r });
            }
        }
        Ok(())
    }

    /// Applies `q_{2n+1} → q_{2n+1} + d_n q_{2n}`; the shifts accumulate in `odd_shift`.
    pub fn with_odd_shift(&self, d: &[f64]) -> SkewSystem {
        let mut out = self.clone();
        for (n, &dn) in d.iter().enumerate().take(self.size()) {
            out.q[2 * n + 1] = self.q[2 * n + 1].axpy(dn, &self.q[2 * n]);
            out.odd_shift[n] += dn;
        }
        out
    }

    /// Removes the `z^{2n}` coefficient from each `q_{2n+1}`.
    pub fn unique_gauge(&self) -> SkewSystem {
        let d: Vec<f64> = (0..self.size()).map(|n| -self.q[2 * n + 1].coeff(2 * n)).collect();
        self.with_odd_shift(&d)
    }

    /// The first `n` pairs.
    pub fn truncate(&self, n: usize) -> SkewSystem {
        let n = n.min(self.size());
        SkewSystem {
            q: self.q[..2 * n].to_vec(),
            r: self.r[..n].to_vec(),
            ensemble: self.ensemble.clone(),
            odd_shift: self.odd_shift[..n].to_vec(),
            lambda: self.lambda.as_ref().map(|l| l[..l.len().min(n.saturating_sub(1))].to_vec()),
        }
    }

    /// `q_0(z), …, q_{2N−1}(z)`.
    pub fn eval_all(&self, z: Complex64) -> Vec<Complex64> {
        self.q.iter().map(|p| p.eval(z)).collect()
    }
}
