//! Orthogonal polynomials of `|z − m|² w(z)` for complex `m`.

use super::DIVISION_TOL;
use crate::classical_op::OpSystem;
use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::poly::Poly;
use num_complex::Complex64;

/// Perturbed monic orthogonal polynomials `p1_0, …, p1_n` and their squared norms.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedOp {
    pub m: Complex64,
    pub ensemble: EnsembleSpec,
    pub base: OpSystem,
    pub p1: Vec<Poly<Complex64>>,
    pub h1: Vec<f64>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `K_{j+1}(·, u) = Σ_{k≤j} p_k(·) conj(p_k(u))/h_k` as a polynomial.
fn kernel_poly(p: &[Poly<f64>], h: &[f64], pu: &[Complex64], j: usize) -> Poly<Complex64> {
    let mut out = Poly::<Complex64>::zero();
    for k in 0..=j {
        out = out.axpy(pu[k].conj() / h[k], &p[k].to_complex());
    }
    out
}

/// `p1_j = [K_{j+1}(z,m)p_{j+1}(m) − K_{j+1}(m,m)p_{j+1}(z)] / ((m−z)K_{j+1}(m,m))` and
/// `h1_j = h_{j+1} K_{j+2}(m,m)/K_{j+1}(m,m)` for `j ≤ n`.
pub fn perturb_op(ops: &OpSystem, ens: &EnsembleSpec, m: Complex64, n: usize) -> Result<PerturbedOp> {
    if !m.re.is_finite() || !m.im.is_finite() {
        return Err(Error::InvalidParameter(format!("m = {m}")));
    }
    if ops.max_degree() < n + 1 {
        return Err(Error::DegreeCap { degree: n + 1, cap: ops.max_degree() });
    }
    let p = ops.coeffs_all(n + 1)?;
    let h = &ops.h;
    let pm: Vec<Complex64> = p.iter().map(|q| q.eval(m)).collect();
    // kmm[j] = K_j(m, m)
    let mut kmm = vec![0.0; n + 3];
    for j in 0..n + 2 {
        kmm[j + 1] = kmm[j] + pm[j].norm_sqr() / h[j];
    }
    let mut p1 = Vec::with_capacity(n + 1);
    let mut h1 = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let num = kernel_poly(&p, h, &pm, j).scale(pm[j + 1]).axpy(c(-kmm[j + 1]), &p[j + 1].to_complex());
        let mut q = num.div_linear_exact(m, DIVISION_TOL)?.scale(c(-1.0 / kmm[j + 1]));
        if q.degree() != j || (q.leading() - 1.0).norm() > 1e-9 {
            return Err(Error::InexactDivision { remainder: (q.leading() - 1.0).norm(), norm: 1.0 });
        }
        q.coeffs[j] = c(1.0);
        p1.push(q);
        h1.push(h[j + 1] * kmm[j + 2] / kmm[j + 1]);
    }
    Ok(PerturbedOp { m, ensemble: ens.clone(), base: ops.clone(), p1, h1 })
}

impl PerturbedOp {
    /// Perturbed weight `|z − m|² w(z)`.
    pub fn weight(&self, z: Complex64) -> f64 {
        (z - self.m).norm_sqr() * self.ensemble.weight(z)
    }

    /// `K1_k(z,u) = Σ_{j<k} p1_j(z) conj(p1_j(u))/h1_j`.
    pub fn kernel_sum(&self, k: usize, z: Complex64, u: Complex64) -> Result<Complex64> {
        if k > self.p1.len() {
            return Err(Error::DegreeCap { degree: k, cap: self.p1.len() });
        }
        Ok((0..k).map(|j| self.p1[j].eval(z) * self.p1[j].eval(u).conj() / self.h1[j]).sum())
    }

    /// `K1_k(z,u) = [K_{k+1}(m,m)K_{k+1}(z,u) − K_{k+1}(z,m)K_{k+1}(m,u)] / ((m−z)(m̄−ū)K_{k+1}(m,m))`
    /// from the unperturbed kernel; `K1_k(m, m)` itself is taken from the sum.
    pub fn kernel(&self, k: usize, z: Complex64, u: Complex64) -> Result<Complex64> {
        if k + 1 > self.base.max_degree() + 1 {
            return Err(Error::DegreeCap { degree: k, cap: self.base.max_degree() });
        }
        let m = self.m;
        if z == m && u == m {
            return self.kernel_sum(k, m, m);
        }
        // divide in the variable closer to m; K1 is Hermitian
        if (z - m).norm() > (u - m).norm() {
            return Ok(self.kernel(k, u, z)?.conj());
        }
        let kk = |a, b| self.base.kernel(k + 1, a, b);
        let kmm = kk(m, m)?.re;
        let p = self.base.coeffs_all(k)?;
        let pu = self.base.eval_all(k, u)?;
        let pm = self.base.eval_all(k, m)?;
        let num = kernel_poly(&p, &self.base.h, &pu, k)
            .scale(c(kmm))
            .axpy(-kk(m, u)?, &kernel_poly(&p, &self.base.h, &pm, k));
        let quot = num.div_linear_exact(m, DIVISION_TOL)?;
        Ok(-quot.eval(z) / ((m - u).conj() * kmm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ginibre_at_origin() {
        let e = EnsembleSpec::Ginibre;
        let ops = OpSystem::for_ensemble(&e, 6).unwrap();
        let p = perturb_op(&ops, &e, Complex64::new(0.0, 0.0), 4).unwrap();
        assert_eq!(p.p1[0], Poly::one());
        // |z|² e^{−|z|²}: monomials with h1_n = π(n+1)!
        assert!((p.h1[0] - PI).abs() < 1e-14);
        assert!((p.h1[3] - 24.0 * PI).abs() < 1e-12);
        assert!(p.p1[3].max_diff(&Poly::monomial(3)) < 1e-14);
    }

    #[test]
    fn kernel_forms_agree() {
        let e = EnsembleSpec::Gegenbauer { alpha: 1.0, a: 2.0, b: 1.0 };
        let ops = OpSystem::for_ensemble(&e, 8).unwrap();
        let m = Complex64::new(0.4, 0.3);
        let p = perturb_op(&ops, &e, m, 6).unwrap();
        for (z, u) in [(Complex64::new(0.2, -0.5), Complex64::new(-0.7, 0.1)), (m, Complex64::new(0.1, 0.1)), (m, m)] {
            for k in [1, 3, 5] {
                let a = p.kernel(k, z, u).unwrap();
                let b = p.kernel_sum(k, z, u).unwrap();
                assert!((a - b).norm() < 1e-10 * b.norm().max(1.0), "k={k} ({z},{u}): {a} vs {b}");
            }
        }
    }
}
