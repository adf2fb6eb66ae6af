//! Monic orthogonal polynomial families with three-term recurrences.
//!
//! Every family is stored in monic form and satisfies
//! `z p_k = p_{k+1} + b_k p_k + c_k p_{k−1}`.

use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::special::{gamma, ln_gamma_pos};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest degree expanded into monomial coefficients.
pub const DEGREE_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Family {
    Hermite,
    Laguerre,
    Gegenbauer,
    ChebyshevIII,
    Monomial,
}

/// Recurrence coefficients `b_k`, `c_k` and squared norms `h_k` for `k ≤ n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpSystem {
    pub family: Family,
    pub params: Vec<f64>,
    pub b: Vec<f64>,
    /// `c[0]` is unused and set to zero.
    pub c: Vec<f64>,
    pub h: Vec<f64>,
}

impl OpSystem {
    /// Orthogonal polynomials of `ens` up to degree `n_max`.
    pub fn for_ensemble(ens: &EnsembleSpec, n_max: usize) -> Result<OpSystem> {
        ens.validate()?;
        let n = n_max + 1;
        let h = (0..n).map(|k| ens.norm(k)).collect::<Result<Vec<_>>>()?;
        let (family, params, b, c): (Family, Vec<f64>, Vec<f64>, Vec<f64>) = match *ens {
            EnsembleSpec::Ginibre
            | EnsembleSpec::MittagLeffler { .. }
            | EnsembleSpec::Truncated { .. }
            | EnsembleSpec::ProductGinibre { .. } => (Family::Monomial, vec![], vec![0.0; n], vec![0.0; n]),
            EnsembleSpec::Gegenbauer { alpha, a, b } => {
                let cc = (a * a - b * b) / 4.0;
                let c = (0..n)
                    .map(|k| {
                        let k = k as f64;
                        k * (k + 1.0 + 2.0 * alpha) / ((k + alpha) * (k + 1.0 + alpha)) * cc
                    })
                    .collect();
                (Family::Gegenbauer, vec![alpha, a, b], vec![0.0; n], zero_first(c))
            }
            EnsembleSpec::ChebyshevEllipse { a, b } => {
                let cf = (a * a - b * b).sqrt();
                let mut bs = vec![0.0; n];
                bs[0] = cf / 2.0;
                (Family::ChebyshevIII, vec![a, b], bs, zero_first(vec![cf * cf / 4.0; n]))
            }
            EnsembleSpec::Elliptic { big_a, big_b } => {
                let d = big_a * big_a - big_b * big_b;
                let c = (0..n).map(|k| k as f64 * big_b / d).collect();
                (Family::Hermite, vec![big_a, big_b], vec![0.0; n], c)
            }
            EnsembleSpec::Chiral { nu, big_a, big_b } => {
                let t = 2.0 * big_b / (big_a * big_a - big_b * big_b);
                let b = (0..n).map(|k| (2.0 * k as f64 + nu + 1.0) * t).collect();
                let c = (0..n).map(|k| k as f64 * (k as f64 + nu) * t * t).collect();
                (Family::Laguerre, vec![nu, big_a, big_b], b, c)
            }
        };
        Ok(OpSystem { family, params, b, c, h })
    }

    /// Planar Hermite polynomials of the elliptic weight with `c_n = τn`.
    pub fn hermite(tau: f64, n_max: usize) -> Result<OpSystem> {
        check_tau(tau)?;
        OpSystem::for_ensemble(&EnsembleSpec::elliptic_tau(tau), n_max)
    }

    /// Planar Laguerre polynomials of the chiral weight with `b_n = τ(2n+ν+1)`, `c_n = τ²n(n+ν)`.
    pub fn laguerre(tau: f64, nu: f64, n_max: usize) -> Result<OpSystem> {
        check_tau(tau)?;
        OpSystem::for_ensemble(&EnsembleSpec::chiral_tau(tau, nu), n_max)
    }

    pub fn max_degree(&self) -> usize {
        self.b.len() - 1
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.max_degree() {
            return Err(Error::DegreeCap { degree: n, cap: self.max_degree() });
        }
        Ok(())
    }

    /// `p_0(z), …, p_n(z)` by upward recurrence.
    pub fn eval_all(&self, n: usize, z: Complex64) -> Result<Vec<Complex64>> {
        self.check_degree(n)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(Complex64::new(1.0, 0.0));
        if n >= 1 {
            out.push(z - self.b[0]);
        }
        for k in 1..n {
            let next = (z - self.b[k]) * out[k] - self.c[k] * out[k - 1];
            out.push(next);
        }
        Ok(out)
    }

    /// Monic `p_n(z)`.
    pub fn eval(&self, n: usize, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_all(n, z)?[n])
    }

    /// Monomial coefficients of `p_0, …, p_n`.
    pub fn coeffs_all(&self, n: usize) -> Result<Vec<Poly<f64>>> {
        self.check_degree(n)?;
        if n > DEGREE_CAP {
            return Err(Error::DegreeCap { degree: n, cap: DEGREE_CAP });
        }
        let mut out: Vec<Poly<f64>> = vec![Poly::one()];
        if n >= 1 {
            out.push(Poly::new(vec![-self.b[0], 1.0]));
        }
        for k in 1..n {
            let next = out[k].shift().axpy(-self.b[k], &out[k]).axpy(-self.c[k], &out[k - 1]);
            out.push(next);
        }
        Ok(out)
    }

    /// Monomial coefficients of `p_n`.
    pub fn coeffs(&self, n: usize) -> Result<Poly<f64>> {
        Ok(self.coeffs_all(n)?.pop().expect("non-empty"))
    }

    /// Reproducing kernel `K_n(z, u) = Σ_{k<n} p_k(z) conj(p_k(u)) / h_k`.
    pub fn kernel(&self, n: usize, z: Complex64, u: Complex64) -> Result<Complex64> {
        if n == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let pz = self.eval_all(n - 1, z)?;
        let pu = self.eval_all(n - 1, u)?;
        Ok((0..n).map(|k| pz[k] * pu[k].conj() / self.h[k]).sum())
    }
}

fn zero_first(mut v: Vec<f64>) -> Vec<f64> {
    v[0] = 0.0;
    v
}

fn check_tau(tau: f64) -> Result<()> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::InvalidParameter(format!("τ = {tau} outside [0, 1)")));
    }
    Ok(())
}

/// Closed-form squared norm `h_n` of the ensemble's monic orthogonal polynomials.
pub fn op_norm(ens: &EnsembleSpec, n: usize) -> Result<f64> {
    ens.norm(n)
}

/// Physicists' Hermite `H_n(z)`.
pub fn hermite_h(n: usize, z: Complex64) -> Complex64 {
    let mut h0 = Complex64::new(1.0, 0.0);
    if n == 0 {
        return h0;
    }
    let mut h1 = 2.0 * z;
    for k in 1..n {
        let h2 = 2.0 * z * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Generalized Laguerre `L_n^{(ν)}(z)`.
pub fn laguerre_l(n: usize, nu: f64, z: Complex64) -> Complex64 {
    let mut l0 = Complex64::new(1.0, 0.0);
    if n == 0 {
        return l0;
    }
    let mut l1 = 1.0 + nu - z;
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 + nu - z) * l1 - (kf + nu) * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// Gegenbauer `C_n^{(λ)}(z)`.
pub fn gegenbauer_c(n: usize, lam: f64, z: Complex64) -> Complex64 {
    let mut c0 = Complex64::new(1.0, 0.0);
    if n == 0 {
        return c0;
    }
    let mut c1 = 2.0 * lam * z;
    for k in 1..n {
        let kf = k as f64;
        let c2 = (2.0 * (kf + lam) * z * c1 - (kf + 2.0 * lam - 1.0) * c0) / (kf + 1.0);
        c0 = c1;
        c1 = c2;
    }
    c1
}

/// Chebyshev polynomials of the third kind, `V_0 = 1`, `V_1 = 2x − 1`.
pub fn chebyshev_v(n: usize, z: Complex64) -> Complex64 {
    three_term_2x(n, Complex64::new(1.0, 0.0), 2.0 * z - 1.0, z)
}

/// Chebyshev polynomials of the second kind.
pub fn chebyshev_u(n: usize, z: Complex64) -> Complex64 {
    three_term_2x(n, Complex64::new(1.0, 0.0), 2.0 * z, z)
}

fn three_term_2x(n: usize, v0: Complex64, v1: Complex64, z: Complex64) -> Complex64 {
    if n == 0 {
        return v0;
    }
    let (mut a, mut b) = (v0, v1);
    for _ in 1..n {
        let c = 2.0 * z * b - a;
        a = b;
        b = c;
    }
    b
}

/// Monic `p_n(z)` computed from the classical normalization of `sys`.
///
/// Independent of the recurrence coefficients and used to cross-check them.
pub fn classical_monic(sys: &OpSystem, n: usize, z: Complex64) -> Result<Complex64> {
    let nf = n as f64;
    match sys.family {
        Family::Monomial => Ok(z.powu(n as u32)),
        Family::Hermite => {
            let (a, b) = (sys.params[0], sys.params[1]);
            if b == 0.0 {
                return Ok(z.powu(n as u32));
            }
            let c = ((a * a - b * b) / (2.0 * b)).sqrt();
            Ok(hermite_h(n, c * z) / (2.0 * c).powi(n as i32))
        }
        Family::Laguerre => {
            let (nu, a, b) = (sys.params[0], sys.params[1], sys.params[2]);
            if b == 0.0 {
                return Ok(z.powu(n as u32));
            }
            let c = (a * a - b * b) / (2.0 * b);
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            let fact = gamma(nf + 1.0)?;
            Ok(sign * fact / c.powi(n as i32) * laguerre_l(n, nu, c * z))
        }
        Family::Gegenbauer => {
            let (alpha, a, b) = (sys.params[0], sys.params[1], sys.params[2]);
            let c = (a * a - b * b).sqrt();
            let ln_ratio = ln_gamma_pos(nf + 1.0) + ln_gamma_pos(1.0 + alpha) - ln_gamma_pos(1.0 + alpha + nf);
            Ok(ln_ratio.exp() * (c / 2.0).powi(n as i32) * gegenbauer_c(n, 1.0 + alpha, z / c))
        }
        Family::ChebyshevIII => {
            let (a, b) = (sys.params[0], sys.params[1]);
            let c = (a * a - b * b).sqrt();
            Ok((c / 2.0).powi(n as i32) * chebyshev_v(n, z / c))
        }
    }
}
