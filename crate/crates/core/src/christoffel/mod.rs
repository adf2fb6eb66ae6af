//! Christoffel perturbation `w → |z − m|² w` of skew-orthogonal and
//! orthogonal polynomials, and the expansion of one family in the other.

mod fourier;
mod op;

pub use fourier::{fourier_alpha, fourier_beta};
pub use op::{perturb_op, PerturbedOp};

use crate::error::{Error, Result};
use crate::kernels::PreKernel;
use crate::poly::Poly;
use crate::skew::io::{from_doc, numbers, strings, to_doc, SystemDoc};
use crate::skew::SkewSystem;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative tolerance on the remainder of the divisions by `(z − m)`.
pub const DIVISION_TOL: f64 = 1e-9;

/// Skew-orthogonal polynomials of `|z − m|² w(z)` built from those of `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedSystem {
    pub base: SkewSystem,
    pub m: f64,
    /// `q1_0, …, q1_{2N'−1}` with `N' = base.size() − 1`.
    pub q1: Vec<Poly<f64>>,
    pub r1: Vec<f64>,
    /// Constants `d_n` in `q1_{2n+1}`.
    pub d: Vec<f64>,
}

impl PerturbedSystem {
    pub fn size(&self) -> usize {
        self.r1.len()
    }

    /// Perturbed weight `|z − m|² w(z)`.
    pub fn weight(&self, z: Complex64) -> f64 {
        (z - self.m).norm_sqr() * self.base.ensemble.weight(z)
    }

    /// `σ^{(1)}(z,u) = Σ_k (q1_{2k+1}(z)q1_{2k}(u) − q1_{2k}(z)q1_{2k+1}(u))/r1_k`.
    pub fn pre_kernel(&self, z: Complex64, u: Complex64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..self.size() {
            let (e, o) = (&self.q1[2 * k], &self.q1[2 * k + 1]);
            s += (o.eval(z) * e.eval(u) - e.eval(z) * o.eval(u)) / self.r1[k];
        }
        s
    }
}

// q(m), treated as zero when it is at rounding level of its terms
fn value_at(q: &Poly<f64>, m: f64, n: usize) -> Result<f64> {
    let v = q.eval_t(m);
    let scale = q.coeffs.iter().enumerate().map(|(k, c)| c.abs() * m.abs().powi(k as i32)).fold(0.0, f64::max);
    if v.abs() <= 1e-13 * scale {
        return Err(Error::ZeroOfSop { n });
    }
    Ok(v)
}

/// `num / (m − z)`, with the exactness of the division checked.
fn div_m_minus_z(num: &Poly<f64>, m: f64) -> Result<Poly<f64>> {
    Ok(num.div_linear_exact(m, DIVISION_TOL)?.scale(-1.0))
}

fn pin_monic(mut p: Poly<f64>, n: usize) -> Result<Poly<f64>> {
    if p.degree() != n || (p.leading() - 1.0).abs() > 1e-9 {
        return Err(Error::InexactDivision { remainder: (p.leading() - 1.0).abs(), norm: 1.0 });
    }
    p.coeffs[n] = 1.0;
    Ok(p)
}

/// Perturbed system with `N' = system.size() − 1` pairs:
///
/// `q1_{2n} = r_n σ_{n+1}(m,z) / ((m−z) q_{2n}(m))`,
/// `q1_{2n+1} = (q_{2n+2}(m)q_{2n}(z) − q_{2n}(m)q_{2n+2}(z)) / ((m−z) q_{2n}(m)) + d_n q1_{2n}`,
/// `r1_n = r_n q_{2n+2}(m)/q_{2n}(m)`.
///
/// An empty `d` means `d_n = 0`.
pub fn perturb_sop(system: &SkewSystem, m: f64, d: &[f64]) -> Result<PerturbedSystem> {
    if !m.is_finite() {
        return Err(Error::InvalidParameter(format!("m = {m}")));
    }
    if system.size() < 2 {
        return Err(Error::InvalidParameter("the base system needs at least two pairs".into()));
    }
    let n1 = system.size() - 1;
    let d = if d.is_empty() { vec![0.0; n1] } else { d.to_vec() };
    if d.len() != n1 {
        return Err(Error::InvalidParameter(format!("{} constants d_n for {n1} perturbed pairs", d.len())));
    }
    let q = &system.q;
    let qm = (0..=n1).map(|k| value_at(&q[2 * k], m, 2 * k)).collect::<Result<Vec<_>>>()?;
    let odd_m: Vec<f64> = (0..n1).map(|k| q[2 * k + 1].eval_t(m)).collect();

    let mut q1 = Vec::with_capacity(2 * n1);
    let mut r1 = Vec::with_capacity(n1);
    // r_n σ_{n+1}(m, z), accumulated over n
    let mut sigma = Poly::<f64>::zero();
    for k in 0..n1 {
        let ratio = qm[k + 1] / qm[k];
        if ratio < 0.0 {
            return Err(Error::NegativeRatio { k, ratio });
        }
        r1.push(system.r[k] * ratio);
        let term = q[2 * k].scale(odd_m[k]).axpy(-qm[k], &q[2 * k + 1]).scale(1.0 / system.r[k]);
        sigma = sigma.axpy(1.0, &term);
        let even = pin_monic(div_m_minus_z(&sigma.scale(system.r[k]), m)?.scale(1.0 / qm[k]), 2 * k)?;
        let num = q[2 * k].scale(qm[k + 1]).axpy(-qm[k], &q[2 * k + 2]);
        let odd = pin_monic(div_m_minus_z(&num, m)?.scale(1.0 / qm[k]), 2 * k + 1)?.axpy(d[k], &even);
        q1.push(even);
        q1.push(odd);
    }
    Ok(PerturbedSystem { base: system.clone(), m, q1, r1, d })
}

/// `σ^{(1)}_{N'}(z,u)` with `N' = system.size() − 1`, from the unperturbed pre-kernel:
/// `[σ(z,u)q(m) − σ(z,m)q(u) + σ(u,m)q(z)] / ((m−z)(m−u)q(m))`, `q = q_{2N'}`, `σ = σ_{N'}`.
///
/// Points at or near `m` go through the exact division of the numerator by `(z − m)`.
pub fn perturb_prekernel(system: &SkewSystem, m: f64, z: Complex64, u: Complex64) -> Result<Complex64> {
    if system.size() < 2 {
        return Err(Error::InvalidParameter("the base system needs at least two pairs".into()));
    }
    let n1 = system.size() - 1;
    let q = &system.q[2 * n1];
    let qm = value_at(q, m, 2 * n1)?;
    let pk = PreKernel::new(system, n1)?;
    let mc = Complex64::new(m, 0.0);
    if z == u {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // divide in the variable closer to m, so the remaining factor is well conditioned
    let (a, b, sign) = if (z - mc).norm() <= (u - mc).norm() { (z, u, 1.0) } else { (u, z, -1.0) };
    if b == mc {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let num = pk
        .section(b)
        .scale(Complex64::new(qm, 0.0))
        .axpy(-q.eval(b), &pk.section(mc))
        .axpy(pk.eval(b, mc), &q.to_complex());
    let quot = num.div_linear_exact(mc, DIVISION_TOL)?;
    Ok(-quot.eval(a) / ((mc - b) * qm) * sign)
}

#[derive(Serialize, Deserialize)]
struct PerturbedDoc {
    #[serde(flatten)]
    system: SystemDoc,
    m: String,
    d: Vec<String>,
    base: SystemDoc,
}

/// JSON with the perturbed polynomials in the layout of a skew system, plus `m`, `d` and the base system.
pub fn write_perturbed(p: &PerturbedSystem) -> Result<String> {
    let view = SkewSystem {
        q: p.q1.clone(),
        r: p.r1.clone(),
        ensemble: p.base.ensemble.clone(),
        odd_shift: p.d.clone(),
        lambda: None,
    };
    let doc = PerturbedDoc { system: to_doc(&view), m: crate::skew::fmt_f64(p.m), d: strings(&p.d), base: to_doc(&p.base) };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_perturbed(json: &str) -> Result<PerturbedSystem> {
    let doc: PerturbedDoc = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    let view = from_doc(doc.system)?;
    Ok(PerturbedSystem {
        base: from_doc(doc.base)?,
        m: crate::skew::parse_f64(&doc.m)?,
        q1: view.q,
        r1: view.r,
        d: numbers(&doc.d)?,
    })
}
