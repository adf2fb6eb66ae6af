//! The pre-kernel `σ_n`, the 2×2 matrix kernel and the Pfaffian correlation functions.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::skew::{pfaffian, SkewIntegrator, SkewSystem};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// `σ_n(u,v) = Σ_{k<n} (q_{2k+1}(u)q_{2k}(v) − q_{2k}(u)q_{2k+1}(v))/r_k`.
#[derive(Clone, Copy, Debug)]
pub struct PreKernel<'a> {
    pub system: &'a SkewSystem,
    pub n: usize,
}

impl<'a> PreKernel<'a> {
    pub fn new(system: &'a SkewSystem, n: usize) -> Result<Self> {
        if n > system.size() {
            return Err(Error::InvalidParameter(format!("pre-kernel order {n} exceeds the system size {}", system.size())));
        }
        Ok(PreKernel { system, n })
    }

    /// Full-size pre-kernel `σ_N`.
    pub fn full(system: &'a SkewSystem) -> Self {
        PreKernel { system, n: system.size() }
    }

    pub fn eval(&self, u: Complex64, v: Complex64) -> Complex64 {
        let qu = self.eval_q(u);
        let qv = self.eval_q(v);
        self.combine(&qu, &qv)
    }

    fn eval_q(&self, z: Complex64) -> Vec<Complex64> {
        self.system.q[..2 * self.n].iter().map(|p| p.eval(z)).collect()
    }

    // Each term is formed as a(u)b(v) − b(u)a(v) on both orders, so swapping u and v
    // negates every summand exactly.
    fn combine(&self, qu: &[Complex64], qv: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..self.n {
            let t = qu[2 * k + 1] * qv[2 * k] - qu[2 * k] * qv[2 * k + 1];
            s += t / self.system.r[k];
        }
        s
    }

    /// `σ_v(u) = σ_n(u, v)` as a polynomial in `u`.
    pub fn section(&self, v: Complex64) -> Poly<Complex64> {
        let qv = self.eval_q(v);
        let mut out = Poly::<Complex64>::zero();
        for k in 0..self.n {
            let r = self.system.r[k];
            let odd = self.system.q[2 * k + 1].to_complex();
            let even = self.system.q[2 * k].to_complex();
            out = out.axpy(qv[2 * k] / r, &odd).axpy(-qv[2 * k + 1] / r, &even);
        }
        out
    }

    /// Matrix kernel at `(z, u)` with the ensemble weight.
    pub fn matrix(&self, z: Complex64, u: Complex64) -> MatrixKernel {
        let w = &self.system.ensemble;
        MatrixKernel::new(|a, b| self.eval(a, b), z, u, (w.weight(z) * w.weight(u)).sqrt())
    }
}

/// `σ_n(u, v)` of `system`.
pub fn pre_kernel(system: &SkewSystem, n: usize, u: Complex64, v: Complex64) -> Result<Complex64> {
    Ok(PreKernel::new(system, n)?.eval(u, v))
}

/// `√(w(z)w(u)) [[σ(z,u), σ(z,ū)], [σ(z̄,u), σ(z̄,ū)]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixKernel {
    /// Pre-kernel block without the weight factor.
    pub pre: [[Complex64; 2]; 2],
    /// `√(w(z)w(u))`.
    pub scale: f64,
}

impl MatrixKernel {
    pub fn new<K: Fn(Complex64, Complex64) -> Complex64>(kernel: K, z: Complex64, u: Complex64, scale: f64) -> Self {
        let (zc, uc) = (z.conj(), u.conj());
        MatrixKernel { pre: [[kernel(z, u), kernel(z, uc)], [kernel(zc, u), kernel(zc, uc)]], scale }
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.pre.map(|row| row.map(|x| x * self.scale))
    }
}

/// `⟨f, σ_v⟩_s` on a given rule, without a degree guard.
pub fn reproducing_value(integ: &SkewIntegrator, system: &SkewSystem, n: usize, f: &Poly<f64>, v: Complex64) -> Result<Complex64> {
    let sigma = PreKernel::new(system, n)?.section(v);
    Ok(integ.product(&f.to_complex(), &sigma))
}

/// `⟨f, σ_v⟩_s`, which equals `f(v)` for `deg f ≤ 2n − 1`.
pub fn reproducing_check(system: &SkewSystem, n: usize, f: &Poly<f64>, v: Complex64) -> Result<Complex64> {
    if n == 0 || f.degree() + 1 > 2 * n {
        return Err(Error::DegreeCap { degree: f.degree(), cap: (2 * n).saturating_sub(1) });
    }
    let integ = SkewIntegrator::for_degree(&system.ensemble, f.degree() + 2 * n, 1e-12)?;
    reproducing_value(&integ, system, n, f, v)
}

/// `R_k(z_1, …, z_k) = Pf[K(z_i, z_j)] ∏ (z̄_i − z_i)` for an arbitrary pre-kernel and weight.
pub fn corr_fn_with<K, W>(kernel: K, weight: W, points: &[Complex64]) -> Result<f64>
where
    K: Fn(Complex64, Complex64) -> Complex64,
    W: Fn(Complex64) -> f64,
{
    let k = points.len();
    if k == 0 {
        return Ok(1.0);
    }
    // the weights factor out of the Pfaffian as ∏ w(z_i)
    let mut nodes = Vec::with_capacity(2 * k);
    for &z in points {
        nodes.push(z);
        nodes.push(z.conj());
    }
    let mut m = DMatrix::<Complex64>::zeros(2 * k, 2 * k);
    for i in 0..2 * k {
        for j in i + 1..2 * k {
            let v = kernel(nodes[i], nodes[j]);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    let pf = pfaffian(&m)?;
    let mut prod = Complex64::new(1.0, 0.0);
    for &z in points {
        prod *= (z.conj() - z) * weight(z);
    }
    let r = pf * prod;
    if !r.re.is_finite() {
        return Err(Error::NonFinite("correlation function".into()));
    }
    Ok(r.re)
}

/// `R_{N,k}` of a skew-orthogonal system via the `2k × 2k` Pfaffian.
pub fn corr_fn(system: &SkewSystem, points: &[Complex64]) -> Result<f64> {
    let pk = PreKernel::full(system);
    corr_fn_with(|a, b| pk.eval(a, b), |z| system.ensemble.weight(z), points)
}

/// `R_{N,1}(z) = (z̄ − z) w(z) σ_N(z, z̄)`.
pub fn one_point(system: &SkewSystem, z: Complex64) -> f64 {
    let pk = PreKernel::full(system);
    ((z.conj() - z) * pk.eval(z, z.conj()) * system.ensemble.weight(z)).re
}

/// `R_{N,2}` from the expansion of the 4×4 Pfaffian; valid for real-coefficient systems.
pub fn two_point(system: &SkewSystem, z1: Complex64, z2: Complex64) -> f64 {
    let pk = PreKernel::full(system);
    let w = &system.ensemble;
    let d1 = pk.eval(z1, z1.conj());
    let d2 = pk.eval(z2, z2.conj());
    let a = pk.eval(z1, z2).norm_sqr();
    let b = pk.eval(z1, z2.conj()).norm_sqr();
    let pre = (z1.conj() - z1) * (z2.conj() - z2) * w.weight(z1) * w.weight(z2);
    (pre * (d1 * d2 - a + b)).re
}
