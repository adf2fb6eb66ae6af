//! Kernels of the chiral weight `|z|^ν K_ν(2|z|/(1−τ²)) exp(2τ Re z/(1−τ²))`.
//!
//! Every combination `(zu)^{−ν/2} I_ν(2√(zu)·s)` is evaluated as `s^ν Ĩ_ν(s² zu)`
//! with the entire series `Ĩ_ν`, so no square-root branch enters. Polynomials use
//! `h_n = n!Γ(n+ν+1)/Γ(ν+1)`.

use super::series::{check_nu, check_order, check_tau, cumulative_double_sum, laguerre_weights, Recurrence};
use crate::error::{Error, Result};
use crate::special::{bessel_i_reduced, bessel_j_reduced, gauss_legendre, ln_gamma_pos};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

const ANGULAR_TOL: f64 = 1e-10;
const MAX_NODES: usize = 4096;

/// `∫_0^b f(α) dα` for `f = sin^ν α · (smooth)`, Gauss–Legendre from 64 nodes, doubling
/// until successive values agree to `1e-10` of `∫|f|`.
///
/// For non-integer `ν` the substitution `α = b x^q` removes most of the endpoint
/// singularity of `sin^ν α`.
pub(crate) fn angular_integral<F: Fn(f64) -> Result<Complex64>>(nu: f64, b: f64, f: F) -> Result<Complex64> {
    let q = if nu >= 0.0 && nu.fract() == 0.0 { 1.0 } else { (4.0 / (nu + 1.0)).ceil().max(2.0) };
    let rule = |n: usize| -> Result<(Complex64, f64)> {
        let (x, w) = gauss_legendre(n);
        let mut s = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for (&xi, &wi) in x.iter().zip(&w) {
            let t = 0.5 * (xi + 1.0);
            let jac = 0.5 * b * q * t.powf(q - 1.0);
            let v = f(b * t.powf(q))? * (wi * jac);
            s += v;
            abs += v.norm();
        }
        Ok((s, abs))
    };
    let mut n = 64;
    let (mut last, _) = rule(n)?;
    loop {
        n *= 2;
        let (v, abs) = rule(n)?;
        let err = (v - last).norm();
        if err <= ANGULAR_TOL * abs.max(f64::MIN_POSITIVE) {
            return Ok(v);
        }
        if n >= MAX_NODES {
            return Err(Error::Quadrature { achieved: err / abs, requested: ANGULAR_TOL });
        }
        last = v;
    }
}

/// Laguerre–Poisson kernel `Σ n!Γ(ν+1)τ^{2n}/Γ(n+ν+1) L_n(ζ/τ) L_n(η̄/τ)` in closed form.
pub fn laguerre_poisson(tau: f64, nu: f64, zeta: Complex64, eta: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    check_nu(nu)?;
    let s = 1.0 / (1.0 - tau * tau);
    let e = eta.conj();
    let pre = (ln_gamma_pos(nu + 1.0) + (nu + 1.0) * s.ln()).exp();
    Ok((-(zeta + e) * (tau * s)).exp() * bessel_i_reduced(nu, zeta * e * (s * s))? * pre)
}

/// The Laguerre–Poisson sum truncated to `terms` terms.
pub fn laguerre_poisson_series(tau: f64, nu: f64, zeta: Complex64, eta: Complex64, terms: usize) -> Result<Complex64> {
    check_tau(tau)?;
    check_nu(nu)?;
    let rec = Recurrence::laguerre(tau, nu, terms);
    let a = rec.eval(zeta);
    let b = rec.eval(eta.conj());
    Ok(a.iter().zip(&b).map(|(x, y)| x * y).sum())
}

/// Limiting pre-kernel
/// `Γ(ν+2) e^{−τ(z+u)/(1−τ²)}/((1−τ²)(zu)^{ν/2}) ∫_0^{π/2} sinh((z−u)cos α/(1−τ²)) I_ν(2√(zu) sin α/(1−τ²)) dα`.
pub fn s_laguerre_limit(tau: f64, nu: f64, z: Complex64, u: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    check_nu(nu)?;
    let s = 1.0 / (1.0 - tau * tau);
    let (d, p) = ((z - u) * s, z * u * (s * s));
    let int = angular_integral(nu, FRAC_PI_2, |a| {
        let sn = a.sin();
        Ok((d * a.cos()).sinh() * bessel_i_reduced(nu, p * (sn * sn))? * (s * sn).powf(nu))
    })?;
    let pre = ln_gamma_pos(nu + 2.0).exp() * s;
    Ok((-(z + u) * (tau * s)).exp() * int * pre)
}

fn laguerre_prefactor(nu: f64) -> f64 {
    // √π Γ(ν+2)/2^{ν+1}
    (0.5 * PI.ln() + ln_gamma_pos(nu + 2.0) - (nu + 1.0) * std::f64::consts::LN_2).exp()
}

/// Finite-`N` pre-kernel
/// `−Σ_{k<N} √πΓ(ν+2)(2k)!!τ^{2k+1}/(2^{k+ν+1}Γ(k+ν/2+3/2)) Σ_{l≤k} (2l−1)!!τ^{2l}/(2^lΓ(l+ν/2+1))
/// [L_{2k+1}(z/τ)L_{2l}(u/τ) − (z ↔ u)]`.
pub fn s_laguerre_series(tau: f64, nu: f64, z: Complex64, u: Complex64, n: usize) -> Result<Complex64> {
    check_tau(tau)?;
    check_nu(nu)?;
    check_order(n)?;
    let rec = Recurrence::laguerre(tau, nu, 2 * n);
    let (a, b) = laguerre_weights(&rec, nu, n);
    let pz = rec.eval(z);
    let pu = rec.eval(u);
    let d = cumulative_double_sum(&pz, &pu, &a, &b, n) - cumulative_double_sum(&pu, &pz, &a, &b, n);
    Ok(d * laguerre_prefactor(nu))
}

/// Limit of `Σ_k u^{2k+1}/(2^kΓ(k+ν/2+3/2)(2k+1)!!) Σ_{l≤k} v^{2l}/(2^lΓ(l+ν/2+1)(2l)!!)`:
/// `2^ν/(√π(uv)^{ν/2}) ∫_0^{π/2} [e^{(u+v)cos α} J_ν(2√(uv) sin α) − e^{−(u−v)cos α} I_ν(2√(uv) sin α)] dα`.
pub fn g_laguerre(nu: f64, u: Complex64, v: Complex64) -> Result<Complex64> {
    check_nu(nu)?;
    let p = u * v;
    let int = angular_integral(nu, FRAC_PI_2, |a| {
        let (sn, cs) = a.sin_cos();
        let x = p * (sn * sn);
        let t = ((u + v) * cs).exp() * bessel_j_reduced(nu, x)? - ((v - u) * cs).exp() * bessel_i_reduced(nu, x)?;
        Ok(t * sn.powf(nu))
    })?;
    Ok(int * (2f64.powf(nu) / PI.sqrt()))
}

/// Partial sum `g_N(u,v)` of [`g_laguerre`].
pub fn g_laguerre_series(nu: f64, u: Complex64, v: Complex64, n: usize) -> Result<Complex64> {
    check_nu(nu)?;
    check_order(n)?;
    let rec = Recurrence::laguerre(0.0, nu, 2 * n);
    let (a, b) = laguerre_weights(&rec, nu, n);
    Ok(cumulative_double_sum(&rec.eval(u), &rec.eval(v), &a, &b, n))
}

/// Limit of
/// `Σ_k (2k)!!ϑ^{2k+1}/(2^kΓ(k+ν/2+3/2)) L_{2k+1}(ζ) Σ_{l≤k} (2l−1)!!θ^{2l}/(2^lΓ(l+ν/2+1)) L_{2l}(η)`
/// as a single angular integral, obtained by inserting the Bessel-integral form of `g`
/// into the Laguerre integral representation and doing both Weber integrals.
pub fn f_laguerre(vartheta: f64, theta: f64, nu: f64, zeta: Complex64, eta: Complex64) -> Result<Complex64> {
    check_tau(vartheta)?;
    check_tau(theta)?;
    check_nu(nu)?;
    let x0 = zeta * eta * (vartheta * theta);
    let int = angular_integral(nu, FRAC_PI_2, |a| {
        let (sn, cs) = a.sin_cos();
        let b = 1.0 - theta * cs;
        let k2 = 4.0 * vartheta * theta * sn * sn;
        let p1 = 1.0 - vartheta * cs + k2 / (4.0 * b);
        let p2 = 1.0 + vartheta * cs - k2 / (4.0 * b);
        let x = x0 * (sn * sn);
        let base = zeta + eta - eta / b;
        let e1 = base + (eta * (k2 / (b * b)) - zeta * 4.0) / (4.0 * p1);
        let e2 = base - (zeta * 4.0 + eta * (k2 / (b * b))) / (4.0 * p2);
        let t1 = e1.exp() * bessel_j_reduced(nu, x / (b * p1).powi(2))? * ((sn / (b * p1)).powf(nu) / p1);
        let t2 = e2.exp() * bessel_i_reduced(nu, x / (b * p2).powi(2))? * ((sn / (b * p2)).powf(nu) / p2);
        Ok((t1 - t2) / b)
    })?;
    Ok(int * (2f64.powf(nu) / PI.sqrt()))
}

/// Partial sum `f_N(ζ,η)` of [`f_laguerre`].
pub fn f_laguerre_series(vartheta: f64, theta: f64, nu: f64, zeta: Complex64, eta: Complex64, n: usize) -> Result<Complex64> {
    check_tau(vartheta)?;
    check_tau(theta)?;
    check_nu(nu)?;
    check_order(n)?;
    let rz = Recurrence::laguerre(vartheta, nu, 2 * n);
    let re = Recurrence::laguerre(theta, nu, 2 * n);
    // the weights depend on θ only through h_n, which is parameter free
    let (a, b) = laguerre_weights(&rz, nu, n);
    Ok(-cumulative_double_sum(&rz.eval(zeta * vartheta), &re.eval(eta * theta), &a, &b, n))
}
