//! Kernels of the elliptic weight `exp(−(|z|² − τ Re z²)/(1 − τ²))`.
//!
//! Polynomials are normalized with `h_n = n!`, i.e. the area measure divided by
//! `π√(1−τ²)`; the pre-kernels use the measure normalization giving `r_0 = 1`.

use super::series::{check_order, check_tau, cumulative_double_sum, hermite_weights, Recurrence};
use crate::error::{Error, Result};
use crate::special::erf_c;
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

fn check_phi(phi: f64) -> Result<()> {
    if !(0.0..1.0).contains(&phi) {
        return Err(Error::InvalidParameter(format!("parameter {phi} must lie in [0, 1)")));
    }
    Ok(())
}

/// Mehler kernel `Σ (τ/2)^n H_n(ζ/√2τ) H_n(η̄/√2τ)/n!` in closed form.
pub fn mehler_kernel(tau: f64, zeta: Complex64, eta: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    let s = 1.0 - tau * tau;
    let e = eta.conj();
    Ok((((zeta * e) - (zeta * zeta + e * e) * (tau / 2.0)) / s).exp() / s.sqrt())
}

/// The Mehler sum truncated to `terms` terms.
pub fn mehler_series(tau: f64, zeta: Complex64, eta: Complex64, terms: usize) -> Result<Complex64> {
    check_tau(tau)?;
    let rec = Recurrence::hermite(tau, terms);
    let a = rec.eval(zeta);
    let b = rec.eval(eta.conj());
    Ok(a.iter().zip(&b).map(|(x, y)| x * y).sum())
}

/// Limiting pre-kernel `S_τ(z,u) = √π/(√2(1+τ)) e^{(z²+u²)/(2(1+τ))} erf((z−u)/√(2(1−τ²)))`.
pub fn s_hermite_limit(tau: f64, z: Complex64, u: Complex64) -> Result<Complex64> {
    check_tau(tau)?;
    let pre = PI.sqrt() / (SQRT_2 * (1.0 + tau));
    let e = erf_c((z - u) / (2.0 * (1.0 - tau * tau)).sqrt())?;
    Ok(((z * z + u * u) / (2.0 * (1.0 + tau))).exp() * e * pre)
}

/// Finite-`N` pre-kernel
/// `Σ_{k<N} (τ/2)^{k+½}/(2k+1)!! Σ_{l≤k} (τ/2)^l/(2l)!! [H_{2k+1}H_{2l} − (z ↔ u)]`,
/// arguments of the `H_n` scaled by `1/√(2τ)`.
pub fn s_hermite_series(tau: f64, z: Complex64, u: Complex64, n: usize) -> Result<Complex64> {
    check_tau(tau)?;
    check_order(n)?;
    let rec = Recurrence::hermite(tau, 2 * n);
    let (a, b) = hermite_weights(n);
    let pz = rec.eval(z);
    let pu = rec.eval(u);
    Ok(cumulative_double_sum(&pz, &pu, &a, &b, n) - cumulative_double_sum(&pu, &pz, &a, &b, n))
}

/// `g(u,v) = ½√(π/2) e^{(u²+v²)/2} [erf((u−v)/√2) + erf((u+v)/√2)]`,
/// the limit of `Σ_k u^{2k+1}/(2k+1)!! Σ_{l≤k} v^{2l}/(2l)!!`.
pub fn g_hermite(u: Complex64, v: Complex64) -> Result<Complex64> {
    let e = erf_c((u - v) / SQRT_2)? + erf_c((u + v) / SQRT_2)?;
    Ok(((u * u + v * v) / 2.0).exp() * e * (0.5 * (PI / 2.0).sqrt()))
}

/// Partial sum `g_N(u,v)`.
pub fn g_hermite_series(u: Complex64, v: Complex64, n: usize) -> Result<Complex64> {
    check_order(n)?;
    let rec = Recurrence::hermite(0.0, 2 * n);
    let (a, b) = hermite_weights(n);
    Ok(cumulative_double_sum(&rec.eval(u), &rec.eval(v), &a, &b, n))
}

fn a_coef(p: f64, q: f64) -> f64 {
    (p * (1.0 + q) / ((1.0 + p) * (1.0 - p * q))).sqrt()
}

/// Limit of `Σ_k (φ/2)^{k+½}/(2k+1)!! H_{2k+1}(ζ) Σ_{l≤k} (ϕ/2)^l/(2l)!! H_{2l}(η)`.
pub fn f_hermite(phi: f64, varphi: f64, zeta: Complex64, eta: Complex64) -> Result<Complex64> {
    check_phi(phi)?;
    check_phi(varphi)?;
    let pre = PI.sqrt() / (2.0 * (2.0 * (1.0 + phi) * (1.0 + varphi)).sqrt());
    let ex = (zeta * zeta * (phi / (1.0 + phi)) + eta * eta * (varphi / (1.0 + varphi))).exp();
    let (a, b) = (a_coef(phi, varphi), a_coef(varphi, phi));
    let e = erf_c(zeta * a - eta * b)? + erf_c(zeta * a + eta * b)?;
    Ok(ex * e * pre)
}

/// Partial sum `f_N(ζ,η)` of [`f_hermite`].
pub fn f_hermite_series(phi: f64, varphi: f64, zeta: Complex64, eta: Complex64, n: usize) -> Result<Complex64> {
    check_phi(phi)?;
    check_phi(varphi)?;
    check_order(n)?;
    let (a, b) = hermite_weights(n);
    let pz = Recurrence::hermite(phi, 2 * n).eval(zeta * (2.0 * phi).sqrt());
    let pe = Recurrence::hermite(varphi, 2 * n).eval(eta * (2.0 * varphi).sqrt());
    Ok(cumulative_double_sum(&pz, &pe, &a, &b, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical_op::hermite_h;
    use crate::special::double_factorial;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // direct evaluation of the double sum with classical Hermite polynomials
    fn naive_series(tau: f64, z: Complex64, u: Complex64, n: usize) -> Complex64 {
        let s = (2.0 * tau).sqrt();
        let mut out = c(0.0, 0.0);
        for k in 0..n {
            for l in 0..=k {
                let w = (tau / 2.0).powf(k as f64 + 0.5) / double_factorial(2 * k as i64 + 1).unwrap() * (tau / 2.0).powi(l as i32)
                    / double_factorial(2 * l as i64).unwrap();
                let t = hermite_h(2 * k + 1, z / s) * hermite_h(2 * l, u / s) - hermite_h(2 * l, z / s) * hermite_h(2 * k + 1, u / s);
                out += t * w;
            }
        }
        out
    }

    #[test]
    fn mehler_at_origin() {
        for tau in [0.0, 0.3, 0.8] {
            let k = mehler_kernel(tau, c(0.0, 0.0), c(0.0, 0.0)).unwrap();
            assert!((k.re - 1.0 / (1.0f64 - tau * tau).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn mehler_is_hermitian() {
        let (z, e) = (c(0.4, 1.1), c(-0.9, 0.3));
        let a = mehler_kernel(0.6, z, e).unwrap();
        let b = mehler_kernel(0.6, e, z).unwrap();
        assert!((a - b.conj()).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn mehler_series_converges() {
        let (z, e) = (c(1.5, -0.5), c(0.7, 2.0));
        let k = mehler_kernel(0.5, z, e).unwrap();
        let s = mehler_series(0.5, z, e, 200).unwrap();
        assert!((k - s).norm() < 1e-11 * k.norm());
    }

    #[test]
    fn tau_out_of_range() {
        assert!(mehler_kernel(1.0, c(0.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(s_hermite_limit(-0.1, c(0.0, 0.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn recurrence_series_matches_naive_sum() {
        let (z, u) = (c(0.6, 0.4), c(-0.3, 0.8));
        for tau in [0.25, 0.7] {
            let a = s_hermite_series(tau, z, u, 8).unwrap();
            let b = naive_series(tau, z, u, 8);
            assert!((a - b).norm() < 1e-13 * b.norm().max(1.0), "τ = {tau}: {a} vs {b}");
        }
    }

    #[test]
    fn limit_at_zero_tau() {
        // S_0(1,0) = √(π/2) e^{1/2} erf(1/√2)
        let v = s_hermite_limit(0.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((v.re - 1.410686134642447).abs() < 1e-13, "{v}");
        let d = s_hermite_series(0.0, c(1.0, 0.0), c(0.0, 0.0), 60).unwrap();
        assert!((d - v).norm() < 1e-13);
    }

    #[test]
    fn limit_is_antisymmetric() {
        let (z, u) = (c(0.3, 1.2), c(-0.5, 0.1));
        let a = s_hermite_limit(0.4, z, u).unwrap();
        let b = s_hermite_limit(0.4, u, z).unwrap();
        assert!((a + b).norm() < 1e-15 * a.norm());
        assert_eq!(s_hermite_limit(0.4, z, z).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn g_vanishes_at_origin_and_matches_series() {
        assert_eq!(g_hermite(c(0.0, 0.0), c(0.7, -1.2)).unwrap(), c(0.0, 0.0));
        let (u, v) = (c(0.8, 0.3), c(-0.4, 0.6));
        let g = g_hermite(u, v).unwrap();
        let s = g_hermite_series(u, v, 60).unwrap();
        assert!((g - s).norm() < 1e-13 * g.norm());
        let anti = g_hermite(c(1.0, 0.0), c(0.0, 0.0)).unwrap() - g_hermite(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((anti.re - 1.410686134642447).abs() < 1e-13);
    }

    #[test]
    fn g_solves_its_ode() {
        let h = 1e-4;
        for (u, v) in [(0.5, 0.3), (1.2, -0.7), (-0.4, 1.5)] {
            let (u, v) = (c(u, 0.1), c(v, -0.2));
            let d = (g_hermite(u + h, v).unwrap() - g_hermite(u - h, v).unwrap()) / (2.0 * h);
            let res = d - u * g_hermite(u, v).unwrap() - (u * v).cosh();
            assert!(res.norm() < 1e-7, "{res}");
        }
    }

    #[test]
    fn f_closed_form_matches_series() {
        for (phi, vphi) in [(0.3, 0.5), (0.6, 0.1), (0.45, 0.45)] {
            let (z, e) = (c(0.6, -0.3), c(0.8, 0.5));
            let a = f_hermite(phi, vphi, z, e).unwrap();
            let b = f_hermite_series(phi, vphi, z, e, 120).unwrap();
            assert!((a - b).norm() < 1e-8 * a.norm().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn f_degenerate_parameters() {
        let (z, e) = (c(0.6, -0.3), c(0.8, 0.5));
        assert_eq!(f_hermite_series(0.0, 0.0, z, e, 30).unwrap(), c(0.0, 0.0));
        assert!(f_hermite(0.0, 0.0, z, e).unwrap().norm() < 1e-300);
        // φ > 0, ϕ = 0 leaves only the l = 0 terms
        let a = f_hermite(0.4, 0.0, z, e).unwrap();
        let b = f_hermite_series(0.4, 0.0, z, e, 80).unwrap();
        assert!((a - b).norm() < 1e-10 * a.norm());
    }

    #[test]
    fn two_f_terms_build_the_limit() {
        let tau: f64 = 0.35;
        let s = (2.0 * tau).sqrt();
        let (z, u) = (c(0.9, 0.2), c(-0.1, -0.6));
        let lhs = f_hermite(tau, tau, z / s, u / s).unwrap() - f_hermite(tau, tau, u / s, z / s).unwrap();
        let rhs = s_hermite_limit(tau, z, u).unwrap();
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
    }
}
