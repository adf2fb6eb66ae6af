//! Unfolded finite-`N` kernels, their `τ = 0` targets and the macroscopic densities.

use super::hermite::s_hermite_series;
use super::laguerre::{angular_integral, s_laguerre_series};
use super::series::{check_nu, check_tau};
use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::special::{bessel_i_reduced, bessel_k_scaled, erf_c, ln_gamma_pos};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

fn check_open_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidParameter(format!("τ = {tau} must lie in (0, 1)")));
    }
    Ok(())
}

/// `(1+τ)/(2π) √(w_τ(z')w_τ(u')) S_{τ,N}(z', u')` with `z' = √(1−τ²) z`.
pub fn unfold_hermite(tau: f64, z: Complex64, u: Complex64, n: usize) -> Result<Complex64> {
    check_open_tau(tau)?;
    let s = (1.0 - tau * tau).sqrt();
    let (zs, us) = (z * s, u * s);
    let ens = EnsembleSpec::elliptic_tau(tau);
    let lw = 0.5 * (ens.ln_weight(zs) + ens.ln_weight(us));
    let k = s_hermite_series(tau, zs, us, n)?;
    Ok(k * ((1.0 + tau) / (2.0 * PI) * lw.exp()))
}

/// Symplectic Ginibre kernel at the origin,
/// `e^{−(|z|²+|u|²−z²−u²)/2} erf((z−u)/√2)/(2√(2π))`.
pub fn hermite_target(z: Complex64, u: Complex64) -> Result<Complex64> {
    let ex = (-(z.norm_sqr() + u.norm_sqr()) + z * z + u * u) / 2.0;
    Ok(ex.exp() * erf_c((z - u) / SQRT_2)? / (2.0 * (2.0 * PI).sqrt()))
}

/// `g(z) = e^{τ(z̄² − z²)/4}`, unimodular with `g(z̄) = 1/g(z)`.
pub fn hermite_cocycle(tau: f64, z: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, -tau * (z * z).im / 2.0)
}

/// `(1−τ²)/(πΓ(ν+2)) √(w(z')w(u')) S_{τ,N}(z', u')` with `z' = (1−τ²) z`.
pub fn unfold_laguerre(tau: f64, nu: f64, z: Complex64, u: Complex64, n: usize) -> Result<Complex64> {
    check_open_tau(tau)?;
    check_nu(nu)?;
    let s = 1.0 - tau * tau;
    let (zs, us) = (z * s, u * s);
    let ens = EnsembleSpec::chiral_tau(tau, nu);
    let lw = 0.5 * (ens.ln_weight(zs) + ens.ln_weight(us));
    let k = s_laguerre_series(tau, nu, zs, us, n)?;
    Ok(k * (s / PI * (lw - ln_gamma_pos(nu + 2.0)).exp()))
}

/// Chiral symplectic Ginibre kernel at the origin,
/// `(1/π)|zu|^{ν/2} √(K_ν(2|z|)K_ν(2|u|)) ∫_0^{π/2} sinh((z−u)cos α) (zu)^{−ν/2} I_ν(2√(zu) sin α) dα`.
///
/// The factor `(|zu|/zu)^{ν/2}` is part of the entire-series evaluation of `I_ν`.
pub fn laguerre_target(nu: f64, z: Complex64, u: Complex64) -> Result<Complex64> {
    check_nu(nu)?;
    let (rz, ru) = (z.norm(), u.norm());
    if rz == 0.0 || ru == 0.0 {
        return Err(Error::Domain("the chiral kernel is evaluated away from the origin".into()));
    }
    let p = z * u;
    let int = angular_integral(nu, FRAC_PI_2, |a| {
        let sn = a.sin();
        Ok(((z - u) * a.cos()).sinh() * bessel_i_reduced(nu, p * (sn * sn))? * sn.powf(nu))
    })?;
    // K_ν(x) = e^{−x} K̂_ν(x)
    let kk = (bessel_k_scaled(nu, 2.0 * rz)? * bessel_k_scaled(nu, 2.0 * ru)?).sqrt() * (-(rz + ru)).exp();
    Ok(int * ((rz * ru).powf(nu / 2.0) * kk / PI))
}

/// `g(z) = e^{−iτ Im z}`.
pub fn laguerre_cocycle(tau: f64, z: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, -tau * z.im)
}

/// Large-`N` one-point density for the `τ`-parameterized elliptic and chiral weights.
///
/// Elliptic: `1/(2π(1−τ²))` for `(Re z/(1+τ))² + (Im z/(1−τ))² ≤ 2N`.
/// Chiral: `1/(4π(1−τ²)|z|)` for `((Re z − 4τN)/(1+τ²))² + (Im z/(1−τ²))² ≤ 4N²`;
/// the origin is a focus of this ellipse and the density integrates to `N`.
pub fn macroscopic_density(ens: &EnsembleSpec, n: usize, z: Complex64) -> Result<f64> {
    let nf = n as f64;
    match *ens {
        EnsembleSpec::Elliptic { big_a, big_b } => {
            let tau = elliptic_tau_of(big_a, big_b, 1.0)?;
            let h = (z.re / (1.0 + tau)).powi(2) + (z.im / (1.0 - tau)).powi(2);
            Ok(if h <= 2.0 * nf { 1.0 / (2.0 * PI * (1.0 - tau * tau)) } else { 0.0 })
        }
        EnsembleSpec::Chiral { big_a, big_b, .. } => {
            let tau = elliptic_tau_of(big_a, big_b, 2.0)?;
            let h = ((z.re - 4.0 * tau * nf) / (1.0 + tau * tau)).powi(2) + (z.im / (1.0 - tau * tau)).powi(2);
            let r = z.norm();
            Ok(if h <= 4.0 * nf * nf && r > 0.0 { 1.0 / (4.0 * PI * (1.0 - tau * tau) * r) } else { 0.0 })
        }
        _ => Err(Error::Unsupported(format!("no macroscopic density for {}", ens.id()))),
    }
}

// τ = B/A, provided A(1−τ²) equals the parameterization constant
fn elliptic_tau_of(a: f64, b: f64, scale: f64) -> Result<f64> {
    let tau = b / a;
    check_tau(tau)?;
    if (a * (1.0 - tau * tau) - scale).abs() > 1e-12 * scale {
        return Err(Error::Unsupported("the density law needs the τ-parameterized weight".into()));
    }
    Ok(tau)
}
