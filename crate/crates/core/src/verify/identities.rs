//! Gaussian, error-function and Bessel integral identities checked by quadrature.
//!
//! Each function returns the relative difference between the integral and its closed form.

use crate::error::{Error, Result};
use crate::special::{bessel, composite_on, erf_c, gamma, gauss_legendre_on, upper_incomplete_gamma, BesselKind};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(lhs: Complex64, rhs: Complex64) -> Result<f64> {
    let d = (lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE);
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NonFinite("identity check".into()))
    }
}

/// Composite GL nodes on `[a, b]` with `panels` panels of 20 points.
fn rule(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let breaks: Vec<f64> = (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect();
    composite_on(&breaks, 20)
}

fn sum<F: FnMut(f64) -> Result<Complex64>>(r: &(Vec<f64>, Vec<f64>), mut f: F) -> Result<Complex64> {
    let mut s = c(0.0, 0.0);
    for (&t, &w) in r.0.iter().zip(&r.1) {
        s += w * f(t)?;
    }
    Ok(s)
}

/// A window around the peak of `e^{−αt² + Re(β)t}` outside which it is below `e^{−60}` of the peak.
fn gauss_window(alpha: f64, beta: Complex64) -> (f64, f64) {
    let mid = beta.re / (2.0 * alpha);
    let half = (60.0 / alpha).sqrt();
    (mid - half, mid + half)
}

/// `∫ e^{−αt²+βt} dt = √(π/α) e^{β²/(4α)}`.
pub fn gauss1(alpha: f64, beta: Complex64) -> Result<f64> {
    let (a, b) = gauss_window(alpha, beta);
    let lhs = sum(&rule(a, b, 64), |t| Ok((beta * t - alpha * t * t).exp()))?;
    rel(lhs, (PI / alpha).sqrt() * (beta * beta / (4.0 * alpha)).exp())
}

/// `∫ e^{−αt²+βt} erf(γt+δ) dt = √(π/α) e^{β²/(4α)} erf((βγ+2αδ)/(2√(α(α+γ²))))`.
pub fn gauss2(alpha: f64, beta: Complex64, gamma_: Complex64, delta: Complex64) -> Result<f64> {
    let (a, b) = gauss_window(alpha, beta);
    let lhs = sum(&rule(a, b, 64), |t| Ok((beta * t - alpha * t * t).exp() * erf_c(gamma_ * t + delta)?))?;
    let arg = (beta * gamma_ + 2.0 * alpha * delta) / (2.0 * (alpha * (alpha + gamma_ * gamma_)).sqrt());
    rel(lhs, (PI / alpha).sqrt() * (beta * beta / (4.0 * alpha)).exp() * erf_c(arg)?)
}

/// `∬ e^{−At²−Bs²+2i(tζ+sη)} erf(Ct+Ds) ds dt = π e^{−ζ²/A−η²/B}/√(AB) erf(i(BCζ+ADη)/√(AB(AB+AD²+BC²)))`.
#[allow(clippy::too_many_arguments)]
pub fn gauss3(a: f64, b: f64, cc: Complex64, d: Complex64, zeta: Complex64, eta: Complex64) -> Result<f64> {
    let i = c(0.0, 1.0);
    let (t0, t1) = gauss_window(a, 2.0 * i * zeta);
    let (s0, s1) = gauss_window(b, 2.0 * i * eta);
    let rt = rule(t0, t1, 8);
    let rs = rule(s0, s1, 8);
    let lhs = sum(&rt, |t| {
        sum(&rs, |s| Ok((-a * t * t - b * s * s + 2.0 * i * (t * zeta + s * eta)).exp() * erf_c(cc * t + d * s)?))
    })?;
    let ab = a * b;
    let arg = i * (b * cc * zeta + a * d * eta) / (ab * (ab + a * d * d + b * cc * cc)).sqrt();
    rel(lhs, PI * (-zeta * zeta / a - eta * eta / b).exp() / ab.sqrt() * erf_c(arg)?)
}

/// `∫_0^∞ e^{−q²} Γ((ν+1)/2, q²) B_ν(2q√(2u)) dq` with `B = J` (`sign = −1`) or `B = I` (`sign = +1`)
/// against `(√π/2) Γ((ν+1)/2) e^{±u} I_{ν/2}(u) − ½(u/2)^{ν/2} ∫_{−1}^0 ((1−t)(1+t))^{ν/2−1/2} e^{±u(1−t)} dt`.
pub fn bessel_gamma(nu: f64, u: f64, kind: BesselKind) -> Result<f64> {
    let sign = match kind {
        BesselKind::J => -1.0,
        BesselKind::I => 1.0,
        BesselKind::K => return Err(Error::InvalidParameter("B must be J or I".into())),
    };
    let a = (nu + 1.0) / 2.0;
    let k = (2.0 * u).sqrt();
    // q = s² smooths the q^ν behaviour at the origin
    let lhs = sum(&rule(0.0, 3.2, 64), |s| {
        let q = s * s;
        Ok(2.0 * s * (-q * q).exp() * upper_incomplete_gamma(a, q * q)? * bessel(kind, nu, c(2.0 * q * k, 0.0))?)
    })?;
    // t = −1 + r²: ((1−t)(1+t))^{ν/2−1/2} dt = 2 r^ν (2 − r²)^{ν/2−1/2} dr
    // r^ν is not smooth at 0 for fractional ν, so the panels are graded geometrically
    let breaks: Vec<f64> = std::iter::once(0.0).chain((0..=40).rev().map(|k| 0.5f64.powi(k))).collect();
    let tail = sum(&composite_on(&breaks, 20), |r| {
        let t = -1.0 + r * r;
        Ok(c(2.0 * r.powf(nu) * (2.0 - r * r).powf(nu / 2.0 - 0.5) * (sign * u * (1.0 - t)).exp(), 0.0))
    })?;
    let rhs = PI.sqrt() / 2.0 * gamma(a)? * (sign * u).exp() * bessel(BesselKind::I, nu / 2.0, c(u, 0.0))?
        - 0.5 * (u / 2.0).powf(nu / 2.0) * tail;
    rel(lhs, rhs)
}

/// `∫_0^∞ t e^{−ct²} X_ν(at) Y_ν(bt) dt` against `(1/(2c)) e^{(±a²±b²)/(4c)} Z_ν(ab/(2c))` for
/// `(X, Y, Z) = (J, J, I)`, `(J, I, J)`, `(I, I, I)` (`which = 0, 1, 2`).
pub fn bessel_product(nu: f64, a: f64, b: f64, cc: f64, which: usize) -> Result<f64> {
    use BesselKind::{I, J};
    let (x, y, z, sa, sb) = match which {
        0 => (J, J, I, -1.0, -1.0),
        1 => (J, I, J, -1.0, 1.0),
        2 => (I, I, I, 1.0, 1.0),
        _ => return Err(Error::InvalidParameter(format!("formula {which}"))),
    };
    let top = ((a + b) / (2.0 * cc) + (80.0 / cc).sqrt()).min(45.0 / a.max(b));
    // t = s² again, since t^{2ν+1} is not smooth at the origin for fractional ν
    let lhs = sum(&rule(0.0, top.sqrt(), 64), |s| {
        let t = s * s;
        Ok(2.0 * s * t * (-cc * t * t).exp() * bessel(x, nu, c(a * t, 0.0))? * bessel(y, nu, c(b * t, 0.0))?)
    })?;
    let rhs = ((sa * a * a + sb * b * b) / (4.0 * cc)).exp() / (2.0 * cc) * bessel(z, nu, c(a * b / (2.0 * cc), 0.0))?;
    rel(lhs, rhs)
}

/// `e^{u±v} ∫_0^∞ ∫_0^q e^{−q²−p²} J_ν(2p√(2u)) B_ν(2q√(2v)) dp dq` with `B = J` (upper sign) or `I`
/// against `¼ ∫_0^{π/2} e^{(u∓v)cos α} C_ν(2√(uv) sin α) dα`, `C = I` or `J` respectively.
pub fn bessel_double(nu: f64, u: f64, v: f64, kind: BesselKind) -> Result<f64> {
    let (outer, angular, sv) = match kind {
        BesselKind::J => (BesselKind::J, BesselKind::I, 1.0),
        BesselKind::I => (BesselKind::I, BesselKind::J, -1.0),
        BesselKind::K => return Err(Error::InvalidParameter("B must be J or I".into())),
    };
    let (ku, kv) = ((2.0 * u).sqrt(), (2.0 * v).sqrt());
    // p = q r on [0, 1]
    let (rn, rw) = gauss_legendre_on(40, 0.0, 1.0);
    let lhs = sum(&rule(0.0, 7.5, 32), |q| {
        let mut inner = c(0.0, 0.0);
        for (&r, &w) in rn.iter().zip(&rw) {
            let p = q * r;
            inner += w * q * (-p * p).exp() * bessel(BesselKind::J, nu, c(2.0 * p * ku, 0.0))?;
        }
        Ok((-q * q).exp() * bessel(outer, nu, c(2.0 * q * kv, 0.0))? * inner)
    })? * (u + sv * v).exp();
    let rhs = sum(&rule(0.0, FRAC_PI_2, 4), |a| {
        Ok(((u - sv * v) * a.cos()).exp() * bessel(angular, nu, c(2.0 * (u * v).sqrt() * a.sin(), 0.0))?)
    })? / 4.0;
    rel(lhs, rhs)
}
