//! Bessel functions `J_ν`, `I_ν` at complex argument and `K_ν` on the positive axis.

use super::dd::CDd;
use super::gamma::rgamma;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselKind {
    J,
    I,
    K,
}

const SERIES_RADIUS: f64 = 20.0;
const MAX_MODULUS: f64 = 50.0;

/// `J_ν(z)`, `I_ν(z)` (principal branch of `(z/2)^ν`) or `K_ν(x)` for real `x > 0`.
pub fn bessel(kind: BesselKind, nu: f64, z: Complex64) -> Result<Complex64> {
    if !nu.is_finite() || nu <= -1.0 {
        return Err(Error::Domain(format!("bessel order ν = {nu} must exceed −1")));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("bessel argument".into()));
    }
    match kind {
        BesselKind::K => {
            if z.im != 0.0 || z.re <= 0.0 {
                return Err(Error::Domain(format!("K_ν needs a positive real argument, got {z}")));
            }
            Ok(Complex64::new(bessel_k(nu, z.re)?, 0.0))
        }
        BesselKind::J => bessel_j(nu, z),
        BesselKind::I => bessel_i(nu, z),
    }
}

fn check_modulus(z: Complex64) -> Result<()> {
    if z.norm() > MAX_MODULUS {
        return Err(Error::Domain(format!("|z| = {} exceeds {MAX_MODULUS}", z.norm())));
    }
    Ok(())
}

fn bessel_j(nu: f64, z: Complex64) -> Result<Complex64> {
    check_modulus(z)?;
    if z.norm() <= SERIES_RADIUS {
        let x = z * z / 4.0;
        return Ok(half_power(z, nu) * reduced_series(nu, -x));
    }
    if z.re >= 0.0 {
        return Ok(j_hankel(nu, z));
    }
    // J_ν(z e^{±iπ}) = e^{±iπν} J_ν(z)
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    Ok(Complex64::from_polar(1.0, sign * PI * nu) * j_hankel(nu, -z))
}

fn bessel_i(nu: f64, z: Complex64) -> Result<Complex64> {
    check_modulus(z)?;
    if z.norm() <= SERIES_RADIUS {
        let x = z * z / 4.0;
        return Ok(half_power(z, nu) * reduced_series(nu, x));
    }
    let i = Complex64::i();
    if z.arg() <= PI / 2.0 {
        Ok(Complex64::from_polar(1.0, -PI * nu / 2.0) * bessel_j(nu, i * z)?)
    } else {
        Ok(Complex64::from_polar(1.0, PI * nu / 2.0) * bessel_j(nu, -i * z)?)
    }
}

/// `(z/2)^ν` on the principal branch; `0^0 = 1`.
fn half_power(z: Complex64, nu: f64) -> Complex64 {
    if nu == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    if z == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    (z / 2.0).powf(nu)
}

/// `Σ_m x^m / (m! Γ(m+ν+1))` in double-double arithmetic.
fn reduced_series(nu: f64, x: Complex64) -> Complex64 {
    let xx = CDd::from_c64(x);
    // start at the first nonvanishing term (ν+1 may be a non-positive integer
    // only for ν ≤ −1, which is excluded)
    let mut t = CDd::from_c64(Complex64::new(rgamma(nu + 1.0), 0.0));
    let mut sum = t;
    let mut peak = t.norm_f64();
    let ax = x.norm();
    for m in 1..5000usize {
        let mf = m as f64;
        t = (t * xx).div_f64(mf * (mf + nu));
        sum = sum + t;
        let tn = t.norm_f64();
        peak = peak.max(tn);
        if mf * mf > ax && tn <= 1e-33 * peak.max(sum.norm_f64()) {
            break;
        }
    }
    sum.to_c64()
}

/// Reduced modified Bessel function `Ĩ_ν(x) = Σ x^m/(m!Γ(m+ν+1))`, entire in `x`.
///
/// For `x = w²/4` this equals `(w/2)^{−ν} I_ν(w)` on any branch.
pub fn bessel_i_reduced(nu: f64, x: Complex64) -> Result<Complex64> {
    if nu <= -1.0 {
        return Err(Error::Domain(format!("bessel order ν = {nu} must exceed −1")));
    }
    if x.norm() > MAX_MODULUS * MAX_MODULUS / 4.0 {
        return Err(Error::Domain(format!("reduced Bessel argument |x| = {} too large", x.norm())));
    }
    Ok(reduced_series(nu, x))
}

/// Reduced Bessel function `J̃_ν(x) = Σ (−x)^m/(m!Γ(m+ν+1))`.
pub fn bessel_j_reduced(nu: f64, x: Complex64) -> Result<Complex64> {
    bessel_i_reduced(nu, -x)
}

/// Hankel asymptotic expansion, `Re z ≥ 0`, `|z| > 20`.
fn j_hankel(nu: f64, z: Complex64) -> Complex64 {
    let mu = 4.0 * nu * nu;
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut a = Complex64::new(1.0, 0.0); // a_k(ν)/z^k
    let inv8z = (8.0 * z).inv();
    let mut prev = f64::INFINITY;
    for k in 1..200usize {
        let odd = (2 * k - 1) as f64;
        a = a * (mu - odd * odd) * inv8z / k as f64;
        let an = a.norm();
        if an > prev {
            break;
        }
        prev = an;
        // P takes even k with alternating signs, Q takes odd k
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if an < 1e-17 {
            break;
        }
    }
    let omega = z - (nu * 0.5 + 0.25) * PI;
    (2.0 / (PI * z)).sqrt() * (p * omega.cos() - q * omega.sin())
}

/// `K_ν(x)` for real `x > 0` from `∫₀^∞ e^{−x cosh t} cosh(νt) dt`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let s = bessel_k_scaled(nu, x)?;
    Ok(s * (-x).exp())
}

/// `eˣ K_ν(x)` for real `x > 0`.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("K_ν needs a positive real argument, got {x}")));
    }
    // The integrand is analytic in the strip |Im t| < π/2, so the trapezoid
    // rule with step h has error of order exp(−π²/h).
    let h = 0.1;
    let f = |t: f64| (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
    let mut sum = 0.5 * f(0.0);
    let mut k = 1usize;
    loop {
        let v = f(k as f64 * h);
        sum += v;
        if v < 1e-18 * sum || k > 20_000 {
            break;
        }
        k += 1;
    }
    Ok(sum * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel(BesselKind::I, 0.0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(bessel(BesselKind::J, 0.0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!(bessel(BesselKind::K, 0.0, c(0.0, 0.0)).is_err());
        assert!(bessel(BesselKind::K, 0.0, c(1.0, 0.1)).is_err());
        assert!(bessel(BesselKind::J, -1.0, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn half_order_closed_forms() {
        // 40-term power series oracle for I_{1/2}(1), plus the closed form sinh(x)·√(2/(πx)).
        let mut s = 0.0;
        for m in 0..40 {
            s += 0.25f64.powi(m) / (super::super::gamma::gamma(m as f64 + 1.0).unwrap()
                * super::super::gamma::gamma(m as f64 + 1.5).unwrap());
        }
        let oracle = 0.5f64.sqrt() * s;
        let v = bessel(BesselKind::I, 0.5, c(1.0, 0.0)).unwrap();
        assert!((v.re - oracle).abs() < 1e-14);
        assert!((v.re - 0.937_674_888_245_488).abs() < 1e-13);
        for &x in &[0.3, 5.0, 19.0, 25.0, 44.0] {
            let j = bessel(BesselKind::J, 0.5, c(x, 0.0)).unwrap();
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((j.re - exact).abs() < 1e-12, "x={x}: {} vs {exact}", j.re);
        }
    }

    #[test]
    fn series_and_asymptotic_agree_near_switchover() {
        for &nu in &[0.0, 0.5, 1.0, 2.3] {
            for k in 0..8 {
                let phi = -PI * 0.45 + PI * 0.9 * k as f64 / 7.0;
                let z = Complex64::from_polar(20.0, phi);
                let s = half_power(z, nu) * reduced_series(nu, -z * z / 4.0);
                let a = j_hankel(nu, z);
                assert!((s - a).norm() <= 1e-10 * s.norm().max(1e-3), "nu={nu} z={z}: {s} vs {a}");
            }
        }
    }

    #[test]
    fn k_closed_form() {
        // K_{1/2}(x) = √(π/(2x)) e^{−x}
        for &x in &[1e-3, 0.1, 1.0, 4.0, 30.0] {
            let v = bessel_k(0.5, x).unwrap();
            let exact = (PI / (2.0 * x)).sqrt() * (-x).exp();
            assert!((v - exact).abs() <= 1e-13 * exact, "x={x}");
        }
        // K_0(1) reference value
        assert!((bessel_k(0.0, 1.0).unwrap() - 0.421_024_438_240_708_3).abs() < 1e-15);
    }

    #[test]
    fn i_from_j_on_imaginary_axis() {
        // I_ν(x) = i^{−ν} J_ν(ix) with x > 20 routes through the asymptotic branch
        let x = 30.0;
        let i = bessel(BesselKind::I, 1.0, c(x, 0.0)).unwrap();
        let s = half_power(c(x, 0.0), 1.0) * reduced_series(1.0, c(x * x / 4.0, 0.0));
        assert!((i - s).norm() <= 1e-12 * s.norm());
    }
}
