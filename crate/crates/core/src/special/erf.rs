//! Error function at complex argument.

use super::dd::CDd;
use crate::error::{Error, Result};
use num_complex::Complex64;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Radius below which the Taylor series is used everywhere.
pub(crate) const TAYLOR_RADIUS: f64 = 4.0;
const MAX_MODULUS: f64 = 30.0;

/// Entire error function `erf(z) = (2/√π) ∫₀^z e^{−t²} dt`.
///
/// The value is computed for the representative of `z` in the closed first
/// quadrant and mapped back with `erf(−z) = −erf(z)` and `erf(z̄) = conj erf(z)`,
/// so both symmetries hold bit for bit.
pub fn erf_c(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("erf_c argument".into()));
    }
    if z.norm() >= MAX_MODULUS {
        return Err(Error::Overflow(format!("erf_c: |z| = {} ≥ {MAX_MODULUS}", z.norm())));
    }
    let w = Complex64::new(z.re.abs(), z.im.abs());
    let v = if w.norm() <= TAYLOR_RADIUS || w.re < 2.0 {
        erf_taylor(w)
    } else {
        erf_continued_fraction(w)
    };
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Overflow(format!("erf_c({z})")));
    }
    let v = if z.im.is_sign_negative() { v.conj() } else { v };
    let v = if z.re.is_sign_negative() { Complex64::new(-v.re, v.im) } else { v };
    Ok(v)
}

/// Real error function.
pub fn erf(x: f64) -> f64 {
    erf_c(Complex64::new(x, 0.0)).map(|v| v.re).unwrap_or(x.signum())
}

/// `Σ (−1)ⁿ z^{2n+1} / (n!(2n+1))` summed in double-double arithmetic.
pub(crate) fn erf_taylor(z: Complex64) -> Complex64 {
    let zz = CDd::from_c64(z);
    let mz2 = -(zz * zz);
    let mut t = zz; // (−z²)ⁿ z / n!
    let mut sum = zz;
    let mut peak = z.norm();
    for n in 1..4000usize {
        t = (t * mz2).div_f64(n as f64);
        let term = t.div_f64((2 * n + 1) as f64);
        sum = sum + term;
        let tn = term.norm_f64();
        peak = peak.max(tn);
        if n as f64 > z.norm_sqr() && tn < 1e-34 * peak.max(sum.norm_f64()) {
            break;
        }
    }
    sum.mul_f64(FRAC_2_SQRT_PI).to_c64()
}

/// `1 − erfc(z)` with the Laplace continued fraction for `erfc`, valid for `Re z > 0`.
pub(crate) fn erf_continued_fraction(z: Complex64) -> Complex64 {
    // erfc(z) = e^{−z²}/√π · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + …))))
    let tiny = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = Complex64::new(0.0, 0.0);
    for n in 1..500 {
        let a = n as f64 * 0.5;
        d = z + a * d;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = z + a / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    let erfc = (-z * z).exp() / (f * std::f64::consts::PI.sqrt());
    1.0 - erfc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn known_values() {
        assert_eq!(erf_c(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        // 50-term Taylor oracle, computed in plain f64 at a point where it converges quickly
        let mut s = 0.0;
        let mut t = 1.0;
        for n in 0..50 {
            if n > 0 {
                t *= -1.0 / n as f64;
            }
            s += t / (2 * n + 1) as f64;
        }
        let oracle = FRAC_2_SQRT_PI * s;
        let v = erf_c(c(1.0, 0.0)).unwrap();
        assert!((v.re - oracle).abs() < 1e-15);
        assert!((v.re - 0.842_700_792_949_714_9).abs() < 1e-15);
        let v = erf_c(c(0.0, 1.0)).unwrap();
        assert_eq!(v.re, 0.0);
        assert!((v.im - 1.650_425_758_797_542_8).abs() < 1e-14);
    }

    #[test]
    fn branches_agree_at_switchover() {
        for k in 0..=30 {
            let phi = (k as f64 / 30.0) * 1.0471975511965976; // up to 60°, Re ≥ 2
            let z = Complex64::from_polar(TAYLOR_RADIUS, phi);
            let a = erf_taylor(z);
            let b = erf_continued_fraction(z);
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "phi={phi}: {a} vs {b}");
        }
    }

    #[test]
    fn large_real_part() {
        let v = erf_c(c(6.0, 0.5)).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
        assert!(erf_c(c(0.0, 29.0)).is_err());
        assert!(erf_c(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn derivative_matches_gaussian() {
        // d/dz erf = 2/√π e^{−z²}
        let z = c(1.3, 2.1);
        let h = 1e-5;
        let d = (erf_c(z + h).unwrap() - erf_c(z - h).unwrap()) / (2.0 * h);
        let e = FRAC_2_SQRT_PI * (-z * z).exp();
        assert!((d - e).norm() < 1e-8 * e.norm());
    }
}
