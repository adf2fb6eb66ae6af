//! Weights, supports and closed-form orthogonal-polynomial data of the supported ensembles.

use crate::error::{Error, Result};
use crate::special::{bessel_k, gamma, ln_gamma_pos};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One of the supported weighted measures on the plane or on an ellipse.
///
/// Planar weights are densities with respect to Lebesgue measure `d²z`; the
/// contour weight is a density with respect to arc length `|dz|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum EnsembleSpec {
    /// `e^{−|z|²}` on `ℂ`.
    Ginibre,
    /// `|z|^{2c} e^{−|z|^{2λ}}` on `ℂ`.
    MittagLeffler { lambda: f64, c: f64 },
    /// `(1+α)(1−|z|²)^α` on the unit disc.
    Truncated { alpha: f64 },
    /// `(1+α)(1 − (x/a)² − (y/b)²)^α` inside the ellipse with semi-axes `a > b`.
    Gegenbauer { alpha: f64, a: f64, b: f64 },
    /// `√|(c+z)/(c−z)|` on the ellipse with semi-axes `a > b`, `c = √(a²−b²)`.
    ChebyshevEllipse { a: f64, b: f64 },
    /// `e^{−A|z|² + B Re z²}` on `ℂ`.
    Elliptic {
        #[serde(rename = "A")]
        big_a: f64,
        #[serde(rename = "B")]
        big_b: f64,
    },
    /// `|z|^ν K_ν(A|z|) e^{B Re z}` on `ℂ`.
    Chiral {
        nu: f64,
        #[serde(rename = "A")]
        big_a: f64,
        #[serde(rename = "B")]
        big_b: f64,
    },
    /// Product of `m ∈ {1, 2}` Ginibre matrices with a charge `c` at the origin.
    ProductGinibre { m: u32, c: f64 },
}

/// Geometry of the support.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Support {
    Plane,
    /// Interior of the ellipse `(x/a)² + (y/b)² < 1`.
    Ellipse { a: f64, b: f64 },
    /// The ellipse curve itself.
    Contour { a: f64, b: f64 },
}

impl EnsembleSpec {
    /// Elliptic Ginibre weight with `A = 1/(1−τ²)`, `B = τ/(1−τ²)`.
    pub fn elliptic_tau(tau: f64) -> Self {
        let s = 1.0 - tau * tau;
        EnsembleSpec::Elliptic { big_a: 1.0 / s, big_b: tau / s }
    }

    /// Chiral elliptic weight with `A = 2/(1−τ²)`, `B = 2τ/(1−τ²)`.
    pub fn chiral_tau(tau: f64, nu: f64) -> Self {
        let s = 1.0 - tau * tau;
        EnsembleSpec::Chiral { nu, big_a: 2.0 / s, big_b: 2.0 * tau / s }
    }

    pub fn id(&self) -> &'static str {
        match self {
            EnsembleSpec::Ginibre => "ginibre",
            EnsembleSpec::MittagLeffler { .. } => "mittag-leffler",
            EnsembleSpec::Truncated { .. } => "truncated",
            EnsembleSpec::Gegenbauer { .. } => "gegenbauer",
            EnsembleSpec::ChebyshevEllipse { .. } => "chebyshev-ellipse",
            EnsembleSpec::Elliptic { .. } => "elliptic",
            EnsembleSpec::Chiral { .. } => "chiral",
            EnsembleSpec::ProductGinibre { .. } => "product-ginibre",
        }
    }

    /// Check parameter ranges.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match *self {
            EnsembleSpec::Ginibre => Ok(()),
            EnsembleSpec::MittagLeffler { lambda, c } => {
                if !finite(&[lambda, c]) || lambda <= 0.0 || c <= -1.0 {
                    return bad(format!("mittag-leffler needs λ > 0 and c > −1 (λ = {lambda}, c = {c})"));
                }
                Ok(())
            }
            EnsembleSpec::Truncated { alpha } => {
                if !alpha.is_finite() || alpha <= -1.0 {
                    return bad(format!("truncated needs α > −1 (α = {alpha})"));
                }
                Ok(())
            }
            EnsembleSpec::Gegenbauer { alpha, a, b } => {
                if !finite(&[alpha, a, b]) || alpha <= -1.0 || !(a > b && b > 0.0) {
                    return bad(format!("gegenbauer needs α > −1 and a > b > 0 (α = {alpha}, a = {a}, b = {b})"));
                }
                Ok(())
            }
            EnsembleSpec::ChebyshevEllipse { a, b } => {
                if !finite(&[a, b]) || !(a > b && b > 0.0) {
                    return bad(format!("chebyshev-ellipse needs a > b > 0 (a = {a}, b = {b})"));
                }
                Ok(())
            }
            EnsembleSpec::Elliptic { big_a, big_b } => {
                if !finite(&[big_a, big_b]) || !(big_a > big_b && big_b >= 0.0) {
                    return bad(format!("elliptic needs A > B ≥ 0 (A = {big_a}, B = {big_b})"));
                }
                Ok(())
            }
            EnsembleSpec::Chiral { nu, big_a, big_b } => {
                if !finite(&[nu, big_a, big_b]) || nu <= -1.0 || !(big_a > big_b && big_b >= 0.0) {
                    return bad(format!("chiral needs ν > −1 and A > B ≥ 0 (ν = {nu}, A = {big_a}, B = {big_b})"));
                }
                Ok(())
            }
            EnsembleSpec::ProductGinibre { m, c } => {
                if !(m == 1 || m == 2) || !c.is_finite() || c <= -1.0 {
                    return bad(format!("product-ginibre needs m ∈ {{1, 2}} and c > −1 (m = {m}, c = {c})"));
                }
                Ok(())
            }
        }
    }

    pub fn support(&self) -> Support {
        match *self {
            EnsembleSpec::Truncated { .. } => Support::Ellipse { a: 1.0, b: 1.0 },
            EnsembleSpec::Gegenbauer { a, b, .. } => Support::Ellipse { a, b },
            EnsembleSpec::ChebyshevEllipse { a, b } => Support::Contour { a, b },
            _ => Support::Plane,
        }
    }

    /// True when the weight depends on `|z|` only, so the orthogonal polynomials are monomials.
    pub fn is_radial(&self) -> bool {
        matches!(
            self,
            EnsembleSpec::Ginibre
                | EnsembleSpec::MittagLeffler { .. }
                | EnsembleSpec::Truncated { .. }
                | EnsembleSpec::ProductGinibre { .. }
        ) || matches!(self, EnsembleSpec::Elliptic { big_b, .. } if *big_b == 0.0)
    }

    /// Radial profile `w(r)` of a radial weight.
    pub(crate) fn radial_weight(&self, r: f64) -> f64 {
        match *self {
            EnsembleSpec::Ginibre => (-r * r).exp(),
            EnsembleSpec::MittagLeffler { lambda, c } => pow_or_one(r, 2.0 * c) * (-r.powf(2.0 * lambda)).exp(),
            EnsembleSpec::Truncated { alpha } => {
                if r >= 1.0 {
                    0.0
                } else {
                    (1.0 + alpha) * (1.0 - r * r).powf(alpha)
                }
            }
            EnsembleSpec::ProductGinibre { m: 1, c } => pow_or_one(r, 2.0 * c) * (-r * r).exp(),
            EnsembleSpec::ProductGinibre { c, .. } => {
                if r == 0.0 {
                    // logarithmic singularity; never a quadrature node
                    return f64::INFINITY;
                }
                2.0 * pow_or_one(r, 2.0 * c) * bessel_k(0.0, 2.0 * r).unwrap_or(0.0)
            }
            EnsembleSpec::Elliptic { big_a, .. } => (-big_a * r * r).exp(),
            _ => f64::NAN,
        }
    }

    /// Weight density at `z` (zero outside the support; on the contour the density w.r.t. `|dz|`).
    pub fn weight(&self, z: Complex64) -> f64 {
        match *self {
            EnsembleSpec::Gegenbauer { alpha, a, b } => {
                let h = (z.re / a).powi(2) + (z.im / b).powi(2);
                if h >= 1.0 {
                    0.0
                } else {
                    (1.0 + alpha) * (1.0 - h).powf(alpha)
                }
            }
            EnsembleSpec::ChebyshevEllipse { a, b } => {
                let c = (a * a - b * b).sqrt();
                ((c + z).norm() / (c - z).norm()).sqrt()
            }
            EnsembleSpec::Elliptic { big_a, big_b } => (-big_a * z.norm_sqr() + big_b * (z * z).re).exp(),
            EnsembleSpec::Chiral { nu, big_a, big_b } => {
                let r = z.norm();
                if r == 0.0 {
                    return if nu > 0.0 { gamma(nu).unwrap_or(f64::NAN) * 2f64.powf(nu - 1.0) * big_a.powf(-nu) } else { f64::INFINITY };
                }
                // scaled K keeps e^{B Re z} e^{−A|z|} from overflowing separately
                let ks = crate::special::bessel_k_scaled(nu, big_a * r).unwrap_or(0.0);
                r.powf(nu) * ks * (big_b * z.re - big_a * r).exp()
            }
            _ => self.radial_weight(z.norm()),
        }
    }

    /// `ln w(z)`, `−∞` outside the support.
    pub fn ln_weight(&self, z: Complex64) -> f64 {
        match *self {
            EnsembleSpec::Ginibre => -z.norm_sqr(),
            EnsembleSpec::MittagLeffler { lambda, c } => {
                let r = z.norm();
                let charge = if c != 0.0 { 2.0 * c * r.ln() } else { 0.0 };
                charge - r.powf(2.0 * lambda)
            }
            EnsembleSpec::Elliptic { big_a, big_b } => -big_a * z.norm_sqr() + big_b * (z * z).re,
            EnsembleSpec::Chiral { nu, big_a, big_b } => {
                let r = z.norm();
                match crate::special::bessel_k_scaled(nu, big_a * r) {
                    Ok(ks) => nu * r.ln() + ks.ln() + big_b * z.re - big_a * r,
                    Err(_) => f64::NEG_INFINITY,
                }
            }
            _ => {
                let w = self.weight(z);
                if w > 0.0 {
                    w.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    /// Closed-form squared norm `h_n` of the monic orthogonal polynomial `p_n`.
    pub fn norm(&self, n: usize) -> Result<f64> {
        let v = self.ln_norm(n)?.exp();
        if !v.is_finite() {
            return Err(Error::Overflow(format!("h_{n} for {}", self.id())));
        }
        Ok(v)
    }

    /// `ln h_n`, usable at degrees where `h_n` itself overflows.
    pub fn ln_norm(&self, n: usize) -> Result<f64> {
        self.validate()?;
        let nf = n as f64;
        let ln_pi = PI.ln();
        Ok(match *self {
            EnsembleSpec::Ginibre => ln_pi + ln_gamma_pos(nf + 1.0),
            EnsembleSpec::MittagLeffler { lambda, c } => ln_pi - lambda.ln() + ln_gamma_pos((nf + 1.0 + c) / lambda),
            EnsembleSpec::Truncated { alpha } => {
                ln_pi + ln_gamma_pos(alpha + 2.0) + ln_gamma_pos(nf + 1.0) - ln_gamma_pos(nf + alpha + 2.0)
            }
            EnsembleSpec::Gegenbauer { alpha, a, b } => {
                let c = (a * a - b * b).sqrt();
                let big_r = (a * a + b * b) / (a * a - b * b);
                let cn = gegenbauer_c_real(n, 1.0 + alpha, big_r);
                // (n!/(1+α)_n)² via log-gamma
                let ratio = ln_gamma_pos(nf + 1.0) + ln_gamma_pos(1.0 + alpha) - ln_gamma_pos(1.0 + alpha + nf);
                (PI * a * b * (1.0 + alpha) / (nf + 1.0 + alpha)).ln()
                    + 2.0 * nf * (c / 2.0).ln()
                    + 2.0 * ratio
                    + cn.ln()
            }
            EnsembleSpec::ChebyshevEllipse { a, b } => {
                let e = 2 * n as i32 + 1;
                ln_pi + ((a + b).powi(e) + (a - b).powi(e)).ln() - 2.0 * nf * std::f64::consts::LN_2
            }
            EnsembleSpec::Elliptic { big_a, big_b } => {
                let d = big_a * big_a - big_b * big_b;
                ln_pi + ln_gamma_pos(nf + 1.0) - 0.5 * d.ln() + nf * (big_a / d).ln()
            }
            EnsembleSpec::Chiral { nu, big_a, big_b } => {
                let d = big_a * big_a - big_b * big_b;
                ln_pi - big_a.ln() + ln_gamma_pos(nf + 1.0) + ln_gamma_pos(nf + nu + 1.0)
                    + (2.0 * nf + nu + 1.0) * (2.0 * big_a / d).ln()
            }
            EnsembleSpec::ProductGinibre { m, c } => ln_pi + m as f64 * ln_gamma_pos(nf + 1.0 + c),
        })
    }

    /// Total mass `h_0` of the measure.
    pub fn total_mass(&self) -> Result<f64> {
        self.norm(0)
    }
}

fn pow_or_one(r: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else {
        r.powf(p)
    }
}

/// Gegenbauer `C_n^{(λ)}(x)` at real `x` by upward recurrence.
pub(crate) fn gegenbauer_c_real(n: usize, lam: f64, x: f64) -> f64 {
    let mut c0 = 1.0;
    if n == 0 {
        return c0;
    }
    let mut c1 = 2.0 * lam * x;
    for k in 1..n {
        let kf = k as f64;
        let c2 = (2.0 * x * (kf + lam) * c1 - (kf + 2.0 * lam - 1.0) * c0) / (kf + 1.0);
        c0 = c1;
        c1 = c2;
    }
    c1
}
