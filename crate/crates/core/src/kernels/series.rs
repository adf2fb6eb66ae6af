//! Normalized three-term recurrences and the cumulative double sums behind the
//! finite-`N` Hermite and Laguerre pre-kernels.

use crate::error::{Error, Result};
use crate::special::{ln_double_factorial, ln_factorial, ln_gamma_pos};
use num_complex::Complex64;

/// Largest truncation order accepted by the series kernels.
pub const SERIES_CAP: usize = 300;

pub(crate) fn check_order(n: usize) -> Result<()> {
    if n > SERIES_CAP {
        return Err(Error::DegreeCap { degree: n, cap: SERIES_CAP });
    }
    Ok(())
}

pub(crate) fn check_tau(tau: f64) -> Result<()> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::InvalidParameter(format!("τ = {tau} must lie in [0, 1)")));
    }
    Ok(())
}

pub(crate) fn check_nu(nu: f64) -> Result<()> {
    if !nu.is_finite() || nu <= -1.0 {
        return Err(Error::InvalidParameter(format!("ν = {nu} must exceed −1")));
    }
    Ok(())
}

/// Monic recurrence `p_{n+1} = (z − b_n)p_n − c_n p_{n−1}` with `ln(h_n/h_0)`.
///
/// Evaluates `P_n = p_n/√(h_n/h_0)`, which stays bounded where `p_n` itself overflows.
#[derive(Clone, Debug)]
pub(crate) struct Recurrence {
    b: Vec<f64>,
    c: Vec<f64>,
    ln_h: Vec<f64>,
}

impl Recurrence {
    /// `p_n(w) = (φ/2)^{n/2} H_n(w/√(2φ))`, `h_n = n!`.
    pub fn hermite(phi: f64, len: usize) -> Self {
        Recurrence {
            b: vec![0.0; len],
            c: (0..len).map(|n| phi * n as f64).collect(),
            ln_h: (0..len).map(ln_factorial).collect(),
        }
    }

    /// `p_n(w) = (−1)^n n! θ^n L_n^{(ν)}(w/θ)`, `h_n = n!Γ(n+ν+1)/Γ(ν+1)`.
    pub fn laguerre(theta: f64, nu: f64, len: usize) -> Self {
        let g0 = ln_gamma_pos(nu + 1.0);
        Recurrence {
            b: (0..len).map(|n| theta * (2.0 * n as f64 + nu + 1.0)).collect(),
            c: (0..len).map(|n| theta * theta * n as f64 * (n as f64 + nu)).collect(),
            ln_h: (0..len).map(|n| ln_factorial(n) + ln_gamma_pos(n as f64 + nu + 1.0) - g0).collect(),
        }
    }

    pub fn ln_h(&self, n: usize) -> f64 {
        self.ln_h[n]
    }

    /// `P_0(z), …, P_{len−1}(z)`.
    pub fn eval(&self, z: Complex64) -> Vec<Complex64> {
        let len = self.b.len();
        let mut p = Vec::with_capacity(len);
        if len == 0 {
            return p;
        }
        p.push(Complex64::new(1.0, 0.0));
        for n in 0..len - 1 {
            let up = (0.5 * (self.ln_h[n] - self.ln_h[n + 1])).exp();
            let mut next = (z - self.b[n]) * p[n];
            if n > 0 {
                let down = (0.5 * (self.ln_h[n - 1] - self.ln_h[n])).exp();
                next -= p[n - 1] * (self.c[n] * down);
            }
            p.push(next * up);
        }
        p
    }
}

/// `Σ_{k<N} A_k P_{2k+1}(z) Σ_{l≤k} B_l Q_{2l}(u)` with `A_k = e^{ln_a[k]}`, `B_l = e^{ln_b[l]}`.
pub(crate) fn cumulative_double_sum(pz: &[Complex64], qu: &[Complex64], ln_a: &[f64], ln_b: &[f64], n: usize) -> Complex64 {
    let mut inner = Complex64::new(0.0, 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..n {
        inner += qu[2 * k] * ln_b[k].exp();
        total += pz[2 * k + 1] * inner * ln_a[k].exp();
    }
    total
}

/// Weights of the Hermite double sum, `A_k = √((2k+1)!)/(2k+1)!!`, `B_l = √((2l)!)/(2l)!!`.
pub(crate) fn hermite_weights(n: usize) -> (Vec<f64>, Vec<f64>) {
    let a = (0..n)
        .map(|k| 0.5 * ln_factorial(2 * k + 1) - ln_double_factorial(2 * k as i64 + 1))
        .collect();
    let b = (0..n).map(|l| 0.5 * ln_factorial(2 * l) - ln_double_factorial(2 * l as i64)).collect();
    (a, b)
}

/// Weights of the Laguerre double sum:
/// `A_k = √h_{2k+1}/(2^k Γ(k+ν/2+3/2)(2k+1)!!)`, `B_l = √h_{2l}/(2^l Γ(l+ν/2+1)(2l)!!)`.
pub(crate) fn laguerre_weights(rec: &Recurrence, nu: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let ln2 = std::f64::consts::LN_2;
    let a = (0..n)
        .map(|k| {
            let kf = k as f64;
            0.5 * rec.ln_h(2 * k + 1) - kf * ln2 - ln_gamma_pos(kf + nu / 2.0 + 1.5) - ln_double_factorial(2 * k as i64 + 1)
        })
        .collect();
    let b = (0..n)
        .map(|l| {
            let lf = l as f64;
            0.5 * rec.ln_h(2 * l) - lf * ln2 - ln_gamma_pos(lf + nu / 2.0 + 1.0) - ln_double_factorial(2 * l as i64)
        })
        .collect();
    (a, b)
}
