//! Gamma function and relatives on the real line.

use crate::error::{Error, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_ln_gamma(x: f64) -> f64 {
    // valid for x >= 0.5
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("log_gamma".into()));
    }
    if x <= 0.0 {
        return Err(Error::Pole(x));
    }
    Ok(ln_gamma_pos(x))
}

/// Unchecked `ln Γ(x)` for `x > 0`.
pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x keeps the Lanczos sum in its accurate range.
        lanczos_ln_gamma(x + 1.0) - x.ln()
    } else {
        lanczos_ln_gamma(x)
    }
}

/// `Γ(x)` for real `x` away from the poles `0, −1, −2, …`.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("gamma".into()));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole(x));
    }
    if x > 0.0 && x == x.floor() && x <= 171.0 {
        let mut f = 1.0;
        for k in 2..(x as u64) {
            f *= k as f64;
        }
        return Ok(f);
    }
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let s = (PI * x).sin();
        return Ok(PI / (s * gamma(1.0 - x)?));
    }
    let v = lanczos_ln_gamma(x).exp();
    if v.is_infinite() {
        return Err(Error::Overflow(format!("gamma({x})")));
    }
    Ok(v)
}

/// `1/Γ(x)`, entire in `x`; zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    match gamma(x) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

/// Rising factorial `(a)_n = a(a+1)…(a+n−1)`.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    let mut p = 1.0;
    for k in 0..n {
        p *= a + k as f64;
    }
    p
}

/// `n!!`, with `(−1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<f64> {
    if n < -1 {
        return Err(Error::Domain(format!("double factorial of {n}")));
    }
    let mut p = 1.0;
    let mut k = n;
    while k > 1 {
        p *= k as f64;
        k -= 2;
    }
    Ok(p)
}

/// `ln(n!!)` for `n ≥ −1`, via the gamma function so that large `n` do not overflow.
pub fn ln_double_factorial(n: i64) -> f64 {
    if n <= 0 {
        return 0.0;
    }
    let m = n as f64;
    if n % 2 == 0 {
        // (2k)!! = 2^k k!
        let k = m / 2.0;
        k * std::f64::consts::LN_2 + ln_gamma_pos(k + 1.0)
    } else {
        // (2k+1)!! = (2k+1)! / (2^k k!)
        let k = (m - 1.0) / 2.0;
        ln_gamma_pos(m + 1.0) - k * std::f64::consts::LN_2 - ln_gamma_pos(k + 1.0)
    }
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma_pos(n as f64 + 1.0)
}

/// Upper incomplete gamma `Γ(a, x) = ∫_x^∞ t^{a−1} e^{−t} dt` for `a > 0`, `x ≥ 0`.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if a <= 0.0 || x < 0.0 {
        return Err(Error::Domain(format!("upper_incomplete_gamma({a}, {x})")));
    }
    Ok(regularized_upper_gamma(a, x) * gamma(a)?)
}

/// Regularized `Q(a, x) = Γ(a, x)/Γ(a)`.
pub fn regularized_upper_gamma(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let ln_pref = a * x.ln() - x - ln_gamma_pos(a);
    if x < a + 1.0 {
        // P(a, x) series
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..10_000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        (1.0 - sum * ln_pref.exp()).max(0.0)
    } else {
        // modified Lentz continued fraction for Q(a, x)
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        ln_pref.exp() * h
    }
}
