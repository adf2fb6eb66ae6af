//! Coefficients of the perturbed skew-orthogonal polynomials in the basis of the
//! perturbed orthogonal polynomials, for real `m` and `d_n = 0`.

use crate::classical_op::OpSystem;
use crate::error::{Error, Result};
use crate::skew::SkewSystem;
use num_complex::Complex64;

struct Data<'a> {
    sys: &'a SkewSystem,
    ops: &'a OpSystem,
    lambda: &'a [f64],
    pm: Vec<f64>,
    m: f64,
}

impl<'a> Data<'a> {
    fn new(sys: &'a SkewSystem, ops: &'a OpSystem, m: f64, top: usize) -> Result<Self> {
        if sys.odd_shift.iter().any(|&d| d != 0.0) {
            return Err(Error::Gauge("the expansion assumes q_{2k+1} = p_{2k+1} (no odd shifts)".into()));
        }
        let lambda = sys
            .lambda
            .as_deref()
            .ok_or_else(|| Error::Gauge("the expansion needs a system built from the recurrence".into()))?;
        if top > ops.max_degree() {
            return Err(Error::DegreeCap { degree: top, cap: ops.max_degree() });
        }
        let pm = ops.eval_all(top, Complex64::new(m, 0.0))?.iter().map(|v| v.re).collect();
        Ok(Data { sys, ops, lambda, pm, m })
    }

    fn need_pairs(&self, n: usize) -> Result<()> {
        if self.sys.size() < n {
            return Err(Error::InvalidParameter(format!("the expansion needs {n} pairs, the system has {}", self.sys.size())));
        }
        Ok(())
    }

    /// `μ_{k,j}` in `q_{2k} = Σ_j μ_{k,j} p_{2j}`.
    fn mu(&self, k: usize, j: usize) -> f64 {
        if j > k {
            return 0.0;
        }
        self.lambda[j..k].iter().product()
    }

    fn q(&self, n: usize) -> f64 {
        self.sys.q[n].eval_t(self.m)
    }

    /// `K_n(m, m)`.
    fn kmm(&self, n: usize) -> f64 {
        (0..n).map(|k| self.pm[k] * self.pm[k] / self.ops.h[k]).sum()
    }
}

/// `β_{2k+1,l}` in `q1_{2k+1} = Σ_l β_{2k+1,l} p1_l`.
pub fn fourier_beta(system: &SkewSystem, ops: &OpSystem, m: f64, k: usize, l: usize) -> Result<f64> {
    if l > 2 * k + 1 {
        return Err(Error::InvalidParameter(format!("β_{{{},{l}}} has l above the degree", 2 * k + 1)));
    }
    if l == 2 * k + 1 {
        return Ok(1.0);
    }
    let dat = Data::new(system, ops, m, l + 1)?;
    dat.need_pairs(k + 2)?;
    let (q2k, q2k2) = (dat.q(2 * k), dat.q(2 * k + 2));
    let coef = |j| q2k2 * dat.mu(k, j) - q2k * dat.mu(k + 1, j);
    let mut s: f64 = (0..=l / 2).map(|j| coef(j) * dat.pm[2 * j] * dat.pm[l + 1]).sum();
    if l % 2 == 1 {
        let big_l = l / 2;
        s -= coef(big_l + 1) * dat.kmm(2 * big_l + 2) * ops.h[2 * big_l + 2];
    }
    Ok(s / (ops.h[l + 1] * dat.kmm(l + 2) * q2k))
}

/// `α_{2k,l}` in `q1_{2k} = Σ_l α_{2k,l} p1_l`.
pub fn fourier_alpha(system: &SkewSystem, ops: &OpSystem, m: f64, k: usize, l: usize) -> Result<f64> {
    if l > 2 * k {
        return Err(Error::InvalidParameter(format!("α_{{{},{l}}} has l above the degree", 2 * k)));
    }
    if l == 2 * k {
        return Ok(1.0);
    }
    let dat = Data::new(system, ops, m, l + 1)?;
    dat.need_pairs(k + 1)?;
    let r = &system.r;
    let big_l = l / 2;
    let q2k = dat.q(2 * k);
    // Σ_{j≤L} Σ_{i=j}^{k} q_{2i+1}(m) μ_{i,j} p_{2j}(m) / r_i
    let double: f64 = (0..=big_l)
        .map(|j| (j..=k).map(|i| dat.q(2 * i + 1) * dat.mu(i, j) / r[i]).sum::<f64>() * dat.pm[2 * j])
        .sum();
    let even_sum = |upto: usize| -> f64 { (0..upto).map(|i| dat.q(2 * i) * dat.pm[2 * i + 1] / r[i]).sum() };
    let s = if l.is_multiple_of(2) {
        (double - even_sum(big_l)) * dat.pm[l + 1] + dat.q(2 * big_l) * dat.kmm(2 * big_l + 1) * ops.h[2 * big_l + 1] / r[big_l]
    } else {
        let tail: f64 = (big_l + 1..=k).map(|i| dat.q(2 * i + 1) * dat.mu(i, big_l + 1) / r[i]).sum();
        (double - even_sum(big_l + 1)) * dat.pm[l + 1] - tail * dat.kmm(2 * big_l + 2) * ops.h[2 * big_l + 2]
    };
    Ok(r[k] * s / (ops.h[l + 1] * dat.kmm(l + 2) * q2k))
}
