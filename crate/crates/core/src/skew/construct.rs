//! Constructors for skew-orthogonal polynomial systems.

use super::pfaffian::pfaffian;
use super::product::skew_gram;
use super::SkewSystem;
use crate::classical_op::OpSystem;
use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::special::ln_factorial;
use nalgebra::DMatrix;

/// Largest `N` accepted by the Pfaffian route.
pub const GRAM_CAP: usize = 8;

/// Where the Pfaffian route takes its moments from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MomentSource {
    /// Exact moments of a radial weight.
    ClosedForm,
    /// Planar quadrature with the given relative tolerance.
    Quadrature { tol: f64 },
    /// Closed form when the weight is radial, quadrature with `1e-13` otherwise.
    Auto,
}

/// Pfaffian of `g` restricted to `idx`, with an extra last row and column `e_col`.
fn bordered_pfaffian(g: &DMatrix<f64>, idx: &[usize], col: usize) -> Result<f64> {
    let n = idx.len() + 1;
    let mut m = DMatrix::zeros(n, n);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            m[(a, b)] = g[(i, j)];
        }
    }
    m[(col, n - 1)] = 1.0;
    m[(n - 1, col)] = -1.0;
    pfaffian(&m)
}

fn sub_pfaffian(g: &DMatrix<f64>, size: usize) -> Result<f64> {
    if size == 0 {
        return Ok(1.0);
    }
    pfaffian(&g.view((0, 0), (size, size)).into_owned())
}

/// Skew Gram–Schmidt through Pfaffians of bordered Gram matrices.
///
/// The odd polynomials come out in the gauge without a `z^{2k}` term.
pub fn sop_from_gram(ens: &EnsembleSpec, n: usize, source: MomentSource) -> Result<SkewSystem> {
    if n == 0 || n > GRAM_CAP {
        return Err(Error::InvalidParameter(format!("Pfaffian route needs 1 ≤ N ≤ {GRAM_CAP}, got {n}")));
    }
    let tol = match source {
        MomentSource::ClosedForm => None,
        MomentSource::Quadrature { tol } => Some(tol),
        MomentSource::Auto => (!ens.is_radial()).then_some(1e-13),
    };
    let raw = skew_gram(ens, n, tol)?.g;
    let dim = 2 * n;
    // symmetric diagonal rescaling z^i → s_i z^i evens out the moment magnitudes
    let s: Vec<f64> = (0..dim)
        .map(|i| {
            let m = (0..dim).map(|j| raw[(i, j)].abs()).fold(0.0, f64::max);
            if m > 0.0 { 1.0 / m.sqrt() } else { 1.0 }
        })
        .collect();
    let g = DMatrix::from_fn(dim, dim, |i, j| s[i] * s[j] * raw[(i, j)]);

    let mut q = Vec::with_capacity(dim);
    let mut r = Vec::with_capacity(n);
    let mut delta_prev = 1.0;
    for k in 0..n {
        let even_idx: Vec<usize> = (0..=2 * k).collect();
        let mut odd_idx: Vec<usize> = (0..2 * k).collect();
        odd_idx.push(2 * k + 1);
        for idx in [&even_idx, &odd_idx] {
            let deg = *idx.last().expect("non-empty");
            let mut coeffs = vec![0.0; deg + 1];
            for (pos, &power) in idx.iter().enumerate() {
                coeffs[power] = s[power] * bordered_pfaffian(&g, idx, pos)?;
            }
            let lead = coeffs[deg];
            if lead == 0.0 || !lead.is_finite() {
                return Err(Error::IllConditioned(format!("vanishing leading coefficient of q_{deg}")));
            }
            let mut p = Poly::new(coeffs.iter().map(|c| c / lead).collect());
            p.coeffs[deg] = 1.0;
            q.push(p);
        }
        let delta = sub_pfaffian(&g, 2 * k + 2)?;
        let rk = delta / delta_prev / (s[2 * k] * s[2 * k + 1]);
        if !(rk > 0.0) || !rk.is_finite() {
            return Err(Error::IllConditioned(format!("Δ_{k}/Δ_{} = {rk:e}", k as i64 - 1)));
        }
        r.push(rk);
        delta_prev = delta;
    }
    Ok(SkewSystem { q, r, ensemble: ens.clone(), odd_shift: vec![0.0; n], lambda: None })
}

/// Skew-orthogonal polynomials from a three-term recurrence:
/// `q_{2k+1} = p_{2k+1}`, `q_{2k} = Σ_j μ_{k,j} p_{2j}`, `r_k = 2(h_{2k+1} − c_{2k+1}h_{2k})`.
pub fn sop_from_recurrence(ops: &OpSystem, ens: &EnsembleSpec, n: usize) -> Result<SkewSystem> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    if ops.max_degree() + 1 < 2 * n {
        return Err(Error::DegreeCap { degree: 2 * n - 1, cap: ops.max_degree() });
    }
    let h = &ops.h;
    let c = &ops.c;
    let gap = |m: usize| h[m] - c[m] * h[m - 1];
    let mut r = Vec::with_capacity(n);
    for k in 0..n {
        let v = 2.0 * gap(2 * k + 1);
        if !(v > 0.0) {
            return Err(Error::NonPositiveSkewNorm { k, value: v });
        }
        r.push(v);
    }
    // λ_l = (h_{2l+2} − c_{2l+2}h_{2l+1}) / (h_{2l+1} − c_{2l+1}h_{2l})
    let lambda: Vec<f64> = (0..n).take_while(|&l| 2 * l + 2 <= ops.max_degree()).map(|l| gap(2 * l + 2) / gap(2 * l + 1)).collect();
    let p = ops.coeffs_all(2 * n - 1)?;
    let mut q: Vec<Poly<f64>> = Vec::with_capacity(2 * n);
    for k in 0..n {
        let even = if k == 0 { p[0].clone() } else { p[2 * k].axpy(lambda[k - 1], &q[2 * k - 2]) };
        q.push(even);
        q.push(p[2 * k + 1].clone());
    }
    Ok(SkewSystem { q, r, ensemble: ens.clone(), odd_shift: vec![0.0; n], lambda: Some(lambda) })
}

/// Radial weights: `q_{2k+1} = z^{2k+1}`, `q_{2k} = Σ_j z^{2j} ∏_{l=j}^{k−1} h_{2l+2}/h_{2l+1}`, `r_k = 2h_{2k+1}`.
pub fn sop_radial(ens: &EnsembleSpec, n: usize) -> Result<SkewSystem> {
    if !ens.is_radial() {
        return Err(Error::Unsupported(format!("{} is not a radial weight", ens.id())));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    let ln_h = (0..2 * n + 1).map(|m| ens.ln_norm(m)).collect::<Result<Vec<_>>>()?;
    let lambda: Vec<f64> = (0..n).map(|l| (ln_h[2 * l + 2] - ln_h[2 * l + 1]).exp()).collect();
    let mut q = Vec::with_capacity(2 * n);
    let mut r = Vec::with_capacity(n);
    for k in 0..n {
        let mut coeffs = vec![0.0; 2 * k + 1];
        coeffs[2 * k] = 1.0;
        let mut prod = 1.0;
        for j in (0..k).rev() {
            prod *= lambda[j];
            coeffs[2 * j] = prod;
        }
        q.push(Poly::new(coeffs));
        q.push(Poly::monomial(2 * k + 1));
        let rk = 2.0 * ln_h[2 * k + 1].exp();
        if !rk.is_finite() {
            return Err(Error::Overflow(format!("r_{k}")));
        }
        r.push(rk);
    }
    Ok(SkewSystem { q, r, ensemble: ens.clone(), odd_shift: vec![0.0; n], lambda: Some(lambda) })
}

/// `Z_N = N! ∏ r_k`.
pub fn partition_function(sys: &SkewSystem) -> f64 {
    ln_partition_function(sys).exp()
}

/// `ln Z_N`.
pub fn ln_partition_function(sys: &SkewSystem) -> f64 {
    ln_factorial(sys.size()) + sys.r.iter().map(|r| r.ln()).sum::<f64>()
}

/// Recovers `p_0, …, p_{2N−1}` from `p_{2k+2} = q_{2k+2} − λ_k q_{2k}`, `p_{2k+1} = q_{2k+1}`.
pub fn op_from_sop(sys: &SkewSystem) -> Result<Vec<Poly<f64>>> {
    let lambda = sys
        .lambda
        .as_ref()
        .ok_or_else(|| Error::Unsupported("system carries no λ ratios; build it from a recurrence".into()))?;
    let n = sys.size();
    if lambda.len() + 1 < n {
        return Err(Error::Unsupported("λ ratios do not cover the system".into()));
    }
    let mut p = Vec::with_capacity(2 * n);
    for k in 0..n {
        if k == 0 {
            p.push(sys.q[0].clone());
        } else {
            p.push(sys.q[2 * k].axpy(-lambda[k - 1], &sys.q[2 * k - 2]));
        }
        p.push(sys.q[2 * k + 1].axpy(-sys.odd_shift[k], &sys.q[2 * k]));
    }
    Ok(p)
}
