//! Skew-product `⟨f,g⟩_s = ∫ (f(z)g(z̄) − g(z)f(z̄))(z − z̄) dμ(z)` and its moments.

use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::poly::{Poly, Scalar};
use crate::special::{planar_rule, QuadratureRule, RuleOptions};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

/// Antisymmetric Gram matrix `g_{i,j} = ⟨z^i, z^j⟩_s`, `0 ≤ i, j < 2k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewGram {
    pub g: DMatrix<f64>,
    pub k: usize,
}

/// A fixed planar rule used for many skew-products.
#[derive(Clone, Debug)]
pub struct SkewIntegrator {
    pub rule: QuadratureRule,
}

impl SkewIntegrator {
    pub fn new(ens: &EnsembleSpec, opts: RuleOptions) -> Result<Self> {
        Ok(SkewIntegrator { rule: planar_rule(ens, opts)? })
    }

    /// Rule exact enough for integrands of total degree `degree`, checked
    /// against the next refinement level on the constant and `|z|^degree`.
    pub fn for_degree(ens: &EnsembleSpec, degree: usize, tol: f64) -> Result<Self> {
        let mut opts = RuleOptions::new(degree, tol);
        opts.level = 1;
        let probe = |r: &QuadratureRule| r.integrate_real(|z| 1.0 + z.norm().powi(degree as i32));
        let mut rule = planar_rule(ens, opts)?;
        let mut last = probe(&rule);
        for level in 2..=4 {
            opts.level = level;
            opts.extra_radius = (level - 1) as f64;
            let next = planar_rule(ens, opts)?;
            let v = probe(&next);
            let err = (v - last).abs();
            if err <= tol * v.abs() {
                return Ok(SkewIntegrator { rule });
            }
            rule = next;
            last = v;
            if level == 4 {
                return Err(Error::Quadrature { achieved: err / v.abs(), requested: tol });
            }
        }
        Ok(SkewIntegrator { rule })
    }

    /// `⟨f, g⟩_s`.
    pub fn product<T: Scalar>(&self, f: &Poly<T>, g: &Poly<T>) -> Complex64 {
        self.product_weighted(f, g, |_| 1.0)
    }

    /// `⟨f, g⟩_s` for the measure `extra(z) dμ(z)`.
    pub fn product_weighted<T: Scalar, W: Fn(Complex64) -> f64>(&self, f: &Poly<T>, g: &Poly<T>, extra: W) -> Complex64 {
        self.rule.nodes.iter().zip(&self.rule.weights).fold(Complex64::new(0.0, 0.0), |acc, (&z, &w)| {
            let zc = z.conj();
            let v = (f.eval(z) * g.eval(zc) - g.eval(z) * f.eval(zc)) * (z - zc);
            acc + v * (w * extra(z))
        })
    }

    /// Matrix of all skew-products among real-coefficient polynomials, with weight factor `extra`.
    pub fn gram_matrix<W: Fn(Complex64) -> f64>(&self, polys: &[Poly<f64>], extra: W) -> DMatrix<f64> {
        let n = polys.len();
        let mut g = DMatrix::<f64>::zeros(n, n);
        for (&z, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            let wz = w * extra(z);
            if wz == 0.0 {
                continue;
            }
            let vals: Vec<Complex64> = polys.iter().map(|p| p.eval(z)).collect();
            // real coefficients: f(z̄) = conj f(z), so the integrand is −4 Im z · Im(f conj g)
            let y = z.im;
            for i in 0..n {
                for j in i + 1..n {
                    let v = -4.0 * y * (vals[i] * vals[j].conj()).im * wz;
                    g[(i, j)] += v;
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                g[(j, i)] = -g[(i, j)];
            }
        }
        g
    }
}

/// `⟨f, g⟩_s` by adaptive planar quadrature.
pub fn skew_product<T: Scalar>(f: &Poly<T>, g: &Poly<T>, ens: &EnsembleSpec, tol: f64) -> Result<Complex64> {
    let degree = f.degree() + g.degree() + 1;
    let integ = SkewIntegrator::for_degree(ens, degree, tol)?;
    Ok(integ.product(f, g))
}

/// Closed-form moment for radial weights: `g_{i,j} = 2(h_{i+1}δ_{i+1,j} − h_i δ_{i,j+1})`.
pub fn skew_moment_closed(ens: &EnsembleSpec, i: usize, j: usize) -> Result<f64> {
    if !ens.is_radial() {
        return Err(Error::Unsupported(format!("closed-form moments need a radial weight, not {}", ens.id())));
    }
    Ok(if j == i + 1 {
        2.0 * ens.norm(i + 1)?
    } else if i == j + 1 {
        -2.0 * ens.norm(i)?
    } else {
        0.0
    })
}

/// `g_{i,j} = ⟨z^i, z^j⟩_s`, closed form for radial weights and quadrature otherwise.
pub fn skew_moment(ens: &EnsembleSpec, i: usize, j: usize) -> Result<f64> {
    if ens.is_radial() {
        return skew_moment_closed(ens, i, j);
    }
    Ok(skew_product(&Poly::<f64>::monomial(i), &Poly::monomial(j), ens, 1e-12)?.re)
}

/// `Z_N` of the joint density by direct `N`-fold quadrature, for `N ∈ {1, 2}`.
pub fn partition_function_quadrature(ens: &EnsembleSpec, n: usize, tol: f64) -> Result<f64> {
    let site = |z: Complex64| (z - z.conj()).norm_sqr();
    match n {
        1 => Ok(SkewIntegrator::for_degree(ens, 2, tol)?.rule.integrate_real(site)),
        2 => {
            let rule = SkewIntegrator::for_degree(ens, 6, tol)?.rule;
            let inner = |z: Complex64| {
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&u, &w)| w * site(u) * (z - u).norm_sqr() * (z - u.conj()).norm_sqr())
                    .sum::<f64>()
            };
            let outer: Vec<f64> = rule.nodes.par_iter().map(|&z| site(z) * inner(z)).collect();
            Ok(outer.iter().zip(&rule.weights).map(|(v, w)| v * w).sum())
        }
        _ => Err(Error::Unsupported(format!("direct quadrature of Z_{n}"))),
    }
}

/// Gram matrix `G_k` from closed-form moments (`tol = None`) or quadrature.
pub fn skew_gram(ens: &EnsembleSpec, k: usize, tol: Option<f64>) -> Result<SkewGram> {
    let n = 2 * k;
    let g = match tol {
        None => {
            let mut g = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    g[(i, j)] = skew_moment_closed(ens, i, j)?;
                }
            }
            g
        }
        Some(tol) => {
            let integ = SkewIntegrator::for_degree(ens, 2 * n, tol)?;
            let monos: Vec<Poly<f64>> = (0..n).map(Poly::monomial).collect();
            integ.gram_matrix(&monos, |_| 1.0)
        }
    };
    Ok(SkewGram { g, k })
}
