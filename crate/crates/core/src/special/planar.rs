//! Quadrature rules carrying the measure of an ensemble.

use super::gamma::regularized_upper_gamma;
use super::quad::{composite_on, DomainTag, QuadratureRule};
use crate::ensemble::{EnsembleSpec, Support};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Refinement knobs for [`planar_rule`].
#[derive(Clone, Copy, Debug)]
pub struct RuleOptions {
    /// Total degree in `(z, z̄)` of the polynomial factor of the integrand.
    pub degree: usize,
    /// Each level doubles the number of panels and angular nodes.
    pub level: usize,
    /// Target accuracy; drives the truncation radius on unbounded supports.
    pub tol: f64,
    /// Added to the truncation radius.
    pub extra_radius: f64,
}

impl RuleOptions {
    pub fn new(degree: usize, tol: f64) -> Self {
        RuleOptions { degree, level: 0, tol, extra_radius: 0.0 }
    }
}

/// Smallest `R` (on a 2% grid) with `tail(R) ≤ eps`.
fn radius_from_tail<F: Fn(f64) -> f64>(tail: F, eps: f64) -> f64 {
    let mut r = 0.5;
    while tail(r) > eps && r < 1e4 {
        r *= 1.02;
    }
    r
}

/// Truncation radius (or `[x, y]` half-widths for the elliptic weight) for unbounded supports.
///
/// The relative tail mass of `r^{D+1}ŵ(r)` beyond `R` is bounded with an
/// envelope `ŵ ≥ w` whose moments are incomplete gamma functions.
pub fn truncation_radius(ens: &EnsembleSpec, degree: usize, tol: f64) -> f64 {
    let eps = (tol * 1e-2).max(1e-300);
    let d = degree as f64;
    match *ens {
        EnsembleSpec::Ginibre => radius_from_tail(|r| regularized_upper_gamma((d + 2.0) / 2.0, r * r), eps),
        EnsembleSpec::MittagLeffler { lambda, c } => radius_from_tail(
            |r| regularized_upper_gamma((d + 2.0 + 2.0 * c) / (2.0 * lambda), r.powf(2.0 * lambda)),
            eps,
        ),
        EnsembleSpec::ProductGinibre { m: 1, c } => {
            radius_from_tail(|r| regularized_upper_gamma((d + 2.0 + 2.0 * c) / 2.0, r * r), eps)
        }
        EnsembleSpec::ProductGinibre { c, .. } => {
            // K_0(2r) ≤ √(π/(4r)) e^{−2r}
            let p = (d + 1.0 + 2.0 * c - 0.5).max(0.0);
            radius_from_tail(|r| regularized_upper_gamma(p + 1.0, 2.0 * r), eps).max(2.0)
        }
        EnsembleSpec::Elliptic { big_a, big_b } => {
            let s = big_a - big_b;
            radius_from_tail(|r| regularized_upper_gamma((d + 2.0) / 2.0, s * r * r), eps)
        }
        EnsembleSpec::Chiral { nu, big_a, big_b } => {
            // K_ν(x) ≤ √(π/(2x)) e^{−x} (1 + (4ν²−1)/(8x))_+ for large x
            let s = big_a - big_b;
            let p = (d + 1.0 + nu - 0.5).max(0.0);
            radius_from_tail(|r| regularized_upper_gamma(p + 1.0, s * r), eps).max(2.0)
        }
        _ => 1.0,
    }
}

/// Quadrature rule for `∫ f dμ` on the support of `ens`.
pub fn planar_rule(ens: &EnsembleSpec, opts: RuleOptions) -> Result<QuadratureRule> {
    ens.validate()?;
    let scale = 1usize << opts.level.min(8);
    match (ens, ens.support()) {
        (_, Support::Contour { a, b }) => Ok(contour_rule(ens, a, b, (2 * (opts.degree + 8) + 64) * scale)),
        (_, Support::Ellipse { a, b }) => Ok(disc_rule(ens, a, b, opts, scale)),
        (EnsembleSpec::Elliptic { big_a, big_b }, _) if *big_b > 0.0 => Ok(cartesian_rule(ens, *big_a, *big_b, opts, scale)),
        _ => Ok(polar_rule(ens, opts, scale)),
    }
}

fn angular_count(opts: &RuleOptions, scale: usize, extra: usize) -> usize {
    (opts.degree + 8 + extra) * scale
}

/// Radial breakpoints on `[0, R]`: geometric toward 0, then uniform.
fn radial_breaks(r_max: f64, uniform: usize) -> Vec<f64> {
    let mut br: Vec<f64> = (0..40).rev().map(|j| r_max * 0.5 * 0.5f64.powi(j)).collect();
    br.insert(0, 0.0);
    for i in 1..=uniform {
        br.push(r_max * (0.5 + 0.5 * i as f64 / uniform as f64));
    }
    br
}

fn polar_rule(ens: &EnsembleSpec, opts: RuleOptions, scale: usize) -> QuadratureRule {
    let r_max = truncation_radius(ens, opts.degree, opts.tol) + opts.extra_radius;
    let (rs, rw) = composite_on(&radial_breaks(r_max, 8 * scale), 20);
    let extra = match *ens {
        EnsembleSpec::Chiral { big_b, .. } => (2.0 * big_b * r_max) as usize + 40,
        _ => 0,
    };
    let m = angular_count(&opts, scale, extra);
    let radial = ens.is_radial();
    let mut nodes = Vec::with_capacity(rs.len() * m);
    let mut weights = Vec::with_capacity(rs.len() * m);
    let dth = 2.0 * PI / m as f64;
    for (&r, &w) in rs.iter().zip(&rw) {
        let wr = if radial { ens.radial_weight(r) } else { 0.0 };
        for j in 0..m {
            // offset by half a step so no node lies on the real axis
            let th = (j as f64 + 0.5) * dth;
            let z = Complex64::from_polar(r, th);
            let wz = if radial { wr } else { ens.weight(z) };
            nodes.push(z);
            weights.push(w * r * dth * wz);
        }
    }
    QuadratureRule { nodes, weights, domain: DomainTag::PlanarRegion }
}

fn cartesian_rule(ens: &EnsembleSpec, big_a: f64, big_b: f64, opts: RuleOptions, scale: usize) -> QuadratureRule {
    let ex = EnsembleSpec::Elliptic { big_a: big_a - big_b, big_b: 0.0 };
    let ey = EnsembleSpec::Elliptic { big_a: big_a + big_b, big_b: 0.0 };
    let rx = truncation_radius(&ex, opts.degree, opts.tol) + opts.extra_radius;
    let ry = truncation_radius(&ey, opts.degree, opts.tol) + opts.extra_radius;
    let panels = 6 * scale;
    let br = |h: f64| -> Vec<f64> { (0..=panels).map(|i| -h + 2.0 * h * i as f64 / panels as f64).collect() };
    let (xs, xw) = composite_on(&br(rx), 20);
    let (ys, yw) = composite_on(&br(ry), 20);
    let mut nodes = Vec::with_capacity(xs.len() * ys.len());
    let mut weights = Vec::with_capacity(xs.len() * ys.len());
    for (&x, &wx) in xs.iter().zip(&xw) {
        for (&y, &wy) in ys.iter().zip(&yw) {
            let z = Complex64::new(x, y);
            nodes.push(z);
            weights.push(wx * wy * ens.weight(z));
        }
    }
    QuadratureRule { nodes, weights, domain: DomainTag::PlanarRegion }
}

/// Elliptic-polar map `z = a ρ cos φ + i b ρ sin φ`, Jacobian `abρ`, graded toward `ρ = 1`.
fn disc_rule(ens: &EnsembleSpec, a: f64, b: f64, opts: RuleOptions, scale: usize) -> QuadratureRule {
    let alpha = match *ens {
        EnsembleSpec::Truncated { alpha } | EnsembleSpec::Gegenbauer { alpha, .. } => alpha,
        _ => 0.0,
    };
    let mut br = vec![0.0];
    let uniform = 4 * scale;
    for i in 1..=uniform {
        br.push(0.5 * i as f64 / uniform as f64);
    }
    let smooth = alpha == alpha.round() && alpha >= 0.0;
    let grades = if smooth { 8 } else { 45 };
    for j in 1..=grades {
        br.push(1.0 - 0.5f64.powi(j + 1));
    }
    if smooth {
        br.push(1.0);
    }
    let (mut rs, mut rw) = composite_on(&br, 16);
    let lumped = if smooth {
        usize::MAX
    } else {
        // The last sliver [1−ε, 1] carries the endpoint singularity; its mass
        // ∫ (1−ρ²)^α ρ dρ is lumped onto ρ = 1 with error O(ε^{α+2}).
        let eps = 1.0 - br[br.len() - 1].powi(2);
        rs.push(1.0);
        rw.push(eps.powf(alpha + 1.0) / (2.0 * (alpha + 1.0)));
        rs.len() - 1
    };
    let m = angular_count(&opts, scale, 0);
    let dth = 2.0 * PI / m as f64;
    let mut nodes = Vec::with_capacity(rs.len() * m);
    let mut weights = Vec::with_capacity(rs.len() * m);
    for (i, (&rho, &w)) in rs.iter().zip(&rw).enumerate() {
        // radial factor of dμ: (1+α)(1−ρ²)^α ab ρ dρ
        let radial = if i == lumped { (1.0 + alpha) * w * a * b } else { w * (1.0 + alpha) * (1.0 - rho * rho).powf(alpha) * a * b * rho };
        for j in 0..m {
            let th = (j as f64 + 0.5) * dth;
            nodes.push(Complex64::new(a * rho * th.cos(), b * rho * th.sin()));
            weights.push(radial * dth);
        }
    }
    QuadratureRule { nodes, weights, domain: DomainTag::PlanarRegion }
}

/// Trapezoid rule in the angle with `|dz| = √(a² sin²θ + b² cos²θ) dθ`.
fn contour_rule(ens: &EnsembleSpec, a: f64, b: f64, m: usize) -> QuadratureRule {
    let dth = 2.0 * PI / m as f64;
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for j in 0..m {
        let th = (j as f64 + 0.5) * dth;
        let z = Complex64::new(a * th.cos(), b * th.sin());
        let speed = (a * a * th.sin().powi(2) + b * b * th.cos().powi(2)).sqrt();
        nodes.push(z);
        weights.push(dth * speed * ens.weight(z));
    }
    QuadratureRule { nodes, weights, domain: DomainTag::EllipticContour }
}

/// `∫ f dμ` for the ensemble measure, refining until two levels agree to `tol·(1+|I|)`.
pub fn quad_planar<F: Fn(Complex64) -> Complex64>(f: F, ens: &EnsembleSpec, tol: f64) -> Result<Complex64> {
    quad_planar_deg(f, ens, 16, tol)
}

/// [`quad_planar`] with a degree hint for the polynomial growth of `f`.
pub fn quad_planar_deg<F: Fn(Complex64) -> Complex64>(
    f: F,
    ens: &EnsembleSpec,
    degree: usize,
    tol: f64,
) -> Result<Complex64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let mut opts = RuleOptions::new(degree, tol);
    let mut prev = planar_rule(ens, opts)?.integrate(&f);
    let mut err = f64::INFINITY;
    for level in 1..=4 {
        opts.level = level;
        opts.extra_radius = level as f64;
        let cur = planar_rule(ens, opts)?.integrate(&f);
        err = (cur - prev).norm();
        if !cur.re.is_finite() || !cur.im.is_finite() {
            return Err(Error::NonFinite("planar quadrature".into()));
        }
        if err <= tol * (1.0 + cur.norm()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature { achieved: err, requested: tol })
}
