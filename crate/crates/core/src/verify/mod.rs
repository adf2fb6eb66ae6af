//! Numerical invariant suites with measured errors, as run by `sopkit verify`.

pub mod identities;

use crate::christoffel::{fourier_alpha, fourier_beta, perturb_op, perturb_prekernel, perturb_sop};
use crate::classical_op::OpSystem;
use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use crate::kernels::{
    laguerre_poisson, laguerre_poisson_series, mehler_kernel, mehler_series, one_point, s_hermite_limit,
    s_hermite_series, s_laguerre_limit, s_laguerre_series,
};
use crate::poly::Poly;
use crate::sampler::{annulus_integrals, radial_histogram, sample_matrix_ginibre, sample_mcmc_with, McmcOptions};
use crate::skew::{
    partition_function_quadrature, sop_from_gram, sop_from_recurrence, MomentSource, SkewIntegrator, SkewSystem,
    SCHEMA_VERSION,
};
use crate::special::BesselKind;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Special,
    Skew,
    Kernels,
    Christoffel,
    Sampler,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Special, Suite::Skew, Suite::Kernels, Suite::Christoffel, Suite::Sampler];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Special => "special",
            Suite::Skew => "skew",
            Suite::Kernels => "kernels",
            Suite::Christoffel => "christoffel",
            Suite::Sampler => "sampler",
        }
    }

    pub fn run(&self) -> Vec<Check> {
        match self {
            Suite::Special => special(),
            Suite::Skew => skew(),
            Suite::Kernels => kernels(),
            Suite::Christoffel => christoffel(),
            Suite::Sampler => sampler(),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// One measured invariant; `measured` is `None` when the computation itself failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    pub fn new(suite: Suite, name: impl Into<String>, tolerance: f64, measured: Result<f64>) -> Self {
        let name = name.into();
        match measured {
            Ok(v) => Check { suite, name, measured: Some(v), tolerance, passed: v <= tolerance, error: None },
            Err(e) => Check { suite, name, measured: None, tolerance, passed: false, error: Some(e.to_string()) },
        }
    }

    /// `suite/name: pass|FAIL measured (tolerance)`.
    pub fn line(&self) -> String {
        let status = if self.passed { "pass" } else { "FAIL" };
        let value = match (&self.measured, &self.error) {
            (Some(v), _) => format!("{v:.3e}"),
            (None, Some(e)) => e.clone(),
            (None, None) => "-".into(),
        };
        format!("{}/{}: {status} {value} (tol {:.1e})", self.suite.name(), self.name, self.tolerance)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn run(suites: &[Suite]) -> Report {
    let checks: Vec<Check> = suites.iter().flat_map(|s| s.run()).collect();
    Report { schema_version: SCHEMA_VERSION, passed: checks.iter().all(|c| c.passed), checks }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest value over a fallible family.
fn worst<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    it.into_iter().try_fold(0.0, |m, v| Ok(f64::max(m, v?)))
}

/// The 5 × 5 grid of `z` with real and imaginary parts in `{0, ±0.7, ±1.4}` and a fixed `u`.
pub fn kernel_grid() -> Vec<(Complex64, Complex64)> {
    let xs = [-1.4, -0.7, 0.0, 0.7, 1.4];
    let u = c(0.3, -0.4);
    xs.iter().flat_map(|&x| xs.iter().map(move |&y| (c(x, y), u))).collect()
}

fn recurrence(e: &EnsembleSpec, n: usize) -> Result<(OpSystem, SkewSystem)> {
    let ops = OpSystem::for_ensemble(e, 2 * n + 2)?;
    let sys = sop_from_recurrence(&ops, e, n)?;
    Ok((ops, sys))
}

/// Registered families with one parameter choice each.
pub fn families() -> Vec<EnsembleSpec> {
    vec![
        EnsembleSpec::Ginibre,
        EnsembleSpec::MittagLeffler { lambda: 2.0, c: 0.5 },
        EnsembleSpec::Truncated { alpha: 1.0 },
        EnsembleSpec::Gegenbauer { alpha: 1.0, a: 2.0, b: 1.0 },
        EnsembleSpec::ChebyshevEllipse { a: 2.0, b: 1.0 },
    ]
}

/// Largest violation of `⟨q_{2k},q_{2l+1}⟩ = r_kδ_{kl}`, `⟨q_{2k},q_{2l}⟩ = ⟨q_{2k+1},q_{2l+1}⟩ = 0`,
/// relative to the largest `r_k`, for the weight `extra · w`.
pub fn skew_orthogonality_error<W: Fn(Complex64) -> f64>(
    integ: &SkewIntegrator,
    q: &[Poly<f64>],
    r: &[f64],
    extra: W,
) -> f64 {
    let g = integ.gram_matrix(q, extra);
    let scale = r.iter().cloned().fold(0.0, f64::max);
    let mut err: f64 = 0.0;
    for k in 0..r.len() {
        for l in 0..r.len() {
            let want = if k == l { r[k] } else { 0.0 };
            err = err.max(g[(2 * k, 2 * l)].abs()).max(g[(2 * k + 1, 2 * l + 1)].abs());
            err = err.max((g[(2 * k, 2 * l + 1)] - want).abs());
        }
    }
    err / scale
}

fn special() -> Vec<Check> {
    let s = Suite::Special;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut out = Vec::new();
    let gauss1: Vec<_> = (0..20)
        .map(|_| {
            let alpha = rng.random_range(0.5..3.0);
            let beta = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            identities::gauss1(alpha, beta)
        })
        .collect();
    out.push(Check::new(s, "gaussian integral, 20 random (α, β)", 1e-9, worst(gauss1)));
    let gauss2: Vec<_> = (0..10)
        .map(|_| {
            let alpha = rng.random_range(0.8..2.0);
            let beta = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let g = c(rng.random_range(-0.6..0.6), rng.random_range(-0.4..0.4));
            let d = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            identities::gauss2(alpha, beta, g, d)
        })
        .collect();
    out.push(Check::new(s, "gaussian-erf integral, 10 random sets", 1e-9, worst(gauss2)));
    let gauss3: Vec<_> = (0..10)
        .map(|_| {
            let (a, b) = (rng.random_range(1.0..2.0), rng.random_range(1.0..2.0));
            let cc = c(rng.random_range(-0.5..0.5), rng.random_range(-0.3..0.3));
            let d = c(rng.random_range(-0.5..0.5), rng.random_range(-0.3..0.3));
            let z = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            let e = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            identities::gauss3(a, b, cc, d, z, e)
        })
        .collect();
    out.push(Check::new(s, "double gaussian-erf integral, 10 random sets", 1e-7, worst(gauss3)));
    for nu in [0.0, 0.5, 1.0, 2.3] {
        let v = worst([0.8, 2.0].into_iter().flat_map(|u| {
            [BesselKind::J, BesselKind::I].map(|k| identities::bessel_gamma(nu, u, k))
        }));
        out.push(Check::new(s, format!("bessel-gamma integrals, ν = {nu}"), 1e-7, v));
    }
    for nu in [0.0, 0.5, 1.0, 2.3] {
        let v = worst((0..3).flat_map(|w| {
            [(1.3, 0.7, 1.0), (0.4, 2.1, 0.6)].map(|(a, b, cc)| identities::bessel_product(nu, a, b, cc, w))
        }));
        out.push(Check::new(s, format!("bessel product integrals, ν = {nu}"), 1e-7, v));
    }
    for nu in [0.0, 1.0] {
        let v = worst([BesselKind::J, BesselKind::I].map(|k| identities::bessel_double(nu, 0.7, 0.4, k)));
        out.push(Check::new(s, format!("bessel double integrals, ν = {nu}"), 1e-5, v));
    }
    out
}

fn skew() -> Vec<Check> {
    let s = Suite::Skew;
    let g = EnsembleSpec::Ginibre;
    let mut out = Vec::new();
    let closed = |k: usize| 2.0 * PI * (1..=2 * k + 1).map(|j| j as f64).product::<f64>();
    out.push(Check::new(
        s,
        "ginibre r_k = 2π(2k+1)!, recurrence, k ≤ 5",
        1e-10,
        recurrence(&g, 6).map(|(_, sys)| (0..6).map(|k| (sys.r[k] / closed(k) - 1.0).abs()).fold(0.0, f64::max)),
    ));
    out.push(Check::new(
        s,
        "ginibre r_k = 2π(2k+1)!, pfaffian route, k ≤ 5",
        1e-6,
        sop_from_gram(&g, 6, MomentSource::Quadrature { tol: 1e-12 })
            .map(|sys| (0..6).map(|k| (sys.r[k] / closed(k) - 1.0).abs()).fold(0.0, f64::max)),
    ));
    for e in [EnsembleSpec::Ginibre, EnsembleSpec::MittagLeffler { lambda: 2.0, c: 0.5 }, EnsembleSpec::Gegenbauer { alpha: 1.0, a: 2.0, b: 1.0 }]
    {
        let v = (|| {
            let (_, rec) = recurrence(&e, 4)?;
            let gram = sop_from_gram(&e, 4, MomentSource::Auto)?;
            Ok(rec.q.iter().zip(&gram.q).map(|(a, b)| a.max_diff(b) / a.norm_inf()).fold(0.0, f64::max))
        })();
        out.push(Check::new(s, format!("constructors agree, {}, N = 4", e.id()), 1e-8, v));
    }
    for e in families() {
        let v = (|| {
            let (_, sys) = recurrence(&e, 4)?;
            let integ = SkewIntegrator::for_degree(&e, 16, 1e-13)?;
            Ok(skew_orthogonality_error(&integ, &sys.q, &sys.r, |_| 1.0))
        })();
        out.push(Check::new(s, format!("skew-orthogonality, {}, N = 4", e.id()), 1e-6, v));
    }
    for e in [EnsembleSpec::Ginibre, EnsembleSpec::Truncated { alpha: 1.0 }] {
        let v = (|| {
            let (_, sys) = recurrence(&e, 2)?;
            let z = partition_function_quadrature(&e, 2, 1e-10)?;
            Ok((z / (2.0 * sys.r[0] * sys.r[1]) - 1.0).abs())
        })();
        out.push(Check::new(s, format!("Z_2 = 2 r_0 r_1, {}", e.id()), 1e-4, v));
    }
    out
}

fn kernels() -> Vec<Check> {
    let s = Suite::Kernels;
    let grid = kernel_grid();
    let mut out = Vec::new();
    for tau in [0.25, 0.5, 0.75] {
        let v = worst(grid.iter().map(|&(z, u)| {
            let (a, b) = (mehler_series(tau, z, u, 400)?, mehler_kernel(tau, z, u)?);
            Ok((a - b).norm() / b.norm().max(1.0))
        }));
        out.push(Check::new(s, format!("mehler series, τ = {tau}"), 1e-9, v));
        let v = worst(grid.iter().map(|&(z, u)| {
            let (a, b) = (s_hermite_series(tau, z, u, 200)?, s_hermite_limit(tau, z, u)?);
            Ok((a - b).norm())
        }));
        out.push(Check::new(s, format!("hermite kernel, N = 200, τ = {tau}"), 1e-6, v));
    }
    for nu in [0.0, 0.5, 2.0] {
        let tau = 0.5;
        let v = worst(grid.iter().map(|&(z, u)| {
            let (a, b) = (laguerre_poisson_series(tau, nu, z, u, 400)?, laguerre_poisson(tau, nu, z, u)?);
            Ok((a - b).norm() / b.norm().max(1.0))
        }));
        out.push(Check::new(s, format!("laguerre-poisson series, ν = {nu}"), 1e-9, v));
        let v = worst(grid.iter().filter(|(z, _)| z.norm() > 0.0).map(|&(z, u)| {
            let (a, b) = (s_laguerre_series(tau, nu, z, u, 200)?, s_laguerre_limit(tau, nu, z, u)?);
            Ok((a - b).norm())
        }));
        out.push(Check::new(s, format!("laguerre kernel, N = 200, ν = {nu}"), 1e-5, v));
    }
    let v = (|| {
        let e = EnsembleSpec::Ginibre;
        let (_, sys) = recurrence(&e, 4)?;
        let integ = SkewIntegrator::for_degree(&e, 16, 1e-13)?;
        let total = integ.rule.integrate_real(|z| one_point(&sys, z) / e.weight(z));
        Ok((total - 4.0).abs())
    })();
    out.push(Check::new(s, "ginibre R_{4,1} integrates to 4", 1e-8, v));
    out
}

fn christoffel() -> Vec<Check> {
    let s = Suite::Christoffel;
    let g = EnsembleSpec::Ginibre;
    let mut out = Vec::new();
    for m in [0.0, 0.7] {
        let v = (|| {
            let (_, sys) = recurrence(&g, 4)?;
            let p = perturb_sop(&sys, m, &[])?;
            let integ = SkewIntegrator::for_degree(&g, 16, 1e-13)?;
            Ok(skew_orthogonality_error(&integ, &p.q1, &p.r1, |z| (z - m).norm_sqr()))
        })();
        out.push(Check::new(s, format!("perturbed skew-orthogonality, m = {m}"), 1e-6, v));
        let v = (|| {
            let (_, sys) = recurrence(&g, 4)?;
            let p = perturb_sop(&sys, m, &[])?;
            worst([(c(0.3, 0.4), c(-0.5, 0.8)), (c(1.1, -0.2), c(0.0, 0.6)), (c(m, 0.0), c(0.2, 0.2))].map(|(z, u)| {
                let (a, b) = (perturb_prekernel(&sys, m, z, u)?, p.pre_kernel(z, u));
                Ok((a - b).norm() / b.norm().max(1e-3))
            }))
        })();
        out.push(Check::new(s, format!("perturbed pre-kernel routes, m = {m}"), 1e-9, v));
    }
    let v = (|| {
        let m = 1.0;
        let (ops, sys) = recurrence(&g, 4)?;
        let p = perturb_sop(&sys, m, &[])?;
        let op1 = perturb_op(&ops, &g, c(m, 0.0), 2 * p.size())?;
        let mut err: f64 = 0.0;
        for k in 0..p.size() {
            let mut odd = Poly::<Complex64>::zero();
            for l in 0..=2 * k + 1 {
                odd = odd.axpy(c(fourier_beta(&sys, &ops, m, k, l)?, 0.0), &op1.p1[l]);
            }
            let mut even = Poly::<Complex64>::zero();
            for l in 0..=2 * k {
                even = even.axpy(c(fourier_alpha(&sys, &ops, m, k, l)?, 0.0), &op1.p1[l]);
            }
            err = err.max(odd.max_diff(&p.q1[2 * k + 1].to_complex()) / p.q1[2 * k + 1].norm_inf());
            err = err.max(even.max_diff(&p.q1[2 * k].to_complex()) / p.q1[2 * k].norm_inf());
        }
        Ok(err)
    })();
    out.push(Check::new(s, "perturbed SOP from the OP expansion, m = 1", 1e-8, v));
    out
}

fn sampler() -> Vec<Check> {
    let s = Suite::Sampler;
    let g = EnsembleSpec::Ginibre;
    let mut out = Vec::new();
    let v = (|| {
        let (_, sys) = recurrence(&g, 2)?;
        let samples = sample_matrix_ginibre(2, 20_000, 1)?;
        let h = radial_histogram(&samples, 3.5, 20, 20)?;
        Ok(h.max_deviation(&annulus_integrals(|z| one_point(&sys, z), &h.edges, 64)))
    })();
    out.push(Check::new(s, "matrix N = 2 radial histogram (standard errors)", 4.0, v));
    let v = (|| {
        let opts = McmcOptions { chains: 8, thin: 10, start: None };
        let samples = sample_mcmc_with(&g, 1, 25_000, 1_000, 8, &opts)?;
        let mut r: Vec<f64> = samples.points().map(|z| z.norm()).collect();
        r.sort_by(f64::total_cmp);
        let n = r.len() as f64;
        let cdf = |r: f64| 1.0 - (1.0 + r * r) * (-r * r).exp();
        Ok(r.iter()
            .enumerate()
            .map(|(i, &x)| (cdf(x) - i as f64 / n).abs().max((cdf(x) - (i + 1) as f64 / n).abs()))
            .fold(0.0, f64::max))
    })();
    out.push(Check::new(s, "mcmc N = 1 radial KS distance", 0.02, v));
    out
}
