//! Metropolis sampling of `∏_{k<l}|z_k−z_l|²|z_k−z̄_l|² ∏|z_j−z̄_j|² w(z_j)` on the upper half of the support.

use super::{stream_rng, Method, SampleSet};
use crate::ensemble::{EnsembleSpec, Support};
use crate::error::{Error, Result};
use crate::special::truncation_radius;
use num_complex::Complex64;
use rand::{Rng, RngExt};
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::PI;

pub const MAX_MCMC_N: usize = 32;
const TARGET_RATE: (f64, f64) = (0.30, 0.40);
const ADAPT_EVERY: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct McmcOptions {
    pub chains: usize,
    /// Sweeps between recorded configurations.
    pub thin: usize,
    /// Starting configuration in the upper half-plane; a spread-out default otherwise.
    pub start: Option<Vec<Complex64>>,
}

impl Default for McmcOptions {
    fn default() -> Self {
        McmcOptions { chains: 1, thin: 1, start: None }
    }
}

/// `min(1, e^{Δ})` for a log-density change `Δ`.
pub fn acceptance_probability(delta: f64) -> f64 {
    if delta >= 0.0 {
        1.0
    } else {
        delta.exp()
    }
}

/// Coordinates of one particle: the point itself, or the angle on the contour.
#[derive(Clone, Copy, Debug)]
enum Chart {
    Plane,
    Disc { a: f64, b: f64 },
    Contour { a: f64, b: f64 },
}

impl Chart {
    fn of(ens: &EnsembleSpec) -> Self {
        match ens.support() {
            Support::Plane => Chart::Plane,
            Support::Ellipse { a, b } => Chart::Disc { a, b },
            Support::Contour { a, b } => Chart::Contour { a, b },
        }
    }

    fn point(&self, x: Complex64) -> Complex64 {
        match *self {
            Chart::Contour { a, b } => Complex64::new(a * x.re.cos(), b * x.re.sin()),
            _ => x,
        }
    }

    /// Chart coordinate of a user-supplied point, if it lies on the open upper half of the support.
    fn coordinate(&self, z: Complex64) -> Option<Complex64> {
        if !(z.im > 0.0) || !z.re.is_finite() {
            return None;
        }
        match *self {
            Chart::Plane => Some(z),
            Chart::Disc { a, b } => ((z.re / a).powi(2) + (z.im / b).powi(2) < 1.0).then_some(z),
            Chart::Contour { a, b } => {
                let t = (z.im / b).atan2(z.re / a);
                ((self.point(Complex64::new(t, 0.0)) - z).norm() <= 1e-12 * a).then_some(Complex64::new(t, 0.0))
            }
        }
    }

    /// `ln` of the density of the chart measure w.r.t. the one the weight refers to.
    fn ln_jacobian(&self, x: Complex64) -> f64 {
        match *self {
            Chart::Contour { a, b } => 0.5 * (a * a * x.re.sin().powi(2) + b * b * x.re.cos().powi(2)).ln(),
            _ => 0.0,
        }
    }

    /// Gaussian step folded back into the upper half by conjugation, which leaves
    /// the target invariant and keeps the proposal symmetric.
    fn propose<R: Rng>(&self, x: Complex64, step: f64, rng: &mut R) -> Complex64 {
        let g1: f64 = rng.sample(StandardNormal);
        match *self {
            Chart::Contour { .. } => {
                let t = (x.re + step * g1).rem_euclid(2.0 * PI);
                Complex64::new(if t > PI { 2.0 * PI - t } else { t }, 0.0)
            }
            _ => {
                let g2: f64 = rng.sample(StandardNormal);
                let y = x + Complex64::new(g1, g2) * step;
                if y.im < 0.0 {
                    y.conj()
                } else {
                    y
                }
            }
        }
    }

    /// Spread-out deterministic start.
    fn default_start(&self, ens: &EnsembleSpec, n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|k| {
                let t = PI * (k as f64 + 0.5) / n as f64;
                let rho = ((k as f64 + 0.5) / n as f64).sqrt();
                match *self {
                    Chart::Plane => Complex64::from_polar(0.6 * truncation_radius(ens, 2 * n, 0.1) * rho, t),
                    Chart::Disc { a, b } => Complex64::new(0.8 * a * rho * t.cos(), 0.8 * b * rho * t.sin()),
                    Chart::Contour { .. } => Complex64::new(t, 0.0),
                }
            })
            .collect()
    }

    fn initial_step(&self, ens: &EnsembleSpec, n: usize) -> f64 {
        match *self {
            Chart::Plane => 0.5 * truncation_radius(ens, 2 * n, 0.1) / (n as f64).sqrt(),
            Chart::Disc { b, .. } => 0.5 * b / (n as f64).sqrt(),
            Chart::Contour { .. } => 1.0 / n as f64,
        }
    }
}

fn pair_term(z: Complex64, u: Complex64) -> f64 {
    ((z - u).norm_sqr() * (z - u.conj()).norm_sqr()).ln()
}

fn site_term(ens: &EnsembleSpec, chart: &Chart, x: Complex64) -> f64 {
    let z = chart.point(x);
    if !(z.im > 0.0) {
        return f64::NEG_INFINITY;
    }
    (4.0 * z.im * z.im).ln() + ens.ln_weight(z) + chart.ln_jacobian(x)
}

/// Unnormalized log of the joint density at a configuration (`−∞` off the support).
pub fn log_density(ens: &EnsembleSpec, points: &[Complex64]) -> f64 {
    let mut s = 0.0;
    for (k, &z) in points.iter().enumerate() {
        s += ((z - z.conj()).norm_sqr()).ln() + ens.ln_weight(z);
        for &u in &points[..k] {
            s += pair_term(z, u);
        }
    }
    if s.is_nan() {
        f64::NEG_INFINITY
    } else {
        s
    }
}

struct Chain<'a> {
    ens: &'a EnsembleSpec,
    chart: Chart,
    x: Vec<Complex64>,
    z: Vec<Complex64>,
    step: f64,
}

impl Chain<'_> {
    /// One proposal per particle in order; returns the number accepted.
    fn sweep<R: Rng>(&mut self, rng: &mut R) -> usize {
        let mut accepted = 0;
        for j in 0..self.x.len() {
            let x1 = self.chart.propose(self.x[j], self.step, rng);
            let z1 = self.chart.point(x1);
            let (z0, x0) = (self.z[j], self.x[j]);
            let mut delta = site_term(self.ens, &self.chart, x1) - site_term(self.ens, &self.chart, x0);
            if delta.is_finite() {
                for (l, &u) in self.z.iter().enumerate() {
                    if l != j {
                        delta += pair_term(z1, u) - pair_term(z0, u);
                    }
                }
            }
            if delta.is_nan() || delta == f64::NEG_INFINITY {
                continue;
            }
            let u: f64 = rng.random();
            if u < acceptance_probability(delta) {
                self.x[j] = x1;
                self.z[j] = z1;
                accepted += 1;
            }
        }
        accepted
    }
}

/// [`sample_mcmc_with`] with one chain and no thinning.
pub fn sample_mcmc(ens: &EnsembleSpec, n: usize, steps: usize, burn_in: usize, seed: u64) -> Result<SampleSet> {
    sample_mcmc_with(ens, n, steps, burn_in, seed, &McmcOptions::default())
}

/// Metropolis chains of `burn_in + steps` sweeps each, keeping every `thin`-th sweep after burn-in.
///
/// During burn-in the step is rescaled every few sweeps until the acceptance rate
/// lies in `[0.30, 0.40]`; it is frozen afterwards. Chain `c` uses stream `c` of `seed`.
pub fn sample_mcmc_with(
    ens: &EnsembleSpec,
    n: usize,
    steps: usize,
    burn_in: usize,
    seed: u64,
    opts: &McmcOptions,
) -> Result<SampleSet> {
    ens.validate()?;
    if n == 0 || n > MAX_MCMC_N {
        return Err(Error::InvalidParameter(format!("N = {n} must lie in 1..={MAX_MCMC_N}")));
    }
    if opts.chains == 0 || opts.thin == 0 || steps < opts.thin {
        return Err(Error::InvalidParameter("need chains ≥ 1 and steps ≥ thin ≥ 1".into()));
    }
    let chart = Chart::of(ens);
    let x = match &opts.start {
        Some(s) if s.len() != n => return Err(Error::InvalidParameter(format!("start has {} points, N = {n}", s.len()))),
        Some(s) => s
            .iter()
            .map(|&z| chart.coordinate(z).ok_or_else(|| Error::Sampler(format!("support violation: start point {z}"))))
            .collect::<Result<Vec<_>>>()?,
        None => chart.default_start(ens, n),
    };
    let z: Vec<Complex64> = x.iter().map(|&x| chart.point(x)).collect();
    if !log_density(ens, &z).is_finite() {
        return Err(Error::Sampler("zero-density start point".into()));
    }
    let step = chart.initial_step(ens, n);
    let runs = (0..opts.chains as u64)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let mut chain = Chain { ens, chart, x: x.clone(), z: z.clone(), step };
            let mut window = 0;
            for s in 1..=burn_in {
                window += chain.sweep(&mut rng);
                if s % ADAPT_EVERY == 0 {
                    let rate = window as f64 / (ADAPT_EVERY * n) as f64;
                    if rate < TARGET_RATE.0 {
                        chain.step *= 0.8;
                    } else if rate > TARGET_RATE.1 {
                        chain.step *= 1.25;
                    }
                    window = 0;
                }
            }
            let mut kept = Vec::with_capacity(steps / opts.thin);
            let mut accepted = 0;
            for s in 1..=steps {
                accepted += chain.sweep(&mut rng);
                if s % opts.thin == 0 {
                    kept.push(chain.z.clone());
                }
            }
            (kept, accepted, chain.step)
        })
        .collect::<Vec<_>>();
    let total = (opts.chains * steps * n) as f64;
    let acceptance = runs.iter().map(|r| r.1).sum::<usize>() as f64 / total;
    let steps = runs.iter().map(|r| r.2).collect();
    Ok(SampleSet {
        configs: runs.into_iter().flat_map(|r| r.0).collect(),
        ensemble: ens.clone(),
        method: Method::Mcmc,
        rng_seed: seed,
        chains: opts.chains,
        acceptance: Some(acceptance),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Density of the folded proposal from `x` to `y`.
    fn proposal_density(chart: Chart, step: f64, x: Complex64, y: Complex64) -> f64 {
        let g = |d: f64| (-d / (2.0 * step * step)).exp();
        match chart {
            Chart::Contour { .. } => (-20..=20)
                .map(|k| {
                    let t = 2.0 * PI * k as f64;
                    g((y.re - x.re + t).powi(2)) + g((-y.re - x.re + t).powi(2))
                })
                .sum(),
            _ => g((y - x).norm_sqr()) + g((y.conj() - x).norm_sqr()),
        }
    }

    #[test]
    fn metropolis_rule() {
        assert_eq!(acceptance_probability(0.3), 1.0);
        assert_eq!(acceptance_probability(0.0), 1.0);
        assert!((acceptance_probability(-1.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert_eq!(acceptance_probability(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn proposal_is_symmetric() {
        let mut rng = stream_rng(2, 0);
        for chart in [Chart::Plane, Chart::Contour { a: 2.0, b: 1.0 }] {
            for _ in 0..50 {
                let x = c(rng.random_range(-2.0..2.0), rng.random_range(0.01..PI - 0.01));
                let y = chart.propose(x, 0.7, &mut rng);
                assert!(y.im >= 0.0 && (matches!(chart, Chart::Plane) || (0.0..=PI).contains(&y.re)));
                let (f, b) = (proposal_density(chart, 0.7, x, y), proposal_density(chart, 0.7, y, x));
                assert!((f - b).abs() <= 1e-12 * f.max(b), "{f} {b}");
            }
        }
    }

    #[test]
    fn sweep_matches_full_density() {
        // single-particle deltas agree with differences of the full log-density
        let ens = EnsembleSpec::MittagLeffler { lambda: 2.0, c: 1.0 };
        let z = vec![c(0.3, 0.4), c(-0.5, 0.2), c(0.1, 1.1)];
        let mut z1 = z.clone();
        z1[1] = c(-0.6, 0.7);
        let chart = Chart::Plane;
        let mut delta = site_term(&ens, &chart, z1[1]) - site_term(&ens, &chart, z[1]);
        for l in [0, 2] {
            delta += pair_term(z1[1], z[l]) - pair_term(z[1], z[l]);
        }
        assert!((delta - (log_density(&ens, &z1) - log_density(&ens, &z))).abs() < 1e-12);
    }

    #[test]
    fn start_errors() {
        let ens = EnsembleSpec::Truncated { alpha: 1.0 };
        let bad = McmcOptions { start: Some(vec![c(0.1, 0.2), c(0.9, 0.9)]), ..Default::default() };
        let e = sample_mcmc_with(&ens, 2, 10, 0, 1, &bad).unwrap_err();
        assert!(matches!(e, Error::Sampler(ref m) if m.contains("support violation")), "{e}");
        let coincident = McmcOptions { start: Some(vec![c(0.1, 0.2), c(0.1, 0.2)]), ..Default::default() };
        let e = sample_mcmc_with(&ens, 2, 10, 0, 1, &coincident).unwrap_err();
        assert!(matches!(e, Error::Sampler(ref m) if m.contains("zero-density")), "{e}");
        assert!(sample_mcmc(&EnsembleSpec::Ginibre, 33, 10, 0, 1).is_err());
    }

    #[test]
    fn chains_stay_on_the_support() {
        for ens in [
            EnsembleSpec::Gegenbauer { alpha: 0.5, a: 2.0, b: 1.0 },
            EnsembleSpec::ChebyshevEllipse { a: 2.0, b: 1.0 },
            EnsembleSpec::chiral_tau(0.3, 1.0),
        ] {
            let opts = McmcOptions { chains: 2, thin: 5, start: None };
            let s = sample_mcmc_with(&ens, 4, 200, 200, 9, &opts).unwrap();
            assert_eq!(s.len(), 80);
            let acc = s.acceptance.unwrap();
            assert!(acc > 0.1 && acc < 0.7, "{} acceptance {acc}", ens.id());
            for z in s.points() {
                assert!(z.im > 0.0);
                assert!(ens.weight(z) > 0.0, "{} {z}", ens.id());
            }
            assert_eq!(s, sample_mcmc_with(&ens, 4, 200, 200, 9, &opts).unwrap());
        }
    }

    #[test]
    fn burn_in_tunes_the_step() {
        let s = sample_mcmc(&EnsembleSpec::Ginibre, 3, 4000, 2000, 5).unwrap();
        let acc = s.acceptance.unwrap();
        assert!((0.25..=0.45).contains(&acc), "{acc}");
    }
}
