//! Histogram estimators of the one-point function from sampled configurations.

use super::SampleSet;
use crate::error::{Error, Result};
use crate::skew::fmt_f64;
use crate::special::gauss_legendre_on;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::Write;

/// Cells of `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityGrid {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl DensityGrid {
    fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 || !(self.x.0 < self.x.1) || !(self.y.0 < self.y.1) {
            return Err(Error::InvalidParameter(format!("bad density grid {self:?}")));
        }
        Ok(())
    }

    pub fn cell_area(&self) -> f64 {
        (self.x.1 - self.x.0) * (self.y.1 - self.y.0) / (self.nx * self.ny) as f64
    }

    /// Center of cell `(i, j)`.
    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        let dx = (self.x.1 - self.x.0) / self.nx as f64;
        let dy = (self.y.1 - self.y.0) / self.ny as f64;
        Complex64::new(self.x.0 + (i as f64 + 0.5) * dx, self.y.0 + (j as f64 + 0.5) * dy)
    }

    fn cell(&self, z: Complex64) -> Option<(usize, usize)> {
        let fx = (z.re - self.x.0) / (self.x.1 - self.x.0) * self.nx as f64;
        let fy = (z.im - self.y.0) / (self.y.1 - self.y.0) * self.ny as f64;
        if fx < 0.0 || fy < 0.0 || fx >= self.nx as f64 || fy >= self.ny as f64 {
            return None;
        }
        Some((fx as usize, fy as usize))
    }
}

/// Values per cell, row `j` (imaginary part) after row `j − 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityField {
    pub grid: DensityGrid,
    pub values: Vec<f64>,
}

impl DensityField {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(["re(z)", "im(z)", "density"]).map_err(io)?;
        for j in 0..self.grid.ny {
            for i in 0..self.grid.nx {
                let z = self.grid.center(i, j);
                out.write_record([z.re, z.im, self.at(i, j)].map(fmt_f64)).map_err(io)?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Histogram of `R_{N,1}`: each stored point and its conjugate count with weight
/// one half, so the field integrates to `N` when the grid covers the support.
pub fn empirical_density(samples: &SampleSet, grid: &DensityGrid) -> Result<DensityField> {
    grid.validate()?;
    if samples.is_empty() {
        return Err(Error::InvalidParameter("no samples".into()));
    }
    let mut values = vec![0.0; grid.nx * grid.ny];
    for z in samples.points() {
        for p in [z, z.conj()] {
            if let Some((i, j)) = grid.cell(p) {
                values[j * grid.nx + i] += 0.5;
            }
        }
    }
    let scale = 1.0 / (samples.len() as f64 * grid.cell_area());
    values.iter_mut().for_each(|v| *v *= scale);
    Ok(DensityField { grid: *grid, values })
}

/// Mean number of points per configuration in each bin, with batch-means standard errors.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub configs: usize,
}

impl Histogram {
    /// Largest `|mean − expected|` in standard errors. The batch error is floored
    /// by the Poisson error `√(expected/configs)` of independent draws, so that
    /// bins without counts do not have zero error.
    pub fn max_deviation(&self, expected: &[f64]) -> f64 {
        let n = self.configs as f64;
        self.mean
            .iter()
            .zip(&self.stderr)
            .zip(expected)
            .map(|((m, s), e)| {
                let sigma = s.max((e.abs() / n).sqrt());
                if sigma > 0.0 {
                    (m - e).abs() / sigma
                } else if m == e {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Counts of `|z|` in `bins` equal annuli of `[0, r_max]`. The standard error comes
/// from `batches` contiguous blocks of configurations, which absorbs the
/// autocorrelation of Metropolis chains when blocks are long.
pub fn radial_histogram(samples: &SampleSet, r_max: f64, bins: usize, batches: usize) -> Result<Histogram> {
    if bins == 0 || !(r_max > 0.0) || batches < 2 || samples.len() < batches {
        return Err(Error::InvalidParameter(format!(
            "radial histogram with {bins} bins, r_max {r_max}, {batches} batches of {} configurations",
            samples.len()
        )));
    }
    let edges: Vec<f64> = (0..=bins).map(|k| r_max * k as f64 / bins as f64).collect();
    let per = samples.len() / batches;
    let mut means = vec![vec![0.0; bins]; batches];
    for (b, block) in samples.configs.chunks(per).take(batches).enumerate() {
        for z in block.iter().flatten() {
            let k = (z.norm() / r_max * bins as f64) as usize;
            if k < bins {
                means[b][k] += 1.0;
            }
        }
        means[b].iter_mut().for_each(|v| *v /= block.len() as f64);
    }
    let bf = batches as f64;
    let mean: Vec<f64> = (0..bins).map(|k| means.iter().map(|m| m[k]).sum::<f64>() / bf).collect();
    let stderr = (0..bins)
        .map(|k| {
            let var = means.iter().map(|m| (m[k] - mean[k]).powi(2)).sum::<f64>() / (bf - 1.0);
            (var / bf).sqrt()
        })
        .collect();
    Ok(Histogram { edges, mean, stderr, configs: per * batches })
}

/// `∫ f` over each annulus `edges[k] ≤ |z| < edges[k+1]` of the full plane.
pub fn annulus_integrals<F: Fn(Complex64) -> f64>(f: F, edges: &[f64], angles: usize) -> Vec<f64> {
    edges
        .windows(2)
        .map(|e| {
            let (r, w) = gauss_legendre_on(24, e[0], e[1]);
            let dt = 2.0 * PI / angles as f64;
            r.iter()
                .zip(&w)
                .map(|(&r, &w)| {
                    let ring: f64 = (0..angles).map(|j| f(Complex64::from_polar(r, (j as f64 + 0.5) * dt))).sum();
                    w * r * ring * dt
                })
                .sum()
        })
        .collect()
}
