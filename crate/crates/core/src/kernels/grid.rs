//! Kernel values on point grids and their CSV/JSON export.

use crate::error::{Error, Result};
use crate::skew::fmt_f64;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const GRID_HEADER: [&str; 6] = ["re(z)", "im(z)", "re(u)", "im(u)", "re(val)", "im(val)"];

/// Sidecar metadata; `n = None` marks a limiting kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub ensemble: String,
    pub tau: f64,
    pub nu: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelGrid {
    pub points: Vec<(Complex64, Complex64)>,
    pub values: Vec<Complex64>,
    pub meta: GridMeta,
}

impl KernelGrid {
    /// Evaluates `f` at every point pair, in parallel; results do not depend on the thread count.
    pub fn evaluate<F>(points: Vec<(Complex64, Complex64)>, meta: GridMeta, f: F) -> Result<Self>
    where
        F: Fn(Complex64, Complex64) -> Result<Complex64> + Sync,
    {
        let values = points.par_iter().map(|&(z, u)| f(z, u)).collect::<Result<Vec<_>>>()?;
        Ok(KernelGrid { points, values, meta })
    }

    /// Pairs `(z, u)` with `z` on an `nx × ny` grid of `[x0, x1] × [y0, y1]` and `u` fixed.
    pub fn square(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64), u: Complex64) -> Vec<(Complex64, Complex64)> {
        let at = |lo: f64, hi: f64, i: usize, n: usize| if n <= 1 { lo } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                out.push((Complex64::new(at(x.0, x.1, i, nx), at(y.0, y.1, j, ny)), u));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        if self.points.len() != self.values.len() {
            return Err(Error::InvalidParameter("grid points and values differ in length".into()));
        }
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Io(e.to_string());
        out.write_record(GRID_HEADER).map_err(io)?;
        for (&(z, u), v) in self.points.iter().zip(&self.values) {
            out.write_record([z.re, z.im, u.re, u.im, v.re, v.im].map(fmt_f64)).map_err(io)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn meta_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.meta).map_err(|e| Error::Io(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout_and_determinism() {
        let meta = GridMeta { ensemble: "elliptic".into(), tau: 0.5, nu: None, n: None };
        let pts = KernelGrid::square(3, 2, (-1.0, 1.0), (0.0, 1.0), Complex64::new(0.0, 0.0));
        let g = KernelGrid::evaluate(pts.clone(), meta.clone(), |z, u| Ok(z - u)).unwrap();
        assert_eq!(g.len(), 6);
        let mut a = Vec::new();
        g.write_csv(&mut a).unwrap();
        let text = String::from_utf8(a.clone()).unwrap();
        assert!(text.starts_with("re(z),im(z),re(u),im(u),re(val),im(val)\n"));
        assert_eq!(text.lines().count(), 7);
        let mut b = Vec::new();
        KernelGrid::evaluate(pts, meta, |z, u| Ok(z - u)).unwrap().write_csv(&mut b).unwrap();
        assert_eq!(a, b);
        assert!(g.meta_json().unwrap().contains("\"N\": null"));
    }
}
