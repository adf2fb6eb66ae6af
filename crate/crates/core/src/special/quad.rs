//! Gauss–Legendre rules and the generic quadrature rule container.

use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

/// Geometry of the set a rule integrates over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainTag {
    RealLineSegment,
    PlanarRegion,
    EllipticContour,
}

/// Nodes and weights; planar weights already contain the measure `dμ`.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
    pub domain: DomainTag,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i f(z_i)` in node order.
    pub fn integrate<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Complex64::new(0.0, 0.0), |acc, (&z, &w)| acc + w * f(z))
    }

    pub fn integrate_real<F: Fn(Complex64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

type Cache = Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>;

/// `n`-point Gauss–Legendre nodes and weights on `[−1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "gauss_legendre: n must be positive");
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard.entry(n).or_insert_with(|| legendre_nodes(n)).clone()
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    (x.iter().map(|t| c + h * t).collect(), w.iter().map(|v| v * h).collect())
}

/// Composite Gauss–Legendre over consecutive breakpoints.
pub fn composite_on(breaks: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for pair in breaks.windows(2) {
        let (x, w) = gauss_legendre_on(n, pair[0], pair[1]);
        xs.extend(x);
        ws.extend(w);
    }
    (xs, ws)
}

/// `∫_a^b f` by composite Gauss–Legendre, doubling panels until two estimates agree.
pub fn integrate_interval<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> (Complex64, f64) {
    let eval = |panels: usize| {
        let breaks: Vec<f64> = (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect();
        let (x, w) = composite_on(&breaks, 20);
        x.iter().zip(&w).fold(Complex64::new(0.0, 0.0), |s, (&t, &wt)| s + wt * f(t))
    };
    let mut panels = 1;
    let mut prev = eval(panels);
    let mut err = f64::INFINITY;
    while panels < 1 << 12 {
        panels *= 2;
        let cur = eval(panels);
        err = (cur - prev).norm();
        prev = cur;
        if err <= tol * (1.0 + cur.norm()) {
            break;
        }
    }
    (prev, err)
}
