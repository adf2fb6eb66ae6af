//! Eigenvalues of `2N × 2N` complex representations of quaternionic Ginibre matrices.

use super::{stream_rng, Method, SampleSet};
use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::{Rng, RngExt};
use rand_distr::StandardNormal;
use rayon::prelude::*;

pub const MAX_MATRIX_N: usize = 64;
pub const MAX_MATRIX_COUNT: usize = 100_000;
const PAIRING_TOL: f64 = 1e-8;

/// Standard complex Gaussian, `E|a|² = 1`.
fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
}

/// `[[A, B], [−B̄, Ā]]` with iid standard complex Gaussian `A`, `B`; the
/// eigenvalue weight is then `e^{−|z|²}`.
fn quaternion_matrix<R: Rng>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let mut q = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let a = gaussian(rng);
            let b = gaussian(rng);
            q[(i, j)] = a;
            q[(i, j + n)] = b;
            q[(i + n, j)] = -b.conj();
            q[(i + n, j + n)] = a.conj();
        }
    }
    q
}

/// Upper-half-plane representatives, after checking that the spectrum is closed under conjugation.
fn pair_up(mut ev: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let n = ev.len() / 2;
    ev.sort_by(|a, b| b.im.total_cmp(&a.im));
    let mut lower: Vec<Complex64> = ev[n..].to_vec();
    let upper = &ev[..n];
    let mut residual: f64 = 0.0;
    for z in upper {
        let (k, d) = lower
            .iter()
            .enumerate()
            .map(|(k, w)| (k, (z.conj() - w).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::Sampler("odd spectrum".into()))?;
        residual = residual.max(d);
        lower.swap_remove(k);
    }
    if residual > PAIRING_TOL {
        return Err(Error::Sampler(format!("pairing residual {residual:e} above {PAIRING_TOL:e}")));
    }
    if let Some(z) = upper.iter().find(|z| z.im <= 0.0) {
        return Err(Error::Sampler(format!("real eigenvalue {z} has no upper representative")));
    }
    Ok(upper.to_vec())
}

fn draw(n: usize, seed: u64, index: u64) -> Result<Vec<Complex64>> {
    let mut rng = stream_rng(seed, index);
    let q = quaternion_matrix(n, &mut rng);
    let schur = Schur::try_new(q, f64::EPSILON, 1000 * n).ok_or(Error::EigenSolver)?;
    let ev = schur.eigenvalues().ok_or(Error::EigenSolver)?;
    pair_up(ev.iter().copied().collect())
}

/// `count` independent quaternionic Ginibre spectra of size `N`; draw `i` uses stream `i` of `seed`.
pub fn sample_matrix_ginibre(n: usize, count: usize, seed: u64) -> Result<SampleSet> {
    if n == 0 || n > MAX_MATRIX_N {
        return Err(Error::InvalidParameter(format!("N = {n} must lie in 1..={MAX_MATRIX_N}")));
    }
    if count == 0 || count > MAX_MATRIX_COUNT {
        return Err(Error::InvalidParameter(format!("count = {count} must lie in 1..={MAX_MATRIX_COUNT}")));
    }
    let configs = (0..count as u64).into_par_iter().map(|i| draw(n, seed, i)).collect::<Result<Vec<_>>>()?;
    Ok(SampleSet {
        configs,
        ensemble: EnsembleSpec::Ginibre,
        method: Method::Matrix,
        rng_seed: seed,
        chains: count,
        acceptance: None,
        steps: Vec::new(),
    })
}
