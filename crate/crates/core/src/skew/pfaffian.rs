//! Pfaffians of antisymmetric matrices.

use crate::error::{Error, Result};
use crate::poly::Scalar;
use nalgebra::DMatrix;

fn check_shape<T: Scalar + nalgebra::Scalar>(m: &DMatrix<T>) -> Result<()> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Pfaffian(format!("matrix is {}×{}, not square", n, m.ncols())));
    }
    if n % 2 == 1 {
        return Err(Error::Pfaffian(format!("odd dimension {n}")));
    }
    let scale = m.iter().map(|v| v.modulus()).fold(0.0, f64::max);
    for i in 0..n {
        for j in 0..=i {
            let s = (m[(i, j)] + m[(j, i)]).modulus();
            if s > 1e-12 * scale.max(f64::MIN_POSITIVE) || !m[(i, j)].is_finite_val() {
                return Err(Error::Pfaffian(format!("not antisymmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Pfaffian by skew-symmetric Gaussian elimination with pivoting (Parlett–Reid).
///
/// Matrices up to 6×6 are expanded along the first row instead.
pub fn pfaffian<T: Scalar + nalgebra::Scalar>(m: &DMatrix<T>) -> Result<T> {
    check_shape(m)?;
    if m.nrows() <= 6 {
        return Ok(expand(m, &(0..m.nrows()).collect::<Vec<_>>()));
    }
    Ok(parlett_reid(m.clone()))
}

/// Parlett–Reid elimination for any even size, skipping the small-size expansion.
pub fn pfaffian_elimination<T: Scalar + nalgebra::Scalar>(m: &DMatrix<T>) -> Result<T> {
    check_shape(m)?;
    Ok(parlett_reid(m.clone()))
}

/// Expansion along the first row; exponential cost, for small matrices and tests.
pub fn pfaffian_expansion<T: Scalar + nalgebra::Scalar>(m: &DMatrix<T>) -> Result<T> {
    check_shape(m)?;
    if m.nrows() > 14 {
        return Err(Error::Pfaffian("minor expansion limited to 14×14".into()));
    }
    Ok(expand(m, &(0..m.nrows()).collect::<Vec<_>>()))
}

fn expand<T: Scalar + nalgebra::Scalar>(m: &DMatrix<T>, idx: &[usize]) -> T {
    match idx.len() {
        0 => T::one(),
        2 => m[(idx[0], idx[1])],
        _ => {
            let first = idx[0];
            let mut total = T::zero();
            for k in 1..idx.len() {
                let a = m[(first, idx[k])];
                if a == T::zero() {
                    continue;
                }
                let rest: Vec<usize> = idx[1..].iter().copied().filter(|&j| j != idx[k]).collect();
                let term = a * expand(m, &rest);
                // sign (−1)^{k+1} with k counted from 1
                total = if k % 2 == 1 { total + term } else { total - term };
            }
            total
        }
    }
}

fn parlett_reid<T: Scalar + nalgebra::Scalar>(mut a: DMatrix<T>) -> T {
    let n = a.nrows();
    let mut pf = T::one();
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = a[(k + 1, k)].modulus();
        for i in k + 2..n {
            let v = a[(i, k)].modulus();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let piv = a[(k, k + 1)];
        if piv == T::zero() {
            return T::zero();
        }
        pf = pf * piv;
        if k + 2 < n {
            let tau: Vec<T> = (k + 2..n).map(|j| a[(k, j)] / piv).collect();
            let col: Vec<T> = (k + 2..n).map(|j| a[(j, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[(i, j)] = a[(i, j)] + tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    pf
}
