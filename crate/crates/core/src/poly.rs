//! Dense polynomials with coefficients stored lowest degree first.

use crate::error::{Error, Result};
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Coefficient field: `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
{
    fn to_c64(self) -> Complex64;
    fn modulus(self) -> f64;
    fn from_f64(x: f64) -> Self;
    fn is_finite_val(self) -> bool;
}

impl Scalar for f64 {
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn is_finite_val(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Complex64 {
    fn to_c64(self) -> Complex64 {
        self
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn is_finite_val(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T = f64> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    /// Builds a polynomial and trims exact trailing zeros.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == T::zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![T::zero()] }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![T::one()] }
    }

    pub fn monomial(n: usize) -> Self {
        let mut c = vec![T::zero(); n + 1];
        c[n] = T::one();
        Poly { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> T {
        self.coeffs[self.coeffs.len() - 1]
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).copied().unwrap_or_else(T::zero)
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c.to_c64())
    }

    /// Horner evaluation in the coefficient field.
    pub fn eval_t(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn scale(&self, s: T) -> Self {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Multiply by `z`.
    pub fn shift(&self) -> Self {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(T::zero());
        c.extend_from_slice(&self.coeffs);
        Poly::new(c)
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: T, other: &Poly<T>) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + s * other.coeff(k)).collect())
    }

    /// Divide by `(z − m)`, returning the quotient and the remainder `self(m)`.
    pub fn div_linear(&self, m: T) -> (Poly<T>, T) {
        let n = self.degree();
        if n == 0 {
            return (Poly::zero(), self.coeffs[0]);
        }
        let mut q = vec![T::zero(); n];
        let mut acc = self.coeffs[n];
        for k in (0..n).rev() {
            q[k] = acc;
            acc = self.coeffs[k] + acc * m;
        }
        (Poly::new(q), acc)
    }

    /// Quotient by `(z − m)` when the division is exact up to `rel_tol·‖self‖`.
    ///
    /// For `|m| > 1` the quotient is built from the constant term upward, which
    /// divides by `m` at each step instead of multiplying.
    pub fn div_linear_exact(&self, m: T, rel_tol: f64) -> Result<Poly<T>> {
        let (q, rem) = self.div_linear(m);
        let norm = self.norm_inf();
        // the remainder is a sum of terms of size |c_k||m|^k
        let scale = self.coeffs.iter().enumerate().map(|(k, c)| c.modulus() * m.modulus().powi(k as i32)).fold(0.0, f64::max);
        if rem.modulus() > rel_tol * scale.max(norm) {
            return Err(Error::InexactDivision { remainder: rem.modulus(), norm: scale.max(norm) });
        }
        if m.modulus() <= 1.0 || q.coeffs.len() < 2 {
            return Ok(q);
        }
        // p_0 = −m q_0, p_k = q_{k−1} − m q_k
        let n = self.degree();
        let mut c = vec![T::zero(); n];
        let mut prev = T::zero();
        for k in 0..n {
            prev = (prev - self.coeffs[k]) / m;
            c[k] = prev;
        }
        Ok(Poly::new(c))
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.modulus()).fold(0.0, f64::max)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        let l = self.leading();
        Poly::new(self.coeffs.iter().map(|&c| c / l).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite_val())
    }

    /// Maximal coefficientwise distance.
    pub fn max_diff(&self, other: &Poly<T>) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|k| (self.coeff(k) - other.coeff(k)).modulus()).fold(0.0, f64::max)
    }

    pub fn to_complex(&self) -> Poly<Complex64> {
        Poly { coeffs: self.coeffs.iter().map(|c| c.to_c64()).collect() }
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: &Poly<T>) -> Poly<T> {
        self.axpy(T::one(), o)
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: &Poly<T>) -> Poly<T> {
        self.axpy(-T::one(), o)
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: &Poly<T>) -> Poly<T> {
        let mut c = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j] + a * b;
            }
        }
        Poly::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = Poly::new(vec![1.0, 2.0, 1.0]); // (1+z)²
        let (q, r) = p.div_linear(-1.0);
        assert_eq!(q.coeffs, vec![1.0, 1.0]);
        assert_eq!(r, 0.0);
        let (_, r) = p.div_linear(1.0);
        assert_eq!(r, 4.0);
        assert!(p.div_linear_exact(1.0, 1e-9).is_err());
        let big = Poly::new(vec![-3.0e3, 1.0 - 3.0e3 * 2.0, 2.0]); // (z − 3000)(2z + 1)
        assert!(big.div_linear_exact(3.0e3, 1e-9).unwrap().max_diff(&Poly::new(vec![1.0, 2.0])) < 1e-12);
        let s = &q * &q;
        assert_eq!(s, p);
        assert_eq!(Poly::<f64>::monomial(3).shift().degree(), 4);
        assert_eq!(p.eval(Complex64::new(0.0, 1.0)), Complex64::new(0.0, 2.0));
    }

    #[test]
    fn conjugate_symmetry_is_exact() {
        let p = Poly::new(vec![0.3, -1.7, 2.25, 0.125, -3.5]);
        let z = Complex64::new(0.37, 1.91);
        assert_eq!(p.eval(z.conj()), p.eval(z).conj());
    }
}
