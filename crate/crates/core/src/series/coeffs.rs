//! Truncated Maclaurin coefficient vectors and their arithmetic.

use std::ops::{Add, Index, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// First `N` Taylor coefficients `c_0, ..., c_{N-1}` of a function analytic at 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    coeffs: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order],
        }
    }

    /// The constant `c` truncated to `order` terms.
    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut v = Self::zeros(order);
        if order > 0 {
            v.coeffs[0] = c;
        }
        v
    }

    /// The monomial `z` truncated to `order` terms.
    pub fn variable(order: usize) -> Self {
        let mut v = Self::zeros(order);
        if order > 1 {
            v.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        v
    }

    /// Binomial series of `(1 - z)^beta`.
    pub fn one_minus_z_pow(beta: f64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order);
        let mut c = 1.0_f64;
        for j in 0..order {
            if j > 0 {
                c *= (j as f64 - 1.0 - beta) / j as f64;
            }
            coeffs.push(Complex64::new(c, 0.0));
        }
        Self { coeffs }
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn truncated(&self, order: usize) -> Self {
        let mut coeffs: Vec<_> = self.coeffs.iter().copied().take(order).collect();
        coeffs.resize(order, Complex64::new(0.0, 0.0));
        Self { coeffs }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Truncated Cauchy product; the result has the order of `self`.
    pub fn mul_truncated(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        cauchy_into(&self.coeffs, &other.coeffs, &mut out);
        Self { coeffs: out }
    }

    /// `self^k` by repeated squaring of truncated products.
    pub fn powi(&self, k: u32) -> Self {
        let n = self.order();
        let mut result = Self::constant(Complex64::new(1.0, 0.0), n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_truncated(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_truncated(&base);
            }
        }
        result
    }

    /// `exp(self)` from the recurrence `E' = u' E`.
    pub fn exp(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(Self::zeros(0));
        }
        let u0 = self.coeffs[0];
        if !u0.re.is_finite() || !u0.im.is_finite() {
            return Err(Error::ExpOfSingularSeries);
        }
        let weighted: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * k as f64)
            .collect();
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[0] = u0.exp();
        for j in 1..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 1..=j {
                s += weighted[k] * e[j - k];
            }
            e[j] = s / j as f64;
        }
        if e.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::ExpOfSingularSeries);
        }
        Ok(Self { coeffs: e })
    }

    /// `1 / self` from the division recurrence.
    pub fn recip(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(Self::zeros(0));
        }
        let g0 = self.coeffs[0];
        if g0.norm() == 0.0 {
            return Err(Error::DivisionByZeroConstantTerm);
        }
        let inv0 = g0.inv();
        let mut h = vec![Complex64::new(0.0, 0.0); n];
        h[0] = inv0;
        for j in 1..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 1..=j {
                s += self.coeffs[k] * h[j - k];
            }
            h[j] = -s * inv0;
        }
        Ok(Self { coeffs: h })
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// True when only the constant term is non-zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.norm_sqr() == 0.0)
    }
}

/// `out[j] = sum_{i <= j} a[i] b[j - i]` for `j < out.len()`.
pub(crate) fn cauchy_into(a: &[Complex64], b: &[Complex64], out: &mut [Complex64]) {
    for (j, slot) in out.iter_mut().enumerate() {
        let mut s = Complex64::new(0.0, 0.0);
        let lo = j.saturating_sub(b.len().saturating_sub(1));
        for i in lo..=j.min(a.len().saturating_sub(1)) {
            s += a[i] * b[j - i];
        }
        *slot = s;
    }
}

impl Index<usize> for CoefficientVector {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.coeffs[k]
    }
}

impl Add for &CoefficientVector {
    type Output = CoefficientVector;

    fn add(self, rhs: Self) -> CoefficientVector {
        let n = self.order().max(rhs.order());
        let a = self.truncated(n);
        let b = rhs.truncated(n);
        CoefficientVector {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CoefficientVector {
    type Output = CoefficientVector;

    fn sub(self, rhs: Self) -> CoefficientVector {
        let n = self.order().max(rhs.order());
        let a = self.truncated(n);
        let b = rhs.truncated(n);
        CoefficientVector {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn binomial_half() {
        let v = CoefficientVector::one_minus_z_pow(0.5, 4);
        let expect = [1.0, -0.5, -0.125, -0.0625];
        for (a, b) in v.as_slice().iter().zip(expect) {
            assert!((a.re - b).abs() < 1e-15);
        }
    }

    #[test]
    fn integer_binomial_terminates() {
        let v = CoefficientVector::one_minus_z_pow(3.0, 6);
        let expect = [1.0, -3.0, 3.0, -1.0, 0.0, 0.0];
        for (a, b) in v.as_slice().iter().zip(expect) {
            assert_eq!(a.re, b);
        }
    }

    #[test]
    fn recip_of_one_minus_z_is_geometric() {
        let v = CoefficientVector::one_minus_z_pow(1.0, 8).recip().unwrap();
        assert!(v.as_slice().iter().all(|x| (x.re - 1.0).abs() < 1e-15));
    }

    #[test]
    fn recip_zero_constant_term() {
        let v = CoefficientVector::variable(4);
        assert!(matches!(v.recip(), Err(Error::DivisionByZeroConstantTerm)));
    }

    #[test]
    fn exp_of_z() {
        let e = CoefficientVector::variable(10).exp().unwrap();
        let mut fact = 1.0;
        for k in 0..10 {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((e[k].re - 1.0 / fact).abs() < 1e-15);
        }
    }

    #[test]
    fn exp_of_infinite_constant() {
        let v = CoefficientVector::constant(c(f64::NEG_INFINITY), 4);
        assert!(matches!(v.exp(), Err(Error::ExpOfSingularSeries)));
    }

    #[test]
    fn powi_matches_binomial() {
        let half = CoefficientVector::new(vec![c(0.5), c(0.5), c(0.0), c(0.0), c(0.0)]);
        let p = half.powi(4);
        let expect = [1.0, 4.0, 6.0, 4.0, 1.0];
        for (a, b) in p.as_slice().iter().zip(expect) {
            assert!((a.re - b / 16.0).abs() < 1e-15);
        }
    }
}
