use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite Blaschke product `Π (|a|/a)(a − z)/(1 − āz)`, with factor `z` for `a = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        if let Some(index) = zeros.iter().position(|a| !(a.norm() < 1.0)) {
            return Err(Error::OutsideDisc { index });
        }
        Ok(Self { zeros })
    }

    /// The constant `1`.
    pub fn unit() -> Self {
        Self { zeros: Vec::new() }
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        self.zeros.iter().fold(one, |acc, &a| {
            if a == Complex64::new(0.0, 0.0) {
                acc * z
            } else {
                acc * (a.norm() / a) * (a - z) / (one - a.conj() * z)
            }
        })
    }

    /// `|B(z)|` as a product of pseudohyperbolic distances; avoids phase work.
    pub fn modulus(&self, z: Complex64) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        self.zeros
            .iter()
            .map(|&a| (a - z).norm() / (one - a.conj() * z).norm())
            .product()
    }
}

/// Alias matching the operation name used elsewhere in the crate.
pub fn blaschke_eval(b: &BlaschkeProduct, z: Complex64) -> Complex64 {
    b.eval(z)
}
