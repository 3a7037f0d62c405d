use std::ops::{AddAssign, Mul};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::grid::boundary_grid;
use crate::series::{validate_self_map, CoefficientVector, Symbol};

/// Uniform boundary samples used when a builder validates its symbol.
pub const VALIDATION_SAMPLES: usize = 4096;
/// Columns per independently seeded block of the power recursion.
const BLOCK: usize = 32;

/// Dense column-major matrix standing for a compressed operator on `H²`.
#[derive(Clone, Debug, Serialize)]
pub struct TruncatedOperator {
    rows: usize,
    cols: usize,
    #[serde(skip)]
    data: Vec<Complex64>,
    real: bool,
    pub label: String,
}

impl TruncatedOperator {
    pub fn from_columns(rows: usize, columns: Vec<Vec<Complex64>>, label: String) -> Self {
        let cols = columns.len();
        let mut data = Vec::with_capacity(rows * cols);
        for c in columns {
            assert_eq!(c.len(), rows, "column length mismatch");
            data.extend(c);
        }
        let real = data.iter().all(|v| v.im == 0.0);
        Self {
            rows,
            cols,
            data,
            real,
            label,
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        label: String,
        f: impl Fn(usize, usize) -> Complex64,
    ) -> Self {
        let columns = (0..cols)
            .map(|j| (0..rows).map(|i| f(i, j)).collect())
            .collect();
        Self::from_columns(rows, columns, label)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.rows + i]
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// `self − other`; shapes must agree.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data: Vec<Complex64> = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        let real = data.iter().all(|v| v.im == 0.0);
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
            real,
            label: format!("{} - {}", self.label, other.label),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, format!("{} * {}", self.label, other.label), |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (other.rows, other.cols);
        Self::from_fn(
            self.rows * r,
            self.cols * c,
            format!("({}) x ({})", self.label, other.label),
            |i, j| self.get(i / r, j / c) * other.get(i % r, j % c),
        )
    }

    /// Leading `rows × cols` block.
    pub fn block(&self, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, self.label.clone(), |i, j| self.get(i, j))
    }

    /// Squared Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub(crate) fn data(&self) -> &[Complex64] {
        &self.data
    }
}

fn cauchy<T>(a: &[T], b: &[T], n: usize) -> Vec<T>
where
    T: Copy + Default + AddAssign + Mul<Output = T>,
{
    let mut out = vec![T::default(); n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn pow_trunc<T>(base: &[T], k: usize, one: T, n: usize) -> Vec<T>
where
    T: Copy + Default + AddAssign + Mul<Output = T>,
{
    let mut result = vec![T::default(); n];
    result[0] = one;
    let mut sq = base[..n.min(base.len())].to_vec();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = cauchy(&result, &sq, n);
        }
        e >>= 1;
        if e > 0 {
            sq = cauchy(&sq, &sq, n);
        }
    }
    result
}

/// Columns `weight · base^k` for `k < cols`, truncated to `rows` terms.
///
/// Each block of columns starts from a power computed by repeated squaring
/// and proceeds by the recursion `base^{k+1} = base^k · base`; the block
/// layout is fixed, so results do not depend on the thread count.
fn power_columns<T>(base: &[T], weight: Option<&[T]>, rows: usize, cols: usize, one: T) -> Vec<Vec<T>>
where
    T: Copy + Default + AddAssign + Mul<Output = T> + Send + Sync,
{
    let base = &base[..rows.min(base.len())];
    let blocks: Vec<Vec<Vec<T>>> = (0..cols.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let start = b * BLOCK;
            let end = (start + BLOCK).min(cols);
            let mut cur = pow_trunc(base, start, one, rows);
            let mut out = Vec::with_capacity(end - start);
            for k in start..end {
                if k > start {
                    cur = cauchy(&cur, base, rows);
                }
                out.push(match weight {
                    Some(w) => cauchy(w, &cur, rows),
                    None => cur.clone(),
                });
            }
            out
        })
        .collect();
    blocks.into_iter().flatten().collect()
}

/// `rows × cols` matrix whose column `k` is `weight · base^k` truncated.
pub(crate) fn power_matrix(
    base: &CoefficientVector,
    weight: Option<&CoefficientVector>,
    rows: usize,
    cols: usize,
    label: String,
) -> TruncatedOperator {
    let real = base.is_real() && weight.map_or(true, CoefficientVector::is_real);
    let columns: Vec<Vec<Complex64>> = if real {
        let b: Vec<f64> = base.as_slice().iter().map(|c| c.re).collect();
        let w: Option<Vec<f64>> = weight.map(|w| w.as_slice().iter().map(|c| c.re).collect());
        power_columns(&b, w.as_deref(), rows, cols, 1.0)
            .into_iter()
            .map(|c| c.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            .collect()
    } else {
        power_columns(
            base.as_slice(),
            weight.map(CoefficientVector::as_slice),
            rows,
            cols,
            Complex64::new(1.0, 0.0),
        )
    };
    TruncatedOperator::from_columns(rows, columns, label)
}

pub(crate) fn require_self_map(phi: &Symbol) -> Result<()> {
    if !phi.is_self_map() {
        return Err(Error::NotSelfMap {
            name: phi.name().to_string(),
            max_modulus: f64::NAN,
        });
    }
    let report = validate_self_map(phi, VALIDATION_SAMPLES);
    if report.max_modulus > 1.0 + crate::series::SELF_MAP_TOL {
        return Err(Error::NotSelfMap {
            name: phi.name().to_string(),
            max_modulus: report.max_modulus,
        });
    }
    Ok(())
}

/// `N × N` truncation of `C_φ`: column `k` holds the first `N` Taylor
/// coefficients of `φ^k`.
pub fn composition_matrix(phi: &Symbol, n: usize) -> Result<TruncatedOperator> {
    if n < 2 {
        return Err(Error::invalid("N", "truncation must be at least 2"));
    }
    require_self_map(phi)?;
    let base = phi.taylor(n)?;
    Ok(power_matrix(&base, None, n, n, format!("C[{}]", phi.name())))
}

/// `N × N` truncation of `C_φ − C_ψ`.
pub fn difference_matrix(phi: &Symbol, psi: &Symbol, n: usize) -> Result<TruncatedOperator> {
    Ok(composition_matrix(phi, n)?.sub(&composition_matrix(psi, n)?))
}

/// Sampled boundary sup-norm `max |f(e^{it})|` on the standard grid.
pub fn boundary_sup(f: &Symbol) -> Result<f64> {
    let mut m = 0.0_f64;
    for t in boundary_grid(VALIDATION_SAMPLES) {
        let v = f.evaluate(Complex64::from_polar(1.0, t))?.norm();
        m = m.max(v);
    }
    Ok(m)
}

/// `N × N` truncation of `M_ω C_φ`: column `k` holds `ω·φ^k`.
pub fn weighted_composition_matrix(omega: &Symbol, phi: &Symbol, n: usize) -> Result<TruncatedOperator> {
    if n < 2 {
        return Err(Error::invalid("N", "truncation must be at least 2"));
    }
    require_self_map(phi)?;
    boundary_sup(omega)?;
    let base = phi.taylor(n)?;
    let w = omega.taylor(n)?;
    Ok(power_matrix(
        &base,
        Some(&w),
        n,
        n,
        format!("M[{}] C[{}]", omega.name(), phi.name()),
    ))
}

/// Classical bound `‖C_φ‖ ≤ √((1 + |φ(0)|)/(1 − |φ(0)|))`.
pub fn operator_norm_bound(phi: &Symbol) -> Result<f64> {
    let a = phi.evaluate(Complex64::new(0.0, 0.0))?.norm();
    if a >= 1.0 {
        return Err(Error::BoundaryFixedOrigin);
    }
    Ok(((1.0 + a) / (1.0 - a)).sqrt())
}
