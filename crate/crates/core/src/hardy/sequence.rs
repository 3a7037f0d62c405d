use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metric::pseudo_distance;
use crate::error::{Error, Result};

/// Minimum pairwise distance for a sequence to count as distinct.
pub const DISTINCT_TOL: f64 = 1e-15;

/// Finite ordered list of points in the open disc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSequence {
    points: Vec<Complex64>,
    distinct: bool,
}

impl PointSequence {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if let Some(index) = points.iter().position(|z| !(z.norm() < 1.0)) {
            return Err(Error::OutsideDisc { index });
        }
        let distinct = first_duplicate(&points).is_none();
        Ok(Self { points, distinct })
    }

    pub fn from_real(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_distinct(&self) -> bool {
        self.distinct
    }

    /// Concatenation `self ∪ other`, keeping order.
    pub fn union(&self, other: &PointSequence) -> Result<PointSequence> {
        let mut pts = self.points.clone();
        pts.extend_from_slice(&other.points);
        PointSequence::new(pts)
    }

    pub(crate) fn require_distinct(&self) -> Result<()> {
        match first_duplicate(&self.points) {
            Some((i, j)) => Err(Error::DuplicatePoints { i, j }),
            None => Ok(()),
        }
    }
}

fn first_duplicate(points: &[Complex64]) -> Option<(usize, usize)> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm() < DISTINCT_TOL {
                return Some((i, j));
            }
        }
    }
    None
}

/// `log δ(Z)`: minimum over `j` of `Σ_{k≠j} log ρ(z_j, z_k)`. Zero for a
/// singleton or empty sequence.
pub fn log_uniform_separation(z: &PointSequence) -> Result<f64> {
    z.require_distinct()?;
    let pts = z.points();
    let sums: Vec<f64> = (0..pts.len())
        .into_par_iter()
        .map(|j| {
            let mut s = 0.0;
            for (k, &w) in pts.iter().enumerate() {
                if k != j {
                    s += pseudo_distance(pts[j], w).map(f64::ln).unwrap_or(0.0);
                }
            }
            s
        })
        .collect();
    Ok(sums.into_iter().fold(0.0, f64::min))
}

/// `δ(Z) = inf_j Π_{k≠j} ρ(z_j, z_k)`.
pub fn uniform_separation(z: &PointSequence) -> Result<f64> {
    Ok(log_uniform_separation(z)?.exp())
}
