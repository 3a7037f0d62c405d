use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::coeffs::CoefficientVector;
use crate::error::{Error, Result};

/// Expression tree for analytic functions on the closed disc.
///
/// Real powers only appear as `(1 - z)^beta` on the principal branch, whose
/// cut `[1, +inf)` meets the closed disc only at `z = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Expr {
    Z,
    Const(Complex64),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    PowInt(Box<Expr>, u32),
    OneMinusZPow(f64),
    Exp(Box<Expr>),
    Recip(Box<Expr>),
}

impl Expr {
    pub fn constant(c: Complex64) -> Self {
        Expr::Const(c)
    }

    pub fn real(x: f64) -> Self {
        Expr::Const(Complex64::new(x, 0.0))
    }

    pub fn scaled(c: Complex64, e: Expr) -> Self {
        Expr::Mul(vec![Expr::Const(c), e])
    }

    pub fn neg(e: Expr) -> Self {
        Expr::scaled(Complex64::new(-1.0, 0.0), e)
    }

    /// Value at `z`; infinities are propagated so that radial limits at the
    /// branch point come out right (`exp(-inf) = 0`, `1/inf = 0`).
    pub(crate) fn eval_raw(&self, z: Complex64) -> Result<Complex64> {
        Ok(match self {
            Expr::Z => z,
            Expr::Const(c) => *c,
            Expr::Add(terms) => {
                let mut s = Complex64::new(0.0, 0.0);
                for t in terms {
                    s += t.eval_raw(z)?;
                }
                s
            }
            Expr::Mul(factors) => {
                let mut p = Complex64::new(1.0, 0.0);
                for f in factors {
                    p = mul_inf(p, f.eval_raw(z)?);
                }
                p
            }
            Expr::PowInt(base, k) => base.eval_raw(z)?.powu(*k),
            Expr::OneMinusZPow(beta) => one_minus_z_pow(z, *beta),
            Expr::Exp(inner) => {
                let u = inner.eval_raw(z)?;
                if u.re == f64::NEG_INFINITY {
                    Complex64::new(0.0, 0.0)
                } else if !is_finite(u) {
                    return Err(Error::NonFinite { at: z });
                } else {
                    u.exp()
                }
            }
            Expr::Recip(inner) => {
                let g = inner.eval_raw(z)?;
                if g.re.is_infinite() || g.im.is_infinite() {
                    Complex64::new(0.0, 0.0)
                } else if g.norm() == 0.0 {
                    return Err(Error::NonFinite { at: z });
                } else {
                    g.inv()
                }
            }
        })
    }

    pub(crate) fn taylor(&self, order: usize) -> Result<CoefficientVector> {
        Ok(match self {
            Expr::Z => CoefficientVector::variable(order),
            Expr::Const(c) => CoefficientVector::constant(*c, order),
            Expr::Add(terms) => {
                let mut s = CoefficientVector::zeros(order);
                for t in terms {
                    s = &s + &t.taylor(order)?;
                }
                s
            }
            Expr::Mul(factors) => {
                let mut p = CoefficientVector::constant(Complex64::new(1.0, 0.0), order);
                for f in factors {
                    let g = match f {
                        Expr::Const(c) => {
                            p = p.scale(*c);
                            continue;
                        }
                        other => other.taylor(order)?,
                    };
                    p = p.mul_truncated(&g);
                }
                p
            }
            Expr::PowInt(base, k) => base.taylor(order)?.powi(*k),
            Expr::OneMinusZPow(beta) => CoefficientVector::one_minus_z_pow(*beta, order),
            Expr::Exp(inner) => inner.taylor(order)?.exp()?,
            Expr::Recip(inner) => inner.taylor(order)?.recip()?,
        })
    }
}

fn is_finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

/// Complex product that keeps `(-1) * (+inf) = -inf` instead of producing NaN
/// in the imaginary part.
fn mul_inf(a: Complex64, b: Complex64) -> Complex64 {
    if is_finite(a) && is_finite(b) {
        a * b
    } else if a.im == 0.0 && b.im == 0.0 {
        Complex64::new(a.re * b.re, 0.0)
    } else {
        a * b
    }
}

fn one_minus_z_pow(z: Complex64, beta: f64) -> Complex64 {
    let w = Complex64::new(1.0, 0.0) - z;
    if w.norm() == 0.0 {
        return if beta > 0.0 {
            Complex64::new(0.0, 0.0)
        } else if beta == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(f64::INFINITY, 0.0)
        };
    }
    if beta == beta.trunc() && beta.abs() <= 64.0 {
        return w.powi(beta as i32);
    }
    (w.ln() * beta).exp()
}
