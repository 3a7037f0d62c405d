use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::coeffs::CoefficientVector;
use super::expr::Expr;
use crate::error::{Error, Result};

/// Default coefficient of the corner perturbation. Any sufficiently small
/// value keeps the map inside the disc; this one is checked by sampling.
pub const DEFAULT_CORNER_C: f64 = 0.01;

/// Which catalogue entry a symbol came from, with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Identity,
    Constant { c: Complex64 },
    Dilation { a: Complex64 },
    HalfMap,
    PowerPerturbation { alpha: f64, c: f64 },
    CornerMap,
    CornerPerturbation { c: f64 },
    WeightPower { alpha: f64 },
    Mobius { a: Complex64, theta: f64 },
    Custom,
}

/// An analytic function on the disc (a self-map or a weight) with a
/// canonical textual name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Symbol {
    name: String,
    family: Family,
    expr: Expr,
    self_map: bool,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn fmt_c(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// `e^{i pi alpha}`, exact when `2 alpha` is an integer.
fn unit_phase(alpha: f64) -> Complex64 {
    let twice = 2.0 * alpha;
    if twice == twice.trunc() && twice.abs() < 1e15 {
        match (twice as i64).rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, PI * alpha)
    }
}

fn half_map_expr() -> Expr {
    Expr::Add(vec![Expr::real(0.5), Expr::scaled(Complex64::new(0.5, 0.0), Expr::Z)])
}

fn corner_map_expr() -> Expr {
    Expr::Recip(Box::new(Expr::Add(vec![
        Expr::real(1.0),
        Expr::OneMinusZPow(0.5),
    ])))
}

/// `exp(-(1 - z)^{-1/2})`, the flat perturbation of the corner map.
pub fn corner_bump_expr() -> Expr {
    Expr::Exp(Box::new(Expr::neg(Expr::OneMinusZPow(-0.5))))
}

impl Symbol {
    /// A symbol from a raw expression; used for derived maps and tests.
    pub fn custom(name: impl Into<String>, expr: Expr, self_map: bool) -> Self {
        Self {
            name: name.into(),
            family: Family::Custom,
            expr,
            self_map,
        }
    }

    pub fn identity() -> Self {
        Self {
            name: "identity".into(),
            family: Family::Identity,
            expr: Expr::Z,
            self_map: true,
        }
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        if c.norm() >= 1.0 {
            return Err(Error::invalid("c", "constant symbol must satisfy |c| < 1"));
        }
        Ok(Self {
            name: format!("constant(c={})", fmt_c(c)),
            family: Family::Constant { c },
            expr: Expr::Const(c),
            self_map: true,
        })
    }

    /// `a z`; a self-map when `|a| <= 1`, kept as a plain symbol otherwise so
    /// that validation can report the failure.
    pub fn dilation(a: Complex64) -> Self {
        Self {
            name: format!("dilation(a={})", fmt_c(a)),
            family: Family::Dilation { a },
            expr: Expr::scaled(a, Expr::Z),
            self_map: true,
        }
    }

    pub fn half_map() -> Self {
        Self {
            name: "half_map".into(),
            family: Family::HalfMap,
            expr: half_map_expr(),
            self_map: true,
        }
    }

    /// `(1 + z)/2 + c (z - 1)^alpha` with `(z - 1)^alpha = e^{i pi alpha} (1 - z)^alpha`.
    pub fn power_perturbation(alpha: f64, c: f64) -> Result<Self> {
        if !(alpha > 2.0) {
            return Err(Error::invalid("alpha", "power_perturbation needs alpha > 2"));
        }
        if !(c > 0.0 && c < 1.0 / 128.0) {
            return Err(Error::invalid("c", "power_perturbation needs c in (0, 1/128)"));
        }
        let expr = Expr::Add(vec![
            half_map_expr(),
            Expr::scaled(unit_phase(alpha) * c, Expr::OneMinusZPow(alpha)),
        ]);
        Ok(Self {
            name: format!("power_perturbation(alpha={alpha}, c={c})"),
            family: Family::PowerPerturbation { alpha, c },
            expr,
            self_map: true,
        })
    }

    pub fn corner_map() -> Self {
        Self {
            name: "corner_map".into(),
            family: Family::CornerMap,
            expr: corner_map_expr(),
            self_map: true,
        }
    }

    /// `corner_map + c exp(-(1 - z)^{-1/2})`.
    pub fn corner_perturbation(c: f64) -> Result<Self> {
        if !(c.abs() > 0.0 && c.abs() <= 1.0) {
            return Err(Error::invalid("c", "corner_perturbation needs 0 < |c| <= 1"));
        }
        let expr = Expr::Add(vec![
            corner_map_expr(),
            Expr::scaled(Complex64::new(c, 0.0), corner_bump_expr()),
        ]);
        Ok(Self {
            name: format!("corner_perturbation(c={c})"),
            family: Family::CornerPerturbation { c },
            expr,
            self_map: true,
        })
    }

    /// Weight `(1 - z)^alpha`.
    pub fn weight_power(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::invalid("alpha", "weight_power needs alpha >= 0"));
        }
        Ok(Self {
            name: format!("weight_power(alpha={alpha})"),
            family: Family::WeightPower { alpha },
            expr: Expr::OneMinusZPow(alpha),
            self_map: false,
        })
    }

    /// Disc automorphism `e^{i theta} (a - z) / (1 - conj(a) z)`.
    pub fn mobius(a: Complex64, theta: f64) -> Result<Self> {
        if a.norm() >= 1.0 {
            return Err(Error::invalid("a", "mobius needs |a| < 1"));
        }
        let rot = Complex64::from_polar(1.0, theta);
        let expr = Expr::Mul(vec![
            Expr::Const(rot),
            Expr::Add(vec![Expr::Const(a), Expr::neg(Expr::Z)]),
            Expr::Recip(Box::new(Expr::Add(vec![
                Expr::real(1.0),
                Expr::scaled(-a.conj(), Expr::Z),
            ]))),
        ]);
        let name = if theta == 0.0 {
            format!("mobius(a={})", fmt_c(a))
        } else {
            format!("mobius(a={}, theta={theta})", fmt_c(a))
        };
        Ok(Self {
            name,
            family: Family::Mobius { a, theta },
            expr,
            self_map: true,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn is_self_map(&self) -> bool {
        self.self_map
    }

    /// Structural equality of the underlying expressions.
    pub fn same_map(&self, other: &Symbol) -> bool {
        self.expr == other.expr
    }

    /// Value at `z` with `|z| <= 1`, principal branches throughout.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() <= 1.0 + 1e-12) {
            return Err(Error::invalid("z", "evaluation point must satisfy |z| <= 1"));
        }
        let v = self.expr.eval_raw(z)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at: z })
        }
    }

    /// First `order` Maclaurin coefficients by truncated series arithmetic.
    pub fn taylor(&self, order: usize) -> Result<CoefficientVector> {
        if order == 0 {
            return Err(Error::invalid("N", "truncation order must be at least 1"));
        }
        self.expr.taylor(order)
    }

    /// When `self = base + p` structurally, the expression `p`.
    ///
    /// Lets callers evaluate `self - base` without cancellation near the
    /// contact point, where both maps are close to 1.
    pub fn perturbation_of(&self, base: &Symbol) -> Option<Expr> {
        match &self.expr {
            Expr::Add(terms) if terms.len() >= 2 && terms[0] == base.expr => {
                Some(Expr::Add(terms[1..].to_vec()))
            }
            _ => None,
        }
    }

    /// `other(z) - self(z)`, using the structural perturbation when available.
    pub fn difference_at(&self, other: &Symbol, z: Complex64) -> Result<Complex64> {
        if let Some(p) = other.perturbation_of(self) {
            return p.eval_raw(z);
        }
        if let Some(p) = self.perturbation_of(other) {
            return Ok(-p.eval_raw(z)?);
        }
        Ok(other.evaluate(z)? - self.evaluate(z)?)
    }

    /// `self ∘ self` when the catalogue has a closed form for it.
    pub fn self_composition(&self) -> Option<Symbol> {
        match &self.family {
            Family::Identity => Some(Symbol::identity()),
            Family::Dilation { a } => Some(Symbol::dilation(a * a)),
            Family::Constant { c } => Symbol::constant(*c).ok(),
            Family::Mobius { a, theta } => {
                let (b, t) = mobius_compose((*a, *theta), (*a, *theta));
                Symbol::mobius(b, t).ok()
            }
            _ => None,
        }
    }
}

/// Parameters of `m1 ∘ m2` for automorphisms `e^{i t}(a - z)/(1 - conj(a) z)`.
pub fn mobius_compose(m1: (Complex64, f64), m2: (Complex64, f64)) -> (Complex64, f64) {
    // Matrix of e^{it}(a - z)/(1 - conj(a) z) is [[-e^{it}, e^{it} a], [-conj(a), 1]].
    let mat = |(a, t): (Complex64, f64)| {
        let r = Complex64::from_polar(1.0, t);
        [[-r, r * a], [-a.conj(), one()]]
    };
    let p = mat(m1);
    let q = mat(m2);
    let m = [
        [
            p[0][0] * q[0][0] + p[0][1] * q[1][0],
            p[0][0] * q[0][1] + p[0][1] * q[1][1],
        ],
        [
            p[1][0] * q[0][0] + p[1][1] * q[1][0],
            p[1][0] * q[0][1] + p[1][1] * q[1][1],
        ],
    ];
    // (m00 z + m01)/(m10 z + m11) = (m01/m11) (1 + (m00/m01) z)/(1 + (m10/m11) z);
    // match against e^{it}(a - z)/(1 - conj(a) z): conj(a) = -m10/m11.
    let a = (-m[1][0] / m[1][1]).conj();
    let rot = if a.norm() > 0.0 {
        m[0][1] / (m[1][1] * a)
    } else {
        -m[0][0] / m[1][1]
    };
    (a, rot.arg())
}
