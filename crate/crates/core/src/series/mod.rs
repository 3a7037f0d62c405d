//! Symbols, pointwise evaluation and truncated Taylor expansions.

mod catalogue;
mod coeffs;
mod expr;
pub mod grid;
mod parse;
mod validate;

pub use catalogue::{corner_bump_expr, mobius_compose, Family, Symbol, DEFAULT_CORNER_C};
pub use coeffs::CoefficientVector;
pub use expr::Expr;
pub use parse::{parse_complex, parse_symbol, GRAMMAR};
pub use validate::{validate_self_map, NearOneCheck, ValidationReport, SELF_MAP_TOL};
