//! Textual symbol specifications: `name(key=value, ...)`.
//!
//! Values are decimal reals (`0.25`, `-1e-3`) or complex numbers written as
//! `a+bi` / `a-bi` / `bi`. Names without parameters may omit the parentheses.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::catalogue::{Symbol, DEFAULT_CORNER_C};
use crate::error::{Error, Result};

pub const GRAMMAR: &str = "\
symbol  := name | name '(' [key '=' value {',' key '=' value}] ')'
value   := real | real ('+'|'-') real 'i' | real 'i'
names   := identity | constant(c) | dilation(a) | half_map
         | power_perturbation(alpha, c) | corner_map | corner_perturbation([c])
         | weight_power(alpha) | mobius(a, [theta])";

fn parse_err(token: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        token: token.to_string(),
        message: message.into(),
    }
}

fn parse_real(tok: &str) -> Result<f64> {
    tok.trim()
        .parse::<f64>()
        .map_err(|_| parse_err(tok, "expected a decimal number"))
}

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i`.
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let s = token.trim();
    if s.is_empty() {
        return Err(parse_err(token, "empty value"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(s)?, 0.0));
    };
    // Split at the last sign that is not leading and not part of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let ch = bytes[idx];
        if (ch == b'+' || ch == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let (re, im) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other).map_err(|_| parse_err(token, "malformed imaginary part"))?,
    };
    let re = parse_real(re).map_err(|_| parse_err(token, "malformed real part"))?;
    Ok(Complex64::new(re, im))
}

struct Params<'a> {
    spec: &'a str,
    values: BTreeMap<String, (String, Complex64)>,
}

impl Params<'_> {
    fn take_complex(&mut self, key: &str) -> Option<Complex64> {
        self.values.remove(key).map(|(_, v)| v)
    }

    fn take_real(&mut self, key: &str) -> Result<Option<f64>> {
        match self.values.remove(key) {
            None => Ok(None),
            Some((_, v)) if v.im == 0.0 => Ok(Some(v.re)),
            Some((tok, _)) => Err(parse_err(&tok, format!("`{key}` must be real"))),
        }
    }

    fn require_real(&mut self, key: &str) -> Result<f64> {
        self.take_real(key)?
            .ok_or_else(|| parse_err(self.spec, format!("missing parameter `{key}`")))
    }

    fn require_complex(&mut self, key: &str) -> Result<Complex64> {
        self.take_complex(key)
            .ok_or_else(|| parse_err(self.spec, format!("missing parameter `{key}`")))
    }

    fn finish(self) -> Result<()> {
        match self.values.keys().next() {
            Some(k) => Err(parse_err(k, "unknown parameter")),
            None => Ok(()),
        }
    }
}

/// Parses a catalogue symbol from its textual form.
pub fn parse_symbol(spec: &str) -> Result<Symbol> {
    let s = spec.trim();
    let (name, args) = match s.find('(') {
        Some(open) => {
            let close = s
                .rfind(')')
                .ok_or_else(|| parse_err(s, "missing closing parenthesis"))?;
            if close != s.len() - 1 || close < open {
                return Err(parse_err(&s[close.min(s.len())..], "unexpected trailing input"));
            }
            (s[..open].trim(), &s[open + 1..close])
        }
        None => (s, ""),
    };
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(parse_err(name, "invalid symbol name"));
    }

    let mut values = BTreeMap::new();
    for item in args.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| parse_err(item, "expected key=value"))?;
        let key = k.trim();
        if key.is_empty() {
            return Err(parse_err(item, "empty key"));
        }
        let value = parse_complex(v)?;
        if values.insert(key.to_string(), (v.trim().to_string(), value)).is_some() {
            return Err(parse_err(key, "duplicate parameter"));
        }
    }
    let allowed: &[&str] = match name {
        "identity" | "half_map" | "corner_map" => &[],
        "constant" => &["c"],
        "dilation" => &["a"],
        "power_perturbation" => &["alpha", "c"],
        "corner_perturbation" => &["c"],
        "weight_power" => &["alpha"],
        "mobius" => &["a", "theta"],
        other => return Err(parse_err(other, "unknown symbol name")),
    };
    if let Some(k) = values.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(parse_err(k, "unknown parameter"));
    }
    let mut p = Params { spec: s, values };

    let symbol = match name {
        "identity" => Symbol::identity(),
        "half_map" => Symbol::half_map(),
        "corner_map" => Symbol::corner_map(),
        "constant" => Symbol::constant(p.require_complex("c")?)?,
        "dilation" => Symbol::dilation(p.require_complex("a")?),
        "power_perturbation" => {
            let alpha = p.require_real("alpha")?;
            let c = p.require_real("c")?;
            Symbol::power_perturbation(alpha, c)?
        }
        "corner_perturbation" => {
            let c = p.take_real("c")?.unwrap_or(DEFAULT_CORNER_C);
            Symbol::corner_perturbation(c)?
        }
        "weight_power" => Symbol::weight_power(p.require_real("alpha")?)?,
        "mobius" => {
            let a = p.require_complex("a")?;
            let theta = p.take_real("theta")?.unwrap_or(0.0);
            Symbol::mobius(a, theta)?
        }
        other => return Err(parse_err(other, "unknown symbol name")),
    };
    p.finish()?;
    Ok(symbol)
}
