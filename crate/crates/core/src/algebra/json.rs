//! JSON encodings for scalars and matrices.
//!
//! Rationals are `"num/den"` strings, Gaussian rationals `["re","im"]`,
//! complex floats `[re, im]`, floats plain numbers and bivariate series
//! arrays of `[deg_x, deg_y, "num/den"]`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use serde::Serializer;
use serde_json::{json, Value};

use super::matrix::Matrix;
use super::scalar::{Gaussian, Ring};
use crate::{Error, Result};

pub trait JsonScalar: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
    /// Parse a command-line style literal such as `0.2`, `1/5` or `-3`.
    fn parse_literal(s: &str) -> Result<Self>;
    fn render(&self) -> String;
}

pub fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n`, `n/d`, decimals and scientific notation exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(Error::Parse(format!("expected a rational, got {v}"))),
    }
}

fn f64_from_json(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(n.to_string())),
        Value::String(s) => s
            .parse::<f64>()
            .or_else(|_| parse_rational(s).map(|r| super::scalar::rat_to_f64(&r)))
            .map_err(|_| Error::Parse(format!("not a float: {s:?}"))),
        _ => Err(Error::Parse(format!("expected a number, got {v}"))),
    }
}

fn float_json(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(x.to_string()))
}

impl JsonScalar for BigRational {
    fn to_json(&self) -> Value {
        Value::String(render_rational(self))
    }
    fn from_json(v: &Value) -> Result<Self> {
        rational_from_json(v)
    }
    fn parse_literal(s: &str) -> Result<Self> {
        parse_rational(s)
    }
    fn render(&self) -> String {
        render_rational(self)
    }
}

impl JsonScalar for Gaussian {
    fn to_json(&self) -> Value {
        json!([render_rational(&self.re), render_rational(&self.im)])
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(parts) if parts.len() == 2 => Ok(Complex::new(
                rational_from_json(&parts[0])?,
                rational_from_json(&parts[1])?,
            )),
            other => Ok(Complex::new(rational_from_json(other)?, Gaussian::zero().im)),
        }
    }
    fn parse_literal(s: &str) -> Result<Self> {
        match s.split_once(',') {
            Some((re, im)) => Ok(Complex::new(parse_rational(re)?, parse_rational(im)?)),
            None => Ok(Complex::new(parse_rational(s)?, Gaussian::zero().im)),
        }
    }
    fn render(&self) -> String {
        format!("{} + {}i", render_rational(&self.re), render_rational(&self.im))
    }
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        float_json(*self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        f64_from_json(v)
    }
    fn parse_literal(s: &str) -> Result<Self> {
        f64_from_json(&Value::String(s.to_string()))
    }
    fn render(&self) -> String {
        format!("{self}")
    }
}

impl JsonScalar for Complex64 {
    fn to_json(&self) -> Value {
        json!([float_json(self.re), float_json(self.im)])
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(parts) if parts.len() == 2 => {
                Ok(Complex64::new(f64_from_json(&parts[0])?, f64_from_json(&parts[1])?))
            }
            other => Ok(Complex64::new(f64_from_json(other)?, 0.0)),
        }
    }
    fn parse_literal(s: &str) -> Result<Self> {
        match s.split_once(',') {
            Some((re, im)) => Ok(Complex64::new(f64::parse_literal(re)?, f64::parse_literal(im)?)),
            None => Ok(Complex64::new(f64::parse_literal(s)?, 0.0)),
        }
    }
    fn render(&self) -> String {
        format!("{}{:+}i", self.re, self.im)
    }
}

impl<R: Ring + JsonScalar> Matrix<R> {
    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows(),
            "cols": self.cols(),
            "mode": R::MODE.name(),
            "entries": self.data().iter().map(JsonScalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("matrix is missing {k:?}")))
        };
        let rows = field("rows")?
            .as_u64()
            .ok_or_else(|| Error::Parse("rows must be an integer".into()))? as usize;
        let cols = field("cols")?
            .as_u64()
            .ok_or_else(|| Error::Parse("cols must be an integer".into()))? as usize;
        let entries = field("entries")?
            .as_array()
            .ok_or_else(|| Error::Parse("entries must be an array".into()))?;
        let data = entries.iter().map(R::from_json).collect::<Result<Vec<_>>>()?;
        Matrix::new(rows, cols, data)
    }
}

/// `serialize_with` adapter for scalar fields of generic report structs.
pub fn ser_scalar<F: JsonScalar, S: Serializer>(x: &F, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&x.to_json(), s)
}

pub fn ser_scalar_opt<F: JsonScalar, S: Serializer>(
    x: &Option<F>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&x.as_ref().map(JsonScalar::to_json), s)
}

pub fn ser_scalars<F: JsonScalar, S: Serializer>(xs: &[F], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Value> = xs.iter().map(JsonScalar::to_json).collect();
    serde::Serialize::serialize(&v, s)
}
