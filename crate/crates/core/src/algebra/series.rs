use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::json::{parse_rational, render_rational, JsonScalar};
use super::scalar::{rat_to_f64, Field, Ring, ScalarMode};
use crate::{Error, Result};

/// Bivariate power series with rational coefficients, truncated at a total
/// degree bound. Combining two series keeps the smaller bound.
#[derive(Debug, Clone)]
pub struct Series {
    bound: u32,
    terms: BTreeMap<(u32, u32), BigRational>,
}

pub const UNBOUNDED: u32 = u32::MAX;

impl Series {
    pub fn constant(c: BigRational, bound: u32) -> Self {
        Self::monomial(0, 0, c, bound)
    }

    pub fn monomial(i: u32, j: u32, c: BigRational, bound: u32) -> Self {
        let mut terms = BTreeMap::new();
        if i.saturating_add(j) <= bound && !Ring::is_zero(&c) {
            terms.insert((i, j), c);
        }
        Series { bound, terms }
    }

    pub fn var_x(bound: u32) -> Self {
        Self::monomial(1, 0, Ring::one(), bound)
    }

    pub fn var_y(bound: u32) -> Self {
        Self::monomial(0, 1, Ring::one(), bound)
    }

    pub fn from_terms(bound: u32, terms: impl IntoIterator<Item = ((u32, u32), BigRational)>) -> Self {
        let mut s = Series { bound, terms: BTreeMap::new() };
        for ((i, j), c) in terms {
            s.add_term(i, j, c);
        }
        s
    }

    fn add_term(&mut self, i: u32, j: u32, c: BigRational) {
        if i.saturating_add(j) > self.bound || Ring::is_zero(&c) {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(Ring::zero);
        *slot = slot.clone() + c;
        if Ring::is_zero(slot) {
            self.terms.remove(&(i, j));
        }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Ring::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0, 0)
    }

    pub fn truncate(&self, bound: u32) -> Self {
        let bound = bound.min(self.bound);
        Series {
            bound,
            terms: self
                .terms
                .iter()
                .filter(|((i, j), _)| i + j <= bound)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Multiplicative inverse up to the degree bound.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.try_inv().ok_or(Error::NonInvertibleSeries)?;
        if self.bound == UNBOUNDED {
            if self.terms.len() == 1 {
                return Ok(Series::constant(c0_inv, UNBOUNDED));
            }
            return Err(Error::InvalidParams("inverse of a non-constant series needs a degree bound".into()));
        }
        // 1/f = (1/c) sum_k (-g)^k with f = c (1 + g), g without constant term
        let mut g = self.clone();
        g.terms.remove(&(0, 0));
        let minus_g = g.scale(&-c0_inv.clone());
        let mut power = Series::constant(Ring::one(), self.bound);
        let mut acc = power.clone();
        for _ in 0..self.bound {
            power = power * minus_g.clone();
            if power.terms.is_empty() {
                break;
            }
            acc = acc + power.clone();
        }
        Ok(acc.scale(&c0_inv))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.inv()?)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Series::from_terms(self.bound, self.terms.iter().map(|(k, v)| (*k, v.clone() * c.clone())))
    }

    /// Substitutes a rational value for y, leaving a series in x.
    pub fn specialize_y(&self, y: &BigRational) -> Self {
        let mut out = Series { bound: self.bound, terms: BTreeMap::new() };
        for (&(i, j), c) in &self.terms {
            out.add_term(i, 0, c.clone() * num_traits::pow(y.clone(), j as usize));
        }
        out
    }

    /// Replaces x by `c x` and y by `d y`.
    pub fn rescale(&self, c: &BigRational, d: &BigRational) -> Self {
        Series::from_terms(
            self.bound,
            self.terms.iter().map(|(&(i, j), v)| {
                ((i, j), v.clone() * num_traits::pow(c.clone(), i as usize) * num_traits::pow(d.clone(), j as usize))
            }),
        )
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.terms.iter().fold(Ring::zero(), |acc: BigRational, (&(i, j), c)| {
            acc + c.clone() * num_traits::pow(x.clone(), i as usize) * num_traits::pow(y.clone(), j as usize)
        })
    }
}

impl PartialEq for Series {
    /// Equal when the coefficients agree up to the smaller bound.
    fn eq(&self, other: &Self) -> bool {
        let b = self.bound.min(other.bound);
        let lhs = self.terms.iter().filter(|((i, j), _)| i + j <= b);
        let rhs = other.terms.iter().filter(|((i, j), _)| i + j <= b);
        lhs.eq(rhs)
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, other: Series) -> Series {
        let bound = self.bound.min(other.bound);
        let mut out = self.truncate(bound);
        for ((i, j), c) in other.terms {
            out.add_term(i, j, c);
        }
        out
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { bound: self.bound, terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, other: Series) -> Series {
        self + (-other)
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, other: Series) -> Series {
        let bound = self.bound.min(other.bound);
        let mut out = Series { bound, terms: BTreeMap::new() };
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl Ring for Series {
    const EXACT: bool = true;
    const MODE: ScalarMode = ScalarMode::Series;

    fn zero() -> Self {
        Series { bound: UNBOUNDED, terms: BTreeMap::new() }
    }
    fn one() -> Self {
        Series::constant(Ring::one(), UNBOUNDED)
    }
    fn from_i64(n: i64) -> Self {
        Series::constant(BigRational::from_i64(n), UNBOUNDED)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn magnitude(&self) -> f64 {
        self.terms.values().map(|c| rat_to_f64(c).abs()).fold(0.0, f64::max)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.constant_term()), 0.0)
    }
}

impl JsonScalar for Series {
    fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(&(i, j), c)| json!([i, j, render_rational(c)]))
                .collect(),
        )
    }
    fn from_json(v: &Value) -> Result<Self> {
        let items = v.as_array().ok_or_else(|| Error::Parse("series must be an array".into()))?;
        let mut terms = Vec::new();
        for item in items {
            let parts = item.as_array().filter(|p| p.len() == 3);
            let parts = parts.ok_or_else(|| Error::Parse(format!("bad series term {item}")))?;
            let deg = |k: usize| {
                parts[k]
                    .as_u64()
                    .map(|d| d as u32)
                    .ok_or_else(|| Error::Parse(format!("bad degree in {item}")))
            };
            terms.push(((deg(0)?, deg(1)?), BigRational::from_json(&parts[2])?));
        }
        Ok(Series::from_terms(UNBOUNDED, terms))
    }
    fn parse_literal(s: &str) -> Result<Self> {
        Ok(Series::constant(parse_rational(s)?, UNBOUNDED))
    }
    fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(&(i, j), c)| format!("({}) x^{i} y^{j}", render_rational(c)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn geometric_inverse() {
        let x = Series::var_x(5);
        let one_minus_x = Series::constant(q(1, 1), 5) - x;
        let inv = one_minus_x.inv().unwrap();
        for k in 0..=5 {
            assert_eq!(inv.coeff(k, 0), q(1, 1));
        }
        assert_eq!(inv.coeff(6, 0), q(0, 1));
    }

    #[test]
    fn bivariate_product_truncates() {
        let x = Series::var_x(3);
        let y = Series::var_y(10);
        let s = (Series::one() + x.clone() + y.clone()) * (Series::one() + x + y);
        assert_eq!(s.bound(), 3);
        assert_eq!(s.coeff(1, 1), q(2, 1));
        let cube = s.clone() * s;
        assert_eq!(cube.terms().filter(|((i, j), _)| i + j > 3).count(), 0);
    }

    #[test]
    fn zero_constant_is_not_invertible() {
        assert!(matches!(Series::var_x(4).inv(), Err(Error::NonInvertibleSeries)));
    }

    #[test]
    fn json_round_trip() {
        let s = Series::from_terms(UNBOUNDED, [((0, 1), q(1, 1)), ((1, 2), q(-3, 4))]);
        assert_eq!(Series::from_json(&s.to_json()).unwrap(), s);
    }
}
