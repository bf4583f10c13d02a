use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::algebra::Series;

/// What the two exponents of a [`GfPoly`] count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfWeight {
    /// `x^area y^perimeter`
    Perimeter,
    /// `x^area y^bonds`
    Bonds,
    /// `x1^(colour-1 cells) x2^(colour-2 cells)`
    Colours,
}

impl GfWeight {
    pub fn variables(self) -> [&'static str; 2] {
        match self {
            GfWeight::Perimeter => ["area", "perimeter"],
            GfWeight::Bonds => ["area", "bonds"],
            GfWeight::Colours => ["colour1", "colour2"],
        }
    }
}

/// Counting polynomial truncated at a maximal area.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfPoly {
    pub weight: GfWeight,
    pub max_area: u32,
    coeffs: BTreeMap<(u32, u32), u128>,
}

impl GfPoly {
    pub fn zero(weight: GfWeight, max_area: u32) -> Self {
        GfPoly { weight, max_area, coeffs: BTreeMap::new() }
    }

    pub fn one(weight: GfWeight, max_area: u32) -> Self {
        let mut g = Self::zero(weight, max_area);
        g.add_term(0, 0, 1);
        g
    }

    /// Area of the term `x^i y^j`.
    pub fn area_of(&self, i: u32, j: u32) -> u32 {
        match self.weight {
            GfWeight::Colours => i + j,
            _ => i,
        }
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: u128) {
        if c == 0 || self.area_of(i, j) > self.max_area {
            return;
        }
        *self.coeffs.entry((i, j)).or_insert(0) += c;
    }

    pub fn coeff(&self, i: u32, j: u32) -> u128 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &u128)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_assign(&mut self, other: &GfPoly) {
        for (&(i, j), &c) in &other.coeffs {
            self.add_term(i, j, c);
        }
    }

    /// Multiplies by `x^dx y^dy`, dropping terms beyond the area bound.
    pub fn shifted(&self, dx: u32, dy: u32) -> GfPoly {
        let mut out = GfPoly::zero(self.weight, self.max_area);
        for (&(i, j), &c) in &self.coeffs {
            out.add_term(i + dx, j + dy, c);
        }
        out
    }

    pub fn truncated(&self, max_area: u32) -> GfPoly {
        let mut out = GfPoly::zero(self.weight, max_area.min(self.max_area));
        out.add_assign(self);
        out
    }

    /// Number of animals of each area `0..=max_area`.
    pub fn area_counts(&self) -> Vec<u128> {
        let mut out = vec![0u128; self.max_area as usize + 1];
        for (&(i, j), &c) in &self.coeffs {
            out[self.area_of(i, j) as usize] += c;
        }
        out
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        self.coeffs.iter().fold(BigRational::from_integer(0.into()), |acc, (&(i, j), &c)| {
            acc + BigRational::from_integer(BigInt::from(c))
                * num_traits::pow(x.clone(), i as usize)
                * num_traits::pow(y.clone(), j as usize)
        })
    }

    /// The polynomial as a series with total-degree bound `bound`.
    pub fn to_series(&self, bound: u32) -> Series {
        Series::from_terms(
            bound,
            self.coeffs.iter().map(|(&k, &c)| (k, BigRational::from_integer(BigInt::from(c)))),
        )
    }

    pub fn to_json(&self) -> Value {
        let vars = self.weight.variables();
        json!({
            "variables": vars,
            "max_area": self.max_area,
            "terms": self.coeffs.iter().map(|(&(i, j), &c)| json!([i, j, c.to_string()])).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_by_area() {
        let mut g = GfPoly::zero(GfWeight::Perimeter, 2);
        g.add_term(1, 5, 1);
        g.add_term(3, 0, 1);
        assert_eq!(g.area_counts(), vec![0, 1, 0]);
        let mut c = GfPoly::zero(GfWeight::Colours, 2);
        c.add_term(1, 1, 4);
        c.add_term(2, 1, 4);
        assert_eq!(c.area_counts(), vec![0, 0, 4]);
    }
}
