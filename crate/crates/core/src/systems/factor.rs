use serde_json::{json, Value};

use super::build::{factor_var, slot, Assignment};
use crate::algebra::{Field, JsonScalar, Matrix};
use crate::gas::LocalTransition;
use crate::{Error, Result};

/// Single-row `h_{x,y}` and single-column `v_{x,y}`, stored as rows and
/// indexed `x * s + y` (parent value `x`, child value `y`).
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSolution<F> {
    pub states: usize,
    pub h: Vec<Vec<F>>,
    pub v: Vec<Vec<F>>,
}

impl<F: Field + JsonScalar> FactorSolution<F> {
    pub fn new(states: usize, h: Vec<Vec<F>>, v: Vec<Vec<F>>) -> Result<Self> {
        if h.len() != states * states || v.len() != states * states {
            return Err(Error::Dimension(format!("need {} rows for h and v", states * states)));
        }
        let m = h[0].len();
        if m == 0 || h.iter().chain(&v).any(|r| r.len() != m) {
            return Err(Error::Dimension("all factor rows must share one nonzero length".into()));
        }
        Ok(FactorSolution { states, h, v })
    }

    /// Factors with `v_{x,y} = h_{x,y}^T`.
    pub fn symmetric(states: usize, h: Vec<Vec<F>>) -> Result<Self> {
        let v = h.clone();
        Self::new(states, h, v)
    }

    /// Two-state factors from the free entries `a, b, c, d` of
    /// `h_00, h_10, h_01, h_11` under the alternating zero pattern.
    pub fn from_letters(a: &[F], b: &[F], c: &[F], d: &[F]) -> Result<Self> {
        let k = a.len();
        if [b.len(), c.len(), d.len()].iter().any(|&l| l != k) {
            return Err(Error::Dimension("letter vectors differ in length".into()));
        }
        let spread = |vals: &[F], y: usize| -> Vec<F> {
            let mut row = vec![F::zero(); 2 * k];
            for (i, x) in vals.iter().enumerate() {
                row[2 * i + slot(y)] = x.clone();
            }
            row
        };
        Self::symmetric(2, vec![spread(a, 0), spread(c, 1), spread(b, 0), spread(d, 1)])
    }

    pub fn size(&self) -> usize {
        self.h[0].len()
    }

    pub fn h_row(&self, x: usize, y: usize) -> &[F] {
        &self.h[x * self.states + y]
    }

    pub fn v_col(&self, x: usize, y: usize) -> &[F] {
        &self.v[x * self.states + y]
    }

    pub fn h_matrix(&self, x: usize, y: usize) -> Matrix<F> {
        Matrix::row_vector(self.h_row(x, y).to_vec())
    }

    pub fn v_matrix(&self, x: usize, y: usize) -> Matrix<F> {
        Matrix::column_vector(self.v_col(x, y).to_vec())
    }

    /// `h_{x,y} v_{x2,y2}`.
    pub fn product(&self, x: usize, y: usize, x2: usize, y2: usize) -> F {
        self.h_row(x, y).iter().zip(self.v_col(x2, y2)).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Largest `|h_{x,y} v_{x',y'} - T_{x,x',y} 1_{y=y'}|`, and whether it is exactly zero.
    pub fn table_residual(&self, local: &LocalTransition<F>) -> Result<(f64, bool)> {
        if local.states() != self.states || local.arity() != 2 {
            return Err(Error::InconsistentSizes("factor and transition disagree on states or arity".into()));
        }
        let s = self.states;
        let mut worst: f64 = 0.0;
        let mut exact = true;
        for x in 0..s {
            for y in 0..s {
                for x2 in 0..s {
                    for y2 in 0..s {
                        let target = if y == y2 { local.prob(&[x as u8, x2 as u8], y as u8).clone() } else { F::zero() };
                        let diff = self.product(x, y, x2, y2) - target;
                        exact &= diff.is_zero();
                        worst = worst.max(diff.magnitude());
                    }
                }
            }
        }
        Ok((worst, exact))
    }

    /// True when `h_{x,y}` and `v_{x,y}` vanish outside slot class `slot(y)`.
    pub fn follows_pattern(&self) -> bool {
        let s = self.states;
        (0..s * s).all(|i| {
            let y = i % s;
            self.h[i].iter().chain(&self.v[i]).enumerate().all(|(j, e)| (j % self.size()) % s == slot(y) || e.is_zero())
        })
    }

    /// Positions whose factor digit carries state 1.
    pub fn state1_mask(&self) -> Vec<bool> {
        (0..self.size()).map(|j| j % self.states == slot(1)).collect()
    }

    /// Variable values for the patterned factor system with `v = h^T`.
    pub fn assignment(&self) -> Result<Assignment<F>> {
        if self.h != self.v || !self.follows_pattern() {
            return Err(Error::InvalidParams("assignment needs patterned factors with v = h^T".into()));
        }
        let s = self.states;
        let mut out = Assignment::new();
        for x in 0..s {
            for y in 0..s {
                let free = self.h_row(x, y).iter().enumerate().filter(|(j, _)| j % s == slot(y));
                for (k, (_, val)) in free.enumerate() {
                    out.insert(factor_var(s, x, y, k + 1), val.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn from_assignment(states: usize, size: usize, a: &Assignment<F>) -> Result<Self> {
        let mut h = vec![vec![F::zero(); size]; states * states];
        for x in 0..states {
            for y in 0..states {
                let mut k = 0;
                for j in (0..size).filter(|j| j % states == slot(y)) {
                    k += 1;
                    let name = factor_var(states, x, y, k);
                    h[x * states + y][j] = a.get(&name).cloned().ok_or(Error::MissingVariable(name))?;
                }
            }
        }
        Self::symmetric(states, h)
    }

    pub fn map<G: Field + JsonScalar>(&self, f: impl Fn(&F) -> G) -> FactorSolution<G> {
        let m = |rows: &Vec<Vec<F>>| rows.iter().map(|r| r.iter().map(&f).collect()).collect();
        FactorSolution { states: self.states, h: m(&self.h), v: m(&self.v) }
    }

    pub fn to_json(&self) -> Value {
        let rows = |rows: &Vec<Vec<F>>| -> Vec<Vec<Value>> { rows.iter().map(|r| r.iter().map(F::to_json).collect()).collect() };
        json!({ "states": self.states, "size": self.size(), "h": rows(&self.h), "v": rows(&self.v) })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let states = value["states"].as_u64().ok_or_else(|| Error::Parse("factor needs states".into()))? as usize;
        let rows = |key: &str| -> Result<Vec<Vec<F>>> {
            value[key]
                .as_array()
                .ok_or_else(|| Error::Parse(format!("factor needs {key}")))?
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| Error::Parse("factor rows must be arrays".into()))?
                        .iter()
                        .map(F::from_json)
                        .collect()
                })
                .collect()
        };
        Self::new(states, rows("h")?, rows("v")?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::GasParams;
    use crate::lattice::LatticeKind;

    #[test]
    fn letters_round_trip() {
        let f = FactorSolution::from_letters(&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0], &[7.0, 8.0]).unwrap();
        assert_eq!(f.h_row(0, 0), &[0.0, 1.0, 0.0, 2.0]);
        assert_eq!(f.h_row(1, 1), &[7.0, 0.0, 8.0, 0.0]);
        assert!(f.follows_pattern());
        let a = f.assignment().unwrap();
        assert_eq!(a["c2"], 6.0);
        assert_eq!(FactorSolution::from_assignment(2, 4, &a).unwrap(), f);
        assert_eq!(f.state1_mask(), vec![true, false, true, false]);
    }

    #[test]
    fn cross_products_vanish_by_pattern() {
        let f = FactorSolution::from_letters(&[1.0], &[2.0], &[3.0], &[4.0]).unwrap();
        assert_eq!(f.product(0, 0, 1, 1), 0.0);
        let local = LocalTransition::new(GasParams::X { p: 0.5 }, LatticeKind::Square);
        assert!(f.table_residual(&local).unwrap().0 > 0.0);
    }
}
