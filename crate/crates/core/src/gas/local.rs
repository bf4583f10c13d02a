use std::collections::BTreeMap;

use serde_json::Value;

use crate::algebra::{Field, JsonScalar};
use crate::lattice::{decode, LatticeKind};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GasKind {
    /// Hard-core gas: a site is occupied with probability `p` when all children are empty.
    X,
    /// Probability `(1-p) q` when some child is empty, `p + (1-p) q` otherwise.
    Y,
    /// Bond gas with site weight `p` and bond weight `q`.
    Bond,
    /// Two-colour hard-core gas with weights `p1`, `p2`.
    Bicolour,
}

impl GasKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(GasKind::X),
            "y" => Ok(GasKind::Y),
            "b" | "bond" => Ok(GasKind::Bond),
            "bicolour" | "bicolor" | "bi" => Ok(GasKind::Bicolour),
            _ => Err(Error::Unknown { what: "gas", name: s.into() }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GasKind::X => "x",
            GasKind::Y => "y",
            GasKind::Bond => "bond",
            GasKind::Bicolour => "bicolour",
        }
    }

    pub fn states(self) -> usize {
        if self == GasKind::Bicolour {
            3
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GasParams<F> {
    X { p: F },
    Y { p: F, q: F },
    Bond { p: F, q: F },
    Bicolour { p1: F, p2: F },
}

impl<F: Field + JsonScalar> GasParams<F> {
    /// Builds parameters from literals, failing when a required one is missing.
    pub fn from_literals(
        kind: GasKind,
        p: Option<&str>,
        q: Option<&str>,
        p1: Option<&str>,
        p2: Option<&str>,
    ) -> Result<Self> {
        let need = |v: Option<&str>, name: &str| {
            v.ok_or_else(|| Error::InvalidParams(format!("gas {} needs {name}", kind.name())))
                .and_then(F::parse_literal)
        };
        Ok(match kind {
            GasKind::X => GasParams::X { p: need(p, "p")? },
            GasKind::Y => GasParams::Y { p: need(p, "p")?, q: need(q, "q")? },
            GasKind::Bond => GasParams::Bond { p: need(p, "p")?, q: need(q, "q")? },
            GasKind::Bicolour => GasParams::Bicolour { p1: need(p1, "p1")?, p2: need(p2, "p2")? },
        })
    }

    pub fn to_json(&self) -> Value {
        let mut m = BTreeMap::new();
        match self {
            GasParams::X { p } => {
                m.insert("p", p.to_json());
            }
            GasParams::Y { p, q } | GasParams::Bond { p, q } => {
                m.insert("p", p.to_json());
                m.insert("q", q.to_json());
            }
            GasParams::Bicolour { p1, p2 } => {
                m.insert("p1", p1.to_json());
                m.insert("p2", p2.to_json());
            }
        }
        serde_json::to_value(m).expect("string keys")
    }
}

impl<F: Field> GasParams<F> {
    pub fn kind(&self) -> GasKind {
        match self {
            GasParams::X { .. } => GasKind::X,
            GasParams::Y { .. } => GasKind::Y,
            GasParams::Bond { .. } => GasKind::Bond,
            GasParams::Bicolour { .. } => GasKind::Bicolour,
        }
    }

    pub fn p(&self) -> &F {
        match self {
            GasParams::X { p } | GasParams::Y { p, .. } | GasParams::Bond { p, .. } => p,
            GasParams::Bicolour { p1, .. } => p1,
        }
    }

    pub fn q(&self) -> Option<&F> {
        match self {
            GasParams::Y { q, .. } | GasParams::Bond { q, .. } => Some(q),
            _ => None,
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> GasParams<G> {
        match self {
            GasParams::X { p } => GasParams::X { p: f(p) },
            GasParams::Y { p, q } => GasParams::Y { p: f(p), q: f(q) },
            GasParams::Bond { p, q } => GasParams::Bond { p: f(p), q: f(q) },
            GasParams::Bicolour { p1, p2 } => GasParams::Bicolour { p1: f(p1), p2: f(p2) },
        }
    }

    /// Child distribution given parent values with edge multiplicities.
    ///
    /// Multiplicity only matters for the bond gas, where two parallel edges
    /// carry two independent bond variables.
    pub fn child_probs(&self, parents: &[(u8, u32)]) -> Vec<F> {
        let zero = F::zero;
        let one = F::one;
        match self {
            GasParams::X { p } => {
                let free = parents.iter().all(|&(v, _)| v == 0);
                let p1 = if free { p.clone() } else { zero() };
                vec![one() - p1.clone(), p1]
            }
            GasParams::Y { p, q } => {
                let base = (one() - p.clone()) * q.clone();
                let min = parents.iter().map(|&(v, _)| v).min().unwrap_or(0);
                let p1 = if min == 0 { base } else { p.clone() + base };
                vec![one() - p1.clone(), p1]
            }
            GasParams::Bond { p, q } => {
                let mut p1 = p.clone();
                for &(v, m) in parents {
                    if v == 1 {
                        let mut qm = one();
                        for _ in 0..m {
                            qm = qm * q.clone();
                        }
                        p1 = p1 * (one() - qm);
                    }
                }
                vec![one() - p1.clone(), p1]
            }
            GasParams::Bicolour { p1, p2 } => {
                let c1 = if parents.iter().any(|&(v, _)| v == 1) { zero() } else { p1.clone() };
                let c2 = if parents.iter().any(|&(v, _)| v == 2) { zero() } else { p2.clone() };
                vec![one() - c1.clone() - c2.clone(), c1, c2]
            }
        }
    }
}

/// Table `T[(parents)][child]` for one lattice geometry.
#[derive(Debug, Clone)]
pub struct LocalTransition<F> {
    params: GasParams<F>,
    lattice: LatticeKind,
    arity: usize,
    states: usize,
    table: Vec<Vec<F>>,
}

impl<F: Field> LocalTransition<F> {
    pub fn new(params: GasParams<F>, lattice: LatticeKind) -> Self {
        let arity = lattice.child_offsets().len();
        let states = params.kind().states();
        let table = (0..states.pow(arity as u32))
            .map(|code| {
                let parents: Vec<(u8, u32)> = decode(code, arity, states).into_iter().map(|v| (v, 1)).collect();
                params.child_probs(&parents)
            })
            .collect();
        LocalTransition { params, lattice, arity, states, table }
    }

    pub fn params(&self) -> &GasParams<F> {
        &self.params
    }

    pub fn gas(&self) -> GasKind {
        self.params.kind()
    }

    pub fn lattice(&self) -> LatticeKind {
        self.lattice
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn states(&self) -> usize {
        self.states
    }

    /// `T[parents][child]`; `parents[k]` is the k-th parent in lattice order.
    pub fn prob(&self, parents: &[u8], child: u8) -> &F {
        assert_eq!(parents.len(), self.arity, "wrong number of parents");
        let code = parents.iter().rev().fold(0, |acc, &v| acc * self.states + v as usize);
        &self.table[code][child as usize]
    }

    pub fn child_probs(&self, parents: &[(u8, u32)]) -> Vec<F> {
        if parents.len() == self.arity && parents.iter().all(|&(_, m)| m == 1) {
            let code = parents.iter().rev().fold(0, |acc, &(v, _)| acc * self.states + v as usize);
            return self.table[code].clone();
        }
        self.params.child_probs(parents)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> LocalTransition<G> {
        LocalTransition::new(self.params.map(f), self.lattice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn x_table() {
        let t = LocalTransition::new(GasParams::X { p: q(1, 3) }, LatticeKind::Square);
        assert_eq!(*t.prob(&[0, 0], 1), q(1, 3));
        assert_eq!(*t.prob(&[1, 0], 1), q(0, 1));
        assert_eq!(*t.prob(&[0, 1], 0), q(1, 1));
    }

    #[test]
    fn y_table() {
        let t = LocalTransition::new(GasParams::Y { p: q(1, 2), q: q(1, 3) }, LatticeKind::Square);
        assert_eq!(*t.prob(&[0, 1], 1), q(1, 6));
        assert_eq!(*t.prob(&[1, 1], 1), q(2, 3));
    }

    #[test]
    fn bond_parallel_edges() {
        let params = GasParams::Bond { p: q(1, 2), q: q(1, 3) };
        // two distinct occupied children: p (1-q)^2
        assert_eq!(params.child_probs(&[(1, 1), (1, 1)])[1], q(2, 9));
        // one child reached by two edges: p (1 - q^2)
        assert_eq!(params.child_probs(&[(1, 2)])[1], q(4, 9));
    }

    #[test]
    fn bicolour_rows_sum_to_one() {
        let t = LocalTransition::new(GasParams::Bicolour { p1: q(1, 5), p2: q(1, 7) }, LatticeKind::Triangular);
        assert_eq!(t.arity(), 3);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let s = (0..3).fold(q(0, 1), |acc, x| acc + t.prob(&[a, b, c], x).clone());
                    assert_eq!(s, q(1, 1));
                }
            }
        }
        assert_eq!(*t.prob(&[2, 0, 0], 1), q(1, 5));
        assert_eq!(*t.prob(&[2, 0, 0], 2), q(0, 1));
    }
}
