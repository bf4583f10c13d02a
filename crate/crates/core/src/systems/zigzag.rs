use serde::Serialize;
use serde_json::{json, Value};

use super::build::{build_system, Assignment, SystemKind, SystemSpec};
use super::cnt::{cnt_check, CntReport};
use crate::algebra::{Field, JsonScalar, Matrix};
use crate::gas::{transfer_matrix, zigzag_trace_measure, Layout, LocalTransition};
use crate::lattice::LatticeKind;
use crate::{Error, Result};

/// Zigzag product measure `Tr(prod_i D^{u_i d_i} U^{d_i u_{i+1}})`.
///
/// Families are indexed `a * s + b`. Scalar solutions use 1x1 matrices and
/// carry the weights `w_ab`; matrix solutions may carry a conjugating `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZigzagSolution<F> {
    pub lattice: LatticeKind,
    pub states: usize,
    pub down: Vec<Matrix<F>>,
    pub up: Vec<Matrix<F>>,
    pub weights: Option<Vec<F>>,
    pub conj: Option<Matrix<F>>,
}

impl<F: Field + JsonScalar> ZigzagSolution<F> {
    pub fn new(lattice: LatticeKind, states: usize, down: Vec<Matrix<F>>, up: Vec<Matrix<F>>) -> Result<Self> {
        if down.len() != states * states || up.len() != states * states {
            return Err(Error::Dimension(format!("need {} matrices per family", states * states)));
        }
        let k = down[0].rows();
        if down.iter().chain(&up).any(|m| m.shape() != (k, k)) {
            return Err(Error::Dimension("zigzag matrices must be square of one size".into()));
        }
        Ok(ZigzagSolution { lattice, states, down, up, weights: None, conj: None })
    }

    pub fn scalar(states: usize, d: Vec<F>, u: Vec<F>, w: Vec<F>) -> Result<Self> {
        let wrap = |v: Vec<F>| v.into_iter().map(Matrix::scalar).collect();
        let mut sol = Self::new(LatticeKind::Square, states, wrap(d), wrap(u))?;
        if w.len() != states * states {
            return Err(Error::Dimension("one weight per pair".into()));
        }
        sol.weights = Some(w);
        Ok(sol)
    }

    pub fn size(&self) -> usize {
        self.down[0].rows()
    }

    fn pair_sum(&self, first: &[Matrix<F>], second: &[Matrix<F>], a: usize, b: usize) -> Matrix<F> {
        let s = self.states;
        let k = self.size();
        (0..s).fold(Matrix::zeros(k, k), |acc, c| &acc + &(&first[a * s + c] * &second[c * s + b]))
    }

    /// `m_ab = sum_c D^{ac} U^{cb}` as an `sk x sk` block matrix.
    pub fn m_matrix(&self) -> Matrix<F> {
        let (s, k) = (self.states, self.size());
        let mut out = Matrix::zeros(s * k, s * k);
        for a in 0..s {
            for b in 0..s {
                let blk = self.pair_sum(&self.down, &self.up, a, b);
                for i in 0..k {
                    for j in 0..k {
                        out[(a * k + i, b * k + j)] = blk[(i, j)].clone();
                    }
                }
            }
        }
        out
    }

    /// The system this solution is meant to satisfy.
    pub fn system_spec(&self) -> SystemSpec {
        let kind = match (self.lattice, self.size(), self.weights.is_some()) {
            (LatticeKind::Triangular, _, _) => SystemKind::TriSplit,
            (LatticeKind::Square, 1, true) => SystemKind::ZigzagScalar,
            _ => SystemKind::ZigzagMatrix,
        };
        SystemSpec::new(kind, self.size())
    }

    pub fn assignment(&self) -> Result<Assignment<F>> {
        let s = self.states;
        let mut out = Assignment::new();
        let spec = self.system_spec();
        let pair = |i: usize| format!("{}{}", i / s, i % s);
        if spec.kind == SystemKind::ZigzagScalar {
            for i in 0..s * s {
                out.insert(format!("d{}", pair(i)), self.down[i][(0, 0)].clone());
                out.insert(format!("u{}", pair(i)), self.up[i][(0, 0)].clone());
            }
        } else {
            let k = self.size();
            for i in 0..s * s {
                for r in 0..k {
                    for c in 0..k {
                        out.insert(format!("D{}_{r}_{c}", pair(i)), self.down[i][(r, c)].clone());
                        out.insert(format!("U{}_{r}_{c}", pair(i)), self.up[i][(r, c)].clone());
                    }
                }
            }
            if spec.kind == SystemKind::ZigzagMatrix {
                let p = self.conj.clone().ok_or_else(|| Error::MissingVariable("P".into()))?;
                for r in 0..k {
                    for c in 0..k {
                        out.insert(format!("P_{r}_{c}"), p[(r, c)].clone());
                    }
                }
            }
        }
        if let Some(w) = &self.weights {
            for (i, x) in w.iter().enumerate() {
                out.insert(format!("w{}", pair(i)), x.clone());
            }
        } else if spec.kind != SystemKind::TriSplit {
            return Err(Error::MissingVariable("w".into()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lattice": self.lattice.name(),
            "states": self.states,
            "D": self.down.iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "U": self.up.iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "w": self.weights.as_ref().map(|w| w.iter().map(F::to_json).collect::<Vec<_>>()),
            "P": self.conj.as_ref().map(Matrix::to_json),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZigzagReport {
    pub system: &'static str,
    pub width: usize,
    pub equations_max: f64,
    pub equations_exact_zero: bool,
    pub stationarity_max: f64,
    pub stationary_exact: bool,
    pub nonzero: bool,
    pub cnt: CntReport,
    pub pass: bool,
}

/// Checks the defining equations and stationarity of the zigzag measure on width `n`.
pub fn zigzag_check<F: Field + JsonScalar>(
    sol: &ZigzagSolution<F>,
    local: &LocalTransition<F>,
    width: usize,
    cap: u128,
    tol: f64,
) -> Result<ZigzagReport> {
    if local.lattice() != sol.lattice || local.states() != sol.states {
        return Err(Error::InconsistentSizes("solution and transition disagree on lattice or states".into()));
    }
    let spec = sol.system_spec();
    let sys = build_system(&spec, local)?;
    let res = sys.residual(&sol.assignment()?)?;
    let layout = match sol.lattice {
        LatticeKind::Square => Layout::SquareZigzag,
        LatticeKind::Triangular => Layout::TriangularZigzag,
    };
    let w = zigzag_trace_measure(&sol.down, &sol.up, layout, width)?;
    let t = transfer_matrix(local, layout, width, cap)?;
    let next = w.step(&t);
    let stationary_exact = next.weights == w.weights;
    let stationarity_max = next.max_abs_diff(&w);
    let nonzero = w.weights.iter().any(|x| !x.is_zero());
    let cnt = cnt_check(&sol.m_matrix(), tol);
    let ok = |exact: bool, val: f64| if F::EXACT { exact } else { val <= tol };
    let pass = ok(res.exact_zero, res.max_abs) && ok(stationary_exact, stationarity_max);
    Ok(ZigzagReport {
        system: spec.kind.name(),
        width,
        equations_max: res.max_abs,
        equations_exact_zero: res.exact_zero,
        stationarity_max,
        stationary_exact,
        nonzero,
        cnt,
        pass,
    })
}
