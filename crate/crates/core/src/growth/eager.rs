use serde::Serialize;

use crate::algebra::{Field, JsonScalar, Matrix};
use crate::gas::{trace_measure, LocalTransition, RowMeasure, SplitSolution};
use crate::systems::build::slot;
use crate::systems::FactorSolution;
use crate::{Error, Result};

/// Default bound on either dimension of an eagerly built matrix.
pub const DEFAULT_GROWTH_CAP: usize = 4096;

/// `V`, `H` and `Q = V H` at one growth step.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthStep<F> {
    pub kappa: usize,
    pub v: Vec<Matrix<F>>,
    pub h: Vec<Matrix<F>>,
    pub q: Vec<Matrix<F>>,
}

impl<F: Field> GrowthStep<F> {
    fn from_vh(kappa: usize, v: Vec<Matrix<F>>, h: Vec<Matrix<F>>) -> Self {
        let q = v.iter().zip(&h).map(|(a, b)| a * b).collect();
        GrowthStep { kappa, v, h, q }
    }

    fn star(family: &[Matrix<F>]) -> Matrix<F> {
        let (r, c) = family[0].shape();
        Matrix::sum(family, r, c)
    }

    pub fn q_star(&self) -> Matrix<F> {
        Self::star(&self.q)
    }

    pub fn v_star(&self) -> Matrix<F> {
        Self::star(&self.v)
    }

    pub fn h_star(&self) -> Matrix<F> {
        Self::star(&self.h)
    }

    /// `P = sum_{a,b} H^a V^b`, which equals `Q*` one step later.
    pub fn p_matrix(&self) -> Matrix<F> {
        &self.h_star() * &self.v_star()
    }

    pub fn cross_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (x, vx) in self.v.iter().enumerate() {
            for (y, hy) in self.h.iter().enumerate() {
                if x != y {
                    worst = worst.max((vx * hy).max_magnitude());
                }
            }
        }
        worst
    }

    /// `(rows, cols)` of `V`; `H` is the transpose shape and `Q` is `rows x rows`.
    pub fn v_shape(&self) -> (usize, usize) {
        self.v[0].shape()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepSizes {
    pub kappa: usize,
    pub v: (usize, usize),
    pub q: usize,
    pub cross_residual: f64,
}

/// All growth steps `0..=kappa` from one factor and one initial split pair.
#[derive(Debug, Clone)]
pub struct GrowthState<F> {
    pub factor: FactorSolution<F>,
    pub local: LocalTransition<F>,
    pub steps: Vec<GrowthStep<F>>,
}

/// The one-state start `V^1 = H^1 = [1]`, all other families `[0]`.
pub fn ones_init<F: Field + JsonScalar>(states: usize) -> SplitSolution<F> {
    let fam: Vec<Matrix<F>> =
        (0..states).map(|x| Matrix::scalar(if x == 1 { F::one() } else { F::zero() })).collect();
    SplitSolution { v: fam.clone(), h: fam }
}

/// Expected `V` shape at step `kappa` from the initial `r x c` shape.
pub fn v_shape_at(init: (usize, usize), m: usize, kappa: usize) -> (usize, usize) {
    let (r, c) = init;
    let k = kappa / 2;
    if kappa.is_multiple_of(2) {
        (r * m.pow(k as u32), c * m.pow(k as u32))
    } else {
        (c * m.pow(k as u32), r * m.pow(k as u32 + 1))
    }
}

pub fn grow<F: Field + JsonScalar>(
    factor: &FactorSolution<F>,
    local: &LocalTransition<F>,
    init: &SplitSolution<F>,
    kappa: usize,
    cap: usize,
    tol: f64,
) -> Result<GrowthState<F>> {
    let s = factor.states;
    if init.v.len() != s || local.states() != s {
        return Err(Error::InconsistentSizes("init, factor and transition must share the state count".into()));
    }
    let m = factor.size();
    let init_shape = init.v[0].shape();
    for k in 1..=kappa {
        let (r, c) = v_shape_at(init_shape, m, k);
        if r.max(c) > cap {
            return Err(Error::SizeCap { states: r.max(c) as u128, cap: cap as u128 });
        }
    }
    let first = GrowthStep::from_vh(0, init.v.clone(), init.h.clone());
    let mut steps = vec![first];
    for k in 1..=kappa {
        let prev = &steps[k - 1];
        let mut v = Vec::with_capacity(s);
        let mut h = Vec::with_capacity(s);
        for x in 0..s {
            let (hr, hc) = prev.h[0].shape();
            let (vr, vc) = prev.v[0].shape();
            let mut vx = Matrix::zeros(hr, hc * m);
            let mut hx = Matrix::zeros(vr * m, vc);
            for y in 0..s {
                vx = &vx + &prev.h[y].kron(&factor.h_matrix(y, x));
                hx = &hx + &prev.v[y].kron(&factor.v_matrix(y, x));
            }
            v.push(vx);
            h.push(hx);
        }
        let step = GrowthStep::from_vh(k, v, h);
        let cross = step.cross_residual();
        if if F::EXACT { cross != 0.0 } else { cross > tol } {
            return Err(Error::NotOrthogonal(format!("step {k}: largest entry {cross:e}")));
        }
        if step.v_shape() != v_shape_at(init_shape, m, k) {
            return Err(Error::Dimension(format!("step {k} has shape {:?}", step.v_shape())));
        }
        steps.push(step);
    }
    Ok(GrowthState { factor: factor.clone(), local: local.clone(), steps })
}

impl<F: Field + JsonScalar> GrowthState<F> {
    pub fn kappa(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn step(&self, kappa: usize) -> &GrowthStep<F> {
        &self.steps[kappa]
    }

    /// `mu_(kappa)(x) = Tr(prod_i Q^{x_i})` on width `n`.
    pub fn measure(&self, kappa: usize, width: usize) -> Result<RowMeasure<F>> {
        trace_measure(&self.steps[kappa].q, width)
    }

    pub fn sizes(&self) -> Vec<StepSizes> {
        self.steps
            .iter()
            .map(|st| StepSizes {
                kappa: st.kappa,
                v: st.v_shape(),
                q: st.q[0].rows(),
                cross_residual: st.cross_residual(),
            })
            .collect()
    }

    /// Columns of `V^x_(kappa)` that can be nonzero, from the factor pattern.
    /// Indices in different states' masks are disjoint.
    pub fn column_mask(&self, kappa: usize, x: usize) -> Vec<bool> {
        let st = &self.steps[kappa];
        let cols = st.v_shape().1;
        if kappa == 0 {
            return (0..cols).map(|j| (0..st.v[x].rows()).any(|i| !st.v[x][(i, j)].is_zero())).collect();
        }
        let (m, s) = (self.factor.size(), self.factor.states);
        (0..cols).map(|j| (j % m) % s == slot(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::{transfer_matrix, GasParams, Layout, DEFAULT_STATE_CAP};
    use crate::lattice::LatticeKind;
    use crate::systems::{catalog_entry, CatalogEntry, CatalogId};
    use num_complex::Complex64;

    fn setup() -> (FactorSolution<Complex64>, LocalTransition<Complex64>) {
        let params = GasParams::Y { p: 0.2, q: 0.3 }.map(|x| Complex64::new(*x, 0.0));
        let CatalogEntry::Factor(f) = catalog_entry(CatalogId::FactorYSize4Corner, &params, 0).unwrap() else {
            unreachable!()
        };
        (f, LocalTransition::new(params, LatticeKind::Square))
    }

    #[test]
    fn first_step_is_one_by_one() {
        let (f, local) = setup();
        let g = grow(&f, &local, &ones_init(2), 1, DEFAULT_GROWTH_CAP, 1e-12).unwrap();
        let q1 = g.step(1).q[1][(0, 0)];
        assert!((q1 - Complex64::new(0.2 + 0.8 * 0.3, 0.0)).norm() < 1e-12);
        assert_eq!(g.step(0).q, ones_init::<Complex64>(2).v);
    }

    #[test]
    fn measure_is_a_transfer_power() {
        let (f, local) = setup();
        let g = grow(&f, &local, &ones_init(2), 2, DEFAULT_GROWTH_CAP, 1e-12).unwrap();
        let t = transfer_matrix(&local, Layout::Row, 2, DEFAULT_STATE_CAP).unwrap();
        let start = RowMeasure::point_mass(Layout::Row, 2, 2, 3);
        let expect = start.iterate(&t, 2);
        assert!(g.measure(2, 2).unwrap().max_abs_diff(&expect) < 1e-10);
    }

    #[test]
    fn cap_is_enforced() {
        let (f, local) = setup();
        assert!(matches!(grow(&f, &local, &ones_init(2), 9, 64, 1e-12), Err(Error::SizeCap { .. })));
    }
}
