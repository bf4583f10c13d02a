//! Single entries of `V`, `H`, `Q` at step `kappa` without building the matrices.
//!
//! At even steps the entry `[i, j]` is `rho(i0, j0) M(a_k, b_k) ... M(a_1, b_1) e_x`
//! where `i0, j0` index the initial matrices and `a_l, b_l` are the base-`m`
//! digits of `i, j` (`a_1` least significant). Odd steps append one factor
//! digit (for `V`, `H`) or run the chain on pairs of states (for `Q`).

use super::composite::{composite_factors, Composite, Which};
use super::eager::v_shape_at;
use crate::algebra::{Field, JsonScalar, Matrix};
use crate::gas::{LocalTransition, SplitSolution};
use crate::systems::FactorSolution;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct LazyDescriptor<F> {
    pub kappa: usize,
    pub factor: FactorSolution<F>,
    pub init: SplitSolution<F>,
    pub composite: Composite<F>,
    /// `T_{y,y',x}` at `(y * s + y') * s + x`.
    table: Vec<F>,
    /// `h_{z,u} v_{z',u'}` at `((z * s + u) * s + z') * s + u'`.
    pair_products: Vec<Matrix<F>>,
    q0_pairs: Vec<Matrix<F>>,
}

impl<F: Field + JsonScalar> LazyDescriptor<F> {
    pub fn new(factor: &FactorSolution<F>, local: &LocalTransition<F>, init: &SplitSolution<F>, kappa: usize) -> Result<Self> {
        let composite = composite_factors(factor, local)?;
        let s = factor.states;
        if init.v.len() != s {
            return Err(Error::InconsistentSizes("init and factor must share the state count".into()));
        }
        let mut table = Vec::with_capacity(s * s * s);
        for y in 0..s {
            for y2 in 0..s {
                for x in 0..s {
                    table.push(local.prob(&[y as u8, y2 as u8], x as u8).clone());
                }
            }
        }
        let mut pair_products = Vec::with_capacity(s.pow(4));
        for z in 0..s {
            for u in 0..s {
                for z2 in 0..s {
                    for u2 in 0..s {
                        pair_products.push(&composite.h[z * s + u] * &composite.v[z2 * s + u2]);
                    }
                }
            }
        }
        let q0_pairs = (0..s * s).map(|i| &init.h[i / s] * &init.v[i % s]).collect();
        Ok(LazyDescriptor { kappa, factor: factor.clone(), init: init.clone(), composite, table, pair_products, q0_pairs })
    }

    fn states(&self) -> usize {
        self.factor.states
    }

    fn base(&self) -> usize {
        self.factor.size()
    }

    pub fn shape(&self, which: Which) -> (usize, usize) {
        let (r, c) = v_shape_at(self.init.v[0].shape(), self.base(), self.kappa);
        match which {
            Which::V => (r, c),
            Which::H => (c, r),
            Which::Q => (r, r),
        }
    }

    fn init_family(&self, which: Which) -> Vec<Matrix<F>> {
        match which {
            Which::V => self.init.v.clone(),
            Which::H => self.init.h.clone(),
            Which::Q => self.init.v.iter().zip(&self.init.h).map(|(a, b)| a * b).collect(),
        }
    }

    /// Row `rho[z] = W_0^z[i0, j0]`.
    pub fn rho(&self, which: Which, i0: usize, j0: usize) -> Vec<F> {
        self.init_family(which).iter().map(|m| m[(i0, j0)].clone()).collect()
    }

    /// `M(a, b)[z, z'] = w_{z,z'}[a, b]` for the composite family of `which`.
    pub fn block(&self, which: Which, a: usize, b: usize) -> Matrix<F> {
        let s = self.states();
        let fam = self.composite.family(which);
        Matrix::from_fn(s, s, |z, z2| fam[z * s + z2][(a, b)].clone())
    }

    /// Runs `k` digit steps of the `s`-state chain.
    fn chain(&self, which: Which, k: usize, i: usize, j: usize) -> Vec<F> {
        let m = self.base();
        let scale = m.pow(k as u32);
        let mut vec = self.rho(which, i / scale, j / scale);
        for l in (0..k).rev() {
            let p = m.pow(l as u32);
            vec = self.block(which, (i / p) % m, (j / p) % m).left_apply(&vec);
        }
        vec
    }

    /// `(H^y_(2k) V^{y'}_(2k))[i, j]` for every pair `(y, y')`, indexed `y * s + y'`.
    fn pair_chain(&self, k: usize, i: usize, j: usize) -> Vec<F> {
        let (s, m) = (self.states(), self.base());
        let scale = m.pow(k as u32);
        let (i0, j0) = (i / scale, j / scale);
        let mut vec: Vec<F> = self.q0_pairs.iter().map(|q| q[(i0, j0)].clone()).collect();
        for l in (0..k).rev() {
            let p = m.pow(l as u32);
            let (a, b) = ((i / p) % m, (j / p) % m);
            let mut next = vec![F::zero(); s * s];
            for (src, w) in vec.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
                let (z, z2) = (src / s, src % s);
                for (dst, slot) in next.iter_mut().enumerate() {
                    let (u, u2) = (dst / s, dst % s);
                    let e = &self.pair_products[((z * s + u) * s + z2) * s + u2][(a, b)];
                    if !e.is_zero() {
                        *slot = slot.clone() + w.clone() * e.clone();
                    }
                }
            }
            vec = next;
        }
        vec
    }

    pub fn entry(&self, which: Which, x: usize, i: usize, j: usize) -> Result<F> {
        let (rows, cols) = self.shape(which);
        let s = self.states();
        if x >= s {
            return Err(Error::IndexOutOfRange { index: x as i64, width: s });
        }
        if i >= rows || j >= cols {
            return Err(Error::IndexOutOfRange { index: i.max(j) as i64, width: rows.max(cols) });
        }
        let k = self.kappa / 2;
        if self.kappa.is_multiple_of(2) {
            return Ok(self.chain(which, k, i, j)[x].clone());
        }
        let m = self.base();
        let out = match which {
            Which::V => {
                let vec = self.chain(Which::H, k, i, j / m);
                (0..s).fold(F::zero(), |acc, y| acc + vec[y].clone() * self.factor.h_row(y, x)[j % m].clone())
            }
            Which::H => {
                let vec = self.chain(Which::V, k, i / m, j);
                (0..s).fold(F::zero(), |acc, y| acc + vec[y].clone() * self.factor.v_col(y, x)[i % m].clone())
            }
            Which::Q => {
                let vec = self.pair_chain(k, i, j);
                (0..s * s).fold(F::zero(), |acc, yy| acc + vec[yy].clone() * self.table[yy * s + x].clone())
            }
        };
        Ok(out)
    }
}
