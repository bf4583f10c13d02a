use crate::algebra::{Field, JsonScalar, Matrix};
use crate::gas::LocalTransition;
use crate::systems::FactorSolution;
use crate::{Error, Result};

/// Two-step blocks of the growth, each `m x m` and indexed `z * s + x`:
/// `v_{z,x} = sum_y v_{z,y} (x) h_{y,x}`, `h_{z,x} = sum_y h_{z,y} (x) v_{y,x}`
/// and `q_{w,x} = sum_{y,z} T_{y,z,x} v_{w,y} h_{w,z}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Composite<F> {
    pub states: usize,
    pub size: usize,
    pub v: Vec<Matrix<F>>,
    pub h: Vec<Matrix<F>>,
    pub q: Vec<Matrix<F>>,
}

impl<F> Composite<F> {
    pub fn family(&self, which: Which) -> &[Matrix<F>] {
        match which {
            Which::V => &self.v,
            Which::H => &self.h,
            Which::Q => &self.q,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    V,
    H,
    Q,
}

impl Which {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "V" | "v" => Ok(Which::V),
            "H" | "h" => Ok(Which::H),
            "Q" | "q" => Ok(Which::Q),
            _ => Err(Error::Unknown { what: "matrix family", name: s.into() }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Which::V => "V",
            Which::H => "H",
            Which::Q => "Q",
        }
    }
}

pub fn composite_factors<F: Field + JsonScalar>(f: &FactorSolution<F>, local: &LocalTransition<F>) -> Result<Composite<F>> {
    let s = f.states;
    if local.states() != s || local.arity() != 2 {
        return Err(Error::InconsistentSizes("factor and transition disagree on states or arity".into()));
    }
    let m = f.size();
    let zero = || Matrix::zeros(m, m);
    let mut v = vec![zero(); s * s];
    let mut h = vec![zero(); s * s];
    let mut q = vec![zero(); s * s];
    for z in 0..s {
        for x in 0..s {
            for y in 0..s {
                v[z * s + x] = &v[z * s + x] + &f.v_matrix(z, y).kron(&f.h_matrix(y, x));
                h[z * s + x] = &h[z * s + x] + &f.h_matrix(z, y).kron(&f.v_matrix(y, x));
                for y2 in 0..s {
                    let t = local.prob(&[y as u8, y2 as u8], x as u8);
                    if !t.is_zero() {
                        q[z * s + x] = &q[z * s + x] + &(&f.v_matrix(z, y) * &f.h_matrix(z, y2)).scale(t);
                    }
                }
            }
        }
    }
    Ok(Composite { states: s, size: m, v, h, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::{transfer_matrix, GasParams, Layout};
    use crate::lattice::LatticeKind;
    use crate::systems::{catalog_entry, CatalogEntry, CatalogId};
    use num_complex::Complex64;

    fn factor(id: CatalogId, params: &GasParams<Complex64>) -> FactorSolution<Complex64> {
        match catalog_entry(id, params, 0).unwrap() {
            CatalogEntry::Factor(f) => f,
            _ => unreachable!(),
        }
    }

    #[test]
    fn cyclic_trace_of_q_is_two_step_transfer() {
        let params = GasParams::Y { p: 0.2, q: 0.3 }.map(|x| Complex64::new(*x, 0.0));
        let local = LocalTransition::new(params.clone(), LatticeKind::Square);
        let c = composite_factors(&factor(CatalogId::FactorYSize4Corner, &params), &local).unwrap();
        assert_eq!(c.q[0].shape(), (4, 4));
        let t = transfer_matrix(&local, Layout::Row, 2, 1 << 12).unwrap();
        let t2 = &t * &t;
        // codes are little-endian: site i is digit i
        for yc in 0..4 {
            for xc in 0..4 {
                let (y, x) = ([yc & 1, yc >> 1], [xc & 1, xc >> 1]);
                let prod = &c.q[y[0] * 2 + x[0]] * &c.q[y[1] * 2 + x[1]];
                assert!((prod.trace() - t2[(yc, xc)]).norm() < 1e-10, "{yc} {xc}");
            }
        }
    }

    #[test]
    fn corner_of_gas_x_size6() {
        let params = GasParams::X { p: Complex64::new(0.25, 0.0) };
        let local = LocalTransition::new(params.clone(), LatticeKind::Square);
        let c = composite_factors(&factor(CatalogId::FactorXSize6, &params), &local).unwrap();
        assert_eq!(c.v[0].shape(), (6, 6));
        let corner: Vec<f64> = c.v.iter().map(|m| m[(0, 0)].re).collect();
        assert_eq!(corner, vec![0.0, 1.0, 0.0, 1.0]);
    }
}
