//! Measures written as traces of matrix products.

use serde::Serialize;
use serde_json::Value;

use super::local::LocalTransition;
use super::transfer::{invariant_measure, transfer_matrix, Layout, RowMeasure};
use crate::algebra::{Field, JsonScalar, Matrix, Radicals, StationaryMethod};
use crate::lattice::{digit, rotate, zigzag_encode};
use crate::{Error, Result};

fn check_family<F: Field>(family: &[Matrix<F>]) -> Result<usize> {
    let m = family.first().ok_or_else(|| Error::Dimension("empty matrix family".into()))?.rows();
    if family.iter().any(|q| q.shape() != (m, m)) {
        return Err(Error::Dimension("family matrices must be square of one size".into()));
    }
    Ok(m)
}

/// `w(x) = Tr(Q^{x_0} Q^{x_1} ... Q^{x_{n-1}})` for every row `x`.
pub fn trace_measure<F: Field + JsonScalar>(family: &[Matrix<F>], width: usize) -> Result<RowMeasure<F>> {
    let m = check_family(family)?;
    let s = family.len();
    let mut weights = vec![F::zero(); s.pow(width as u32)];
    // Depth-first over sites so that prefixes are shared.
    let mut stack: Vec<(usize, usize, Matrix<F>)> = vec![(0, 0, Matrix::identity(m))];
    while let Some((depth, code, prod)) = stack.pop() {
        if depth == width {
            weights[code] = prod.trace();
            continue;
        }
        if prod.is_zero() {
            continue;
        }
        for (x, q) in family.iter().enumerate() {
            stack.push((depth + 1, code + x * s.pow(depth as u32), &prod * q));
        }
    }
    RowMeasure::new(Layout::Row, width, s, weights)
}

/// `w(u, d) = Tr(prod_i D^{u_i d_i} U^{d_i u_{i+1}})` on zigzag states.
///
/// Both families are indexed by `a * s + b`.
pub fn zigzag_trace_measure<F: Field + JsonScalar>(
    down: &[Matrix<F>],
    up: &[Matrix<F>],
    layout: Layout,
    width: usize,
) -> Result<RowMeasure<F>> {
    if layout == Layout::Row {
        return Err(Error::InvalidParams("zigzag measure needs a zigzag layout".into()));
    }
    let m = check_family(down)?;
    if check_family(up)? != m || up.len() != down.len() {
        return Err(Error::Dimension("D and U families differ in shape".into()));
    }
    let s = (down.len() as f64).sqrt().round() as usize;
    if s * s != down.len() {
        return Err(Error::Dimension("family size must be a square".into()));
    }
    let mut weights = vec![F::zero(); s.pow(2 * width as u32)];
    let total = s.pow(width as u32);
    for ucode in 0..total {
        let u: Vec<u8> = (0..width).map(|i| digit(ucode, i, s)).collect();
        for dcode in 0..total {
            let d: Vec<u8> = (0..width).map(|i| digit(dcode, i, s)).collect();
            let mut prod = Matrix::identity(m);
            for i in 0..width {
                let a = u[i] as usize;
                let b = d[i] as usize;
                let c = u[(i + 1) % width] as usize;
                prod = &(&prod * &down[a * s + b]) * &up[b * s + c];
                if prod.is_zero() {
                    break;
                }
            }
            weights[zigzag_encode(&u, &d, s)] = prod.trace();
        }
    }
    RowMeasure::new(layout, width, s, weights)
}

/// Trace representation of a rotation-invariant measure.
///
/// `Q^x[z, rot(z)] = w(z)^{1/n}` when site 0 of `z` holds `x`: the only closed
/// walk with labels `x` starts at `z = x` and visits its rotations.
pub fn rotation_invariant_representation<F: Radicals + JsonScalar>(measure: &RowMeasure<F>) -> Result<Vec<Matrix<F>>> {
    if measure.layout != Layout::Row {
        return Err(Error::InvalidParams("rotation representation needs a row measure".into()));
    }
    let (n, s) = (measure.width, measure.states);
    let size = measure.weights.len();
    let mut family = vec![Matrix::zeros(size, size); s];
    for z in 0..size {
        let r = rotate(z, n, s, 1);
        if !measure.weights[z].near(&measure.weights[r], 1e-12) {
            return Err(Error::InvalidParams(format!("measure is not rotation invariant at state {z}")));
        }
        let w = &measure.weights[z];
        if w.is_zero() {
            continue;
        }
        let root = w
            .try_nth_root(n as u32)
            .ok_or_else(|| Error::NotRepresentable(format!("{}-th root of {}", n, w.render())))?;
        family[digit(z, 0, s) as usize][(z, r)] = root;
    }
    Ok(family)
}

/// Matrices whose trace measure is uniform on the rotation class of `alpha`.
pub fn rotation_class_matrices<F: Radicals + JsonScalar>(alpha: usize, width: usize, states: usize) -> Result<Vec<Matrix<F>>> {
    let size = states.pow(width as u32);
    if alpha >= size {
        return Err(Error::InvalidParams(format!("state {alpha} out of range")));
    }
    let mut class: Vec<usize> = (0..width).map(|k| rotate(alpha, width, states, k)).collect();
    class.sort_unstable();
    class.dedup();
    let w = F::from_ratio(1, class.len() as i64);
    let weights = (0..size).map(|z| if class.contains(&z) { w.clone() } else { F::zero() }).collect();
    rotation_invariant_representation(&RowMeasure::new(Layout::Row, width, states, weights)?)
}

/// Block-diagonal family whose trace measure is `sum_k c_k w_k` when every
/// family `k` is scaled by `c_k^{1/n}`.
pub fn mixture<F: Radicals + JsonScalar>(parts: &[(F, Vec<Matrix<F>>)], width: usize) -> Result<Vec<Matrix<F>>> {
    let s = parts.first().map(|(_, f)| f.len()).ok_or_else(|| Error::Dimension("empty mixture".into()))?;
    let total: usize = parts.iter().map(|(_, f)| f[0].rows()).sum();
    let mut out = vec![Matrix::zeros(total, total); s];
    let mut offset = 0;
    for (c, fam) in parts {
        if fam.len() != s {
            return Err(Error::Dimension("families with different state counts".into()));
        }
        let m = check_family(fam)?;
        let root = c
            .try_nth_root(width as u32)
            .ok_or_else(|| Error::NotRepresentable(format!("{}-th root of {}", width, c.render())))?;
        for (x, q) in fam.iter().enumerate() {
            for i in 0..m {
                for j in 0..m {
                    out[x][(offset + i, offset + j)] = root.clone() * q[(i, j)].clone();
                }
            }
        }
        offset += m;
    }
    Ok(out)
}

/// Matrices `V^x` (k x l) and `H^x` (l x k) with `V^x H^y = 0` whenever `x != y`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSolution<F> {
    pub v: Vec<Matrix<F>>,
    pub h: Vec<Matrix<F>>,
}

impl<F: Field + JsonScalar> SplitSolution<F> {
    pub fn new(v: Vec<Matrix<F>>, h: Vec<Matrix<F>>, tol: f64) -> Result<Self> {
        if v.len() != h.len() || v.is_empty() {
            return Err(Error::Dimension("V and H families must have equal nonzero length".into()));
        }
        let (k, l) = v[0].shape();
        if v.iter().any(|m| m.shape() != (k, l)) || h.iter().any(|m| m.shape() != (l, k)) {
            return Err(Error::Dimension("V must be k x l and H l x k throughout".into()));
        }
        let sol = SplitSolution { v, h };
        let cross = sol.cross_residual();
        let ok = if F::EXACT { cross == 0.0 } else { cross <= tol };
        if !ok {
            return Err(Error::NotOrthogonal(format!("largest entry {cross:e}")));
        }
        Ok(sol)
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

    /// `Q^x = V^x H^x`.
    pub fn q_family(&self) -> Vec<Matrix<F>> {
        self.v.iter().zip(&self.h).map(|(v, h)| v * h).collect()
    }

    /// `Q* = sum_x Q^x`.
    pub fn q_star(&self) -> Matrix<F> {
        let q = self.q_family();
        let m = q[0].rows();
        Matrix::sum(&q, m, m)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "V": self.v.iter().map(Matrix::to_json).collect::<Vec<_>>(),
            "H": self.h.iter().map(Matrix::to_json).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitMeasureReport {
    pub n: usize,
    pub residual_max: f64,
    pub residual_exact_zero: bool,
    pub nonzero: bool,
    pub matches_invariant: bool,
    pub params: Value,
}

/// Checks that the trace measure of `Q^x = V^x H^x` is stationary on width `n`.
pub fn split_measure_check<F: Field + JsonScalar>(
    sol: &SplitSolution<F>,
    local: &LocalTransition<F>,
    width: usize,
    cap: u128,
    tol: f64,
) -> Result<SplitMeasureReport> {
    let w = trace_measure(&sol.q_family(), width)?;
    let t = transfer_matrix(local, Layout::Row, width, cap)?;
    let next = w.step(&t);
    let residual_exact_zero = next.weights == w.weights;
    let residual_max = next.max_abs_diff(&w);
    let nonzero = w.weights.iter().any(|x| !x.is_zero());
    let matches_invariant = if nonzero && !w.total().is_zero() {
        let inv = invariant_measure(local, Layout::Row, width, StationaryMethod::EXACT, cap)?;
        w.normalized()?.near(&inv, tol)
    } else {
        false
    };
    Ok(SplitMeasureReport {
        n: width,
        residual_max,
        residual_exact_zero,
        nonzero,
        matches_invariant,
        params: local.params().to_json(),
    })
}
