use serde::Serialize;
use serde_json::Value;

use super::eager::GrowthState;
use crate::algebra::{Field, JsonScalar, Matrix, StationaryMethod};
use crate::gas::{invariant_measure, Layout, DEFAULT_STATE_CAP};
use crate::{Error, Result};

/// `Q* X = X` column `right`, `Y Q* = Y` row `left`, with `left . right = 1`
/// and the first nonzero entry of `left` equal to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<F> {
    pub left: Vec<F>,
    pub right: Vec<F>,
}

fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Splits a rank-one idempotent `S = R L` into its factors.
pub fn rank_one_factors<F: Field>(s: &Matrix<F>, tol: f64) -> Result<EigenPair<F>> {
    let n = s.rows();
    let (mut bi, mut bj, mut best) = (0, 0, -1.0);
    for i in 0..n {
        for j in 0..n {
            let m = s[(i, j)].magnitude();
            if m > best {
                (bi, bj, best) = (i, j, m);
            }
        }
    }
    if best <= tol {
        return Err(Error::ZeroMass);
    }
    let pivot_inv = s[(bi, bj)].try_inv().ok_or(Error::DivisionByZero)?;
    let mut right: Vec<F> = (0..n).map(|i| s[(i, bj)].clone()).collect();
    let mut left: Vec<F> = (0..n).map(|j| s[(bi, j)].clone() * pivot_inv.clone()).collect();
    let lead = left.iter().find(|x| x.magnitude() > tol).cloned().ok_or(Error::ZeroMass)?;
    let lead_inv = lead.try_inv().ok_or(Error::DivisionByZero)?;
    left = left.into_iter().map(|x| x * lead_inv.clone()).collect();
    right = right.into_iter().map(|x| x * lead.clone()).collect();
    Ok(EigenPair { left, right })
}

/// `sum_{i in mask} L_i R_i / sum_j L_j R_j`.
pub fn density_from_eigenvectors<F: Field>(left: &[F], right: &[F], mask: &[bool]) -> Result<F> {
    if left.len() != right.len() || left.len() != mask.len() {
        return Err(Error::Dimension("eigenvectors and mask differ in length".into()));
    }
    let num = left
        .iter()
        .zip(right)
        .zip(mask)
        .filter(|(_, &m)| m)
        .fold(F::zero(), |acc, ((l, r), _)| acc + l.clone() * r.clone());
    let den = dot(left, right);
    Ok(num * den.try_inv().ok_or(Error::DivisionByZero)?)
}

/// `Tr(Q^1 (Q*)^{n-1}) / Tr((Q*)^n)`.
pub fn trace_ratio_density<F: Field>(q1: &Matrix<F>, q_star: &Matrix<F>, n: usize) -> Result<F> {
    let pow = q_star.pow(n as u64 - 1);
    let den = (&pow * q_star).trace();
    Ok((q1 * &pow).trace() * den.try_inv().ok_or(Error::DivisionByZero)?)
}

/// Largest `|a - c b|` over entries, with `c` fitted at the largest entry of `b`.
fn proportional_residual<F: Field>(a: &[F], b: &[F]) -> f64 {
    let Some((k, _)) = b.iter().enumerate().max_by(|x, y| x.1.magnitude().total_cmp(&y.1.magnitude())) else {
        return 0.0;
    };
    let Some(inv) = b[k].try_inv() else {
        return a.iter().map(|x| x.magnitude()).fold(0.0, f64::max);
    };
    let c = a[k].clone() * inv;
    a.iter().zip(b).map(|(x, y)| (x.clone() - c.clone() * y.clone()).magnitude()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralStep {
    pub kappa: usize,
    pub size: usize,
    pub trace_qstar: Value,
    pub trace_error: f64,
    pub stabilization_index: Option<usize>,
    pub stabilized_rank: Option<usize>,
    /// `|Q*_(k) - P_(k-1)|`.
    pub qp_residual: Option<f64>,
    /// `R_(k)` against `H*_(k-1) R_(k-1)` up to scale.
    pub right_recursion_residual: Option<f64>,
    /// `L_(k)` against `L_(k-1) V*_(k-1)` up to scale.
    pub left_recursion_residual: Option<f64>,
    /// Density of `mu_(k-1)` from the eigenvectors of `Q*_(k)`.
    pub density_eigen: Option<Value>,
    /// The same density from a trace ratio of `Q_(k-1)` at a width past stabilization.
    pub density_trace: Option<Value>,
    pub density_gap: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub steps: Vec<SpectralStep>,
    pub pass: bool,
}

pub fn spectral_check<F: Field + JsonScalar>(g: &GrowthState<F>, tol: f64) -> Result<SpectralReport> {
    let ok = |r: f64| if F::EXACT { r == 0.0 } else { r <= tol };
    let mut steps = Vec::new();
    let mut prev_pair: Option<EigenPair<F>> = None;
    let mut prev_stab: Option<usize> = None;
    for k in 0..=g.kappa() {
        let st = g.step(k);
        let qs = st.q_star();
        let n = qs.rows();
        let tr = qs.trace();
        let trace_error = (tr.clone() - F::one()).magnitude();
        let stab = qs.power_stabilize(4 * n + 4, tol);
        let stabilization_index = stab.as_ref().map(|(m, _)| *m);
        let stabilized_rank = stab.as_ref().map(|(_, s)| s.rank(tol.max(1e-12)));
        let pair = match &stab {
            Some((_, s)) if stabilized_rank == Some(1) => rank_one_factors(s, tol).ok(),
            _ => None,
        };
        let mut qp_residual = None;
        let mut right_recursion_residual = None;
        let mut left_recursion_residual = None;
        let (mut density_eigen, mut density_trace, mut density_gap) = (None, None, None);
        if k > 0 {
            let before = g.step(k - 1);
            qp_residual = Some(qs.max_abs_diff(&before.p_matrix()));
            if let (Some(cur), Some(old)) = (&pair, &prev_pair) {
                right_recursion_residual = Some(proportional_residual(&cur.right, &before.h_star().right_apply(&old.right)));
                left_recursion_residual = Some(proportional_residual(&cur.left, &before.v_star().left_apply(&old.left)));
            }
            if let (Some(cur), Some(old_stab)) = (&pair, prev_stab) {
                let mask = g.column_mask(k - 1, 1);
                let from_eigen = density_from_eigenvectors(&cur.left, &cur.right, &mask)?;
                let width = old_stab + 2;
                let from_trace = trace_ratio_density(&before.q[1], &before.q_star(), width)?;
                density_gap = Some((from_eigen.clone() - from_trace.clone()).magnitude());
                density_eigen = Some(from_eigen.to_json());
                density_trace = Some(from_trace.to_json());
            }
        }
        let bound_ok = stabilization_index.is_some_and(|m| m <= 2 * k.max(1));
        let pass = ok(trace_error)
            && bound_ok
            && stabilized_rank == Some(1)
            && qp_residual.is_none_or(ok)
            && right_recursion_residual.map_or(k == 0, ok)
            && left_recursion_residual.map_or(k == 0, ok)
            && density_gap.map_or(k == 0, ok);
        steps.push(SpectralStep {
            kappa: k,
            size: n,
            trace_qstar: tr.to_json(),
            trace_error,
            stabilization_index,
            stabilized_rank,
            qp_residual,
            right_recursion_residual,
            left_recursion_residual,
            density_eigen,
            density_trace,
            density_gap,
            pass,
        });
        prev_pair = pair;
        prev_stab = stabilization_index;
    }
    let pass = steps.iter().all(|s| s.pass);
    Ok(SpectralReport { steps, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityRow {
    pub kappa: usize,
    pub density: f64,
    pub exact: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityTable {
    pub width: usize,
    pub exact: Value,
    pub rows: Vec<DensityRow>,
    /// Whether the gap never grows along the tabulated steps.
    pub monotone: bool,
}

impl DensityTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kappa,density,exact,gap\n");
        for r in &self.rows {
            out.push_str(&format!("{},{:.17e},{:.17e},{:.17e}\n", r.kappa, r.density, r.exact, r.gap));
        }
        out
    }
}

/// Site density of `mu_(k)` on width `n` for every grown step, against the stationary value.
pub fn density_table<F: Field + JsonScalar>(g: &GrowthState<F>, width: usize) -> Result<DensityTable> {
    let inv = invariant_measure(&g.local, Layout::Row, width, StationaryMethod::EXACT, DEFAULT_STATE_CAP)?;
    let exact = inv.site_marginal(&[(0, 1)]);
    let mut rows = Vec::new();
    for st in &g.steps {
        let d = trace_ratio_density(&st.q[1], &st.q_star(), width)?;
        let gap = (d.clone() - exact.clone()).magnitude();
        rows.push(DensityRow { kappa: st.kappa, density: d.to_c64().re, exact: exact.to_c64().re, gap });
    }
    let monotone = rows.windows(2).all(|w| w[1].gap <= w[0].gap + 1e-15);
    Ok(DensityTable { width, exact: exact.to_json(), rows, monotone })
}
