use serde::Serialize;
use serde_json::{json, Value};

use super::composite::Which;
use super::eager::ones_init;
use super::lazy::LazyDescriptor;
use crate::algebra::{Field, JsonScalar, Matrix};
use crate::gas::{GasParams, LocalTransition};
use crate::systems::FactorSolution;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CornerClass {
    /// `M^2 = M` with `M != 0`.
    Idempotent,
    /// Powers reach a fixed nonzero matrix after `index` steps.
    Convergent { index: usize },
    /// Powers reach zero.
    TrivialLimit,
    /// No fixed power within the search bound.
    Divergent,
}

pub fn classify<F: Field>(m: &Matrix<F>, tol: f64) -> CornerClass {
    if m.is_zero() || m.max_magnitude() <= tol && !F::EXACT {
        return CornerClass::TrivialLimit;
    }
    if (m * m).near(m, tol) {
        return CornerClass::Idempotent;
    }
    match m.power_stabilize(64, tol) {
        Some((_, p)) if p.max_magnitude() <= tol || p.is_zero() => CornerClass::TrivialLimit,
        Some((index, _)) => CornerClass::Convergent { index },
        None => CornerClass::Divergent,
    }
}

fn stabilizes(c: CornerClass) -> bool {
    matches!(c, CornerClass::Idempotent | CornerClass::Convergent { .. })
}

#[derive(Debug, Clone, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CornerReport {
    pub m_v: Value,
    pub m_h: Value,
    pub m_q: Value,
    pub class_v: CornerClass,
    pub class_h: CornerClass,
    pub class_q: CornerClass,
    pub conditions: Vec<Condition>,
    /// `rho_Q` times the limit power of `M_q(0,0)`.
    pub rho_q_limit: Option<Value>,
}

/// `c1` and `d1`: first free entries of `h_{0,1}` and `h_{1,1}`.
fn c1_d1<F: Field + JsonScalar>(f: &FactorSolution<F>) -> (F, F) {
    (f.h_row(0, 1)[0].clone(), f.h_row(1, 1)[0].clone())
}

fn limit_power<F: Field>(m: &Matrix<F>, tol: f64) -> Option<Matrix<F>> {
    m.power_stabilize(64, tol).map(|(_, p)| p)
}

pub fn corner_analysis<F: Field + JsonScalar>(
    f: &FactorSolution<F>,
    local: &LocalTransition<F>,
    tol: f64,
) -> Result<CornerReport> {
    let lazy = LazyDescriptor::new(f, local, &ones_init(f.states), 0)?;
    let mv = lazy.block(Which::V, 0, 0);
    let mh = lazy.block(Which::H, 0, 0);
    let mq = lazy.block(Which::Q, 0, 0);
    let near = |a: F, b: F| a.near(&b, tol);
    let mut conditions = Vec::new();
    if f.states == 2 {
        let (c1, d1) = c1_d1(f);
        match local.params() {
            GasParams::X { .. } => {
                conditions.push(Condition { name: "d1 = 1", holds: near(d1, F::one()) });
                conditions.push(Condition { name: "c1^2 = 1", holds: near(c1.clone() * c1, F::one()) });
            }
            GasParams::Y { p, q } => {
                let one = F::one();
                let beta = p.clone() + q.clone() - p.clone() * q.clone();
                let delta = (one.clone() - p.clone()) * (one.clone() - q.clone());
                conditions.push(Condition { name: "d1 = 1", holds: near(d1.clone(), one.clone()) });
                let lhs = beta * d1.clone() * d1 + delta * c1.clone() * c1;
                conditions.push(Condition { name: "beta d1^2 + delta c1^2 = 1", holds: near(lhs, one) });
            }
            _ => {}
        }
    }
    let rho_q_limit = limit_power(&mq, tol).map(|p| {
        let rho = lazy.rho(Which::Q, 0, 0);
        json!(p.left_apply(&rho).iter().map(F::to_json).collect::<Vec<_>>())
    });
    Ok(CornerReport {
        m_v: mv.to_json(),
        m_h: mh.to_json(),
        m_q: mq.to_json(),
        class_v: classify(&mv, tol),
        class_h: classify(&mh, tol),
        class_q: classify(&mq, tol),
        conditions,
        rho_q_limit,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilizationRow {
    pub kappa: usize,
    /// Side of the compared block: `size(Q_(2 kappa)) / m`.
    pub block: usize,
    /// Largest `|Q_(2 kappa + 2) - Q_(2 kappa)|` on that block over all states.
    pub max_change: f64,
    pub exact_zero: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub size: usize,
    /// Growth step whose top-left block is taken as the limit.
    pub kappa: usize,
    pub stabilization: Vec<StabilizationRow>,
    /// `Q_inf^x - sum_w Q_inf^w (x) q_{w,x}` on the block.
    pub residual_max: f64,
    pub residual_exact_zero: bool,
    /// `sum_x Q_inf^x[0, 0]` and `rho_Q M_q(0,0)^inf 1`.
    pub corner_value: Value,
    pub corner_formula: Value,
    pub max_entry_magnitude: f64,
    /// `Tr((sum_x B^x)^n)` of the truncated blocks for `n = 1..=4`; reported only.
    pub truncated_traces: Vec<Value>,
    pub limit: Vec<Value>,
    pub pass: bool,
}

fn block_at<F: Field + JsonScalar>(lazy: &LazyDescriptor<F>, x: usize, size: usize) -> Result<Matrix<F>> {
    let mut out = Matrix::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            out[(i, j)] = lazy.entry(Which::Q, x, i, j)?;
        }
    }
    Ok(out)
}

/// Top-left `size x size` block of the fixed point `Q_inf^x = sum_w Q_inf^w (x) q_{w,x}`.
pub fn limit_truncation<F: Field + JsonScalar>(
    f: &FactorSolution<F>,
    local: &LocalTransition<F>,
    size: usize,
    tol: f64,
) -> Result<LimitReport> {
    let corner = corner_analysis(f, local, tol)?;
    if !stabilizes(corner.class_q) {
        return Err(Error::NonStabilizing(format!("M_q(0,0) is {:?}", corner.class_q)));
    }
    let (s, m) = (f.states, f.size());
    let init = ones_init(s);
    let mut digits = 0;
    while m.pow(digits) < size {
        digits += 1;
    }
    let ok = |exact: bool, r: f64| if F::EXACT { exact } else { r <= tol };

    let mut stabilization = Vec::new();
    for k in 1..=(digits as usize + 1) {
        let a = LazyDescriptor::new(f, local, &init, 2 * k)?;
        let b = LazyDescriptor::new(f, local, &init, 2 * k + 2)?;
        let side = m.pow(k as u32 - 1);
        let (mut worst, mut exact) = (0.0f64, true);
        for x in 0..s {
            let d = &block_at(&b, x, side)? - &block_at(&a, x, side)?;
            exact &= d.is_zero();
            worst = worst.max(d.max_magnitude());
        }
        stabilization.push(StabilizationRow { kappa: k, block: side, max_change: worst, exact_zero: exact });
    }

    let kappa = 2 * (digits as usize + 1);
    let lazy = LazyDescriptor::new(f, local, &init, kappa)?;
    let blocks: Vec<Matrix<F>> = (0..s).map(|x| block_at(&lazy, x, size)).collect::<Result<_>>()?;
    let bold = &lazy.composite.q;
    let (mut residual_max, mut residual_exact_zero) = (0.0f64, true);
    for x in 0..s {
        for i in 0..size {
            for j in 0..size {
                let rhs = (0..s).fold(F::zero(), |acc, w| {
                    acc + blocks[w][(i / m, j / m)].clone() * bold[w * s + x][(i % m, j % m)].clone()
                });
                let d = blocks[x][(i, j)].clone() - rhs;
                residual_exact_zero &= d.is_zero();
                residual_max = residual_max.max(d.magnitude());
            }
        }
    }

    let corner_value = (0..s).fold(F::zero(), |acc, x| acc + blocks[x][(0, 0)].clone());
    let mq = lazy.block(Which::Q, 0, 0);
    let limit = limit_power(&mq, tol).ok_or_else(|| Error::NonStabilizing("M_q(0,0) powers".into()))?;
    let rho_inf = limit.left_apply(&lazy.rho(Which::Q, 0, 0));
    let corner_formula = mq.left_apply(&rho_inf).into_iter().fold(F::zero(), |acc, v| acc + v);
    let corner_ok = corner_value.near(&corner_formula, tol);

    let star = Matrix::sum(&blocks, size, size);
    let mut power = Matrix::identity(size);
    let mut truncated_traces = Vec::new();
    for _ in 0..4 {
        power = &power * &star;
        truncated_traces.push(power.trace().to_json());
    }
    let stab_ok = stabilization.iter().all(|r| ok(r.exact_zero, r.max_change));
    Ok(LimitReport {
        size,
        kappa,
        pass: stab_ok && ok(residual_exact_zero, residual_max) && corner_ok,
        stabilization,
        residual_max,
        residual_exact_zero,
        corner_value: corner_value.to_json(),
        corner_formula: corner_formula.to_json(),
        max_entry_magnitude: blocks.iter().map(Matrix::max_magnitude).fold(0.0, f64::max),
        truncated_traces,
        limit: blocks.iter().map(Matrix::to_json).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Gaussian;
    use crate::lattice::LatticeKind;
    use crate::systems::{catalog_entry, CatalogEntry, CatalogId};
    use num_complex::{Complex, Complex64};
    use num_rational::BigRational;

    fn factor<F: crate::algebra::Radicals + JsonScalar>(id: CatalogId, params: &GasParams<F>) -> FactorSolution<F> {
        match catalog_entry(id, params, 0).unwrap() {
            CatalogEntry::Factor(f) => f,
            _ => unreachable!(),
        }
    }

    #[test]
    fn gas_x_size4_has_a_trivial_v_corner() {
        let params = GasParams::X { p: Complex64::new(0.25, 0.0) };
        let local = LocalTransition::new(params.clone(), LatticeKind::Square);
        let r = corner_analysis(&factor(CatalogId::FactorXSize4, &params), &local, 1e-12).unwrap();
        assert_eq!(r.class_v, CornerClass::TrivialLimit);
        assert!(!r.conditions[0].holds);
    }

    #[test]
    fn gas_y_size6_limit_vector() {
        let (p, q) = (0.2, 0.3);
        let params = GasParams::Y { p, q }.map(|x| Complex64::new(*x, 0.0));
        let local = LocalTransition::new(params.clone(), LatticeKind::Square);
        let r = corner_analysis(&factor(CatalogId::FactorYSize6, &params), &local, 1e-12).unwrap();
        assert_eq!(r.class_v, CornerClass::Idempotent);
        assert_eq!(r.class_q, CornerClass::Idempotent);
        let rho: Vec<Complex64> =
            r.rho_q_limit.unwrap().as_array().unwrap().iter().map(|v| Complex64::from_json(v).unwrap()).collect();
        assert!((rho[0].re - (1.0 - p) * (1.0 - q)).abs() < 1e-12);
        assert!((rho[1].re - (p - p * q + q)).abs() < 1e-12);
    }

    #[test]
    fn exact_gas_x_size6_limit() {
        let quarter = Complex::new(BigRational::new(1.into(), 4.into()), BigRational::new(0.into(), 1.into()));
        let params: GasParams<Gaussian> = GasParams::X { p: quarter };
        let local = LocalTransition::new(params.clone(), LatticeKind::Square);
        let r = limit_truncation(&factor(CatalogId::FactorXSize6, &params), &local, 36, 0.0).unwrap();
        assert!(r.residual_exact_zero && r.pass, "{:?}", r.stabilization);
    }
}
