//! Closed-form solutions of the rewriting systems.
//!
//! Square roots pick the principal branch unless the matching bit of `branch`
//! is set, in which case they are negated. Bits are consumed in order of use.

use serde::Serialize;
use serde_json::Value;

use super::build::{build_system, Assignment, ResidualReport, SplitPattern, SystemKind, SystemSpec};
use super::factor::FactorSolution;
use super::zigzag::ZigzagSolution;
use crate::algebra::scalar::sqrt_or_err;
use crate::algebra::{Field, JsonScalar, Matrix, Radicals};
use crate::gas::{GasKind, GasParams, LocalTransition, SplitSolution};
use crate::lattice::LatticeKind;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CatalogId {
    Gas1Split,
    FactorXSize4,
    FactorXSize4C1,
    FactorXSize6,
    FactorYSize4D1,
    FactorYSize4Corner,
    FactorYSize6,
    TriSplit,
}

impl CatalogId {
    pub const ALL: [CatalogId; 8] = [
        CatalogId::Gas1Split,
        CatalogId::FactorXSize4,
        CatalogId::FactorXSize4C1,
        CatalogId::FactorXSize6,
        CatalogId::FactorYSize4D1,
        CatalogId::FactorYSize4Corner,
        CatalogId::FactorYSize6,
        CatalogId::TriSplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogId::Gas1Split => "gas1-split",
            CatalogId::FactorXSize4 => "factor-x-size4",
            CatalogId::FactorXSize4C1 => "factor-x-size4-c1",
            CatalogId::FactorXSize6 => "factor-x-size6",
            CatalogId::FactorYSize4D1 => "factor-y-size4-d1",
            CatalogId::FactorYSize4Corner => "factor-y-size4-corner",
            CatalogId::FactorYSize6 => "factor-y-size6",
            CatalogId::TriSplit => "tri-split",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Unknown { what: "catalog entry", name: s.into() })
    }

    pub fn gas(self) -> GasKind {
        match self {
            CatalogId::FactorYSize4D1 | CatalogId::FactorYSize4Corner | CatalogId::FactorYSize6 => GasKind::Y,
            _ => GasKind::X,
        }
    }

    pub fn lattice(self) -> LatticeKind {
        match self {
            CatalogId::TriSplit => LatticeKind::Triangular,
            _ => LatticeKind::Square,
        }
    }

    /// The system whose residual the entry is checked against.
    pub fn system_spec(self) -> SystemSpec {
        use super::build::Constraint;
        match self {
            CatalogId::Gas1Split => SystemSpec::new(SystemKind::FiniteSplit, 2).with_pattern(SplitPattern::Full),
            CatalogId::FactorXSize4 | CatalogId::FactorYSize4D1 => SystemSpec::new(SystemKind::Factor, 4),
            CatalogId::FactorXSize4C1 => SystemSpec::new(SystemKind::Factor, 4).with(Constraint::C1One),
            CatalogId::FactorYSize4Corner => SystemSpec::new(SystemKind::Factor, 4).with(Constraint::CornerY),
            CatalogId::FactorXSize6 | CatalogId::FactorYSize6 => SystemSpec::new(SystemKind::Factor, 6),
            CatalogId::TriSplit => SystemSpec::new(SystemKind::TriSplit, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CatalogEntry<F> {
    Split(SplitSolution<F>),
    Factor(FactorSolution<F>),
    Zigzag(ZigzagSolution<F>),
}

impl<F: Field + JsonScalar> CatalogEntry<F> {
    pub fn assignment(&self) -> Result<Assignment<F>> {
        match self {
            CatalogEntry::Split(s) => {
                let mut out = Assignment::new();
                for (tag, fam) in [("V", &s.v), ("H", &s.h)] {
                    for (x, m) in fam.iter().enumerate() {
                        for i in 0..m.rows() {
                            for j in 0..m.cols() {
                                out.insert(format!("{tag}{x}_{i}_{j}"), m[(i, j)].clone());
                            }
                        }
                    }
                }
                Ok(out)
            }
            CatalogEntry::Factor(f) => f.assignment(),
            CatalogEntry::Zigzag(z) => z.assignment(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CatalogEntry::Split(s) => s.to_json(),
            CatalogEntry::Factor(f) => f.to_json(),
            CatalogEntry::Zigzag(z) => z.to_json(),
        }
    }
}

struct Roots {
    branch: u32,
    used: u32,
}

impl Roots {
    fn sqrt<F: Radicals + JsonScalar>(&mut self, x: F) -> Result<F> {
        let r = sqrt_or_err(&x)?;
        let flip = (self.branch >> self.used) & 1 == 1;
        self.used += 1;
        Ok(if flip { -r } else { r })
    }
}

fn div<F: Field>(a: F, b: F) -> Result<F> {
    Ok(a * b.try_inv().ok_or(Error::DivisionByZero)?)
}

fn mat<F: Field>(rows: [[F; 2]; 2]) -> Matrix<F> {
    Matrix::from_rows(rows.into_iter().map(|r| r.to_vec()).collect()).expect("2x2")
}

/// Builds one catalog entry at the given parameters.
pub fn catalog_entry<F: Radicals + JsonScalar>(id: CatalogId, params: &GasParams<F>, branch: u32) -> Result<CatalogEntry<F>> {
    if params.kind() != id.gas() {
        return Err(Error::InvalidParams(format!("{} needs gas {} parameters", id.name(), id.gas().name())));
    }
    let mut roots = Roots { branch, used: 0 };
    let one = F::one;
    let zero = F::zero;
    let p = params.p().clone();
    match id {
        CatalogId::Gas1Split => {
            let s21 = div(one(), one() - p.clone())?;
            let v = vec![mat([[zero(), p.clone()], [zero(), one()]]), mat([[zero(), zero()], [s21, zero()]])];
            let h = vec![
                mat([[zero(), zero()], [one(), one() - p.clone()]]),
                mat([[zero(), (one() - p.clone()) * p.clone()], [zero(), zero()]]),
            ];
            Ok(CatalogEntry::Split(SplitSolution::new(v, h, 0.0)?))
        }
        CatalogId::FactorXSize4 => {
            let a = [roots.sqrt(-p.clone())?, one()];
            let c = [roots.sqrt(p.clone())?, zero()];
            let f = FactorSolution::from_letters(&a, &[zero(), one()], &c, &[zero(), zero()])?;
            Ok(CatalogEntry::Factor(f))
        }
        CatalogId::FactorXSize4C1 => {
            let a = [roots.sqrt(-p.clone())?, one()];
            let c = [one(), roots.sqrt(p.clone() - one())?];
            let f = FactorSolution::from_letters(&a, &[zero(), one()], &c, &[zero(), zero()])?;
            Ok(CatalogEntry::Factor(f))
        }
        CatalogId::FactorXSize6 => {
            let i = roots.sqrt(-one())?;
            let a = [roots.sqrt(-p.clone())?, zero(), one()];
            let c = [one(), roots.sqrt(p.clone())?, i.clone()];
            let d = [one(), zero(), i];
            let f = FactorSolution::from_letters(&a, &[zero(), zero(), one()], &c, &d)?;
            Ok(CatalogEntry::Factor(f))
        }
        CatalogId::FactorYSize4D1 | CatalogId::FactorYSize4Corner | CatalogId::FactorYSize6 => {
            let q = params.q().expect("gas Y has q").clone();
            let alpha = (one() - p.clone()) * q.clone();
            let beta = p.clone() + alpha.clone();
            let gamma = one() - alpha.clone();
            let delta = (one() - p.clone()) * (one() - q);
            let b3 = roots.sqrt(delta.clone())?;
            let a1 = roots.sqrt(div(-(p.clone() * gamma.clone()), delta.clone())?)?;
            let a_last = div(gamma.clone(), b3.clone())?;
            let f = match id {
                CatalogId::FactorYSize4D1 => {
                    let d2 = roots.sqrt(-delta.clone())?;
                    let disc = roots.sqrt(alpha.clone() * p.clone())?;
                    let c2 = div(alpha.clone() * d2.clone() + disc, one() - delta)?;
                    let c1 = alpha - c2.clone() * d2.clone();
                    FactorSolution::from_letters(&[a1, a_last], &[zero(), b3], &[c1, c2], &[one(), d2])?
                }
                CatalogId::FactorYSize4Corner => {
                    let lead = beta.clone() - alpha.clone() * p.clone() * delta.clone();
                    let disc = alpha.clone() * alpha.clone()
                        - lead.clone() * alpha.clone() * (one() - p.clone() * beta.clone());
                    let t = div(alpha.clone() + roots.sqrt(disc)?, lead)?;
                    let d1 = div(one(), roots.sqrt(beta + delta * t.clone() * t.clone())?)?;
                    let c1 = t * d1.clone();
                    let c2 = roots.sqrt(alpha.clone() - c1.clone() * c1.clone())?;
                    let d2 = div(alpha - c1.clone() * d1.clone(), c2.clone())?;
                    FactorSolution::from_letters(&[a1, a_last], &[zero(), b3], &[c1, c2], &[d1, d2])?
                }
                _ => {
                    let d2 = roots.sqrt(-delta.clone())?;
                    let c2 = -div(gamma.clone(), d2.clone())?;
                    let c3 = roots.sqrt(div(p.clone() * gamma, delta)?)?;
                    FactorSolution::from_letters(
                        &[a1, zero(), a_last],
                        &[zero(), zero(), b3],
                        &[one(), c2, c3],
                        &[one(), d2, zero()],
                    )?
                }
            };
            Ok(CatalogEntry::Factor(f))
        }
        CatalogId::TriSplit => {
            let two = F::from_i64(2);
            let disc = roots.sqrt(one() - F::from_i64(4) * p.clone())?;
            let r = div(two.clone() * p.clone() - one() + disc, two.clone() * p.clone())?;
            let rp = r.clone() * p.clone();
            let d10_21 = -div(rp.clone() + one() - two * p.clone(), p.clone())?;
            let family = vec![
                mat([[one(), r.clone()], [one(), r.clone()]]),
                mat([[-rp.clone(), rp.clone()], [-rp.clone(), rp]]),
                mat([[-one(), -r], [d10_21, one()]]),
                Matrix::zeros(2, 2),
            ];
            let z = ZigzagSolution::new(LatticeKind::Triangular, 2, family.clone(), family)?;
            Ok(CatalogEntry::Zigzag(z))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogCheck {
    pub entry: &'static str,
    pub system: &'static str,
    pub equations: usize,
    pub residual: ResidualReport,
    pub pass: bool,
}

/// Residual of an entry in the system it belongs to.
pub fn verify_entry<F: Radicals + JsonScalar>(
    id: CatalogId,
    entry: &CatalogEntry<F>,
    params: &GasParams<F>,
    tol: f64,
) -> Result<CatalogCheck> {
    let spec = id.system_spec();
    let local = LocalTransition::new(params.clone(), id.lattice());
    let sys = build_system(&spec, &local)?;
    let residual = sys.residual(&entry.assignment()?)?;
    let pass = if F::EXACT { residual.exact_zero } else { residual.max_abs <= tol };
    Ok(CatalogCheck { entry: id.name(), system: spec.kind.name(), equations: sys.equations.len(), residual, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Gaussian;
    use crate::gas::split_measure_check;
    use crate::systems::zigzag::zigzag_check;
    use num_complex::Complex;
    use num_rational::BigRational;

    fn g(n: i64, d: i64) -> Gaussian {
        Complex::new(BigRational::new(n.into(), d.into()), BigRational::new(0.into(), 1.into()))
    }

    fn check(id: CatalogId, params: GasParams<Gaussian>) {
        for branch in 0..4 {
            let e = catalog_entry(id, &params, branch).unwrap();
            let r = verify_entry(id, &e, &params, 0.0).unwrap();
            assert!(r.pass, "{} branch {branch}: {:?}", id.name(), r.residual.per_equation);
            if let CatalogEntry::Factor(f) = &e {
                let local = LocalTransition::new(params.clone(), LatticeKind::Square);
                assert!(f.table_residual(&local).unwrap().1);
            }
        }
    }

    #[test]
    fn gas_x_entries_are_exact() {
        check(CatalogId::FactorXSize4, GasParams::X { p: g(1, 4) });
        check(CatalogId::FactorXSize6, GasParams::X { p: g(4, 9) });
        // both p and p - 1 must be squares up to sign: p = 16/25
        check(CatalogId::FactorXSize4C1, GasParams::X { p: g(16, 25) });
    }

    #[test]
    fn gas_y_entries_are_exact() {
        // delta, p gamma / delta and alpha p are all rational squares here
        check(CatalogId::FactorYSize6, GasParams::Y { p: g(1, 25), q: g(19, 25) });
        check(CatalogId::FactorYSize6, GasParams::Y { p: g(1, 18), q: g(9, 17) });
        check(CatalogId::FactorYSize4D1, GasParams::Y { p: g(1, 18), q: g(9, 17) });
    }

    #[test]
    fn gas1_split_is_stationary() {
        let params = GasParams::X { p: BigRational::new(1.into(), 5.into()) };
        let CatalogEntry::Split(s) = catalog_entry(CatalogId::Gas1Split, &params, 0).unwrap() else { panic!() };
        assert!(verify_entry(CatalogId::Gas1Split, &CatalogEntry::Split(s.clone()), &params, 0.0).unwrap().pass);
        let local = LocalTransition::new(params, LatticeKind::Square);
        for n in 1..=4 {
            let r = split_measure_check(&s, &local, n, 1 << 12, 0.0).unwrap();
            assert!(r.residual_exact_zero && r.nonzero && r.matches_invariant, "n={n}");
        }
    }

    #[test]
    fn triangular_family_is_stationary() {
        for (n, d) in [(2, 9), (6, 25), (3, 16)] {
            let params = GasParams::X { p: BigRational::new(n.into(), d.into()) };
            for branch in 0..2 {
                let CatalogEntry::Zigzag(z) = catalog_entry(CatalogId::TriSplit, &params, branch).unwrap() else {
                    panic!()
                };
                let local = LocalTransition::new(params.clone(), LatticeKind::Triangular);
                for width in 2..=3 {
                    let r = zigzag_check(&z, &local, width, 1 << 12, 0.0).unwrap();
                    assert!(r.pass && r.nonzero, "p={n}/{d} branch {branch} width {width}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn double_root_family_is_nilpotent() {
        // at p = 1/4 every matrix is a multiple of one nilpotent matrix
        let params = GasParams::X { p: BigRational::new(1.into(), 4.into()) };
        let CatalogEntry::Zigzag(z) = catalog_entry(CatalogId::TriSplit, &params, 0).unwrap() else { panic!() };
        let local = LocalTransition::new(params, LatticeKind::Triangular);
        let r = zigzag_check(&z, &local, 2, 1 << 12, 0.0).unwrap();
        assert!(r.equations_exact_zero && !r.nonzero);
    }

    #[test]
    fn float_corner_entry() {
        let params = GasParams::Y { p: 0.3, q: 0.4 };
        let e = catalog_entry(CatalogId::FactorYSize4Corner, &params.map(|x| Complex::new(*x, 0.0)), 0).unwrap();
        let r = verify_entry(CatalogId::FactorYSize4Corner, &e, &params.map(|x| Complex::new(*x, 0.0)), 1e-10).unwrap();
        assert!(r.pass, "{:?}", r.residual);
    }
}
