//! Polynomial systems whose solutions give trace representations.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{Field, JsonScalar, Matrix, Poly, Ring};
use crate::gas::{GasParams, LocalTransition};
use crate::lattice::LatticeKind;
use crate::{Error, Result};

/// Values for the variables of a system, by name.
pub type Assignment<F> = BTreeMap<String, F>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    /// `V^x H^x = sum_{y,y'} H^y V^{y'} T_{y,y',x}` with `V^x H^y = 0` for `x != y`.
    FiniteSplit,
    /// Single-row `h_{x,y}` and `v_{x,y} = h_{x,y}^T` with `h_{x,y} v_{x',y} = T_{x,x',y}`.
    Factor,
    /// Scalars `d_ab, u_ab, w_ab` of a zigzag product measure.
    ZigzagScalar,
    /// Matrices `D^ab, U^ab` with a conjugating `P` relating `m` and `m~`.
    ZigzagMatrix,
    /// Triangular zigzag matrices `D^ab, U^ab`.
    TriSplit,
    /// Triangular single-row/single-column `h_{dxz}, v_{xd'z}`.
    TriFactor,
}

impl SystemKind {
    pub const ALL: [SystemKind; 6] = [
        SystemKind::FiniteSplit,
        SystemKind::Factor,
        SystemKind::ZigzagScalar,
        SystemKind::ZigzagMatrix,
        SystemKind::TriSplit,
        SystemKind::TriFactor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::FiniteSplit => "finite-split",
            SystemKind::Factor => "factor",
            SystemKind::ZigzagScalar => "zigzag-scalar",
            SystemKind::ZigzagMatrix => "zigzag-matrix",
            SystemKind::TriSplit => "tri-split",
            SystemKind::TriFactor => "tri-factor",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Unknown { what: "system kind", name: s.into() })
    }

    pub fn lattice(self) -> LatticeKind {
        match self {
            SystemKind::TriSplit | SystemKind::TriFactor => LatticeKind::Triangular,
            _ => LatticeKind::Square,
        }
    }
}

/// Zero pattern of split matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitPattern {
    Full,
    /// `V^x` lives in column block `slot(x)`, `H^x` in row block `slot(x)`,
    /// so `V^x H^y = 0` for `x != y` holds identically.
    Block,
}

/// Extra equations that can be appended to a factor system (two states only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// `c_1 = 1`
    C1One,
    /// `d_1 = 1`
    D1One,
    /// `(p - pq + q) d_1^2 + (1 - q - p + pq) c_1^2 = 1`, the gas-Y corner condition.
    CornerY,
    /// `c_1^2 + q d_1^2 - q c_1^2 = 1`
    ListedY,
    /// `Tr(sum_x V^x H^x) = 1`, excluding the zero solution of split systems.
    UnitTrace,
}

impl Constraint {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "c1=1" => Ok(Constraint::C1One),
            "d1=1" => Ok(Constraint::D1One),
            "corner-y" => Ok(Constraint::CornerY),
            "listed-y" => Ok(Constraint::ListedY),
            "unit-trace" => Ok(Constraint::UnitTrace),
            _ => Err(Error::Unknown { what: "constraint", name: s.into() }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constraint::C1One => "c1=1",
            Constraint::D1One => "d1=1",
            Constraint::CornerY => "corner-y",
            Constraint::ListedY => "listed-y",
            Constraint::UnitTrace => "unit-trace",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSpec {
    pub kind: SystemKind,
    /// Matrix side (split kinds) or row length (factor kinds).
    pub size: usize,
    pub pattern: SplitPattern,
    pub constraints: Vec<Constraint>,
}

impl SystemSpec {
    pub fn new(kind: SystemKind, size: usize) -> Self {
        let pattern = if kind == SystemKind::FiniteSplit { SplitPattern::Block } else { SplitPattern::Full };
        SystemSpec { kind, size, pattern, constraints: vec![] }
    }

    pub fn with(mut self, c: Constraint) -> Self {
        self.constraints.push(c);
        self
    }

    pub fn with_pattern(mut self, pattern: SplitPattern) -> Self {
        self.pattern = pattern;
        self
    }
}

/// Position class that carries child value `y` in factor rows: state 1 sits
/// in slot 0 and state 0 in slot 1, matching the alternating zero pattern.
pub fn slot(y: usize) -> usize {
    match y {
        0 => 1,
        1 => 0,
        other => other,
    }
}

/// Name of the `k`-th free entry (1-based) of `h_{x,y}`.
pub fn factor_var(states: usize, x: usize, y: usize, k: usize) -> String {
    if states == 2 {
        let letter = ["a", "b", "c", "d"][y * 2 + x];
        format!("{letter}{k}")
    } else {
        format!("h{x}{y}_{k}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equation<F> {
    pub label: String,
    pub poly: Poly<F>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem<F> {
    pub kind: SystemKind,
    pub spec: SystemSpec,
    pub names: Vec<String>,
    pub equations: Vec<Equation<F>>,
    /// Variables scaled by `c` and by `1/c` under the system's scaling symmetry.
    pub scaling: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub exact_zero: bool,
    pub per_equation: Vec<(String, f64)>,
}

impl<F: Field + JsonScalar> PolySystem<F> {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn eval(&self, point: &[F]) -> Vec<F> {
        self.equations.iter().map(|e| e.poly.eval(point)).collect()
    }

    /// Orders an assignment by this system's variables.
    pub fn point(&self, assignment: &Assignment<F>) -> Result<Vec<F>> {
        self.names
            .iter()
            .map(|n| assignment.get(n).cloned().ok_or_else(|| Error::MissingVariable(n.clone())))
            .collect()
    }

    pub fn residual(&self, assignment: &Assignment<F>) -> Result<ResidualReport> {
        let values = self.eval(&self.point(assignment)?);
        let per_equation: Vec<(String, f64)> =
            self.equations.iter().zip(&values).map(|(e, v)| (e.label.clone(), v.magnitude())).collect();
        Ok(ResidualReport {
            max_abs: per_equation.iter().map(|(_, r)| *r).fold(0.0, f64::max),
            exact_zero: values.iter().all(|v| v.is_zero()),
            per_equation,
        })
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> PolySystem<G> {
        PolySystem {
            kind: self.kind,
            spec: self.spec.clone(),
            names: self.names.clone(),
            equations: self
                .equations
                .iter()
                .map(|e| Equation { label: e.label.clone(), poly: e.poly.map_coeffs(f) })
                .collect(),
            scaling: self.scaling.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "size": self.spec.size,
            "constraints": self.spec.constraints.iter().map(|c| c.name()).collect::<Vec<_>>(),
            "variables": self.names,
            "equations": self.equations.iter().map(|e| json!({
                "label": e.label,
                "poly": e.poly.render(&self.names, |c| c.render()),
            })).collect::<Vec<_>>(),
        })
    }
}

struct Builder<F> {
    names: Vec<String>,
    equations: Vec<Equation<F>>,
}

impl<F: Field> Builder<F> {
    fn var(&mut self, name: String) -> Poly<F> {
        let idx = match self.names.iter().position(|n| *n == name) {
            Some(i) => i,
            None => {
                self.names.push(name);
                self.names.len() - 1
            }
        };
        Poly::var(idx as u32)
    }

    fn matrix(&mut self, prefix: &str, n: usize, free: impl Fn(usize, usize) -> bool) -> Matrix<Poly<F>> {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if free(i, j) {
                    m[(i, j)] = self.var(format!("{prefix}_{i}_{j}"));
                }
            }
        }
        m
    }

    fn equate(&mut self, label: &str, poly: Poly<F>) {
        if poly.terms().next().is_none() || self.equations.iter().any(|e| e.poly == poly) {
            return;
        }
        self.equations.push(Equation { label: label.to_string(), poly });
    }

    fn equate_matrix(&mut self, label: &str, m: &Matrix<Poly<F>>) {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                self.equate(&format!("{label}[{i},{j}]"), m[(i, j)].clone());
            }
        }
    }
}

fn constant<F: Field>(c: &F) -> Poly<F> {
    Poly::constant(c.clone())
}

fn scale<F: Field>(m: &Matrix<Poly<F>>, c: &F) -> Matrix<Poly<F>> {
    m.map(|e| e.clone() * constant(c))
}

/// Builds the named system for the transition `local`.
pub fn build_system<F: Field + JsonScalar>(spec: &SystemSpec, local: &LocalTransition<F>) -> Result<PolySystem<F>> {
    if local.lattice() != spec.kind.lattice() {
        return Err(Error::InconsistentSizes(format!(
            "{} needs a {} transition",
            spec.kind.name(),
            spec.kind.lattice().name()
        )));
    }
    if spec.size == 0 {
        return Err(Error::InconsistentSizes("size must be positive".into()));
    }
    let s = local.states();
    let t = |parents: &[usize], child: usize| -> F {
        let p: Vec<u8> = parents.iter().map(|&v| v as u8).collect();
        local.prob(&p, child as u8).clone()
    };
    let mut b = Builder { names: vec![], equations: vec![] };
    let mut scaling = None;
    let k = spec.size;
    match spec.kind {
        SystemKind::FiniteSplit => {
            if spec.pattern == SplitPattern::Block && !k.is_multiple_of(s) {
                return Err(Error::InconsistentSizes(format!("block pattern needs size divisible by {s}")));
            }
            let block = k / s;
            let v: Vec<_> = (0..s)
                .map(|x| {
                    b.matrix(&format!("V{x}"), k, |_, j| spec.pattern == SplitPattern::Full || j / block == slot(x))
                })
                .collect();
            let h: Vec<_> = (0..s)
                .map(|x| {
                    b.matrix(&format!("H{x}"), k, |i, _| spec.pattern == SplitPattern::Full || i / block == slot(x))
                })
                .collect();
            let vars_v: Vec<usize> = (0..b.names.len()).filter(|&i| b.names[i].starts_with('V')).collect();
            let vars_h: Vec<usize> = (0..b.names.len()).filter(|&i| b.names[i].starts_with('H')).collect();
            scaling = Some((vars_v, vars_h));
            for x in 0..s {
                for y in 0..s {
                    if x != y {
                        b.equate_matrix(&format!("V{x}H{y}"), &(&v[x] * &h[y]));
                    }
                }
            }
            for x in 0..s {
                let mut rhs = Matrix::zeros(k, k);
                for y in 0..s {
                    for y2 in 0..s {
                        rhs = &rhs + &scale(&(&h[y] * &v[y2]), &t(&[y, y2], x));
                    }
                }
                b.equate_matrix(&format!("split{x}"), &(&(&v[x] * &h[x]) - &rhs));
            }
            if spec.constraints.contains(&Constraint::UnitTrace) {
                let mut tr = Poly::zero();
                for x in 0..s {
                    tr = tr + (&v[x] * &h[x]).trace();
                }
                b.equate("unit-trace", tr - Poly::one());
            }
        }
        SystemKind::Factor => {
            if !k.is_multiple_of(s) {
                return Err(Error::InconsistentSizes(format!("factor rows need length divisible by {s}")));
            }
            let rows = factor_rows(&mut b, s, k);
            for y in 0..s {
                for x in 0..s {
                    for x2 in 0..s {
                        let dot = dot(&rows[x * s + y], &rows[x2 * s + y]);
                        b.equate(&format!("h{x}{y}.v{x2}{y}"), dot - constant(&t(&[x, x2], y)));
                    }
                }
            }
            for &c in &spec.constraints {
                add_factor_constraint(&mut b, c, local.params(), s)?;
            }
        }
        SystemKind::ZigzagScalar => {
            let mut d = vec![Poly::zero(); s * s];
            let mut u = vec![Poly::zero(); s * s];
            let mut w = vec![Poly::zero(); s * s];
            for a in 0..s {
                for c in 0..s {
                    d[a * s + c] = b.var(format!("d{a}{c}"));
                }
            }
            for a in 0..s {
                for c in 0..s {
                    u[a * s + c] = b.var(format!("u{a}{c}"));
                }
            }
            for a in 0..s {
                for c in 0..s {
                    w[a * s + c] = b.var(format!("w{a}{c}"));
                }
            }
            let m = |a: usize, bb: usize, x: &[Poly<F>], y: &[Poly<F>]| -> Poly<F> {
                (0..s).fold(Poly::zero(), |acc, c| acc + x[a * s + c].clone() * y[c * s + bb].clone())
            };
            for a in 0..s {
                for bb in 0..s {
                    let mab = m(a, bb, &d, &u);
                    for c in 0..s {
                        let lhs = d[a * s + c].clone() * u[c * s + bb].clone();
                        b.equate(&format!("du{a}{bb}{c}"), lhs - mab.clone() * constant(&t(&[a, bb], c)));
                    }
                }
            }
            for a in 0..s {
                for bb in 0..s {
                    let tilde = m(a, bb, &u, &d);
                    b.equate(&format!("w{a}{bb}"), tilde - w[a * s + bb].clone() * m(a, bb, &d, &u));
                }
            }
            add_cycle_constraints(&mut b, &w, s);
        }
        SystemKind::ZigzagMatrix => {
            let d: Vec<_> = (0..s * s).map(|i| b.matrix(&format!("D{}{}", i / s, i % s), k, |_, _| true)).collect();
            let u: Vec<_> = (0..s * s).map(|i| b.matrix(&format!("U{}{}", i / s, i % s), k, |_, _| true)).collect();
            let p = b.matrix("P", k, |_, _| true);
            let w: Vec<Poly<F>> = (0..s * s).map(|i| b.var(format!("w{}{}", i / s, i % s))).collect();
            for a in 0..s {
                for bb in 0..s {
                    let mut mab = Matrix::zeros(k, k);
                    let mut tilde = Matrix::zeros(k, k);
                    for c in 0..s {
                        mab = &mab + &(&d[a * s + c] * &u[c * s + bb]);
                        tilde = &tilde + &(&u[a * s + c] * &d[c * s + bb]);
                    }
                    for c in 0..s {
                        let lhs = &d[a * s + c] * &u[c * s + bb];
                        b.equate_matrix(&format!("DU{a}{bb}{c}"), &(&lhs - &scale(&mab, &t(&[a, bb], c))));
                    }
                    let wt = tilde.map(|e| e.clone() * w[a * s + bb].clone());
                    b.equate_matrix(&format!("Pm{a}{bb}"), &(&(&p * &mab) - &(&wt * &p)));
                }
            }
            add_cycle_constraints(&mut b, &w, s);
        }
        SystemKind::TriSplit => {
            let d: Vec<_> = (0..s * s).map(|i| b.matrix(&format!("D{}{}", i / s, i % s), k, |_, _| true)).collect();
            let u: Vec<_> = (0..s * s).map(|i| b.matrix(&format!("U{}{}", i / s, i % s), k, |_, _| true)).collect();
            for a in 0..s {
                for bb in 0..s {
                    for b2 in (0..s).filter(|&b2| b2 != bb) {
                        for c in 0..s {
                            b.equate_matrix(&format!("D{a}{bb}U{b2}{c}"), &(&d[a * s + bb] * &u[b2 * s + c]));
                            b.equate_matrix(&format!("U{a}{bb}D{b2}{c}"), &(&u[a * s + bb] * &d[b2 * s + c]));
                        }
                    }
                }
            }
            for dd in 0..s {
                for f in 0..s {
                    for d2 in 0..s {
                        let mut rhs = Matrix::zeros(k, k);
                        for x in 0..s {
                            rhs = &rhs + &scale(&(&u[dd * s + x] * &d[x * s + d2]), &t(&[dd, x, d2], f));
                        }
                        let lhs = &d[dd * s + f] * &u[f * s + d2];
                        b.equate_matrix(&format!("tri{dd}{f}{d2}"), &(&lhs - &rhs));
                    }
                }
            }
        }
        SystemKind::TriFactor => {
            if !k.is_multiple_of(s) {
                return Err(Error::InconsistentSizes(format!("factor rows need length divisible by {s}")));
            }
            let row = |b: &mut Builder<F>, prefix: String, z: usize| -> Vec<Poly<F>> {
                let mut count = 0;
                (0..k)
                    .map(|j| {
                        if j % s == slot(z) {
                            count += 1;
                            b.var(format!("{prefix}_{count}"))
                        } else {
                            Poly::zero()
                        }
                    })
                    .collect()
            };
            let mut h = vec![];
            let mut v = vec![];
            for i in 0..s * s * s {
                let (a, x, z) = (i / (s * s), (i / s) % s, i % s);
                h.push(row(&mut b, format!("h{a}{x}{z}"), z));
            }
            for i in 0..s * s * s {
                let (x, a, z) = (i / (s * s), (i / s) % s, i % s);
                v.push(row(&mut b, format!("v{x}{a}{z}"), z));
            }
            for dd in 0..s {
                for x in 0..s {
                    for d2 in 0..s {
                        for z in 0..s {
                            let lhs = dot(&h[(dd * s + x) * s + z], &v[(x * s + d2) * s + z]);
                            b.equate(&format!("h{dd}{x}{z}.v{x}{d2}{z}"), lhs - constant(&t(&[dd, x, d2], z)));
                        }
                    }
                }
            }
        }
    }
    if spec.kind != SystemKind::Factor && spec.constraints.iter().any(|c| *c != Constraint::UnitTrace) {
        return Err(Error::InvalidParams("entry constraints apply to factor systems only".into()));
    }
    if spec.kind != SystemKind::FiniteSplit && spec.constraints.contains(&Constraint::UnitTrace) {
        return Err(Error::InvalidParams("unit-trace applies to finite-split systems only".into()));
    }
    Ok(PolySystem { kind: spec.kind, spec: spec.clone(), names: b.names, equations: b.equations, scaling })
}

fn dot<F: Field>(a: &[Poly<F>], b: &[Poly<F>]) -> Poly<F> {
    a.iter().zip(b).fold(Poly::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `h_{x,y}` rows with free entries in slot class `slot(y)`, indexed `x * s + y`.
fn factor_rows<F: Field>(b: &mut Builder<F>, s: usize, m: usize) -> Vec<Vec<Poly<F>>> {
    let mut rows = vec![vec![]; s * s];
    for y in 0..s {
        for x in 0..s {
            let mut count = 0;
            rows[x * s + y] = (0..m)
                .map(|j| {
                    if j % s == slot(y) {
                        count += 1;
                        b.var(factor_var(s, x, y, count))
                    } else {
                        Poly::zero()
                    }
                })
                .collect();
        }
    }
    rows
}

fn add_cycle_constraints<F: Field>(b: &mut Builder<F>, w: &[Poly<F>], s: usize) {
    for a in 0..s {
        b.equate(&format!("w{a}{a}=1"), w[a * s + a].clone() - Poly::one());
    }
    for a in 0..s {
        for c in a + 1..s {
            b.equate(&format!("w{a}{c}w{c}{a}=1"), w[a * s + c].clone() * w[c * s + a].clone() - Poly::one());
        }
    }
    if s == 3 {
        b.equate("w01w12w20=1", w[1].clone() * w[5].clone() * w[6].clone() - Poly::one());
        b.equate("w02w21w10=1", w[2].clone() * w[7].clone() * w[3].clone() - Poly::one());
    }
}

fn add_factor_constraint<F: Field>(b: &mut Builder<F>, c: Constraint, params: &GasParams<F>, s: usize) -> Result<()> {
    if s != 2 {
        return Err(Error::InvalidParams("entry constraints are defined for two-state factors".into()));
    }
    let c1 = b.var(factor_var(2, 0, 1, 1));
    let d1 = b.var(factor_var(2, 1, 1, 1));
    let one = Poly::one();
    let poly = match c {
        Constraint::C1One => c1 - one,
        Constraint::D1One => d1 - one,
        Constraint::CornerY | Constraint::ListedY => {
            let GasParams::Y { p, q } = params else {
                return Err(Error::InvalidParams(format!("{} needs gas Y parameters", c.name())));
            };
            let (wd, wc) = if c == Constraint::CornerY {
                let beta = p.clone() + q.clone() - p.clone() * q.clone();
                let delta = (F::one() - p.clone()) * (F::one() - q.clone());
                (beta, delta)
            } else {
                (q.clone(), F::one() - q.clone())
            };
            constant(&wd) * d1.clone() * d1 + constant(&wc) * c1.clone() * c1 - one
        }
        Constraint::UnitTrace => return Ok(()),
    };
    b.equate(c.name(), poly);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn gas_x(p: BigRational) -> LocalTransition<BigRational> {
        LocalTransition::new(GasParams::X { p }, LatticeKind::Square)
    }

    #[test]
    fn factor_x_size4_has_six_equations() {
        let sys = build_system(&SystemSpec::new(SystemKind::Factor, 4), &gas_x(q(1, 4))).unwrap();
        assert_eq!(sys.equations.len(), 6);
        assert_eq!(sys.names.len(), 8);
    }

    #[test]
    fn factor_y_size4_with_listed_constraint_has_seven() {
        let local = LocalTransition::new(GasParams::Y { p: q(3, 10), q: q(2, 5) }, LatticeKind::Square);
        let sys = build_system(&SystemSpec::new(SystemKind::Factor, 4).with(Constraint::ListedY), &local).unwrap();
        assert_eq!(sys.equations.len(), 7);
    }

    #[test]
    fn scalar_split_for_gas_x_is_trivial() {
        let spec = SystemSpec::new(SystemKind::FiniteSplit, 1).with_pattern(SplitPattern::Full);
        let sys = build_system(&spec, &gas_x(q(1, 4))).unwrap();
        let zero: Assignment<BigRational> = sys.names.iter().map(|n| (n.clone(), q(0, 1))).collect();
        assert!(sys.residual(&zero).unwrap().exact_zero);
        let sys = build_system(&spec.with(Constraint::UnitTrace), &gas_x(q(1, 4))).unwrap();
        assert_eq!(sys.residual(&zero).unwrap().max_abs, 1.0);
    }

    #[test]
    fn missing_variables_are_reported() {
        let sys = build_system(&SystemSpec::new(SystemKind::Factor, 2), &gas_x(q(1, 4))).unwrap();
        assert!(matches!(sys.residual(&Assignment::new()), Err(Error::MissingVariable(_))));
    }

    #[test]
    fn wrong_lattice_or_size() {
        assert!(build_system(&SystemSpec::new(SystemKind::TriSplit, 2), &gas_x(q(1, 4))).is_err());
        assert!(build_system(&SystemSpec::new(SystemKind::Factor, 3), &gas_x(q(1, 4))).is_err());
    }
}
