use serde_json::{json, Value};

use super::local::LocalTransition;
use crate::algebra::{Field, JsonScalar, Matrix, StationaryMethod};
use crate::lattice::{decode, digit, state_count, zigzag_decode, LatticeKind};
use crate::{Error, Result};

/// Default cap on the number of row states of a dense transfer matrix.
pub const DEFAULT_STATE_CAP: u128 = 1 << 12;

/// How one row of the process is replaced by the next.
///
/// `Row` keeps a single row of `n` sites. The zigzag layouts keep two rows
/// `(u, d)` with interleaved digits; the new state is `(d, d')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Row,
    SquareZigzag,
    TriangularZigzag,
}

impl Layout {
    pub fn lattice(self) -> LatticeKind {
        match self {
            Layout::TriangularZigzag => LatticeKind::Triangular,
            _ => LatticeKind::Square,
        }
    }

    pub fn digits(self, width: usize) -> usize {
        match self {
            Layout::Row => width,
            _ => 2 * width,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Layout::Row => "row",
            Layout::SquareZigzag => "square-zigzag",
            Layout::TriangularZigzag => "triangular-zigzag",
        }
    }

    /// Digit slots read by new site `i`, grouped with multiplicities.
    pub fn parent_slots(self, width: usize, i: usize) -> Vec<(usize, u32)> {
        let next = (i + 1) % width;
        let raw = match self {
            Layout::Row => vec![i, next],
            Layout::SquareZigzag => vec![2 * i + 1, 2 * next + 1],
            Layout::TriangularZigzag => vec![2 * i + 1, 2 * next, 2 * next + 1],
        };
        let mut out: Vec<(usize, u32)> = Vec::with_capacity(raw.len());
        for s in raw {
            match out.iter_mut().find(|(t, _)| *t == s) {
                Some((_, m)) => *m += 1,
                None => out.push((s, 1)),
            }
        }
        out
    }

    /// Digit slot written by new site `i`.
    pub fn child_slot(self, i: usize) -> usize {
        match self {
            Layout::Row => i,
            _ => 2 * i + 1,
        }
    }
}

/// Per-site child distributions for the row after `code`.
pub(crate) fn site_distributions<F: Field>(
    local: &LocalTransition<F>,
    layout: Layout,
    width: usize,
    digits: &[u8],
) -> Vec<Vec<F>> {
    (0..width)
        .map(|i| {
            let parents: Vec<(u8, u32)> =
                layout.parent_slots(width, i).into_iter().map(|(s, m)| (digits[s], m)).collect();
            local.child_probs(&parents)
        })
        .collect()
}

fn check_layout<F: Field>(local: &LocalTransition<F>, layout: Layout) -> Result<()> {
    if local.lattice() != layout.lattice() {
        return Err(Error::InvalidParams(format!(
            "{:?} transition used with a {} layout",
            local.lattice(),
            layout.name()
        )));
    }
    Ok(())
}

/// Dense transfer matrix; row index is the source state, column the target.
pub fn transfer_matrix<F: Field>(
    local: &LocalTransition<F>,
    layout: Layout,
    width: usize,
    cap: u128,
) -> Result<Matrix<F>> {
    check_layout(local, layout)?;
    if width == 0 {
        return Err(Error::InvalidParams("width must be positive".into()));
    }
    let s = local.states();
    let size = state_count(s, layout.digits(width), cap)?;
    let mut t = Matrix::zeros(size, size);
    for code in 0..size {
        let digits = decode(code, layout.digits(width), s);
        let dists = site_distributions(local, layout, width, &digits);
        // Fixed part of the target code: in zigzag layouts the old lower row moves up.
        let base = match layout {
            Layout::Row => 0,
            _ => (0..width).map(|i| digits[2 * i + 1] as usize * s.pow(2 * i as u32)).sum(),
        };
        let mut partial: Vec<(usize, F)> = vec![(base, F::one())];
        for (i, dist) in dists.iter().enumerate() {
            let weight = s.pow(layout.child_slot(i) as u32);
            let mut next = Vec::with_capacity(partial.len() * s);
            for (c, w) in &partial {
                for (v, pv) in dist.iter().enumerate() {
                    if !pv.is_zero() {
                        next.push((c + v * weight, w.clone() * pv.clone()));
                    }
                }
            }
            partial = next;
        }
        for (target, w) in partial {
            t[(code, target)] = w;
        }
    }
    Ok(t)
}

/// Measure on row states, possibly unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct RowMeasure<F> {
    pub layout: Layout,
    pub width: usize,
    pub states: usize,
    pub weights: Vec<F>,
}

impl<F: Field + JsonScalar> RowMeasure<F> {
    pub fn new(layout: Layout, width: usize, states: usize, weights: Vec<F>) -> Result<Self> {
        let expected = states.pow(layout.digits(width) as u32);
        if weights.len() != expected {
            return Err(Error::Dimension(format!("{} weights for {expected} states", weights.len())));
        }
        Ok(RowMeasure { layout, width, states, weights })
    }

    pub fn point_mass(layout: Layout, width: usize, states: usize, code: usize) -> Self {
        let n = states.pow(layout.digits(width) as u32);
        let weights = (0..n).map(|c| if c == code { F::one() } else { F::zero() }).collect();
        RowMeasure { layout, width, states, weights }
    }

    pub fn total(&self) -> F {
        self.weights.iter().fold(F::zero(), |a, b| a + b.clone())
    }

    pub fn normalized(&self) -> Result<Self> {
        let inv = self.total().try_inv().ok_or(Error::ZeroMass)?;
        Ok(RowMeasure { weights: self.weights.iter().map(|w| w.clone() * inv.clone()).collect(), ..self.clone() })
    }

    /// Mass of the states whose digit at each given slot has the given value.
    pub fn marginal(&self, pattern: &[(usize, u8)]) -> F {
        let digits = self.layout.digits(self.width);
        if let Some(&(slot, _)) = pattern.iter().find(|&&(slot, _)| slot >= digits) {
            panic!("slot {slot} out of range for {digits} digits");
        }
        self.weights
            .iter()
            .enumerate()
            .filter(|(code, _)| pattern.iter().all(|&(slot, v)| digit(*code, slot, self.states) == v))
            .fold(F::zero(), |acc, (_, w)| acc + w.clone())
    }

    /// Marginal on sites of the newest row (the lower row of a zigzag state).
    pub fn site_marginal(&self, sites: &[(usize, u8)]) -> F {
        let pattern: Vec<(usize, u8)> = sites.iter().map(|&(i, v)| (self.layout.child_slot(i), v)).collect();
        self.marginal(&pattern)
    }

    /// One step `nu -> nu T`.
    pub fn step(&self, t: &Matrix<F>) -> Self {
        RowMeasure { weights: t.left_apply(&self.weights), ..self.clone() }
    }

    pub fn iterate(&self, t: &Matrix<F>, steps: usize) -> Self {
        (0..steps).fold(self.clone(), |m, _| m.step(t))
    }

    /// Largest entrywise magnitude of `nu T - nu`.
    pub fn stationarity_residual(&self, t: &Matrix<F>) -> f64 {
        self.step(t)
            .weights
            .iter()
            .zip(&self.weights)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    pub fn near(&self, other: &Self, tol: f64) -> bool {
        self.weights.len() == other.weights.len() && self.weights.iter().zip(&other.weights).all(|(a, b)| a.near(b, tol))
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .weights
            .iter()
            .enumerate()
            .map(|(code, w)| match self.layout {
                Layout::Row => json!({"state": decode(code, self.width, self.states), "weight": w.to_json()}),
                _ => {
                    let (u, d) = zigzag_decode(code, self.width, self.states);
                    json!({"upper": u, "lower": d, "weight": w.to_json()})
                }
            })
            .collect();
        json!({
            "layout": self.layout.name(),
            "width": self.width,
            "states": self.states,
            "mode": F::MODE.name(),
            "weights": rows,
        })
    }
}

/// Stationary measure of the transfer matrix on the cylinder of the given width.
pub fn invariant_measure<F: Field + JsonScalar>(
    local: &LocalTransition<F>,
    layout: Layout,
    width: usize,
    method: StationaryMethod,
    cap: u128,
) -> Result<RowMeasure<F>> {
    let t = transfer_matrix(local, layout, width, cap)?;
    t.check_stochastic(1e-12)?;
    let v = t.stationary_vector(method)?;
    RowMeasure::new(layout, width, local.states(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::GasParams;
    use crate::lattice::encode;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn x_gas(p: BigRational) -> LocalTransition<BigRational> {
        LocalTransition::new(GasParams::X { p }, LatticeKind::Square)
    }

    #[test]
    fn width_one_gas_x() {
        // one site, child depends on itself: the chain alternates 0 -> 1 w.p. p, 1 -> 0.
        let p = q(1, 3);
        let t = transfer_matrix(&x_gas(p.clone()), Layout::Row, 1, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(t, Matrix::from_rows(vec![vec![q(2, 3), q(1, 3)], vec![q(1, 1), q(0, 1)]]).unwrap());
        let mu = invariant_measure(&x_gas(p.clone()), Layout::Row, 1, StationaryMethod::EXACT, DEFAULT_STATE_CAP)
            .unwrap();
        // nu(1) = p / (1 + p)
        assert_eq!(mu.weights[1], p.clone() / (q(1, 1) + p));
    }

    #[test]
    fn transfer_is_stochastic_for_all_layouts() {
        let tri = LocalTransition::new(GasParams::Y { p: q(1, 4), q: q(2, 5) }, LatticeKind::Triangular);
        let sq = LocalTransition::new(GasParams::Bicolour { p1: q(1, 4), p2: q(1, 5) }, LatticeKind::Square);
        for n in 1..=3 {
            transfer_matrix(&tri, Layout::TriangularZigzag, n, DEFAULT_STATE_CAP)
                .unwrap()
                .check_stochastic(0.0)
                .unwrap();
            transfer_matrix(&sq, Layout::Row, n, DEFAULT_STATE_CAP).unwrap().check_stochastic(0.0).unwrap();
            transfer_matrix(&sq, Layout::SquareZigzag, n, DEFAULT_STATE_CAP)
                .unwrap()
                .check_stochastic(0.0)
                .unwrap();
        }
    }

    #[test]
    fn entry_is_product_of_local_factors() {
        let local = LocalTransition::new(GasParams::Y { p: q(1, 4), q: q(2, 5) }, LatticeKind::Square);
        let t = transfer_matrix(&local, Layout::Row, 3, DEFAULT_STATE_CAP).unwrap();
        let b = [1u8, 0, 1];
        let a = [0u8, 1, 1];
        let expected = (0..3).fold(q(1, 1), |acc, i| acc * local.prob(&[b[i], b[(i + 1) % 3]], a[i]).clone());
        assert_eq!(t[(encode(&b, 2), encode(&a, 2))], expected);
    }

    #[test]
    fn layout_mismatch_and_cap() {
        let local = x_gas(q(1, 2));
        assert!(transfer_matrix(&local, Layout::TriangularZigzag, 2, DEFAULT_STATE_CAP).is_err());
        assert!(matches!(transfer_matrix(&local, Layout::Row, 13, DEFAULT_STATE_CAP), Err(Error::SizeCap { .. })));
    }
}
