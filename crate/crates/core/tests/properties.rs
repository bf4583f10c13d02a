mod common;

use common::{product_transfer, rat, table_x, table_y};
use dagas::algebra::{JsonScalar, Matrix, Ring, Series, StationaryMethod};
use dagas::gas::{invariant_measure, transfer_matrix, GasParams, Layout, LocalTransition, DEFAULT_STATE_CAP};
use dagas::lattice::{decode, encode, rotate, LatticeKind};
use num_rational::BigRational;
use proptest::prelude::*;

/// Rationals strictly between 0 and 1 with small denominators.
fn prob() -> impl Strategy<Value = BigRational> {
    (2i64..12).prop_flat_map(|d| (1..d).prop_map(move |n| rat(n, d)))
}

fn small_int() -> impl Strategy<Value = BigRational> {
    (-4i64..=4).prop_map(|n| rat(n, 1))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<BigRational>> {
    prop::collection::vec(small_int(), rows * cols).prop_map(move |d| Matrix::new(rows, cols, d).unwrap())
}

fn gas_y(p: BigRational, q: BigRational) -> LocalTransition<BigRational> {
    LocalTransition::new(GasParams::Y { p, q }, LatticeKind::Square)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn row_transfer_matches_product_of_local_tables(p in prob(), q in prob(), width in 1usize..4) {
        let x = LocalTransition::new(GasParams::X { p: p.clone() }, LatticeKind::Square);
        let t = transfer_matrix(&x, Layout::Row, width, DEFAULT_STATE_CAP).unwrap();
        prop_assert_eq!(t, product_transfer(width, 2, table_x(p.clone())));
        let t = transfer_matrix(&gas_y(p.clone(), q.clone()), Layout::Row, width, DEFAULT_STATE_CAP).unwrap();
        prop_assert_eq!(t, product_transfer(width, 2, table_y(p, q)));
    }

    #[test]
    fn transfer_rows_sum_to_one(p in prob(), q in prob(), width in 1usize..4, zigzag in any::<bool>()) {
        let layout = if zigzag { Layout::SquareZigzag } else { Layout::Row };
        let t = transfer_matrix(&gas_y(p, q), layout, width, DEFAULT_STATE_CAP).unwrap();
        for i in 0..t.rows() {
            let s = t.row(i).iter().fold(rat(0, 1), |a, b| a + b);
            prop_assert_eq!(s, rat(1, 1));
        }
    }

    #[test]
    fn invariant_measure_is_stationary_and_rotation_invariant(p in prob(), q in prob(), width in 1usize..4) {
        let local = gas_y(p.clone(), q.clone());
        let m = invariant_measure(&local, Layout::Row, width, StationaryMethod::EXACT, DEFAULT_STATE_CAP).unwrap();
        let w = &m.weights;
        prop_assert_eq!(w.iter().fold(rat(0, 1), |a, b| a + b), rat(1, 1));
        let t = product_transfer(width, 2, table_y(p, q));
        let moved: Vec<BigRational> = (0..w.len())
            .map(|j| (0..w.len()).fold(rat(0, 1), |a, i| a + &w[i] * &t[(i, j)]))
            .collect();
        prop_assert_eq!(&moved, w);
        for code in 0..w.len() {
            prop_assert_eq!(&w[rotate(code, width, 2, 1)], &w[code]);
        }
    }

    #[test]
    fn width_one_hard_core_density(p in prob()) {
        let x = LocalTransition::new(GasParams::X { p: p.clone() }, LatticeKind::Square);
        let m = invariant_measure(&x, Layout::Row, 1, StationaryMethod::EXACT, DEFAULT_STATE_CAP).unwrap();
        // two-state chain 0 -> 1 with probability p, 1 -> 0 always
        prop_assert_eq!(&m.weights[1], &(&p / (rat(1, 1) + &p)));
    }

    #[test]
    fn encode_decode_roundtrip(states in 2usize..4, digits in prop::collection::vec(0u8..4, 1..7)) {
        let digits: Vec<u8> = digits.into_iter().map(|d| d % states as u8).collect();
        let width = digits.len();
        let code = encode(&digits, states);
        prop_assert_eq!(decode(code, width, states), digits);
        let full = (0..width).fold(code, |c, _| rotate(c, width, states, 1));
        prop_assert_eq!(full, code);
    }

    #[test]
    fn kronecker_mixed_product(a in matrix(2, 3), b in matrix(2, 2), c in matrix(3, 2), d in matrix(2, 1)) {
        let lhs = &a.kron(&b) * &c.kron(&d);
        let rhs = (&a * &c).kron(&(&b * &d));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_and_power_laws(a in matrix(3, 3), b in matrix(2, 2), e in 0u64..4, f in 0u64..4) {
        prop_assert_eq!(a.kron(&b).trace(), a.trace() * b.trace());
        prop_assert_eq!(&a.pow(e) * &a.pow(f), a.pow(e + f));
    }

    #[test]
    fn series_inverse(c0 in 1i64..5, coeffs in prop::collection::vec((0u32..4, 0u32..4, -3i64..=3), 0..6)) {
        let bound = 6;
        let mut terms = vec![((0, 0), rat(c0, 1))];
        terms.extend(coeffs.into_iter().filter(|(i, j, _)| i + j > 0).map(|(i, j, c)| ((i, j), rat(c, 1))));
        let f = Series::from_terms(bound, terms);
        let g = f.inv().unwrap();
        prop_assert_eq!(f * g, Series::one().truncate(bound));
    }

    #[test]
    fn rational_json_roundtrip(n in -1000i64..1000, d in 1i64..1000) {
        let x = rat(n, d);
        prop_assert_eq!(BigRational::from_json(&x.to_json()).unwrap(), x.clone());
        let text = x.to_json();
        prop_assert_eq!(BigRational::parse_literal(text.as_str().unwrap()).unwrap(), x);
    }
}
