//! Animal counts against a brute-force subset search and known sequences.

use std::collections::{BTreeMap, HashSet};

use dagas::animals::{enumerate_da, GfWeight, SourceSpec};
use dagas::lattice::{Lattice, LatticeKind};

type Cell = (i64, i64);

struct Board {
    width: Option<i64>,
    offsets: &'static [(i64, i64)],
}

impl Board {
    fn norm(&self, (r, i): Cell) -> Cell {
        match self.width {
            Some(n) => (r, i.rem_euclid(n)),
            None => (r, i),
        }
    }

    /// Children with multiplicity kept, so parallel edges count twice.
    fn children(&self, c: Cell) -> Vec<Cell> {
        self.offsets.iter().map(|&(dr, di)| self.norm((c.0 + dr, c.1 + di))).collect()
    }

    fn candidates(&self, sources: &[Cell], max_area: u32) -> Vec<Cell> {
        let mut seen: HashSet<Cell> = sources.iter().copied().collect();
        let mut frontier: Vec<Cell> = sources.to_vec();
        let mut out = Vec::new();
        for _ in 1..max_area {
            let mut next = Vec::new();
            for c in &frontier {
                for ch in self.children(*c) {
                    if seen.insert(ch) {
                        out.push(ch);
                        next.push(ch);
                    }
                }
            }
            frontier = next;
        }
        out
    }
}

/// `(area, statistic) -> count` over every subset of sites reachable within `max_area - 1` steps.
fn brute(board: &Board, sources: &[Cell], max_area: u32, bonds: bool) -> BTreeMap<(u32, u32), u128> {
    let cand = board.candidates(sources, max_area);
    let mut table = BTreeMap::new();
    for mask in 0u64..(1 << cand.len()) {
        let area = sources.len() as u32 + mask.count_ones();
        if area > max_area {
            continue;
        }
        let cells: HashSet<Cell> =
            sources.iter().copied().chain((0..cand.len()).filter(|b| mask >> b & 1 == 1).map(|b| cand[b])).collect();
        let mut reached: HashSet<Cell> = sources.iter().copied().collect();
        let mut stack: Vec<Cell> = sources.to_vec();
        while let Some(c) = stack.pop() {
            for ch in board.children(c) {
                if cells.contains(&ch) && reached.insert(ch) {
                    stack.push(ch);
                }
            }
        }
        if reached.len() != cells.len() {
            continue;
        }
        let stat = if bonds {
            cells.iter().flat_map(|c| board.children(*c)).filter(|ch| cells.contains(ch)).count()
        } else {
            let outside: HashSet<Cell> =
                cells.iter().flat_map(|c| board.children(*c)).filter(|ch| !cells.contains(ch)).collect();
            outside.len()
        };
        *table.entry((area, stat as u32)).or_insert(0) += 1;
    }
    table
}

fn library(lattice: Lattice, sources: &[usize], max_area: u32, weight: GfWeight) -> BTreeMap<(u32, u32), u128> {
    let src = SourceSpec::row(lattice, sources).unwrap();
    let gf = enumerate_da(&src, max_area, weight).unwrap();
    gf.terms().filter(|(_, c)| **c > 0).map(|(k, c)| (*k, *c)).collect()
}

fn check(kind: LatticeKind, width: Option<usize>, sources: &[usize], max_area: u32) {
    let lattice = match width {
        Some(n) => Lattice::cylinder(kind, n).unwrap(),
        None => Lattice::plane(kind),
    };
    let board = Board { width: width.map(|n| n as i64), offsets: kind.child_offsets() };
    let cells: Vec<Cell> = sources.iter().map(|&i| (0, i as i64)).collect();
    for (weight, bonds) in [(GfWeight::Perimeter, false), (GfWeight::Bonds, true)] {
        assert_eq!(
            library(lattice, sources, max_area, weight),
            brute(&board, &cells, max_area, bonds),
            "{kind:?} width {width:?} sources {sources:?} {weight:?}"
        );
    }
}

#[test]
fn square_cylinders_match_subset_search() {
    check(LatticeKind::Square, Some(1), &[0], 6);
    check(LatticeKind::Square, Some(2), &[0], 7);
    check(LatticeKind::Square, Some(3), &[0], 6);
    check(LatticeKind::Square, Some(4), &[0, 2], 6);
}

#[test]
fn triangular_cylinders_match_subset_search() {
    check(LatticeKind::Triangular, Some(2), &[0], 6);
    check(LatticeKind::Triangular, Some(3), &[0], 5);
}

#[test]
fn planes_match_subset_search() {
    check(LatticeKind::Square, None, &[0], 5);
    check(LatticeKind::Square, None, &[0, 1], 5);
    check(LatticeKind::Triangular, None, &[0], 4);
}

#[test]
fn square_plane_area_counts() {
    let gf = enumerate_da(&SourceSpec::row(Lattice::plane(LatticeKind::Square), &[0]).unwrap(), 12, GfWeight::Perimeter)
        .unwrap();
    // single-source directed animals on the square lattice
    assert_eq!(gf.area_counts()[1..], [1, 2, 5, 13, 35, 96, 267, 750, 2123, 6046, 17303, 49721]);
}

#[test]
fn triangular_plane_area_counts() {
    let gf =
        enumerate_da(&SourceSpec::row(Lattice::plane(LatticeKind::Triangular), &[0]).unwrap(), 9, GfWeight::Perimeter)
            .unwrap();
    // C(2n-1, n) animals of area n
    let expected: Vec<u128> = (1..=9u128).map(|n| (0..n).fold(1, |acc, k| acc * (2 * n - 1 - k) / (k + 1))).collect();
    assert_eq!(gf.area_counts()[1..], expected[..]);
}
