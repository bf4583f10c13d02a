use std::collections::{BTreeSet, HashMap};

use super::enumerate::{oversource_by_subsets, SourceSpec};
use super::gf::{GfPoly, GfWeight};
use crate::lattice::{Lattice, Site};
use crate::{Error, Result};

/// Over-source GF from the subset recursion
/// `W_C = sum_{D in C_0} y^{|C_0 \ D|} x^{|D|} W_{Ch(D) u (C \ C_0)}`, `W_0 = 1`,
/// where `C_0` is the lowest row of `C`.
pub fn oversource_recursive(src: &SourceSpec, max_area: u32) -> Result<GfPoly> {
    let mut rec = Recursion {
        lattice: src.lattice,
        memo: HashMap::new(),
        guard: 4 * (max_area as usize + src.sources.len()) + 16,
    };
    let c: BTreeSet<Site> = src.sources.iter().copied().collect();
    rec.w(&c, max_area, 0)
}

/// Both over-source computations; fails if they disagree.
pub fn oversource_gf(src: &SourceSpec, max_area: u32) -> Result<GfPoly> {
    let a = oversource_by_subsets(src, max_area)?;
    let b = oversource_recursive(src, max_area)?;
    if a != b {
        return Err(Error::OracleMismatch(format!(
            "subset sum {:?} vs recursion {:?}",
            a.area_counts(),
            b.area_counts()
        )));
    }
    Ok(a)
}

struct Recursion {
    lattice: Lattice,
    memo: HashMap<(Vec<Site>, u32), GfPoly>,
    guard: usize,
}

impl Recursion {
    /// Translation (and rotation on a cylinder) invariant key.
    fn canonical(&self, c: &BTreeSet<Site>) -> Vec<Site> {
        let min_row = c.iter().map(|s| s.row).min().unwrap_or(0);
        match self.lattice.width {
            Some(n) => (0..n as i64)
                .map(|k| {
                    let mut v: Vec<Site> =
                        c.iter().map(|s| Site::new(s.row - min_row, (s.index + k).rem_euclid(n as i64))).collect();
                    v.sort();
                    v
                })
                .min()
                .unwrap_or_default(),
            None => {
                let min_index = c.iter().map(|s| s.index).min().unwrap_or(0);
                c.iter().map(|s| Site::new(s.row - min_row, s.index - min_index)).collect()
            }
        }
    }

    fn w(&mut self, c: &BTreeSet<Site>, budget: u32, depth: usize) -> Result<GfPoly> {
        if depth > self.guard {
            return Err(Error::RecursionGuard(self.guard));
        }
        if c.is_empty() {
            return Ok(GfPoly::one(GfWeight::Perimeter, budget));
        }
        let key = (self.canonical(c), budget);
        if let Some(g) = self.memo.get(&key) {
            return Ok(g.clone());
        }
        let r0 = c.iter().map(|s| s.row).min().unwrap();
        let low: Vec<Site> = c.iter().filter(|s| s.row == r0).copied().collect();
        let rest: BTreeSet<Site> = c.iter().filter(|s| s.row != r0).copied().collect();
        let mut out = GfPoly::zero(GfWeight::Perimeter, budget);
        for mask in 0u32..(1 << low.len()) {
            let d: Vec<Site> = (0..low.len()).filter(|i| mask >> i & 1 == 1).map(|i| low[i]).collect();
            let taken = d.len() as u32;
            if taken > budget {
                continue;
            }
            let mut next = rest.clone();
            for &s in &d {
                next.extend(self.lattice.children(s).into_iter().map(|(t, _)| t));
            }
            let sub = self.w(&next, budget - taken, depth + 1)?;
            let skipped = low.len() as u32 - taken;
            for (&(i, j), &k) in sub.terms() {
                out.add_term(i + taken, j + skipped, k);
            }
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}
