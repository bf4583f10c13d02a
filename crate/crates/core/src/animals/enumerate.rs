//! Exhaustive enumeration of directed animals.
//!
//! The animal `A` grows from its sources by adding perimeter sites. Each
//! branch point picks the next untried perimeter site; once a site has been
//! skipped it stays forbidden for the rest of that branch, so every animal is
//! produced exactly once.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use super::gf::{GfPoly, GfWeight};
use crate::lattice::{Lattice, Site};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpec {
    pub lattice: Lattice,
    pub sources: Vec<Site>,
}

impl SourceSpec {
    pub fn new(lattice: Lattice, sources: Vec<Site>) -> Result<Self> {
        for &s in &sources {
            lattice.check(s)?;
        }
        let mut seen = HashSet::new();
        if !sources.iter().all(|s| seen.insert(*s)) {
            return Err(Error::OverlappingSources);
        }
        Ok(SourceSpec { lattice, sources })
    }

    /// Sources at the given indices of row 0.
    pub fn row(lattice: Lattice, indices: &[usize]) -> Result<Self> {
        Self::new(lattice, indices.iter().map(|&i| Site::new(0, i as i64)).collect())
    }

    /// True when no source lies on a directed path from another.
    pub fn is_free(&self) -> bool {
        let last_row = self.sources.iter().map(|s| s.row).max().unwrap_or(0);
        let targets: HashSet<Site> = self.sources.iter().copied().collect();
        for &s in &self.sources {
            let mut seen = HashSet::from([s]);
            let mut queue = VecDeque::from([s]);
            while let Some(a) = queue.pop_front() {
                for (d, _) in self.lattice.children(a) {
                    if d.row > last_row || !seen.insert(d) {
                        continue;
                    }
                    if targets.contains(&d) {
                        return false;
                    }
                    queue.push_back(d);
                }
            }
        }
        true
    }

    pub fn require_free(&self) -> Result<()> {
        if self.is_free() {
            Ok(())
        } else {
            Err(Error::NotFree(format!("{:?}", self.sources)))
        }
    }
}

#[derive(Debug, Clone)]
enum Tally {
    Perimeter,
    Bonds,
    Colours(HashMap<Site, u8>),
}

#[derive(Debug, Clone)]
struct Walker {
    lattice: Lattice,
    max_area: u32,
    tally: Tally,
    /// Sources left out of an over-source animal: never added, always perimeter.
    unused: Vec<Site>,
    animal: HashSet<Site>,
    border: HashSet<Site>,
    bonds: u32,
    out: GfPoly,
}

impl Walker {
    fn new(lattice: Lattice, sources: &[Site], unused: &[Site], max_area: u32, tally: Tally) -> Self {
        let weight = match tally {
            Tally::Perimeter => GfWeight::Perimeter,
            Tally::Bonds => GfWeight::Bonds,
            Tally::Colours(_) => GfWeight::Colours,
        };
        let mut w = Walker {
            lattice,
            max_area,
            tally,
            unused: unused.to_vec(),
            animal: HashSet::new(),
            border: HashSet::new(),
            bonds: 0,
            out: GfPoly::zero(weight, max_area),
        };
        for &s in sources {
            w.push(s);
        }
        w
    }

    /// Adds a site; returns the sites that joined the border and the bond increment.
    fn push(&mut self, c: Site) -> (Vec<Site>, u32) {
        let mut delta = 0;
        for (p, m) in self.lattice.parents(c) {
            if self.animal.contains(&p) {
                delta += m;
            }
        }
        for (d, m) in self.lattice.children(c) {
            if self.animal.contains(&d) {
                delta += m;
            }
        }
        self.animal.insert(c);
        self.border.remove(&c);
        let mut fresh = Vec::new();
        for (d, _) in self.lattice.children(c) {
            if !self.animal.contains(&d) && self.border.insert(d) {
                fresh.push(d);
            }
        }
        self.bonds += delta;
        (fresh, delta)
    }

    fn pop(&mut self, c: Site, fresh: &[Site], delta: u32) {
        for s in fresh {
            self.border.remove(s);
        }
        self.border.insert(c);
        self.animal.remove(&c);
        self.bonds -= delta;
    }

    fn record(&mut self) {
        let area = self.animal.len() as u32;
        match &self.tally {
            Tally::Perimeter => {
                let extra = self.unused.iter().filter(|s| !self.border.contains(s)).count();
                self.out.add_term(area, (self.border.len() + extra) as u32, 1);
            }
            Tally::Bonds => self.out.add_term(area, self.bonds, 1),
            Tally::Colours(colours) => {
                if let Some((c1, c2)) = colour_counts(&self.lattice, &self.animal, colours) {
                    self.out.add_term(c1, c2, 1);
                }
            }
        }
    }

    fn initial_untried(&self) -> Vec<Site> {
        let mut v: Vec<Site> = self.border.iter().filter(|s| !self.unused.contains(s)).copied().collect();
        v.sort();
        v
    }

    fn extend(&mut self, untried: &[Site]) {
        if self.animal.len() as u32 >= self.max_area {
            return;
        }
        for (k, &c) in untried.iter().enumerate() {
            self.branch(c, &untried[k + 1..]);
        }
    }

    fn branch(&mut self, c: Site, later: &[Site]) {
        let (fresh, delta) = self.push(c);
        let mut next = later.to_vec();
        next.extend(fresh.iter().filter(|s| !self.unused.contains(s)));
        self.record();
        self.extend(&next);
        self.pop(c, &fresh, delta);
    }

    /// Runs the whole enumeration, splitting the first branch level across threads.
    fn run(mut self) -> GfPoly {
        let start = self.animal.len() as u32;
        if start > self.max_area {
            return self.out;
        }
        if start > 0 {
            self.record();
        }
        if start == self.max_area {
            return self.out;
        }
        let untried = self.initial_untried();
        let base = self.out.clone();
        let parts: Vec<GfPoly> = (0..untried.len())
            .into_par_iter()
            .map(|k| {
                let mut w = self.clone();
                w.out = GfPoly::zero(base.weight, base.max_area);
                w.branch(untried[k], &untried[k + 1..]);
                w.out
            })
            .collect();
        let mut out = base;
        for p in &parts {
            out.add_assign(p);
        }
        out
    }
}

/// Cells per colour when every connected piece holds sources of one colour only.
fn colour_counts(lattice: &Lattice, animal: &HashSet<Site>, colours: &HashMap<Site, u8>) -> Option<(u32, u32)> {
    let cells: Vec<Site> = animal.iter().copied().collect();
    let index: HashMap<Site, usize> = cells.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, &a) in cells.iter().enumerate() {
        for (d, _) in lattice.children(a) {
            if let Some(&j) = index.get(&d) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut comp_colour: HashMap<usize, u8> = HashMap::new();
    for (s, &c) in colours {
        let root = find(&mut parent, index[s]);
        if let Some(&prev) = comp_colour.get(&root) {
            if prev != c {
                return None;
            }
        }
        comp_colour.insert(root, c);
    }
    let (mut c1, mut c2) = (0, 0);
    for i in 0..cells.len() {
        match comp_colour.get(&find(&mut parent, i)) {
            Some(1) => c1 += 1,
            Some(2) => c2 += 1,
            _ => unreachable!("every cell is reached from a source"),
        }
    }
    Some((c1, c2))
}

/// Animals with source exactly `src`, area at most `max_area`.
pub fn enumerate_da(src: &SourceSpec, max_area: u32, weight: GfWeight) -> Result<GfPoly> {
    let tally = match weight {
        GfWeight::Perimeter => Tally::Perimeter,
        GfWeight::Bonds => Tally::Bonds,
        GfWeight::Colours => {
            return Err(Error::InvalidParams("use enumerate_bicoloured for colour weights".into()))
        }
    };
    Ok(Walker::new(src.lattice, &src.sources, &[], max_area, tally).run())
}

/// Well-coloured animals: sources in `s1` have colour 1, those in `s2` colour 2.
pub fn enumerate_bicoloured(lattice: Lattice, s1: &[Site], s2: &[Site], max_area: u32) -> Result<GfPoly> {
    if s1.iter().any(|s| s2.contains(s)) {
        return Err(Error::OverlappingSources);
    }
    let all: Vec<Site> = s1.iter().chain(s2).copied().collect();
    let spec = SourceSpec::new(lattice, all.clone())?;
    spec.require_free()?;
    let colours = s1.iter().map(|s| (*s, 1)).chain(s2.iter().map(|s| (*s, 2))).collect();
    Ok(Walker::new(lattice, &all, &[], max_area, Tally::Colours(colours)).run())
}

/// Over-source GF as a sum over source subsets `S'`; sources outside `S'`
/// count as perimeter and may not be absorbed into the animal.
pub fn oversource_by_subsets(src: &SourceSpec, max_area: u32) -> Result<GfPoly> {
    let k = src.sources.len();
    if k > 20 {
        return Err(Error::InvalidParams("too many sources for subset summation".into()));
    }
    let mut out = GfPoly::zero(GfWeight::Perimeter, max_area);
    for mask in 0u32..(1 << k) {
        let (used, unused): (Vec<(usize, Site)>, Vec<(usize, Site)>) =
            src.sources.iter().copied().enumerate().partition(|(i, _)| mask >> i & 1 == 1);
        let used: Vec<Site> = used.into_iter().map(|(_, s)| s).collect();
        let unused: Vec<Site> = unused.into_iter().map(|(_, s)| s).collect();
        if used.is_empty() {
            out.add_term(0, unused.len() as u32, 1);
            continue;
        }
        let part = Walker::new(src.lattice, &used, &unused, max_area, Tally::Perimeter).run();
        out.add_assign(&part);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeKind;

    fn plane() -> Lattice {
        Lattice::plane(LatticeKind::Square)
    }

    #[test]
    fn plane_single_source_small_areas() {
        let src = SourceSpec::row(plane(), &[0]).unwrap();
        let g = enumerate_da(&src, 3, GfWeight::Perimeter).unwrap();
        assert_eq!(g.area_counts(), vec![0, 1, 2, 5]);
        assert_eq!(g.coeff(1, 2), 1);
        assert_eq!(g.coeff(2, 3), 2);
    }

    #[test]
    fn width_one_segments() {
        let lat = Lattice::square(1).unwrap();
        let src = SourceSpec::row(lat, &[0]).unwrap();
        let g = enumerate_da(&src, 5, GfWeight::Perimeter).unwrap();
        assert_eq!(g.area_counts(), vec![0, 1, 1, 1, 1, 1]);
        let b = enumerate_da(&src, 4, GfWeight::Bonds).unwrap();
        // vertical segment of k cells has 2(k-1) bonds at width one
        assert_eq!(b.coeff(3, 4), 1);
    }

    #[test]
    fn empty_source_gives_zero() {
        let src = SourceSpec::new(plane(), vec![]).unwrap();
        assert!(enumerate_da(&src, 4, GfWeight::Perimeter).unwrap().is_zero());
    }

    #[test]
    fn freeness() {
        let lat = Lattice::square(3).unwrap();
        assert!(SourceSpec::row(lat, &[0, 1]).unwrap().is_free());
        let bad = SourceSpec::new(lat, vec![Site::new(0, 0), Site::new(1, 1)]).unwrap();
        assert!(!bad.is_free());
        assert!(matches!(
            enumerate_bicoloured(lat, &[Site::new(0, 0)], &[Site::new(1, 0)], 3),
            Err(Error::NotFree(_))
        ));
        assert!(matches!(SourceSpec::row(lat, &[1, 1]), Err(Error::OverlappingSources)));
    }
}
