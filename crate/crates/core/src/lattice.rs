//! Directed square and triangular lattices, on cylinders or the plane, and
//! the base-`s` encoding of row configurations.
//!
//! Site `(l, i)` sits in row `l`. On the square lattice its children are
//! `(l+1, i)` and `(l+1, i+1)`. The triangular lattice adds the diagonal
//! child `(l+2, i+1)`. On a cylinder of width `n` indices are taken mod `n`.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Square,
    Triangular,
}

impl LatticeKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sq" | "square" => Ok(LatticeKind::Square),
            "tri" | "triangular" => Ok(LatticeKind::Triangular),
            _ => Err(Error::Unknown { what: "lattice", name: s.into() }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Square => "square",
            LatticeKind::Triangular => "triangular",
        }
    }

    /// Offsets `(drow, dindex)` of the children.
    pub fn child_offsets(self) -> &'static [(i64, i64)] {
        match self {
            LatticeKind::Square => &[(1, 0), (1, 1)],
            LatticeKind::Triangular => &[(1, 0), (1, 1), (2, 1)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Site {
    pub row: i64,
    pub index: i64,
}

impl Site {
    pub fn new(row: i64, index: i64) -> Self {
        Site { row, index }
    }
}

/// A lattice on the cylinder of the given width, or the plane when `width` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub kind: LatticeKind,
    pub width: Option<usize>,
}

impl Lattice {
    pub fn cylinder(kind: LatticeKind, width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidParams("cylinder width must be positive".into()));
        }
        Ok(Lattice { kind, width: Some(width) })
    }

    pub fn plane(kind: LatticeKind) -> Self {
        Lattice { kind, width: None }
    }

    pub fn square(width: usize) -> Result<Self> {
        Self::cylinder(LatticeKind::Square, width)
    }

    pub fn wrap(&self, site: Site) -> Site {
        match self.width {
            Some(n) => Site::new(site.row, site.index.rem_euclid(n as i64)),
            None => site,
        }
    }

    pub fn check(&self, site: Site) -> Result<()> {
        match self.width {
            Some(n) if site.index < 0 || site.index >= n as i64 => {
                Err(Error::IndexOutOfRange { index: site.index, width: n })
            }
            _ => Ok(()),
        }
    }

    /// Children of a site with edge multiplicities. On the width-one square
    /// cylinder the two out-edges land on the same site and count twice.
    pub fn children(&self, site: Site) -> Vec<(Site, u32)> {
        self.neighbours(site, 1)
    }

    pub fn parents(&self, site: Site) -> Vec<(Site, u32)> {
        self.neighbours(site, -1)
    }

    fn neighbours(&self, site: Site, sign: i64) -> Vec<(Site, u32)> {
        let mut out: Vec<(Site, u32)> = Vec::with_capacity(3);
        for &(dr, di) in self.kind.child_offsets() {
            let s = self.wrap(Site::new(site.row + sign * dr, site.index + sign * di));
            match out.iter_mut().find(|(t, _)| *t == s) {
                Some((_, m)) => *m += 1,
                None => out.push((s, 1)),
            }
        }
        out
    }

    /// Checked children of `(l, i)`; fails when `i` is outside the cylinder.
    pub fn children_of(&self, row: i64, index: i64) -> Result<Vec<(Site, u32)>> {
        let site = Site::new(row, index);
        self.check(site)?;
        Ok(self.children(site))
    }
}

/// Number of row configurations `s^n`, or an error above `cap`.
pub fn state_count(states: usize, width: usize, cap: u128) -> Result<usize> {
    let total = (states as u128).checked_pow(width as u32).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::SizeCap { states: total, cap });
    }
    Ok(total as usize)
}

/// Little-endian base-`s` code of a row: digit `i` is the state of site `i`.
pub fn encode(values: &[u8], states: usize) -> usize {
    values.iter().rev().fold(0, |acc, &v| acc * states + v as usize)
}

pub fn decode(code: usize, width: usize, states: usize) -> Vec<u8> {
    let mut c = code;
    (0..width)
        .map(|_| {
            let d = (c % states) as u8;
            c /= states;
            d
        })
        .collect()
}

pub fn digit(code: usize, i: usize, states: usize) -> u8 {
    ((code / states.pow(i as u32)) % states) as u8
}

/// Code of the row shifted by `k`: site `i` of the result holds site `i + k`.
pub fn rotate(code: usize, width: usize, states: usize, k: usize) -> usize {
    let d = decode(code, width, states);
    let rotated: Vec<u8> = (0..width).map(|i| d[(i + k) % width]).collect();
    encode(&rotated, states)
}

/// Zigzag row `(u, d)` encoded with interleaved digits `u0, d0, u1, d1, ...`.
pub fn zigzag_encode(up: &[u8], down: &[u8], states: usize) -> usize {
    let inter: Vec<u8> = up.iter().zip(down).flat_map(|(&u, &d)| [u, d]).collect();
    encode(&inter, states)
}

pub fn zigzag_decode(code: usize, width: usize, states: usize) -> (Vec<u8>, Vec<u8>) {
    let d = decode(code, 2 * width, states);
    (d.iter().step_by(2).copied().collect(), d.iter().skip(1).step_by(2).copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_children_wrap() {
        let lat = Lattice::square(4).unwrap();
        let ch = lat.children_of(2, 3).unwrap();
        assert_eq!(ch, vec![(Site::new(3, 3), 1), (Site::new(3, 0), 1)]);
        assert!(matches!(lat.children_of(0, 4), Err(Error::IndexOutOfRange { index: 4, width: 4 })));
    }

    #[test]
    fn width_one_has_parallel_edges() {
        let lat = Lattice::square(1).unwrap();
        assert_eq!(lat.children(Site::new(0, 0)), vec![(Site::new(1, 0), 2)]);
    }

    #[test]
    fn triangular_children() {
        let lat = Lattice::cylinder(LatticeKind::Triangular, 3).unwrap();
        let ch: Vec<Site> = lat.children(Site::new(0, 2)).into_iter().map(|(s, _)| s).collect();
        assert_eq!(ch, vec![Site::new(1, 2), Site::new(1, 0), Site::new(2, 0)]);
    }

    #[test]
    fn parents_invert_children() {
        for kind in [LatticeKind::Square, LatticeKind::Triangular] {
            for lat in [Lattice::cylinder(kind, 3).unwrap(), Lattice::plane(kind)] {
                let s = Site::new(5, 1);
                for (c, m) in lat.children(s) {
                    assert!(lat.parents(c).contains(&(s, m)));
                }
            }
        }
    }

    #[test]
    fn codes() {
        assert_eq!(encode(&[1, 0, 1], 2), 5);
        assert_eq!(decode(6, 3, 2), vec![0, 1, 1]);
        // (x0, x1, x2) = (1, 1, 0) shifted by one gives (1, 0, 1)
        assert_eq!(rotate(encode(&[1, 1, 0], 2), 3, 2, 1), encode(&[1, 0, 1], 2));
        let z = zigzag_encode(&[1, 0], &[0, 1], 2);
        assert_eq!(zigzag_decode(z, 2, 2), (vec![1, 0], vec![0, 1]));
        assert!(state_count(2, 20, 1 << 14).is_err());
        assert_eq!(state_count(3, 4, 1 << 14).unwrap(), 81);
    }
}
