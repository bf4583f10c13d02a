//! Checks that gas marginals equal signed animal generating functions.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::Value;

use super::enumerate::{enumerate_bicoloured, enumerate_da, SourceSpec};
use super::gf::{GfPoly, GfWeight};
use super::oversource::oversource_gf;
use crate::algebra::json::render_rational;
use crate::algebra::StationaryMethod;
use crate::gas::{invariant_measure, GasParams, Layout, LocalTransition, DEFAULT_STATE_CAP};
use crate::lattice::{Lattice, LatticeKind, Site};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityKind {
    /// `P(X = 1 on S) = (-1)^|S| GF_S(-p, 1)`
    FoX,
    /// `P(Y = 1 on S)` = over-source GF at `(p, (1-p) q)`
    FoY,
    /// `(-1)^|C| P(X = 1 on C) = B_C(-p, q)`
    Bond,
    /// `(-1)^(|S1|+|S2|) P(X = 1 on S1, X = 2 on S2) = GF_{S1,S2}(-p1, -p2)`
    Bicolour,
}

impl IdentityKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fo-x" => Ok(IdentityKind::FoX),
            "fo-y" => Ok(IdentityKind::FoY),
            "bond" => Ok(IdentityKind::Bond),
            "bicolour" | "bicolor" => Ok(IdentityKind::Bicolour),
            _ => Err(Error::Unknown { what: "identity", name: s.into() }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::FoX => "fo-x",
            IdentityKind::FoY => "fo-y",
            IdentityKind::Bond => "bond",
            IdentityKind::Bicolour => "bicolour",
        }
    }
}

/// Heuristic geometric bound on the omitted tail of a partial sum.
#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    /// Largest count ratio `c_{k+1} / c_k` for `k >= A/2`, times the area weight.
    pub ratio: BigRational,
    pub bound: BigRational,
}

/// Extends the animal counts `c_k` geometrically past `A`:
/// `sum_{k > A} c_A r^(k-A) |w|^k = c_A |w|^A s / (1 - s)` with `s = r |w| < 1/2`.
/// Weights on the second statistic are taken to be at most 1 in magnitude.
pub fn tail_estimate(counts: &[u128], area_weight: &BigRational) -> Result<TailEstimate> {
    let a = counts.len() - 1;
    let w = area_weight.abs();
    let mut growth = BigRational::zero();
    for k in (a / 2)..a {
        if counts[k] == 0 {
            continue;
        }
        let r = BigRational::new(counts[k + 1].into(), counts[k].into());
        if r > growth {
            growth = r;
        }
    }
    let ratio = growth * w.clone();
    if ratio >= BigRational::new(1.into(), 2.into()) {
        return Err(Error::OutsideConvergence(format!(
            "count ratio times area weight is {}, not below 1/2",
            render_rational(&ratio)
        )));
    }
    let last = BigRational::from_integer(counts[a].into()) * num_traits::pow(w, a);
    let bound = last * ratio.clone() / (BigRational::one() - ratio.clone());
    Ok(TailEstimate { ratio, bound })
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub which: &'static str,
    pub width: usize,
    pub max_area: u32,
    pub sources: Vec<usize>,
    pub sources2: Vec<usize>,
    pub params: Value,
    /// Signed exact marginal from the stationary measure.
    pub exact: String,
    pub partial_sum: String,
    pub gap: f64,
    pub gap_exact: String,
    pub tail_ratio: f64,
    pub tail_bound: f64,
    pub tail_bound_exact: String,
    pub area_counts: Vec<String>,
    pub pass: bool,
}

fn to_f64(r: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

fn pow_neg_one(k: usize) -> BigRational {
    if k.is_multiple_of(2) {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// Compares an exact gas marginal on width `n` with the partial sum of the
/// matching animal GF up to `max_area`. Sources are indices in one row.
pub fn identity_check(
    kind: IdentityKind,
    width: usize,
    params: &GasParams<BigRational>,
    sources: &[usize],
    sources2: &[usize],
    max_area: u32,
) -> Result<IdentityReport> {
    let lattice = Lattice::square(width)?;
    let expected_gas = match kind {
        IdentityKind::FoX => "x",
        IdentityKind::FoY => "y",
        IdentityKind::Bond => "bond",
        IdentityKind::Bicolour => "bicolour",
    };
    if params.kind().name() != expected_gas {
        return Err(Error::InvalidParams(format!("{} needs gas {expected_gas} parameters", kind.name())));
    }
    if kind != IdentityKind::Bicolour && !sources2.is_empty() {
        return Err(Error::InvalidParams("only the bicolour identity takes a second source set".into()));
    }
    let all: Vec<usize> = sources.iter().chain(sources2).copied().collect();
    let spec = SourceSpec::row(lattice, &all)?;
    spec.require_free()?;

    let local = LocalTransition::new(params.clone(), LatticeKind::Square);
    let measure = invariant_measure(&local, Layout::Row, width, StationaryMethod::EXACT, DEFAULT_STATE_CAP)?;
    let mut pattern: Vec<(usize, u8)> = sources.iter().map(|&i| (i, 1)).collect();
    pattern.extend(sources2.iter().map(|&i| (i, 2)));
    let marginal = measure.site_marginal(&pattern);

    let one = BigRational::one();
    let (gf, x, y, exact): (GfPoly, BigRational, BigRational, BigRational) = match params {
        GasParams::X { p } => {
            let gf = enumerate_da(&SourceSpec::row(lattice, sources)?, max_area, GfWeight::Perimeter)?;
            (gf, -p.clone(), one.clone(), pow_neg_one(sources.len()) * marginal)
        }
        GasParams::Y { p, q } => {
            let gf = oversource_gf(&SourceSpec::row(lattice, sources)?, max_area)?;
            (gf, p.clone(), (one.clone() - p.clone()) * q.clone(), marginal)
        }
        GasParams::Bond { p, q } => {
            let gf = enumerate_da(&SourceSpec::row(lattice, sources)?, max_area, GfWeight::Bonds)?;
            (gf, -p.clone(), q.clone(), pow_neg_one(sources.len()) * marginal)
        }
        GasParams::Bicolour { p1, p2 } => {
            let s1: Vec<Site> = sources.iter().map(|&i| Site::new(0, i as i64)).collect();
            let s2: Vec<Site> = sources2.iter().map(|&i| Site::new(0, i as i64)).collect();
            let gf = enumerate_bicoloured(lattice, &s1, &s2, max_area)?;
            (gf, -p1.clone(), -p2.clone(), pow_neg_one(all.len()) * marginal)
        }
    };

    let partial = gf.eval(&x, &y);
    let gap_exact = (exact.clone() - partial.clone()).abs();
    if kind != IdentityKind::Bicolour && y.abs() > one {
        return Err(Error::OutsideConvergence("second weight exceeds 1 in magnitude".into()));
    }
    // both variables of the colour GF count area
    let area_weight = if kind == IdentityKind::Bicolour { x.abs().max(y.abs()) } else { x.clone() };
    let tail = tail_estimate(&gf.area_counts(), &area_weight)?;
    let pass = gap_exact <= tail.bound;
    Ok(IdentityReport {
        which: kind.name(),
        width,
        max_area,
        sources: sources.to_vec(),
        sources2: sources2.to_vec(),
        params: params.to_json(),
        exact: render_rational(&exact),
        partial_sum: render_rational(&partial),
        gap: to_f64(&gap_exact),
        gap_exact: render_rational(&gap_exact),
        tail_ratio: to_f64(&tail.ratio),
        tail_bound: to_f64(&tail.bound),
        tail_bound_exact: render_rational(&tail.bound),
        area_counts: gf.area_counts().iter().map(u128::to_string).collect(),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn width_one_fo_x() {
        let r = identity_check(IdentityKind::FoX, 1, &GasParams::X { p: q(1, 3) }, &[0], &[], 30).unwrap();
        assert!(r.pass);
        assert_eq!(r.exact, "-1/4");
        // gap is p^31 / (1 + p)
        let gap = num_traits::pow(q(1, 3), 31) / q(4, 3);
        assert_eq!(r.gap_exact, render_rational(&gap));
    }

    #[test]
    fn width_one_fo_y() {
        let r = identity_check(IdentityKind::FoY, 1, &GasParams::Y { p: q(1, 5), q: q(1, 3) }, &[0], &[], 20)
            .unwrap();
        assert!(r.pass);
        assert_eq!(r.exact, "1/3");
        assert_eq!(r.gap_exact, render_rational(&(q(1, 3) * num_traits::pow(q(1, 5), 21))));
        assert!(r.gap <= 1e-14);
    }

    #[test]
    fn wrong_params_are_rejected() {
        assert!(identity_check(IdentityKind::FoY, 1, &GasParams::X { p: q(1, 3) }, &[0], &[], 5).is_err());
    }

    #[test]
    fn divergent_parameters_are_flagged() {
        let r = identity_check(IdentityKind::FoX, 2, &GasParams::X { p: q(9, 10) }, &[0], &[], 8);
        assert!(matches!(r, Err(Error::OutsideConvergence(_))));
    }
}
