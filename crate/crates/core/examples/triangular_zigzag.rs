//! Zigzag matrix-product measure of the hard-core gas on the triangular lattice.

use dagas::algebra::Gaussian;
use dagas::gas::{GasParams, LocalTransition, DEFAULT_STATE_CAP};
use dagas::lattice::LatticeKind;
use dagas::systems::{catalog_entry, zigzag_check, CatalogEntry, CatalogId};
use num_rational::BigRational;

fn main() -> dagas::Result<()> {
    // 1 - 4p is a rational square at each of these points
    for (n, d) in [(2, 9), (3, 16), (6, 25)] {
        let p = Gaussian::new(BigRational::new(n.into(), d.into()), BigRational::from_integer(0.into()));
        let params = GasParams::X { p };
        for branch in 0..2 {
            let CatalogEntry::Zigzag(z) = catalog_entry(CatalogId::TriSplit, &params, branch)? else {
                unreachable!("zigzag entry")
            };
            let local = LocalTransition::new(params.clone(), LatticeKind::Triangular);
            for width in 2..=3 {
                let r = zigzag_check(&z, &local, width, DEFAULT_STATE_CAP, 0.0)?;
                println!(
                    "p = {n}/{d} root {branch} width {width}: equations {}, stationary {}, nonzero {}",
                    r.equations_exact_zero, r.stationary_exact, r.nonzero
                );
            }
        }
    }
    Ok(())
}
