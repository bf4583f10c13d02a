//! Corner blocks of the factors and a truncation of the infinite-step limit.

use dagas::gas::{GasParams, LocalTransition};
use dagas::growth::{corner_analysis, limit_truncation};
use dagas::lattice::LatticeKind;
use dagas::systems::{catalog_entry, CatalogEntry, CatalogId};
use num_complex::Complex64;

fn main() -> dagas::Result<()> {
    let params = GasParams::Y { p: Complex64::new(0.2, 0.0), q: Complex64::new(0.3, 0.0) };
    let CatalogEntry::Factor(f) = catalog_entry(CatalogId::FactorYSize6, &params, 0)? else {
        unreachable!("factor entry")
    };
    let local = LocalTransition::new(params, LatticeKind::Square);

    let corner = corner_analysis(&f, &local, 1e-9)?;
    println!("corner classes: V {:?}, H {:?}, Q {:?}", corner.class_v, corner.class_h, corner.class_q);

    let lim = limit_truncation(&f, &local, 36, 1e-9)?;
    for row in &lim.stabilization {
        println!("kappa {}: block {} changes by {:.1e}", row.kappa, row.block, row.max_change);
    }
    println!("36x36 block from step {}, fixed-point residual {:.1e}", lim.kappa, lim.residual_max);
    println!("corner value {} against {}", lim.corner_value, lim.corner_formula);
    Ok(())
}
