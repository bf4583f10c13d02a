//! Site density of each grown measure, approaching the stationary value.

use dagas::gas::{GasParams, LocalTransition};
use dagas::growth::{density_table, grow, ones_init, DEFAULT_GROWTH_CAP};
use dagas::lattice::LatticeKind;
use dagas::systems::{catalog_entry, CatalogEntry, CatalogId};
use num_complex::Complex64;

fn main() -> dagas::Result<()> {
    let params = GasParams::Y { p: Complex64::new(0.2, 0.0), q: Complex64::new(0.3, 0.0) };
    let CatalogEntry::Factor(f) = catalog_entry(CatalogId::FactorYSize4Corner, &params, 0)? else {
        unreachable!("factor entry")
    };
    let local = LocalTransition::new(params, LatticeKind::Square);
    let g = grow(&f, &local, &ones_init(2), 5, DEFAULT_GROWTH_CAP, 1e-12)?;
    let table = density_table(&g, 4)?;
    print!("{}", table.to_csv());
    println!("gap never grows: {}", table.monotone);
    Ok(())
}
