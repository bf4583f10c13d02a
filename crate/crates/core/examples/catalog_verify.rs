//! Every catalog solution checked against its polynomial system.

use dagas::algebra::Gaussian;
use dagas::gas::{GasKind, GasParams};
use dagas::systems::{catalog_entry, verify_entry, CatalogId};
use num_complex::Complex64;
use num_rational::BigRational;

fn main() -> dagas::Result<()> {
    // exact Gaussian rationals where the roots are rational, floats for gas Y
    let g = |n: i64, d: i64| Gaussian::new(BigRational::new(n.into(), d.into()), BigRational::from_integer(0.into()));
    for id in CatalogId::ALL {
        let line = match id.gas() {
            GasKind::X => {
                // first p at which every square root in the entry is rational
                let params = [g(4, 9), g(2, 9), g(9, 25), g(9, 64), g(1, 9)]
                    .into_iter()
                    .map(|p| GasParams::X { p })
                    .find(|params| catalog_entry(id, params, 0).is_ok())
                    .expect("a rational point");
                let check = verify_entry(id, &catalog_entry(id, &params, 0)?, &params, 0.0)?;
                format!("exact at p = {}, zero residual: {}", params.p().re, check.residual.exact_zero)
            }
            _ => {
                let params = GasParams::Y { p: Complex64::new(0.2, 0.0), q: Complex64::new(0.3, 0.0) };
                let check = verify_entry(id, &catalog_entry(id, &params, 0)?, &params, 1e-12)?;
                format!("float, max residual {:.1e}", check.residual.max_abs)
            }
        };
        println!("{:<24} {line}", id.name());
    }
    Ok(())
}
