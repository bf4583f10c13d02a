//! Traces and stabilized eigenvectors of the grown Q* matrices.

use dagas::gas::{GasParams, LocalTransition};
use dagas::growth::{grow, ones_init, spectral_check, DEFAULT_GROWTH_CAP};
use dagas::lattice::LatticeKind;
use dagas::systems::{catalog_entry, cnt_check, CatalogEntry, CatalogId};
use num_complex::Complex64;

fn main() -> dagas::Result<()> {
    let params = GasParams::Y { p: Complex64::new(0.2, 0.0), q: Complex64::new(0.3, 0.0) };
    let CatalogEntry::Factor(f) = catalog_entry(CatalogId::FactorYSize6, &params, 0)? else {
        unreachable!("factor entry")
    };
    let local = LocalTransition::new(params, LatticeKind::Square);
    let g = grow(&f, &local, &ones_init(2), 3, DEFAULT_GROWTH_CAP, 1e-12)?;
    let report = spectral_check(&g, 1e-9)?;
    for s in &report.steps {
        println!(
            "kappa {} size {:>3}: trace {} stabilizes at {:?} rank {:?}",
            s.kappa, s.size, s.trace_qstar, s.stabilization_index, s.stabilized_rank
        );
    }
    let cnt = cnt_check(&g.step(3).q_star(), 1e-9);
    println!("det(Q* - I) = {}, kernel dimension {}", cnt.det, cnt.kernel_dim);
    println!("all checks: {}", report.pass && cnt.singular);
    Ok(())
}
