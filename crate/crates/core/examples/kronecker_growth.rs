//! Grows V, H and Q from a factor solution, then reads one deep entry lazily.

use dagas::gas::{GasParams, LocalTransition};
use dagas::growth::{grow, ones_init, LazyDescriptor, Which, DEFAULT_GROWTH_CAP};
use dagas::lattice::LatticeKind;
use dagas::systems::{catalog_entry, CatalogEntry, CatalogId};
use num_complex::Complex64;

fn main() -> dagas::Result<()> {
    let params = GasParams::Y { p: Complex64::new(0.2, 0.0), q: Complex64::new(0.3, 0.0) };
    let CatalogEntry::Factor(f) = catalog_entry(CatalogId::FactorYSize4Corner, &params, 0)? else {
        unreachable!("factor entry")
    };
    let local = LocalTransition::new(params, LatticeKind::Square);
    let init = ones_init(2);

    let g = grow(&f, &local, &init, 4, DEFAULT_GROWTH_CAP, 1e-12)?;
    for s in g.sizes() {
        println!("kappa {}: V {:?}, Q {}x{}, cross residual {:.1e}", s.kappa, s.v, s.q, s.q, s.cross_residual);
    }
    let eager = &g.step(4).q[1];

    // the lazy descriptor never builds the matrices
    let lazy = LazyDescriptor::new(&f, &local, &init, 4)?;
    let (i, j) = (0..eager.rows())
        .flat_map(|i| (0..eager.cols()).map(move |j| (i, j)))
        .max_by(|a, b| eager[*a].norm().total_cmp(&eager[*b].norm()))
        .unwrap();
    let x = lazy.entry(Which::Q, 1, i, j)?;
    println!("Q^1[{i},{j}] lazy {x:.6} eager {:.6}", eager[(i, j)]);

    // a step too large to store still has entries
    let deep = LazyDescriptor::new(&f, &local, &init, 12)?;
    let (rows, _) = deep.shape(Which::Q);
    println!("kappa 12: Q is {rows}x{rows}, Q^1[0,0] = {:.6}", deep.entry(Which::Q, 1, 0, 0)?);
    Ok(())
}
