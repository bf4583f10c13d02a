//! Animals grown from several sources: over-source counts and two-colour weights.

use dagas::animals::{enumerate_bicoloured, oversource_gf, SourceSpec};
use dagas::lattice::{Lattice, LatticeKind, Site};

fn main() -> dagas::Result<()> {
    let cyl = Lattice::cylinder(LatticeKind::Square, 4)?;

    // animals containing all of the sources, counted by area
    let src = SourceSpec::row(cyl, &[0, 2])?;
    println!("over sources {{0, 2}}: {:?}", oversource_gf(&src, 8)?.area_counts());

    // x1^(cells of the first colour) x2^(cells of the second)
    let gf = enumerate_bicoloured(cyl, &[Site::new(0, 0)], &[Site::new(0, 1)], 4)?;
    for ((a, b), count) in gf.terms() {
        println!("  x1^{a} x2^{b}: {count}");
    }
    Ok(())
}
