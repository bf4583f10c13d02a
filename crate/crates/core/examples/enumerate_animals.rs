//! Directed animals counted by area, on the plane and on a narrow cylinder.

use dagas::animals::{enumerate_da, GfWeight, SourceSpec};
use dagas::lattice::{Lattice, LatticeKind};

fn main() -> dagas::Result<()> {
    for kind in [LatticeKind::Square, LatticeKind::Triangular] {
        let src = SourceSpec::row(Lattice::plane(kind), &[0])?;
        let gf = enumerate_da(&src, 10, GfWeight::Perimeter)?;
        println!("{:<10} {:?}", kind.name(), &gf.area_counts()[1..]);
    }

    // area x perimeter table on the width-3 cylinder
    let src = SourceSpec::row(Lattice::cylinder(LatticeKind::Square, 3)?, &[0])?;
    let gf = enumerate_da(&src, 6, GfWeight::Perimeter)?;
    println!("\nwidth 3, x^area y^perimeter:");
    for ((area, per), count) in gf.terms() {
        println!("  x^{area} y^{per}: {count}");
    }
    Ok(())
}
