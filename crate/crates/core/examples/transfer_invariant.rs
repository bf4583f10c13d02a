//! Exact transfer matrix and stationary row measure of gas Y on a cylinder.

use dagas::algebra::StationaryMethod;
use dagas::gas::{invariant_measure, transfer_matrix, GasParams, Layout, LocalTransition, DEFAULT_STATE_CAP};
use dagas::lattice::{decode, LatticeKind};
use num_rational::BigRational;

fn main() -> dagas::Result<()> {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let local = LocalTransition::new(GasParams::Y { p: r(1, 5), q: r(1, 3) }, LatticeKind::Square);

    let t = transfer_matrix(&local, Layout::Row, 2, DEFAULT_STATE_CAP)?;
    println!("width 2 transfer matrix:");
    for i in 0..t.rows() {
        let row: Vec<String> = t.row(i).iter().map(ToString::to_string).collect();
        println!("  {}", row.join("  "));
    }

    for width in 1..=4 {
        let m = invariant_measure(&local, Layout::Row, width, StationaryMethod::EXACT, DEFAULT_STATE_CAP)?;
        println!("width {width}: P(site = 1) = {}", m.site_marginal(&[(0, 1)]));
        if width == 2 {
            for (code, w) in m.weights.iter().enumerate() {
                println!("    {:?} {w}", decode(code, width, 2));
            }
        }
    }
    Ok(())
}
