//! Monte Carlo run of the hard-core gas against its exact site density.

use dagas::algebra::StationaryMethod;
use dagas::gas::{invariant_measure, simulate, GasParams, Layout, LocalTransition, SimulationConfig, DEFAULT_STATE_CAP};
use dagas::lattice::LatticeKind;

fn main() -> dagas::Result<()> {
    let local = LocalTransition::new(GasParams::X { p: 0.3 }, LatticeKind::Square);
    for width in [2, 4, 6] {
        let exact = invariant_measure(&local, Layout::Row, width, StationaryMethod::EXACT, DEFAULT_STATE_CAP)?
            .site_marginal(&[(0, 1)]);
        let run = simulate(&local, &SimulationConfig::new(Layout::Row, width, 200_000, 7), None)?;
        println!(
            "width {width}: simulated {:.5} +- {:.5}, exact {exact:.5}",
            run.density[1], run.batch_se[1]
        );
    }
    Ok(())
}
