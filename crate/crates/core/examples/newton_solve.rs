//! Seeded multi-start Newton search on the size-4 factor system of the hard-core gas.

use dagas::gas::{GasParams, LocalTransition};
use dagas::lattice::LatticeKind;
use dagas::systems::{build_system, solve, SolveConfig, SystemKind, SystemSpec};
use num_complex::Complex64;

fn main() -> dagas::Result<()> {
    let local = LocalTransition::new(GasParams::X { p: Complex64::new(0.3, 0.0) }, LatticeKind::Square);
    let sys = build_system(&SystemSpec::new(SystemKind::Factor, 4), &local)?;
    let report = solve(&sys, &SolveConfig { starts: 32, seed: 3, ..SolveConfig::default() });
    println!("{} equations, {} variables", report.equations, report.variables);
    println!("{} of {} starts converged; {}", report.converged, report.starts, report.evidence);
    if let Some(best) = report.solutions.first() {
        println!("first solution: {best}");
    }
    Ok(())
}
