//! Gas marginals on the cylinder against partial sums of animal generating functions.

use dagas::animals::{identity_check, IdentityKind};
use dagas::gas::GasParams;
use num_rational::BigRational;

fn main() -> dagas::Result<()> {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    for width in 1..=3 {
        let rep = identity_check(IdentityKind::FoX, width, &GasParams::X { p: r(1, 10) }, &[0], &[], 14)?;
        println!(
            "hard-core n={width}: exact {} gap {:.2e} bound {:.2e} {}",
            rep.exact,
            rep.gap,
            rep.tail_bound,
            if rep.pass { "ok" } else { "FAIL" }
        );
    }
    let params = GasParams::Y { p: r(1, 100), q: r(1, 2) };
    let rep = identity_check(IdentityKind::FoY, 2, &params, &[0], &[], 12)?;
    println!("gas Y n=2: gap {:.2e} within {:.2e}: {}", rep.gap, rep.tail_bound, rep.pass);
    Ok(())
}
