//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the test harness so the lines always print. The process
//! fails when a criterion fails for a reason other than the known
//! divergences listed in `KNOWN`.

mod common;

use std::time::Instant;

use common::{c64, gauss, ones_code, product_transfer, rat, table_x, table_y, transfer_power_row};
use dagas::algebra::{Field, Gaussian, JsonScalar, Matrix, Radicals, Ring, Series, StationaryMethod};
use dagas::animals::{enumerate_da, identity_check, oversource_gf, GfWeight, IdentityKind, SourceSpec};
use dagas::gas::{invariant_measure, trace_measure, GasParams, Layout, LocalTransition, DEFAULT_STATE_CAP};
use dagas::growth::{grow, limit_truncation, ones_init, spectral_check, LazyDescriptor, Which, DEFAULT_GROWTH_CAP};
use dagas::lattice::{Lattice, LatticeKind};
use dagas::systems::{
    build_system, catalog_entry, solve, verify_entry, zigzag_check, CatalogEntry, CatalogId, Constraint,
    FactorSolution, SolveConfig, SplitPattern, SystemKind, SystemSpec,
};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria allowed to fail, each with its recorded divergence.
const KNOWN: &[(u32, &str)] = &[(
    10,
    "bond identity at widths >= 2 and the bicolour identity with both colours present do not hold for the gases as defined",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "gas-1 split measure and density series", c1),
        (2, "gas-2 width-1 marginal and over-source sum", c2),
        (3, "gas-2 identity on widths 2-4", c3),
        (4, "catalog residuals", c4),
        (5, "growth measures are transfer powers", c5),
        (6, "lazy entries match eager matrices", c6),
        (7, "spectral suite", c7),
        (8, "corner stabilization and limit residual", c8),
        (9, "triangular zigzag family", c9),
        (10, "bond and bicolour identities", c10),
        (11, "numerical search on finite-split gas Y", c11),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let r = run();
        let secs = start.elapsed().as_secs_f64();
        let tag = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {tag} [{secs:.1}s] {name}: {}", r.detail);
        if !r.pass {
            match KNOWN.iter().find(|(k, _)| *k == id) {
                Some((_, why)) => println!("             known divergence: {why}"),
                None => unexpected.push(id),
            }
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}

fn x_params<F: Field>(p: F) -> GasParams<F> {
    GasParams::X { p }
}

fn y_params<F: Field>(p: F, q: F) -> GasParams<F> {
    GasParams::Y { p, q }
}

fn square<F: Field>(params: GasParams<F>) -> LocalTransition<F> {
    LocalTransition::new(params, LatticeKind::Square)
}

fn factor<F: Radicals + JsonScalar>(id: CatalogId, params: &GasParams<F>, branch: u32) -> FactorSolution<F> {
    match catalog_entry(id, params, branch).expect("catalog entry") {
        CatalogEntry::Factor(f) => f,
        _ => panic!("{} is not a factor entry", id.name()),
    }
}

/// `(a / b)^2`.
fn sq(a: i64, b: i64) -> BigRational {
    rat(a * a, b * b)
}

fn to_gauss(r: &BigRational) -> Gaussian {
    Gaussian::new(r.clone(), rat(0, 1))
}

fn c1() -> Outcome {
    let mut notes = Vec::new();
    for p in [sq(1, 2), sq(1, 3), sq(2, 5)] {
        let params = x_params(p.clone());
        let CatalogEntry::Split(s) = catalog_entry(CatalogId::Gas1Split, &params, 0).unwrap() else {
            return outcome(false, "gas1-split is not a split entry");
        };
        let local = square(params);
        for n in 1..=6 {
            let w = trace_measure(&s.q_family(), n).unwrap().normalized().unwrap();
            let inv = invariant_measure(&local, Layout::Row, n, StationaryMethod::EXACT, DEFAULT_STATE_CAP).unwrap();
            let t = product_transfer(n, 2, table_x(p.clone()));
            let stepped: Vec<BigRational> = t.left_apply(&w.weights);
            if w.weights != inv.weights || stepped != w.weights {
                return outcome(false, format!("p={p} n={n}: trace measure is not the stationary one"));
            }
        }
    }
    notes.push("trace measure = invariant for n<=6 at three p".to_string());

    // density as a series in p against the signed area GF of the cylinder
    let bound = 10;
    let p = Series::var_x(bound);
    let one = || Series::one();
    let zero = || Series::zero();
    let s21 = (one() - p.clone()).inv().unwrap();
    let m = |r: [[Series; 2]; 2]| Matrix::from_rows(r.into_iter().map(|x| x.to_vec()).collect()).unwrap();
    let v0 = m([[zero(), p.clone()], [zero(), one()]]);
    let v1 = m([[zero(), zero()], [s21, zero()]]);
    let h0 = m([[zero(), zero()], [one(), one() - p.clone()]]);
    let h1 = m([[zero(), (one() - p.clone()) * p.clone()], [zero(), zero()]]);
    let q1 = &v1 * &h1;
    let qstar = &(&v0 * &h0) + &q1;
    for n in 1..=6usize {
        let pow = qstar.pow(n as u64 - 1);
        let num = (&q1 * &pow).trace();
        let den = (&pow * &qstar).trace();
        let density = num.try_div(&den).unwrap();
        let lattice = Lattice::square(n).unwrap();
        let gf = enumerate_da(&SourceSpec::row(lattice, &[0]).unwrap(), bound, GfWeight::Perimeter).unwrap();
        let counts = gf.area_counts();
        for (k, &a) in counts.iter().enumerate() {
            // -GF(-p, 1) has coefficient (-1)^(k+1) a_k at p^k
            let expect = if k % 2 == 1 { rat(a as i64, 1) } else { -rat(a as i64, 1) };
            if density.coeff(k as u32, 0) != expect {
                return outcome(false, format!("n={n}: coefficient of p^{k} is {}", density.coeff(k as u32, 0)));
            }
        }
    }
    notes.push("density series = -GF(-p,1) to p^10 for n<=6".into());
    outcome(true, notes.join("; "))
}

fn c2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let gf = oversource_gf(&SourceSpec::row(Lattice::square(1).unwrap(), &[0]).unwrap(), 20).unwrap();
    // y/(1-x): one animal per area k, each with perimeter 1
    for k in 0..=20 {
        if gf.coeff(k, 1) != 1 || gf.terms().count() != 21 {
            return outcome(false, format!("over-source GF on Sq(1) is not y/(1-x) at area {k}"));
        }
    }
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..10 {
        let draw = |rng: &mut ChaCha8Rng| {
            let d: i64 = rng.gen_range(2..60);
            rat(rng.gen_range(1..d), d)
        };
        let (p, q) = (draw(&mut rng), draw(&mut rng));
        let local = square(y_params(p.clone(), q.clone()));
        let inv = invariant_measure(&local, Layout::Row, 1, StationaryMethod::EXACT, DEFAULT_STATE_CAP).unwrap();
        let marginal = inv.site_marginal(&[(0, 1)]);
        if marginal != q {
            return outcome(false, format!("p={p} q={q}: marginal {marginal}"));
        }
        let one = rat(1, 1);
        let partial = gf.eval(&p, &((one.clone() - p.clone()) * q.clone()));
        let gap = (q.clone() - partial).abs();
        let bound = q.clone() * num_traits::pow(p.clone(), 21) / (one - p.clone());
        if gap > bound {
            return outcome(false, format!("p={p} q={q}: gap above q p^21/(1-p)"));
        }
        if bound != rat(0, 1) {
            worst_ratio = worst_ratio.max((gap / bound).to_c64().re);
        }
    }
    outcome(true, format!("10 random (p,q): marginal = q exactly; largest gap/bound {worst_ratio:.3}"))
}

fn c3() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for n in 2..=4 {
        let r = identity_check(IdentityKind::FoY, n, &y_params(rat(1, 100), rat(1, 2)), &[0], &[], 12).unwrap();
        let ok = r.pass && r.gap < r.tail_bound;
        pass &= ok;
        notes.push(format!("n={n} gap {:.2e} < bound {:.2e}: {ok}", r.gap, r.tail_bound));
    }
    outcome(pass, notes.join("; "))
}

/// Exact points at which every root of an entry is a Gaussian rational.
fn exact_points(id: CatalogId, candidates: impl Iterator<Item = GasParams<Gaussian>>, want: usize) -> Vec<GasParams<Gaussian>> {
    candidates.filter(|p| catalog_entry(id, p, 0).is_ok()).take(want).collect()
}

fn c4() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let squares = || (1..=20).map(|k| x_params(to_gauss(&sq(k, k + 3))));
    // p and 1 - p both squares: legs of Pythagorean triples
    let pythagorean = || {
        (2..12i64)
            .flat_map(|m| (1..m).map(move |n| (m, n)))
            .map(|(m, n)| x_params(to_gauss(&sq(m * m - n * n, m * m + n * n))))
            .take(20)
    };
    // 1 - 4p a square
    let tri = || (1..=20).map(|k| x_params(to_gauss(&((rat(1, 1) - sq(k, k + 1)) / rat(4, 1)))));
    let exact_sets: Vec<(CatalogId, Vec<GasParams<Gaussian>>)> = vec![
        (CatalogId::Gas1Split, squares().collect()),
        (CatalogId::FactorXSize4, squares().collect()),
        (CatalogId::FactorXSize4C1, pythagorean().collect()),
        (CatalogId::FactorXSize6, squares().collect()),
        (CatalogId::TriSplit, tri().collect()),
    ];
    let y_grid = || {
        (2..=25i64).flat_map(|b| {
            (1..b).flat_map(move |a| {
                (2..=25i64).flat_map(move |d| (1..d).map(move |c| y_params(gauss(a, b), gauss(c, d))))
            })
        })
    };
    let mut sets = exact_sets;
    for id in [CatalogId::FactorYSize4D1, CatalogId::FactorYSize4Corner, CatalogId::FactorYSize6] {
        sets.push((id, exact_points(id, y_grid(), 20)));
    }
    for (id, points) in &sets {
        let mut ok = true;
        for params in points {
            for branch in 0..2 {
                let e = catalog_entry(*id, params, branch).unwrap();
                ok &= verify_entry(*id, &e, params, 0.0).unwrap().pass;
            }
        }
        pass &= ok;
        notes.push(format!("{} exact at {} points: {ok}", id.name(), points.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for id in CatalogId::ALL {
        for _ in 0..20 {
            let (p, q) = (rng.gen_range(0.02..0.24), rng.gen_range(0.05..0.95));
            let params = match id.gas() {
                dagas::gas::GasKind::Y => y_params(c64(p), c64(q)),
                _ => x_params(c64(p)),
            };
            for branch in 0..4 {
                let e = catalog_entry(id, &params, branch).unwrap();
                let r = verify_entry(id, &e, &params, 1e-10).unwrap();
                worst = worst.max(r.residual.max_abs);
                pass &= r.pass;
            }
        }
    }
    notes.push(format!("all entries at 20 float points, largest residual {worst:.1e}"));
    outcome(pass, notes.join("; "))
}

fn growth_matches<F: Radicals + JsonScalar>(
    f: &FactorSolution<F>,
    local: &LocalTransition<F>,
    table: impl Fn(u8, u8, u8) -> F + Copy,
    tol: f64,
) -> (bool, f64) {
    let g = grow(f, local, &ones_init(2), 3, DEFAULT_GROWTH_CAP, tol).unwrap();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for n in 1..=4 {
        let t = product_transfer(n, 2, table);
        for k in 1..=3 {
            let mu = g.measure(k, n).unwrap();
            let expect = transfer_power_row(&t, ones_code(n, 2), k);
            for (a, b) in mu.weights.iter().zip(&expect) {
                let d = (a.clone() - b.clone()).magnitude();
                worst = worst.max(d);
                ok &= if F::EXACT { a == b } else { d <= tol };
            }
        }
    }
    (ok, worst)
}

fn c5() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let px = gauss(4, 9);
    let params = x_params(px.clone());
    for id in [CatalogId::FactorXSize4, CatalogId::FactorXSize6] {
        let (ok, _) = growth_matches(&factor(id, &params, 0), &square(params.clone()), |a, b, c| table_x(px.clone())(a, b, c), 0.0);
        pass &= ok;
        notes.push(format!("{} exact: {ok}", id.name()));
    }
    let (py, qy) = (gauss(1, 25), gauss(19, 25));
    let params = y_params(py.clone(), qy.clone());
    let (ok, _) = growth_matches(
        &factor(CatalogId::FactorYSize6, &params, 0),
        &square(params.clone()),
        |a, b, c| table_y(py.clone(), qy.clone())(a, b, c),
        0.0,
    );
    pass &= ok;
    notes.push(format!("factor-y-size6 exact: {ok}"));
    let params = y_params(c64(0.2), c64(0.3));
    for id in [CatalogId::FactorYSize4D1, CatalogId::FactorYSize4Corner] {
        let (ok, worst) =
            growth_matches(&factor(id, &params, 0), &square(params.clone()), |a, b, c| table_y(c64(0.2), c64(0.3))(a, b, c), 1e-9);
        pass &= ok;
        notes.push(format!("{} float {worst:.1e}: {ok}", id.name()));
    }
    outcome(pass, notes.join("; "))
}

fn c6() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0usize;
    let cases = [
        (CatalogId::FactorXSize6, x_params(c64(0.3))),
        (CatalogId::FactorXSize4, x_params(c64(0.15))),
        (CatalogId::FactorYSize4Corner, y_params(c64(0.2), c64(0.3))),
        (CatalogId::FactorYSize6, y_params(c64(0.35), c64(0.6))),
    ];
    for (id, params) in cases {
        let f = factor(id, &params, 0);
        let local = square(params);
        let init = ones_init(2);
        let g = grow(&f, &local, &init, 4, DEFAULT_GROWTH_CAP, 1e-12).unwrap();
        for kappa in 0..=4 {
            let lazy = LazyDescriptor::new(&f, &local, &init, kappa).unwrap();
            let st = g.step(kappa);
            for (which, fam) in [(Which::V, &st.v), (Which::H, &st.h), (Which::Q, &st.q)] {
                for (x, m) in fam.iter().enumerate() {
                    for i in 0..m.rows() {
                        for j in 0..m.cols() {
                            let e: Complex64 = lazy.entry(which, x, i, j).unwrap();
                            worst = worst.max((e - m[(i, j)]).norm());
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    outcome(worst <= 1e-12, format!("{count} entries over four factors, largest gap {worst:.1e}"))
}

fn c7() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for id in CatalogId::ALL.into_iter().filter(|id| id.name().starts_with("factor")) {
        let params = match id.gas() {
            dagas::gas::GasKind::Y => y_params(c64(0.2), c64(0.3)),
            _ => x_params(c64(0.3)),
        };
        let g = grow(&factor(id, &params, 0), &square(params), &ones_init(2), 3, DEFAULT_GROWTH_CAP, 1e-12).unwrap();
        let r = spectral_check(&g, 1e-9).unwrap();
        let bound_ok = r.steps.iter().all(|s| s.stabilization_index.is_some_and(|m| m <= 2 * s.kappa.max(1)));
        let worst = r
            .steps
            .iter()
            .flat_map(|s| [s.left_recursion_residual, s.right_recursion_residual, s.density_gap])
            .flatten()
            .fold(0.0, f64::max);
        pass &= r.pass && bound_ok;
        notes.push(format!("{} {:.1e}: {}", id.name(), worst, r.pass && bound_ok));
    }
    outcome(pass, notes.join("; "))
}

fn c8() -> Outcome {
    let mut notes = Vec::new();
    let params = x_params(gauss(1, 4));
    let r = limit_truncation(&factor(CatalogId::FactorXSize6, &params, 0), &square(params), 36, 0.0).unwrap();
    let x_ok = r.pass && r.residual_exact_zero && r.stabilization.iter().all(|s| s.exact_zero);
    notes.push(format!("gas X size 6 exact, block 36: {x_ok}"));
    let params = y_params(c64(0.2), c64(0.3));
    let r = limit_truncation(&factor(CatalogId::FactorYSize6, &params, 0), &square(params), 36, 1e-9).unwrap();
    let y_ok = r.pass && r.residual_max <= 1e-9;
    notes.push(format!("gas Y size 6 float, residual {:.1e}: {y_ok}", r.residual_max));
    outcome(x_ok && y_ok, notes.join("; "))
}

fn c9() -> Outcome {
    let mut pass = true;
    let mut checked = 0;
    for k in 1..=10 {
        // 1 - 4p = (k / (k + 2))^2
        let p = (rat(1, 1) - sq(k, k + 2)) / rat(4, 1);
        let params = x_params(p);
        for branch in 0..2 {
            let e = catalog_entry(CatalogId::TriSplit, &params, branch).unwrap();
            pass &= verify_entry(CatalogId::TriSplit, &e, &params, 0.0).unwrap().pass;
            let CatalogEntry::Zigzag(z) = e else { return outcome(false, "tri-split is not a zigzag entry") };
            let local = LocalTransition::new(params.clone(), LatticeKind::Triangular);
            for n in 2..=3 {
                let r = zigzag_check(&z, &local, n, DEFAULT_STATE_CAP, 0.0).unwrap();
                pass &= r.pass && r.nonzero;
                checked += 1;
            }
        }
    }
    outcome(pass, format!("10 points, both roots, widths 2-3: {checked} exact stationarity checks"))
}

fn c10() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for n in 1..=3 {
        let params = GasParams::Bond { p: rat(1, 10), q: rat(1, 2) };
        let r = identity_check(IdentityKind::Bond, n, &params, &[0], &[], 10).unwrap();
        pass &= r.pass;
        notes.push(format!("bond n={n}: exact {} vs sum {} ({})", r.exact, r.partial_sum, r.pass));
    }
    let params = GasParams::Bicolour { p1: rat(1, 10), p2: rat(1, 20) };
    for n in 1..=3 {
        let r = identity_check(IdentityKind::Bicolour, n, &params, &[0], &[], 10).unwrap();
        pass &= r.pass;
        notes.push(format!("bicolour n={n} one colour: {}", r.pass));
    }
    for n in 2..=3 {
        let r = identity_check(IdentityKind::Bicolour, n, &params, &[0], &[1], 10).unwrap();
        pass &= r.pass;
        notes.push(format!("bicolour n={n} two colours: exact {} vs sum {} ({})", r.exact, r.partial_sum, r.pass));
    }
    let p1 = rat(1, 7);
    let local = square(GasParams::Bicolour { p1: p1.clone(), p2: rat(2, 9) });
    let inv = invariant_measure(&local, Layout::Row, 1, StationaryMethod::EXACT, DEFAULT_STATE_CAP).unwrap();
    let proj = inv.site_marginal(&[(0, 1)]) == p1.clone() / (rat(1, 1) + p1);
    pass &= proj;
    notes.push(format!("projection p1/(1+p1) at width 1: {proj}"));
    outcome(pass, notes.join("; "))
}

fn c11() -> Outcome {
    let mut notes = Vec::new();
    let local = square(y_params(c64(0.2), c64(0.3)));
    for size in 2..=4 {
        let mut spec = SystemSpec::new(SystemKind::FiniteSplit, size).with(Constraint::UnitTrace);
        // the block pattern splits the size evenly between the two states
        if size % 2 == 1 {
            spec = spec.with_pattern(SplitPattern::Full);
        }
        let sys = build_system(&spec, &local).unwrap();
        let cfg = SolveConfig { starts: 16, seed: 11, max_iter: 300, ..SolveConfig::default() };
        let r = solve(&sys, &cfg);
        notes.push(format!("size {size}: {} converged, best residual {:.2e}", r.converged, r.best_residual));
    }
    outcome(true, format!("{} (evidence only)", notes.join("; ")))
}
