use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::{Command, FactorArgs, GasArgs, GlobalArgs, LayoutArg, ModeArg, Outcome, WeightArg};
use crate::algebra::{Field, Gaussian, JsonScalar, Radicals, StationaryMethod};
use crate::animals::{
    enumerate_bicoloured, enumerate_da, identity_check, oversource_gf, GfWeight, IdentityKind, SourceSpec,
};
use crate::gas::{
    invariant_measure, simulate, split_measure_check, transfer_matrix, GasKind, GasParams, Layout, LocalTransition,
    RowMeasure, SimulationConfig, DEFAULT_STATE_CAP,
};
use crate::growth::{
    corner_analysis, density_table, grow, limit_truncation, ones_init, spectral_check, GrowthState, LazyDescriptor,
    Which,
};
use crate::lattice::{encode, Lattice, LatticeKind, Site};
use crate::systems::{
    build_system, catalog_entry, cnt_check, solve, verify_entry, zigzag_check, Assignment, CatalogEntry, CatalogId,
    Constraint, FactorSolution, SolveConfig, SplitPattern, SystemKind, SystemSpec,
};
use crate::{Error, Result};

pub(crate) fn dispatch(cmd: &Command, global: &GlobalArgs) -> Result<Outcome> {
    let tol = global.tol;
    match cmd {
        Command::Enumerate { lattice, width, sources, sources2, max_area, weight } => {
            enumerate(lattice, width, sources, sources2, *max_area, *weight)
        }
        Command::Transfer { gas, lattice, layout, width } => {
            let layout = layout_for(lattice, *layout)?;
            if exact(gas.mode, &gas_literals(gas)) {
                transfer::<BigRational>(gas_params(gas)?, layout, *width, tol)
            } else {
                transfer::<f64>(gas_params(gas)?, layout, *width, tol)
            }
        }
        Command::Invariant { gas, lattice, layout, width, simulate, seed } => {
            let layout = layout_for(lattice, *layout)?;
            let sim = simulate.map(|rows| (rows, *seed));
            if exact(gas.mode, &gas_literals(gas)) {
                invariant::<BigRational>(gas, layout, *width, sim)
            } else {
                invariant::<f64>(gas, layout, *width, sim)
            }
        }
        Command::Identity { which, width, sources, sources2, max_area, p, q, p1, p2 } => {
            let kind = IdentityKind::parse(which)?;
            let gas = match kind {
                IdentityKind::FoX => GasKind::X,
                IdentityKind::FoY => GasKind::Y,
                IdentityKind::Bond => GasKind::Bond,
                IdentityKind::Bicolour => GasKind::Bicolour,
            };
            let params =
                GasParams::from_literals(gas, p.as_deref(), q.as_deref(), p1.as_deref(), p2.as_deref())?;
            let report = identity_check(kind, *width, &params, sources, sources2, *max_area)?;
            let mut csv = String::from("area,count\n");
            for (a, c) in report.area_counts.iter().enumerate() {
                let _ = writeln!(csv, "{a},{c}");
            }
            Ok(Outcome { pass: report.pass, json: serde_json::to_value(&report)?, csv: Some(csv) })
        }
        Command::Verify { system, solution, branch, width, gas } => {
            let exact = exact(gas.mode, &gas_literals(gas));
            if solution == "catalog" {
                let id = CatalogId::parse(system)?;
                if exact {
                    verify_catalog::<Gaussian>(id, gas, *branch, *width, tol)
                } else {
                    verify_catalog::<Complex64>(id, gas, *branch, *width, tol)
                }
            } else {
                let kind = SystemKind::parse(system)?;
                let file: Value = serde_json::from_str(&std::fs::read_to_string(solution)?)?;
                if exact {
                    verify_file::<Gaussian>(kind, &file, gas, tol)
                } else {
                    verify_file::<Complex64>(kind, &file, gas, tol)
                }
            }
        }
        Command::Solve { system, size, constraint, full_pattern, starts, seed, max_iter, gas } => {
            let mut spec = SystemSpec::new(SystemKind::parse(system)?, *size);
            for c in constraint {
                spec = spec.with(Constraint::parse(c)?);
            }
            if *full_pattern {
                spec = spec.with_pattern(SplitPattern::Full);
            }
            let params: GasParams<Complex64> = gas_params(gas)?;
            let local = LocalTransition::new(params.clone(), spec.kind.lattice());
            let sys = build_system(&spec, &local)?;
            let cfg = SolveConfig { starts: *starts, seed: *seed, max_iter: *max_iter, ..SolveConfig::default() };
            let report = solve(&sys, &cfg);
            let json = json!({
                "params": params.to_json(),
                "size": spec.size,
                "constraints": spec.constraints.iter().map(|c| c.name()).collect::<Vec<_>>(),
                "report": report,
            });
            Ok(Outcome { json, csv: None, pass: true })
        }
        Command::Grow { factor, kappa, width, entry, cap } => {
            let (id, exact) = factor_mode(factor)?;
            let req = GrowRequest { kappa: *kappa, width: *width, entry: entry.as_deref(), cap: *cap, tol };
            if exact {
                grow_cmd::<Gaussian>(id, factor, &req)
            } else {
                grow_cmd::<Complex64>(id, factor, &req)
            }
        }
        Command::Spectra { factor, kappa } => {
            let (id, exact) = factor_mode(factor)?;
            if exact {
                spectra::<Gaussian>(id, factor, *kappa, tol)
            } else {
                spectra::<Complex64>(id, factor, *kappa, tol)
            }
        }
        Command::Density { factor, kappa, width } => {
            let (id, exact) = factor_mode(factor)?;
            if exact {
                density::<Gaussian>(id, factor, *kappa, *width, tol)
            } else {
                density::<Complex64>(id, factor, *kappa, *width, tol)
            }
        }
        Command::Limit { factor, size } => {
            let (id, exact) = factor_mode(factor)?;
            if exact {
                limit::<Gaussian>(id, factor, *size, tol)
            } else {
                limit::<Complex64>(id, factor, *size, tol)
            }
        }
    }
}

/// Exact unless a literal is written as a decimal or in scientific notation.
fn exact(mode: ModeArg, literals: &[Option<&str>]) -> bool {
    match mode {
        ModeArg::Exact => true,
        ModeArg::Float => false,
        ModeArg::Auto => !literals.iter().flatten().any(|s| s.contains(['.', 'e', 'E'])),
    }
}

fn gas_literals(g: &GasArgs) -> [Option<&str>; 4] {
    [g.p.as_deref(), g.q.as_deref(), g.p1.as_deref(), g.p2.as_deref()]
}

fn gas_params<F: Field + JsonScalar>(g: &GasArgs) -> Result<GasParams<F>> {
    GasParams::from_literals(GasKind::parse(&g.gas)?, g.p.as_deref(), g.q.as_deref(), g.p1.as_deref(), g.p2.as_deref())
}

fn layout_for(lattice: &str, layout: LayoutArg) -> Result<Layout> {
    Ok(match (LatticeKind::parse(lattice)?, layout) {
        (LatticeKind::Square, LayoutArg::Row) => Layout::Row,
        (LatticeKind::Square, LayoutArg::Zigzag) => Layout::SquareZigzag,
        (LatticeKind::Triangular, _) => Layout::TriangularZigzag,
    })
}

fn passes<F: Field>(exact_zero: bool, residual: f64, tol: f64) -> bool {
    if F::EXACT {
        exact_zero
    } else {
        residual <= tol
    }
}

fn enumerate(
    lattice: &str,
    width: &str,
    sources: &[usize],
    sources2: &[usize],
    max_area: u32,
    weight: WeightArg,
) -> Result<Outcome> {
    let kind = LatticeKind::parse(lattice)?;
    let lat = if width == "plane" {
        Lattice::plane(kind)
    } else {
        let n = width.parse().map_err(|_| Error::Parse(format!("width must be a number or `plane`, got {width:?}")))?;
        Lattice::cylinder(kind, n)?
    };
    if weight != WeightArg::Bicolour && !sources2.is_empty() {
        return Err(Error::InvalidParams("--sources2 only applies to --weight bicolour".into()));
    }
    let row = |idx: &[usize]| -> Vec<Site> { idx.iter().map(|&i| Site::new(0, i as i64)).collect() };
    let gf = match weight {
        WeightArg::Perimeter => enumerate_da(&SourceSpec::row(lat, sources)?, max_area, GfWeight::Perimeter)?,
        WeightArg::Bonds => enumerate_da(&SourceSpec::row(lat, sources)?, max_area, GfWeight::Bonds)?,
        WeightArg::Bicolour => enumerate_bicoloured(lat, &row(sources), &row(sources2), max_area)?,
        WeightArg::Oversource => oversource_gf(&SourceSpec::row(lat, sources)?, max_area)?,
    };
    let [a, b] = gf.weight.variables();
    let mut csv = format!("{a},{b},count\n");
    for (&(i, j), c) in gf.terms() {
        let _ = writeln!(csv, "{i},{j},{c}");
    }
    let json = json!({
        "lattice": kind.name(),
        "width": lat.width,
        "sources": sources,
        "sources2": sources2,
        "area_counts": gf.area_counts().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "gf": gf.to_json(),
    });
    Ok(Outcome { json, csv: Some(csv), pass: true })
}

fn transfer<F: Field + JsonScalar>(params: GasParams<F>, layout: Layout, width: usize, tol: f64) -> Result<Outcome> {
    let local = LocalTransition::new(params, layout.lattice());
    let t = transfer_matrix(&local, layout, width, DEFAULT_STATE_CAP)?;
    let stochastic = t.check_stochastic(tol);
    let mut csv = String::new();
    for i in 0..t.rows() {
        let row: Vec<String> = (0..t.cols()).map(|j| t[(i, j)].render()).collect();
        let _ = writeln!(csv, "{}", row.join(","));
    }
    let json = json!({
        "gas": local.gas().name(),
        "params": local.params().to_json(),
        "mode": F::MODE.name(),
        "layout": layout.name(),
        "width": width,
        "size": t.rows(),
        "stochastic": stochastic.is_ok(),
        "matrix": t.to_json(),
    });
    Ok(Outcome { json, csv: Some(csv), pass: stochastic.is_ok() })
}

fn invariant<F: Field + JsonScalar>(
    gas: &GasArgs,
    layout: Layout,
    width: usize,
    sim: Option<(usize, u64)>,
) -> Result<Outcome> {
    let params: GasParams<F> = gas_params(gas)?;
    let local = LocalTransition::new(params, layout.lattice());
    let measure = invariant_measure(&local, layout, width, StationaryMethod::EXACT, DEFAULT_STATE_CAP)?;
    let marginals: Vec<F> = (0..local.states()).map(|v| measure.site_marginal(&[(0, v as u8)])).collect();
    let mut csv = String::from("code,weight\n");
    for (code, w) in measure.weights.iter().enumerate() {
        let _ = writeln!(csv, "{code},{}", w.render());
    }
    let mut json = json!({
        "gas": local.gas().name(),
        "params": local.params().to_json(),
        "mode": F::MODE.name(),
        "marginal_one": marginals[1].to_json(),
        "site_marginals": marginals.iter().map(F::to_json).collect::<Vec<_>>(),
        "measure": measure.to_json(),
    });
    let mut pass = true;
    if let Some((rows, seed)) = sim {
        let float_local = LocalTransition::new(gas_params::<f64>(gas)?, layout.lattice());
        let report = simulate(&float_local, &SimulationConfig::new(layout, width, rows, seed), None)?;
        let target = marginals[1].to_c64().re;
        let se = report.batch_se[1];
        let diff = (report.density[1] - target).abs();
        // five batch-means standard errors; a zero error only admits rounding
        pass = diff <= 5.0 * se.max(1e-12);
        json["simulation"] = json!({
            "report": report,
            "target": target,
            "deviation": diff,
            "z": if se > 0.0 { diff / se } else { 0.0 },
            "pass": pass,
        });
    }
    Ok(Outcome { json, csv: Some(csv), pass })
}

fn catalog_params<F: Field + JsonScalar>(id: CatalogId, p: Option<&str>, q: Option<&str>) -> Result<GasParams<F>> {
    GasParams::from_literals(id.gas(), p, q, None, None)
}

fn verify_catalog<F: Radicals + JsonScalar>(
    id: CatalogId,
    gas: &GasArgs,
    branch: u32,
    width: usize,
    tol: f64,
) -> Result<Outcome> {
    let params: GasParams<F> = catalog_params(id, gas.p.as_deref(), gas.q.as_deref())?;
    let entry = catalog_entry(id, &params, branch)?;
    let check = verify_entry(id, &entry, &params, tol)?;
    let local = LocalTransition::new(params.clone(), id.lattice());
    let mut pass = check.pass;
    let mut extra = Vec::new();
    match &entry {
        CatalogEntry::Factor(f) => {
            let (r, exact_zero) = f.table_residual(&local)?;
            let ok = passes::<F>(exact_zero, r, tol);
            pass &= ok;
            extra.push(json!({"table_residual": r, "exact_zero": exact_zero, "pass": ok}));
        }
        CatalogEntry::Split(s) => {
            for n in 1..=width {
                let r = split_measure_check(s, &local, n, DEFAULT_STATE_CAP, tol)?;
                let ok = passes::<F>(r.residual_exact_zero, r.residual_max, tol) && r.nonzero;
                pass &= ok;
                extra.push(json!({"measure": r, "pass": ok}));
            }
            let cnt = cnt_check(&s.q_star(), tol);
            extra.push(json!({"cnt": cnt}));
        }
        CatalogEntry::Zigzag(z) => {
            for n in 2..=width.max(2) {
                let r = zigzag_check(z, &local, n, DEFAULT_STATE_CAP, tol)?;
                // a zero measure satisfies stationarity trivially
                pass &= r.pass && r.nonzero;
                extra.push(serde_json::to_value(&r)?);
            }
        }
    }
    let json = json!({
        "entry": id.name(),
        "params": params.to_json(),
        "mode": F::MODE.name(),
        "branch": branch,
        "solution": entry.to_json(),
        "check": check,
        "measures": extra,
        "pass": pass,
    });
    Ok(Outcome { json, csv: None, pass })
}

/// A solution file holds `size`, optional `constraints` and `pattern`, and an
/// `assignment` object mapping variable names to values.
fn verify_file<F: Radicals + JsonScalar>(kind: SystemKind, file: &Value, gas: &GasArgs, tol: f64) -> Result<Outcome> {
    let size = file["size"].as_u64().ok_or_else(|| Error::Parse("solution file needs a numeric `size`".into()))?;
    let mut spec = SystemSpec::new(kind, size as usize);
    if let Some(cs) = file["constraints"].as_array() {
        for c in cs {
            spec = spec.with(Constraint::parse(c.as_str().unwrap_or_default())?);
        }
    }
    match file["pattern"].as_str() {
        Some("full") => spec = spec.with_pattern(SplitPattern::Full),
        Some("block") => spec = spec.with_pattern(SplitPattern::Block),
        Some(other) => return Err(Error::Unknown { what: "pattern", name: other.into() }),
        None => {}
    }
    let values = file["assignment"]
        .as_object()
        .ok_or_else(|| Error::Parse("solution file needs an `assignment` object".into()))?;
    let assignment: Assignment<F> =
        values.iter().map(|(k, v)| Ok((k.clone(), F::from_json(v)?))).collect::<Result<_>>()?;
    let params: GasParams<F> = gas_params(gas)?;
    let local = LocalTransition::new(params.clone(), kind.lattice());
    let sys = build_system(&spec, &local)?;
    let residual = sys.residual(&assignment)?;
    let pass = passes::<F>(residual.exact_zero, residual.max_abs, tol);
    let json = json!({
        "system": kind.name(),
        "params": params.to_json(),
        "mode": F::MODE.name(),
        "equations": sys.equations.len(),
        "residual": residual,
        "pass": pass,
    });
    Ok(Outcome { json, csv: None, pass })
}

fn factor_mode(f: &FactorArgs) -> Result<(CatalogId, bool)> {
    let id = CatalogId::parse(&f.factor)?;
    Ok((id, exact(f.mode, &[f.p.as_deref(), f.q.as_deref()])))
}

fn load_factor<F: Radicals + JsonScalar>(
    id: CatalogId,
    args: &FactorArgs,
) -> Result<(FactorSolution<F>, LocalTransition<F>)> {
    let params: GasParams<F> = catalog_params(id, args.p.as_deref(), args.q.as_deref())?;
    match catalog_entry(id, &params, args.branch)? {
        CatalogEntry::Factor(f) => Ok((f, LocalTransition::new(params, LatticeKind::Square))),
        _ => Err(Error::InvalidParams(format!("{} is not a factor solution", id.name()))),
    }
}

fn grown<F: Radicals + JsonScalar>(id: CatalogId, args: &FactorArgs, kappa: usize, cap: usize, tol: f64) -> Result<GrowthState<F>> {
    let (f, local) = load_factor::<F>(id, args)?;
    grow(&f, &local, &ones_init(f.states), kappa, cap, tol)
}

fn header<F: Field + JsonScalar>(id: CatalogId, local: &LocalTransition<F>) -> Value {
    json!({"factor": id.name(), "params": local.params().to_json(), "mode": F::MODE.name()})
}

struct GrowRequest<'a> {
    kappa: usize,
    width: usize,
    entry: Option<&'a str>,
    cap: usize,
    tol: f64,
}

fn parse_entry(s: &str) -> Result<(Which, usize, usize, usize)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::Parse(format!("entry must be WHICH,x,i,j, got {s:?}"));
    let [w, x, i, j] = parts.as_slice() else { return Err(bad()) };
    let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
    Ok((Which::parse(w)?, num(x)?, num(i)?, num(j)?))
}

fn grow_cmd<F: Radicals + JsonScalar>(id: CatalogId, args: &FactorArgs, req: &GrowRequest) -> Result<Outcome> {
    let (f, local) = load_factor::<F>(id, args)?;
    let init = ones_init(f.states);
    let mut json = header(id, &local);
    json["kappa"] = json!(req.kappa);
    let mut pass = true;

    let lazy_value = match req.entry {
        Some(spec) => {
            let (which, x, i, j) = parse_entry(spec)?;
            let lazy = LazyDescriptor::new(&f, &local, &init, req.kappa)?;
            Some((which, x, i, j, lazy.entry(which, x, i, j)?, lazy.shape(which)))
        }
        None => None,
    };
    // a lone entry request may go past the eager cap
    let eager = match grow(&f, &local, &init, req.kappa, req.cap, req.tol) {
        Ok(g) => Some(g),
        Err(Error::SizeCap { .. }) if lazy_value.is_some() => None,
        Err(e) => return Err(e),
    };

    let mut csv = String::from("kappa,v_rows,v_cols,q_size,cross_residual\n");
    if let Some(g) = &eager {
        let sizes = g.sizes();
        for s in &sizes {
            let _ = writeln!(csv, "{},{},{},{},{:e}", s.kappa, s.v.0, s.v.1, s.q, s.cross_residual);
        }
        json["sizes"] = serde_json::to_value(&sizes)?;
        let mut checks = Vec::new();
        for n in 1..=req.width {
            let t = transfer_matrix(&local, Layout::Row, n, DEFAULT_STATE_CAP)?;
            let start = RowMeasure::point_mass(Layout::Row, n, f.states, encode(&vec![1; n], f.states));
            let (mut worst, mut exact_zero) = (0.0f64, true);
            let mut expect = start;
            for k in 0..=req.kappa {
                let mu = g.measure(k, n)?;
                worst = worst.max(mu.max_abs_diff(&expect));
                exact_zero &= mu.weights == expect.weights;
                expect = expect.step(&t);
            }
            let ok = passes::<F>(exact_zero, worst, req.tol);
            pass &= ok;
            checks.push(json!({"width": n, "residual_max": worst, "exact_zero": exact_zero, "pass": ok}));
        }
        json["measure_checks"] = json!(checks);
    }
    if let Some((which, x, i, j, value, shape)) = lazy_value {
        let mut e = json!({"which": which.name(), "x": x, "i": i, "j": j, "shape": shape, "value": value.to_json()});
        if let Some(g) = &eager {
            let st = g.step(req.kappa);
            let fam = match which {
                Which::V => &st.v,
                Which::H => &st.h,
                Which::Q => &st.q,
            };
            let gap = (value.clone() - fam[x][(i, j)].clone()).magnitude();
            let ok = passes::<F>(gap == 0.0, gap, req.tol);
            pass &= ok;
            e["eager_gap"] = json!(gap);
            e["pass"] = json!(ok);
        }
        json["entry"] = e;
    }
    json["pass"] = json!(pass);
    Ok(Outcome { json, csv: Some(csv), pass })
}

fn spectra<F: Radicals + JsonScalar>(id: CatalogId, args: &FactorArgs, kappa: usize, tol: f64) -> Result<Outcome> {
    let g = grown::<F>(id, args, kappa, crate::growth::DEFAULT_GROWTH_CAP, tol)?;
    let report = spectral_check(&g, tol)?;
    let cnt = cnt_check(&g.step(kappa).q_star(), tol.max(1e-12));
    let pass = report.pass && cnt.singular;
    let mut csv = String::from("kappa,size,trace_error,stabilization_index,stabilized_rank,density_gap,pass\n");
    for s in &report.steps {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let gap = s.density_gap.map(|x| format!("{x:e}")).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{},{},{:e},{},{},{},{}",
            s.kappa,
            s.size,
            s.trace_error,
            opt(s.stabilization_index),
            opt(s.stabilized_rank),
            gap,
            s.pass
        );
    }
    let mut json = header(id, &g.local);
    json["kappa"] = json!(kappa);
    json["report"] = serde_json::to_value(&report)?;
    json["cnt"] = serde_json::to_value(&cnt)?;
    json["pass"] = json!(pass);
    Ok(Outcome { json, csv: Some(csv), pass })
}

fn density<F: Radicals + JsonScalar>(
    id: CatalogId,
    args: &FactorArgs,
    kappa: usize,
    width: usize,
    tol: f64,
) -> Result<Outcome> {
    let g = grown::<F>(id, args, kappa, crate::growth::DEFAULT_GROWTH_CAP, tol)?;
    let table = density_table(&g, width)?;
    let mut json = header(id, &g.local);
    json["kappa"] = json!(kappa);
    json["table"] = serde_json::to_value(&table)?;
    Ok(Outcome { json, csv: Some(table.to_csv()), pass: table.monotone })
}

fn limit<F: Radicals + JsonScalar>(id: CatalogId, args: &FactorArgs, size: usize, tol: f64) -> Result<Outcome> {
    let (f, local) = load_factor::<F>(id, args)?;
    let corner = corner_analysis(&f, &local, tol)?;
    let (report, pass) = match limit_truncation(&f, &local, size, tol) {
        Ok(r) => {
            let pass = r.pass;
            (Some(r), pass)
        }
        Err(Error::NonStabilizing(_)) => (None, false),
        Err(e) => return Err(e),
    };
    let mut csv = String::from("kappa,block,max_change,exact_zero\n");
    if let Some(r) = &report {
        for s in &r.stabilization {
            let _ = writeln!(csv, "{},{},{:e},{}", s.kappa, s.block, s.max_change, s.exact_zero);
        }
    }
    let mut json = header(id, &local);
    json["corner"] = serde_json::to_value(&corner)?;
    json["limit"] = serde_json::to_value(&report)?;
    json["pass"] = json!(pass);
    Ok(Outcome { json, csv: Some(csv), pass })
}
