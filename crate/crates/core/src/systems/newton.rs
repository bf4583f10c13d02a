//! Damped Gauss-Newton (Levenberg-Marquardt) search over complex points.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::build::PolySystem;
use crate::algebra::{JsonScalar, Matrix, Poly};

#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Converged when every equation is below this in magnitude.
    pub tol: f64,
    /// Normalized points closer than this count as one solution.
    pub dedup: f64,
    /// Start entries are uniform in `[-scale, scale]` for both parts.
    pub scale: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { starts: 64, seed: 0, max_iter: 400, tol: 1e-11, dedup: 1e-6, scale: 1.5 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub system: &'static str,
    pub variables: usize,
    pub equations: usize,
    pub starts: usize,
    pub seed: u64,
    pub converged: usize,
    pub best_residual: f64,
    pub solutions: Vec<Value>,
    pub evidence: String,
}

struct Outcome {
    point: Vec<Complex64>,
    residual: f64,
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn sum_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn descend(sys: &PolySystem<Complex64>, jac: &[Vec<Poly<Complex64>>], mut x: Vec<Complex64>, cfg: &SolveConfig) -> Outcome {
    let n = x.len();
    let mut r = sys.eval(&x);
    let mut cost = sum_sq(&r);
    let mut lambda = 1e-3;
    for _ in 0..cfg.max_iter {
        if max_norm(&r) < cfg.tol {
            break;
        }
        let j = Matrix::from_fn(r.len(), n, |i, k| jac[i][k].eval(&x));
        let jh = Matrix::from_fn(n, r.len(), |k, i| j[(i, k)].conj());
        let normal = &jh * &j;
        let grad = jh.right_apply(&r);
        let mut accepted = false;
        for _ in 0..12 {
            let damped = Matrix::from_fn(n, n, |a, b| {
                let d = if a == b { Complex64::new(lambda * (1.0 + normal[(a, a)].re), 0.0) } else { Complex64::new(0.0, 0.0) };
                normal[(a, b)] + d
            });
            let rhs = Matrix::column_vector(grad.iter().map(|g| -g).collect());
            let Some(step) = damped.solve(&rhs, 1e-300) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<Complex64> = x.iter().enumerate().map(|(k, v)| v + step[(k, 0)]).collect();
            let tr = sys.eval(&trial);
            let tc = sum_sq(&tr);
            if tc.is_finite() && tc < cost {
                x = trial;
                r = tr;
                cost = tc;
                lambda = (lambda / 3.0).max(1e-12);
                accepted = true;
                break;
            }
            lambda *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    Outcome { residual: max_norm(&r), point: x }
}

/// Fixes the scaling freedom and flushes tiny parts to zero.
fn normalize(sys: &PolySystem<Complex64>, mut x: Vec<Complex64>) -> Vec<Complex64> {
    if let Some((up, down)) = &sys.scaling {
        if let Some(c) = up.iter().map(|&i| x[i]).find(|z| z.norm() > 1e-8) {
            for &i in up {
                x[i] /= c;
            }
            for &i in down {
                x[i] *= c;
            }
        }
    }
    for z in &mut x {
        if z.re.abs() < 1e-10 {
            z.re = 0.0;
        }
        if z.im.abs() < 1e-10 {
            z.im = 0.0;
        }
    }
    x
}

/// Multi-start search. Start `i` draws from stream `i` of the seeded generator,
/// so the report does not depend on the thread count.
pub fn solve(sys: &PolySystem<Complex64>, cfg: &SolveConfig) -> SolveReport {
    let n = sys.names.len();
    let jac: Vec<Vec<Poly<Complex64>>> =
        sys.equations.iter().map(|e| (0..n).map(|k| e.poly.derivative(k as u32)).collect()).collect();
    let outcomes: Vec<Outcome> = (0..cfg.starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let x0 = (0..n)
                .map(|_| Complex64::new(rng.gen_range(-cfg.scale..=cfg.scale), rng.gen_range(-cfg.scale..=cfg.scale)))
                .collect();
            descend(sys, &jac, x0, cfg)
        })
        .collect();
    let best_residual = outcomes.iter().map(|o| o.residual).fold(f64::INFINITY, f64::min);
    let mut found: Vec<Vec<Complex64>> = Vec::new();
    let mut converged = 0;
    for o in outcomes.into_iter().filter(|o| o.residual < cfg.tol) {
        converged += 1;
        let p = normalize(sys, o.point);
        if !found.iter().any(|f| f.iter().zip(&p).all(|(a, b)| (a - b).norm() < cfg.dedup)) {
            found.push(p);
        }
    }
    let evidence = if found.is_empty() {
        format!(
            "no start converged below {:e}; best residual {:e}. This is numerical evidence only, not a proof of inconsistency",
            cfg.tol, best_residual
        )
    } else {
        format!("{} distinct solutions from {} converged starts", found.len(), converged)
    };
    let solutions = found
        .iter()
        .map(|p| {
            let m: serde_json::Map<String, Value> =
                sys.names.iter().zip(p).map(|(k, v)| (k.clone(), v.to_json())).collect();
            json!(m)
        })
        .collect();
    SolveReport {
        system: sys.kind.name(),
        variables: n,
        equations: sys.equations.len(),
        starts: cfg.starts,
        seed: cfg.seed,
        converged,
        best_residual,
        solutions,
        evidence,
    }
}
