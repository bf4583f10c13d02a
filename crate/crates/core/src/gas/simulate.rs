use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::local::LocalTransition;
use super::transfer::{site_distributions, Layout, RowMeasure};
use crate::lattice::{decode, encode};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub layout: Layout,
    pub width: usize,
    /// Rows generated after the initial one.
    pub rows: usize,
    /// Leading rows excluded from the statistics.
    pub burn_in: usize,
    pub seed: u64,
    pub record_trajectory: bool,
    /// Number of batches for the batch-means error estimate.
    pub batches: usize,
}

impl SimulationConfig {
    pub fn new(layout: Layout, width: usize, rows: usize, seed: u64) -> Self {
        SimulationConfig { layout, width, rows, burn_in: 1000.min(rows / 10), seed, record_trajectory: false, batches: 50 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub width: usize,
    pub rows: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub samples: u64,
    /// Fraction of sampled sites holding each value.
    pub density: Vec<f64>,
    /// Binomial standard error `sqrt(d (1 - d) / samples)`.
    pub binomial_se: Vec<f64>,
    /// Batch-means standard error, which accounts for correlation along and across rows.
    pub batch_se: Vec<f64>,
    /// Row codes in order, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<usize>>,
}

fn sample(rng: &mut ChaCha8Rng, probs: &[f64]) -> u8 {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (v, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return v as u8;
        }
    }
    (probs.len() - 1) as u8
}

/// Runs the row process from a sampled initial row and tallies site values
/// of the newest row.
pub fn simulate(
    local: &LocalTransition<f64>,
    config: &SimulationConfig,
    initial: Option<&RowMeasure<f64>>,
) -> Result<SimulationReport> {
    let SimulationConfig { layout, width, rows, burn_in, seed, .. } = *config;
    if width == 0 || config.batches == 0 {
        return Err(Error::InvalidParams("width and batch count must be positive".into()));
    }
    if local.lattice() != layout.lattice() {
        return Err(Error::InvalidParams("transition and layout lattices differ".into()));
    }
    let s = local.states();
    let digits_len = layout.digits(width);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut digits: Vec<u8> = match initial {
        Some(m) => {
            if m.width != width || m.layout != layout {
                return Err(Error::Dimension("initial measure shape differs from the simulation".into()));
            }
            let total: f64 = m.weights.iter().sum();
            let probs: Vec<f64> = m.weights.iter().map(|w| w / total).collect();
            let code = {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                probs.iter().position(|p| {
                    acc += p;
                    u < acc
                })
                .unwrap_or(probs.len() - 1)
            };
            decode(code, digits_len, s)
        }
        None => (0..digits_len).map(|_| rng.gen_range(0..s as u8)).collect(),
    };

    let counted = rows.saturating_sub(burn_in);
    let batch_len = (counted / config.batches).max(1);
    let mut counts = vec![0u64; s];
    let mut batch_counts: Vec<Vec<u64>> = Vec::new();
    let mut current_batch = vec![0u64; s];
    let mut rows_in_batch = 0;
    let mut trajectory = config.record_trajectory.then(|| vec![encode(&digits, s)]);

    for row in 0..rows {
        let dists = site_distributions(local, layout, width, &digits);
        let fresh: Vec<u8> = dists.iter().map(|d| sample(&mut rng, d)).collect();
        if layout != Layout::Row {
            for i in 0..width {
                digits[2 * i] = digits[2 * i + 1];
            }
        }
        for (i, v) in fresh.iter().enumerate() {
            digits[layout.child_slot(i)] = *v;
        }
        if let Some(t) = trajectory.as_mut() {
            t.push(encode(&digits, s));
        }
        if row < burn_in {
            continue;
        }
        for &v in &fresh {
            counts[v as usize] += 1;
            current_batch[v as usize] += 1;
        }
        rows_in_batch += 1;
        if rows_in_batch == batch_len {
            batch_counts.push(std::mem::replace(&mut current_batch, vec![0; s]));
            rows_in_batch = 0;
        }
    }

    let samples = counts.iter().sum::<u64>();
    let n = samples.max(1) as f64;
    let density: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let binomial_se = density.iter().map(|d| (d * (1.0 - d) / n).sqrt()).collect();
    let batch_se = (0..s)
        .map(|v| {
            let k = batch_counts.len();
            if k < 2 {
                return f64::NAN;
            }
            let per = (batch_len * width) as f64;
            let means: Vec<f64> = batch_counts.iter().map(|b| b[v] as f64 / per).collect();
            let mean = means.iter().sum::<f64>() / k as f64;
            let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
            (var / k as f64).sqrt()
        })
        .collect();

    Ok(SimulationReport { width, rows, burn_in, seed, samples, density, binomial_se, batch_se, trajectory })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::GasParams;
    use crate::lattice::LatticeKind;

    #[test]
    fn same_seed_same_trajectory() {
        let local = LocalTransition::new(GasParams::X { p: 0.3 }, LatticeKind::Square);
        let mut cfg = SimulationConfig::new(Layout::Row, 4, 500, 7);
        cfg.record_trajectory = true;
        let a = simulate(&local, &cfg, None).unwrap();
        let b = simulate(&local, &cfg, None).unwrap();
        assert_eq!(a.trajectory, b.trajectory);
        cfg.seed = 8;
        let c = simulate(&local, &cfg, None).unwrap();
        assert_ne!(a.trajectory, c.trajectory);
    }

    #[test]
    fn hard_core_rule_is_respected() {
        let local = LocalTransition::new(GasParams::X { p: 0.5 }, LatticeKind::Square);
        let mut cfg = SimulationConfig::new(Layout::Row, 3, 200, 1);
        cfg.record_trajectory = true;
        let t = simulate(&local, &cfg, None).unwrap().trajectory.unwrap();
        for w in t.windows(2) {
            let (b, a) = (decode(w[0], 3, 2), decode(w[1], 3, 2));
            for i in 0..3 {
                if a[i] == 1 {
                    assert_eq!((b[i], b[(i + 1) % 3]), (0, 0));
                }
            }
        }
    }
}
