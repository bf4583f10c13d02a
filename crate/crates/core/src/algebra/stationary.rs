use super::json::JsonScalar;
use super::matrix::Matrix;
use super::scalar::Field;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StationaryMethod {
    /// Kernel of `T^t - I` by elimination. Floats treat pivots below `rank_tol` as zero.
    Exact { rank_tol: f64 },
    /// Iterate `v <- v T` from the uniform vector.
    Power { tol: f64, max_iter: usize },
}

impl StationaryMethod {
    pub const EXACT: StationaryMethod = StationaryMethod::Exact { rank_tol: 1e-10 };
    pub const POWER: StationaryMethod = StationaryMethod::Power { tol: 1e-12, max_iter: 200_000 };
}

impl<F: Field + JsonScalar> Matrix<F> {
    /// Checks that rows sum to one. Exact scalars must match exactly.
    pub fn check_stochastic(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("{}x{} transition matrix", self.rows(), self.cols())));
        }
        for i in 0..self.rows() {
            let sum = self.row(i).iter().fold(F::zero(), |a, b| a + b.clone());
            if !sum.near(&F::one(), tol) {
                return Err(Error::NotStochastic { row: i, sum: sum.render() });
            }
        }
        Ok(())
    }

    /// Stationary row vector `v T = v` normalized to total mass one.
    pub fn stationary_vector(&self, method: StationaryMethod) -> Result<Vec<F>> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("{}x{} transition matrix", self.rows(), self.cols())));
        }
        let n = self.rows();
        match method {
            StationaryMethod::Exact { rank_tol } => {
                let a = Matrix::from_fn(n, n, |i, j| {
                    let t = self[(j, i)].clone();
                    if i == j {
                        t - F::one()
                    } else {
                        t
                    }
                });
                let kernel = a.kernel(rank_tol);
                if kernel.len() != 1 {
                    return Err(Error::KernelDimension(kernel.len()));
                }
                normalize(kernel.into_iter().next().unwrap())
            }
            StationaryMethod::Power { tol, max_iter } => {
                let w = F::from_ratio(1, n as i64);
                let mut v = vec![w; n];
                for _ in 0..max_iter {
                    let next = self.left_apply(&v);
                    let diff = next
                        .iter()
                        .zip(&v)
                        .map(|(a, b)| (a.clone() - b.clone()).magnitude())
                        .fold(0.0, f64::max);
                    v = next;
                    if diff < tol {
                        return normalize(v);
                    }
                }
                Err(Error::NoConvergence(max_iter))
            }
        }
    }
}

fn normalize<F: Field>(v: Vec<F>) -> Result<Vec<F>> {
    let total = v.iter().fold(F::zero(), |a, b| a + b.clone());
    let inv = total.try_inv().ok_or(Error::ZeroMass)?;
    Ok(v.into_iter().map(|x| x * inv.clone()).collect())
}
