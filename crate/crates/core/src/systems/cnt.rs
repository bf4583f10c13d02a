use serde::Serialize;

use crate::algebra::{Field, JsonScalar, Matrix};

/// Whether `Q* - I` is singular, so the trace measure can be normalized to a
/// stationary probability for every width.
#[derive(Debug, Clone, Serialize)]
pub struct CntReport {
    pub size: usize,
    /// `det(Q* - I)`, rendered in the scalar mode.
    pub det: String,
    pub kernel_dim: usize,
    pub singular: bool,
    pub note: &'static str,
}

const SCALING_NOTE: &str = "rescaling V by c and H by 1/c leaves Q* unchanged, so the test is invariant under the scaling freedom";

pub fn cnt_check<F: Field + JsonScalar>(q_star: &Matrix<F>, tol: f64) -> CntReport {
    let n = q_star.rows();
    let shifted = q_star - &Matrix::identity(n);
    let det = shifted.det();
    let kernel_dim = n - shifted.rank(tol);
    let singular = if F::EXACT { det.is_zero() } else { kernel_dim > 0 };
    CntReport { size: n, det: det.render(), kernel_dim, singular, note: SCALING_NOTE }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn stochastic_matrix_is_singular() {
        let m: Matrix<BigRational> = Matrix::from_rows(vec![
            vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())],
            vec![BigRational::new(1.into(), 3.into()), BigRational::new(2.into(), 3.into())],
        ])
        .unwrap();
        let r = cnt_check(&m, 0.0);
        assert!(r.singular);
        assert_eq!(r.kernel_dim, 1);
        let z: Matrix<f64> = Matrix::zeros(2, 2);
        assert!(!cnt_check(&z, 1e-12).singular);
    }
}
