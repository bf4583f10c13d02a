//! Scalars, dense matrices, truncated series and polynomials.

pub mod json;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod stationary;

pub use json::JsonScalar;
pub use matrix::Matrix;
pub use poly::Poly;
pub use scalar::{Field, Gaussian, Radicals, Ring, ScalarMode};
pub use series::Series;
pub use stationary::StationaryMethod;
