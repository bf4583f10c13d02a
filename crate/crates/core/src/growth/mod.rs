//! Kronecker growth of split solutions from a factor solution: eager and
//! entrywise construction, corner behaviour, spectra and truncated limits.

pub mod composite;
pub mod corner;
pub mod eager;
pub mod lazy;
pub mod spectral;

pub use composite::{composite_factors, Composite, Which};
pub use corner::{classify, corner_analysis, limit_truncation, CornerClass, CornerReport, LimitReport};
pub use eager::{grow, ones_init, GrowthState, GrowthStep, DEFAULT_GROWTH_CAP};
pub use lazy::LazyDescriptor;
pub use spectral::{
    density_from_eigenvectors, density_table, rank_one_factors, spectral_check, trace_ratio_density, DensityTable,
    EigenPair, SpectralReport,
};
