//! Brute-force directed animal enumeration and the gas/animal identities it certifies.

pub mod enumerate;
pub mod gf;
pub mod identity;
pub mod oversource;

pub use enumerate::{enumerate_bicoloured, enumerate_da, oversource_by_subsets, SourceSpec};
pub use gf::{GfPoly, GfWeight};
pub use identity::{identity_check, tail_estimate, IdentityKind, IdentityReport, TailEstimate};
pub use oversource::{oversource_gf, oversource_recursive};
