//! Polynomial rewriting systems, their closed-form solutions and a numeric solver.

pub mod build;
pub mod catalog;
pub mod cnt;
pub mod factor;
pub mod newton;
pub mod zigzag;

pub use build::{build_system, Assignment, Constraint, PolySystem, ResidualReport, SplitPattern, SystemKind, SystemSpec};
pub use catalog::{catalog_entry, verify_entry, CatalogCheck, CatalogEntry, CatalogId};
pub use cnt::{cnt_check, CntReport};
pub use factor::FactorSolution;
pub use newton::{solve, SolveConfig, SolveReport};
pub use zigzag::{zigzag_check, ZigzagReport, ZigzagSolution};
