pub mod algebra;
pub mod animals;
pub mod cli;
pub mod error;
pub mod gas;
pub mod growth;
pub mod lattice;
pub mod systems;

pub use error::{Error, Result};
