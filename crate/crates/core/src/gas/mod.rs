//! Gas processes on cylinders: local transitions, transfer matrices,
//! stationary and trace measures, and Monte Carlo sampling.

pub mod local;
pub mod simulate;
pub mod trace;
pub mod transfer;

pub use local::{GasKind, GasParams, LocalTransition};
pub use simulate::{simulate, SimulationConfig, SimulationReport};
pub use trace::{
    mixture, rotation_class_matrices, rotation_invariant_representation, split_measure_check, trace_measure,
    zigzag_trace_measure, SplitMeasureReport, SplitSolution,
};
pub use transfer::{invariant_measure, transfer_matrix, Layout, RowMeasure, DEFAULT_STATE_CAP};
