//! Block coherence measures, free-state optimization and radical-pair dynamics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod block;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod free_search;
pub mod matrix;
pub mod measures;
pub mod nelder_mead;
pub mod output;
pub mod reference;
pub mod st;
pub mod state;

pub use block::ProjectorSet;
pub use error::{Error, Result};
pub use exec::Execution;
pub use matrix::{ComplexMatrix, LogBase, C64};
pub use state::{PureState, QuantumState, StateKind};
