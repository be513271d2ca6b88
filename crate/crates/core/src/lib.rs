//! Local purity distillation for classical-quantum ensembles.
//!
//! Density matrices and entropies, classical-quantum ensembles and their purification, the
//! single-letter tradeoff curves between communication rate and distilled purity, closed-form
//! reference families, and typical-set asymptotics.

pub mod asymptotics;
pub mod cli;
pub mod closed_forms;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod linalg;
pub mod sampling;
pub mod state;
pub mod tradeoff;

pub use error::{Error, Result};
