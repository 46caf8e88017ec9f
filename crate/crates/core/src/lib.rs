//! Sparseness, isoperimetric and spectral form-bound constants of finite
//! graphs and Dirichlet truncations of infinite ones.

pub mod constants;
pub mod error;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod operators;
pub mod sparseness;
pub mod spectra;

pub use error::{Error, Result};
pub use graph::{subset_stats, Graph, PhaseField, Potential, SubsetStats};
