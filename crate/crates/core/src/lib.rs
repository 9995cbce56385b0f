//! Symmetry-resolved exact diagonalization of spin-1/2 models whose
//! unperturbed spectrum is the (highly degenerate) total magnetization.

pub mod basis;
pub mod cache;
pub mod chaos;
pub mod eigen;
pub mod entanglement;
pub mod error;
pub mod lattice;
pub mod materialize;
pub mod models;
pub mod observables;
pub mod pauli;
pub mod symmetry;
pub mod sweep;

pub use error::{Error, Result};
