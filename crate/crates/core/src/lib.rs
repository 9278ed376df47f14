//! Variational and Trotterized time evolution of the spin-boson model on
//! simulated qubit registers.

pub mod circuit;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod kernels;
pub mod model;
pub mod noise;
pub mod pauli;
pub mod state;
pub mod variational;

pub use error::{Error, Result};
pub use pauli::{Pauli, PauliSum, PauliTerm};
pub use state::{expectation, fidelity, infidelity, DensityMatrix, StateVector};
