//! Qubit encodings of truncated bosonic Hamiltonians.
//!
//! Bosons are truncated to `Λ = 2^Q` levels and encoded on `Q` qubits each.
//! The potential is expanded into Z strings on a coordinate grid, the kinetic
//! term into Z strings on the momentum grid, and the two are connected by a
//! centred quantum Fourier transform. The crate builds the corresponding
//! Trotter circuits and LCU block encodings, counts Pauli strings for the
//! Fock-basis and finite-difference alternatives, and ships a small
//! statevector simulator to check all of it.

pub mod block_encoding;
pub mod circuit;
pub mod error;
pub mod hamiltonian;
pub mod operators;
pub mod pauli;
pub mod simulator;
pub mod sparse;

pub use error::{Error, Result};
pub use operators::{Boundary, FockParams, GridPoint, TruncationConfig};
pub use pauli::{PauliSum, PauliTerm};
pub use sparse::SparseOperator;
