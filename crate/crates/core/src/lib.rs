//! Virtual two-qubit gates for Trotterized Ising dynamics.
//!
//! The crate cuts a non-local `RZZ` gate into a signed mixture of local
//! single-qubit operations and Z measurements, simulates the resulting
//! fragment circuits exactly or by shot sampling under a depolarizing noise
//! model, and compares the reconstructed magnetization against SWAP-routed
//! execution on a line of qubits.
//!
//! * [`circuit`]: gate IR, text format, path routing and `RZZ` lowerings.
//! * [`sim`]: statevector and density-matrix simulation, Pauli expectations,
//!   seeded sampling.
//! * [`noise`]: depolarizing noise model.
//! * [`qpd`]: the virtual `RZZ` decomposition and fragment synthesis.
//! * [`tfim`]: transverse-field Ising circuits and magnetization.
//! * [`harness`]: experiment configuration, execution and result files.

pub mod circuit;
pub mod error;
pub mod harness;
pub mod noise;
pub mod qpd;
pub mod sim;
pub mod tfim;

pub use error::{Error, Result};
