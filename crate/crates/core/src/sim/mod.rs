//! Exact statevector and density-matrix simulation, measurement instruments
//! and seeded shot sampling.

mod density;
mod gates;
mod kernels;
mod pauli;
mod shots;
mod statevector;

pub use density::{
    apply_fragment_operator, run_density, run_density_branches, Branches, DensityMatrix,
    FragmentOp, Sign, DENSITY_QUBIT_CAP,
};
pub use gates::{cnot, hadamard, pauli_x, pauli_z, rx, rz, rzx, rzz, sqrt_x, swap};
pub use pauli::{expectation, Expectation, Pauli, PauliObservable, PauliString};
pub use shots::{sample_shots, write_shots_csv, Basis, ShotOutcome, ShotSampler};
pub use statevector::{
    circuit_unitary, run_statevector, run_statevector_from, StateVector, STATEVECTOR_QUBIT_CAP,
};
