use num_complex::Complex64 as C;

use super::gates::{matrix, GateMatrix};
use super::kernels::{apply_1q, apply_2q};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// Largest register `run_statevector` accepts.
pub const STATEVECTOR_QUBIT_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C>,
}

impl StateVector {
    /// |0...0>.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amps = vec![C::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = C::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    /// Computational basis state with index `k`.
    pub fn basis(n_qubits: usize, k: usize) -> Self {
        let mut amps = vec![C::new(0.0, 0.0); 1 << n_qubits];
        amps[k] = C::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<C>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude count {} is not a power of two",
                amps.len()
            )));
        }
        let n_qubits = amps.len().trailing_zeros() as usize;
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match matrix(gate) {
            Some(GateMatrix::One(q, m)) => apply_1q(&mut self.amps, q, &m),
            Some(GateMatrix::Two(a, b, m)) => apply_2q(&mut self.amps, a, b, &m),
            None => {
                return Err(Error::UnsupportedInStatevector(format!(
                    "{} is not a unitary gate",
                    gate.name()
                )))
            }
        }
        Ok(())
    }

    pub fn inner(&self, other: &StateVector) -> C {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Exact pure-state evolution of a unitary-only circuit from |0...0>.
pub fn run_statevector(circuit: &Circuit) -> Result<StateVector> {
    let mut psi = StateVector::zero(check_width(circuit)?);
    run_statevector_from(circuit, &mut psi)?;
    Ok(psi)
}

pub fn run_statevector_from(circuit: &Circuit, psi: &mut StateVector) -> Result<()> {
    if psi.n_qubits != circuit.n_qubits() {
        return Err(Error::invalid(format!(
            "state has {} qubits, circuit has {}",
            psi.n_qubits,
            circuit.n_qubits()
        )));
    }
    for g in circuit.gates() {
        psi.apply(g)?;
    }
    Ok(())
}

fn check_width(circuit: &Circuit) -> Result<usize> {
    let n = circuit.n_qubits();
    if n > STATEVECTOR_QUBIT_CAP {
        return Err(Error::ResourceLimit(format!(
            "{n} qubits exceeds the statevector cap of {STATEVECTOR_QUBIT_CAP}"
        )));
    }
    Ok(n)
}

/// Dense unitary of a unitary-only circuit, row-major, `2^n × 2^n`.
pub fn circuit_unitary(circuit: &Circuit) -> Result<Vec<C>> {
    let n = circuit.n_qubits();
    if n > 10 {
        return Err(Error::ResourceLimit(format!(
            "dense unitary of {n} qubits is too large"
        )));
    }
    let dim = 1 << n;
    let mut u = vec![C::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let mut psi = StateVector::basis(n, col);
        run_statevector_from(circuit, &mut psi)?;
        for (row, a) in psi.amps.iter().enumerate() {
            u[row * dim + col] = *a;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: &[C], b: &[f64]) -> bool {
        a.iter()
            .zip(b)
            .all(|(x, y)| (x - C::new(*y, 0.0)).norm() < 1e-12)
    }

    #[test]
    fn empty_circuit_is_ground_state() {
        let psi = run_statevector(&Circuit::new(1, 0)).unwrap();
        assert!(close(psi.amplitudes(), &[1.0, 0.0]));
    }

    #[test]
    fn hadamard_and_bell() {
        let psi = run_statevector(&Circuit::from_gates(1, [Gate::H(0)]).unwrap()).unwrap();
        assert!(close(psi.amplitudes(), &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]));
        let bell = Circuit::from_gates(2, [Gate::H(0), Gate::Cnot(0, 1)]).unwrap();
        let psi = run_statevector(&bell).unwrap();
        assert!(close(
            psi.amplitudes(),
            &[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]
        ));
    }

    #[test]
    fn rejects_non_unitary() {
        let mut c = Circuit::new(1, 1);
        c.push(Gate::Measure { qubit: 0, clbit: 0 }).unwrap();
        assert!(matches!(
            run_statevector(&c),
            Err(Error::UnsupportedInStatevector(_))
        ));
        let r = Circuit::from_gates(1, [Gate::Reset(0)]).unwrap();
        assert!(run_statevector(&r).is_err());
    }

    #[test]
    fn sx_squared_is_x() {
        let c = Circuit::from_gates(1, [Gate::Sx(0), Gate::Sx(0)]).unwrap();
        let psi = run_statevector(&c).unwrap();
        assert!(close(psi.amplitudes(), &[0.0, 1.0]));
    }
}
