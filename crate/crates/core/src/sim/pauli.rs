use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C;

use super::density::DensityMatrix;
use super::statevector::StateVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// One Pauli factor per qubit; index `q` acts on qubit `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(factors: Vec<Pauli>) -> Self {
        PauliString(factors)
    }

    pub fn identity(n: usize) -> Self {
        PauliString(vec![Pauli::I; n])
    }

    /// `p` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.0[q] = p;
        s
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.0
    }

    fn x_mask(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| matches!(p, Pauli::X | Pauli::Y))
            .map(|(q, _)| 1usize << q)
            .sum()
    }

    /// `P|j> = phase(j) |j ^ x_mask>`.
    fn phase(&self, j: usize) -> C {
        let mut ph = C::new(1.0, 0.0);
        for (q, p) in self.0.iter().enumerate() {
            let bit = (j >> q) & 1 == 1;
            match p {
                Pauli::I | Pauli::X => {}
                Pauli::Z => {
                    if bit {
                        ph = -ph;
                    }
                }
                Pauli::Y => {
                    ph *= if bit {
                        C::new(0.0, -1.0)
                    } else {
                        C::new(0.0, 1.0)
                    };
                }
            }
        }
        ph
    }
}

/// Written with qubit 0 leftmost, e.g. `"ZIX"` is `Z` on qubit 0.
impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::invalid(format!("not a Pauli letter: {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            f.write_str(match p {
                Pauli::I => "I",
                Pauli::X => "X",
                Pauli::Y => "Y",
                Pauli::Z => "Z",
            })?;
        }
        Ok(())
    }
}

/// Weighted sum of Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliObservable {
    n_qubits: usize,
    terms: Vec<(PauliString, f64)>,
}

impl PauliObservable {
    pub fn new(n_qubits: usize, terms: Vec<(PauliString, f64)>) -> Result<Self> {
        for (p, w) in &terms {
            if p.len() != n_qubits {
                return Err(Error::invalid(format!(
                    "Pauli string {p} has length {} but the observable acts on {n_qubits} qubits",
                    p.len()
                )));
            }
            if !w.is_finite() {
                return Err(Error::invalid(format!("weight of {p} is not finite")));
            }
        }
        Ok(PauliObservable { n_qubits, terms })
    }

    pub fn single(n_qubits: usize, q: usize, p: Pauli) -> Self {
        PauliObservable {
            n_qubits,
            terms: vec![(PauliString::single(n_qubits, q, p), 1.0)],
        }
    }

    /// `(1/n) Σ_q P_q`.
    pub fn average(n_qubits: usize, p: Pauli) -> Self {
        let w = 1.0 / n_qubits as f64;
        PauliObservable {
            n_qubits,
            terms: (0..n_qubits)
                .map(|q| (PauliString::single(n_qubits, q, p), w))
                .collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(PauliString, f64)] {
        &self.terms
    }
}

/// States that Pauli observables can be evaluated on.
pub trait Expectation {
    fn n_qubits(&self) -> usize;
    fn pauli_expectation(&self, p: &PauliString) -> f64;
}

impl Expectation for StateVector {
    fn n_qubits(&self) -> usize {
        StateVector::n_qubits(self)
    }

    fn pauli_expectation(&self, p: &PauliString) -> f64 {
        let a = self.amplitudes();
        let x = p.x_mask();
        (0..a.len())
            .map(|j| a[j ^ x].conj() * p.phase(j) * a[j])
            .sum::<C>()
            .re
    }
}

impl Expectation for DensityMatrix {
    fn n_qubits(&self) -> usize {
        DensityMatrix::n_qubits(self)
    }

    /// Raw `Re Tr(P ρ)`; no renormalization by the trace.
    fn pauli_expectation(&self, p: &PauliString) -> f64 {
        let x = p.x_mask();
        (0..self.dim())
            .map(|j| p.phase(j) * self.get(j, j ^ x))
            .sum::<C>()
            .re
    }
}

pub fn expectation<S: Expectation + ?Sized>(state: &S, obs: &PauliObservable) -> Result<f64> {
    if state.n_qubits() != obs.n_qubits {
        return Err(Error::invalid(format!(
            "observable acts on {} qubits, state has {}",
            obs.n_qubits,
            state.n_qubits()
        )));
    }
    Ok(obs
        .terms
        .iter()
        .map(|(p, w)| w * state.pauli_expectation(p))
        .sum())
}
