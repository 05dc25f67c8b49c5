//! Gate-level circuit representation.
//!
//! Qubit `q` is bit `q` of a computational-basis index (qubit 0 is the least
//! significant bit). Two-qubit gates list their operands in order; for `Rzx`
//! the first operand carries the `Z` factor and the second the `X` factor, and
//! for `Cnot` the first operand is the control.

mod decompose;
mod routing;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use decompose::{compile_rzz, decompose_rzz_cnot, decompose_rzz_rzx, RzzCompilation};
pub use routing::{route_on_path, route_ring_closure, CouplingMap, Layout};
pub use text::{parse_circuit, write_circuit};

pub type Qubit = usize;
pub type Clbit = usize;

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(Qubit),
    Sx(Qubit),
    H(Qubit),
    Rx(Qubit, f64),
    Rz(Qubit, f64),
    /// `exp(-i θ/2 Z⊗Z)`.
    Rzz(Qubit, Qubit, f64),
    /// `exp(-i θ/2 Z⊗X)`, the hardware-native cross-resonance interaction.
    Rzx(Qubit, Qubit, f64),
    Cnot(Qubit, Qubit),
    Swap(Qubit, Qubit),
    Measure {
        qubit: Qubit,
        clbit: Clbit,
    },
    Reset(Qubit),
    /// Apply `gate` only when `clbit` reads 1.
    Conditional {
        clbit: Clbit,
        gate: Box<Gate>,
    },
}

/// Fieldless gate kind, used as a tally key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateName {
    X,
    Sx,
    H,
    Rx,
    Rz,
    Rzz,
    Rzx,
    Cnot,
    Swap,
    Measure,
    Reset,
    Conditional,
}

impl GateName {
    pub const ALL: [GateName; 12] = [
        GateName::X,
        GateName::Sx,
        GateName::H,
        GateName::Rx,
        GateName::Rz,
        GateName::Rzz,
        GateName::Rzx,
        GateName::Cnot,
        GateName::Swap,
        GateName::Measure,
        GateName::Reset,
        GateName::Conditional,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GateName::X => "X",
            GateName::Sx => "SX",
            GateName::H => "H",
            GateName::Rx => "RX",
            GateName::Rz => "RZ",
            GateName::Rzz => "RZZ",
            GateName::Rzx => "RZX",
            GateName::Cnot => "CNOT",
            GateName::Swap => "SWAP",
            GateName::Measure => "MEASURE_Z",
            GateName::Reset => "RESET",
            GateName::Conditional => "IF",
        }
    }
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Gate {
    pub fn name(&self) -> GateName {
        match self {
            Gate::X(_) => GateName::X,
            Gate::Sx(_) => GateName::Sx,
            Gate::H(_) => GateName::H,
            Gate::Rx(..) => GateName::Rx,
            Gate::Rz(..) => GateName::Rz,
            Gate::Rzz(..) => GateName::Rzz,
            Gate::Rzx(..) => GateName::Rzx,
            Gate::Cnot(..) => GateName::Cnot,
            Gate::Swap(..) => GateName::Swap,
            Gate::Measure { .. } => GateName::Measure,
            Gate::Reset(_) => GateName::Reset,
            Gate::Conditional { .. } => GateName::Conditional,
        }
    }

    pub fn qubits(&self) -> Vec<Qubit> {
        match *self {
            Gate::X(q) | Gate::Sx(q) | Gate::H(q) | Gate::Rx(q, _) | Gate::Rz(q, _) => vec![q],
            Gate::Reset(q) | Gate::Measure { qubit: q, .. } => vec![q],
            Gate::Rzz(a, b, _) | Gate::Rzx(a, b, _) | Gate::Cnot(a, b) | Gate::Swap(a, b) => {
                vec![a, b]
            }
            Gate::Conditional { ref gate, .. } => gate.qubits(),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, t) | Gate::Rz(_, t) | Gate::Rzz(_, _, t) | Gate::Rzx(_, _, t) => Some(t),
            Gate::Conditional { ref gate, .. } => gate.angle(),
            _ => None,
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(
            self,
            Gate::Measure { .. } | Gate::Reset(_) | Gate::Conditional { .. }
        )
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().len() == 2
    }

    /// The same gate with every qubit index passed through `map`.
    pub fn map_qubits(&self, map: impl Fn(Qubit) -> Qubit + Copy) -> Gate {
        match *self {
            Gate::X(q) => Gate::X(map(q)),
            Gate::Sx(q) => Gate::Sx(map(q)),
            Gate::H(q) => Gate::H(map(q)),
            Gate::Rx(q, t) => Gate::Rx(map(q), t),
            Gate::Rz(q, t) => Gate::Rz(map(q), t),
            Gate::Rzz(a, b, t) => Gate::Rzz(map(a), map(b), t),
            Gate::Rzx(a, b, t) => Gate::Rzx(map(a), map(b), t),
            Gate::Cnot(a, b) => Gate::Cnot(map(a), map(b)),
            Gate::Swap(a, b) => Gate::Swap(map(a), map(b)),
            Gate::Measure { qubit, clbit } => Gate::Measure {
                qubit: map(qubit),
                clbit,
            },
            Gate::Reset(q) => Gate::Reset(map(q)),
            Gate::Conditional { clbit, ref gate } => Gate::Conditional {
                clbit,
                gate: Box::new(gate.map_qubits(map)),
            },
        }
    }
}

/// How a classical bit enters the weight of a shot or of an exact branch sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClbitRole {
    /// Recorded only.
    #[default]
    Plain,
    /// Outcome `b` multiplies the quasi-probability sign by `(-1)^b`.
    Sign,
    /// Only branches where the bit equals the value contribute.
    Postselect(bool),
}

/// An ordered gate list over `n_qubits` qubits and `n_clbits` classical bits.
///
/// Gates are validated as they are pushed, so a constructed circuit always
/// satisfies its index and classical-control invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_clbits: usize,
    gates: Vec<Gate>,
    roles: Vec<ClbitRole>,
    written: Vec<bool>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Self {
        Circuit {
            n_qubits,
            n_clbits,
            gates: Vec::new(),
            roles: vec![ClbitRole::Plain; n_clbits],
            written: vec![false; n_clbits],
        }
    }

    pub fn from_gates(n_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits, 0);
        c.extend(gates)?;
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_clbits(&self) -> usize {
        self.n_clbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn roles(&self) -> &[ClbitRole] {
        &self.roles
    }

    pub fn role(&self, clbit: Clbit) -> ClbitRole {
        self.roles[clbit]
    }

    /// Appends a fresh classical bit and returns its index.
    pub fn add_clbit(&mut self, role: ClbitRole) -> Clbit {
        self.n_clbits += 1;
        self.roles.push(role);
        self.written.push(false);
        self.n_clbits - 1
    }

    pub fn set_role(&mut self, clbit: Clbit, role: ClbitRole) -> Result<()> {
        if clbit >= self.n_clbits {
            return Err(Error::circuit(format!(
                "classical bit {clbit} out of range (n_clbits = {})",
                self.n_clbits
            )));
        }
        self.roles[clbit] = role;
        Ok(())
    }

    pub fn has_classical_ops(&self) -> bool {
        self.gates.iter().any(|g| !g.is_unitary())
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        self.check_gate(&gate, false)?;
        if let Gate::Measure { clbit, .. } = gate {
            self.written[clbit] = true;
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<&mut Self> {
        for g in gates {
            self.push(g)?;
        }
        Ok(self)
    }

    /// Appends every gate of `other`, which must have the same width.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::circuit(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.n_qubits, self.n_qubits
            )));
        }
        while self.n_clbits < other.n_clbits {
            self.add_clbit(ClbitRole::Plain);
        }
        for (i, role) in other.roles.iter().enumerate() {
            if *role != ClbitRole::Plain {
                self.roles[i] = *role;
            }
        }
        self.extend(other.gates.iter().cloned())
    }

    fn check_gate(&self, gate: &Gate, nested: bool) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n_qubits {
                return Err(Error::circuit(format!(
                    "{} acts on qubit {q} but the circuit has {} qubits",
                    gate.name(),
                    self.n_qubits
                )));
            }
        }
        if let [a, b] = gate.qubits()[..] {
            if a == b {
                return Err(Error::circuit(format!(
                    "{} needs two distinct qubits, got {a} twice",
                    gate.name()
                )));
            }
        }
        if let Some(t) = gate.angle() {
            if !t.is_finite() {
                return Err(Error::invalid(format!(
                    "{} angle must be finite, got {t}",
                    gate.name()
                )));
            }
        }
        match gate {
            Gate::Measure { clbit, .. } if *clbit >= self.n_clbits => Err(Error::circuit(format!(
                "measurement writes classical bit {clbit} but the circuit has {}",
                self.n_clbits
            ))),
            Gate::Conditional { clbit, gate } => {
                if nested || !gate.is_unitary() {
                    return Err(Error::circuit(
                        "classical control may only wrap a unitary gate",
                    ));
                }
                if *clbit >= self.n_clbits || !self.written[*clbit] {
                    return Err(Error::circuit(format!(
                        "classical control on bit {clbit} without a preceding measurement"
                    )));
                }
                self.check_gate(gate, true)
            }
            _ => Ok(()),
        }
    }
}

/// Per-kind gate tally.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub by_kind: BTreeMap<GateName, usize>,
    /// CNOTs that the SWAPs in the circuit cost (3 each).
    pub swap_cnot_equivalents: usize,
}

impl GateCounts {
    pub fn get(&self, name: GateName) -> usize {
        self.by_kind.get(&name).copied().unwrap_or(0)
    }

    /// Native two-qubit interactions: CNOT and RZX count 1, SWAP 3, an
    /// uncompiled RZZ 2.
    pub fn two_qubit_native(&self) -> usize {
        self.get(GateName::Cnot)
            + self.get(GateName::Rzx)
            + self.swap_cnot_equivalents
            + 2 * self.get(GateName::Rzz)
    }
}

pub fn count_gates(circuit: &Circuit) -> GateCounts {
    let mut counts = GateCounts::default();
    for name in GateName::ALL {
        counts.by_kind.insert(name, 0);
    }
    for g in circuit.gates() {
        *counts.by_kind.entry(g.name()).or_default() += 1;
        if let Gate::Conditional { gate, .. } = g {
            *counts.by_kind.entry(gate.name()).or_default() += 1;
        }
    }
    counts.swap_cnot_equivalents = 3 * counts.get(GateName::Swap);
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_rejects_bad_indices() {
        let mut c = Circuit::new(2, 1);
        assert!(c.push(Gate::X(2)).is_err());
        assert!(c.push(Gate::Cnot(1, 1)).is_err());
        assert!(c.push(Gate::Rx(0, f64::NAN)).is_err());
        assert!(c.push(Gate::Rzz(0, 1, f64::INFINITY)).is_err());
        assert!(c.push(Gate::Measure { qubit: 0, clbit: 1 }).is_err());
        assert!(c.is_empty());
    }

    #[test]
    fn conditional_needs_prior_measurement() {
        let mut c = Circuit::new(2, 1);
        let cond = Gate::Conditional {
            clbit: 0,
            gate: Box::new(Gate::X(1)),
        };
        assert!(matches!(
            c.push(cond.clone()),
            Err(Error::InvalidCircuit(_))
        ));
        c.push(Gate::Measure { qubit: 0, clbit: 0 }).unwrap();
        c.push(cond).unwrap();
        let nested = Gate::Conditional {
            clbit: 0,
            gate: Box::new(Gate::Reset(1)),
        };
        assert!(c.push(nested).is_err());
    }

    #[test]
    fn empty_circuit_counts_are_zero() {
        let counts = count_gates(&Circuit::new(3, 0));
        assert!(counts.by_kind.values().all(|&v| v == 0));
        assert_eq!(counts.by_kind.len(), GateName::ALL.len());
        assert_eq!(counts.swap_cnot_equivalents, 0);
    }

    #[test]
    fn swaps_count_three_cnots() {
        let c =
            Circuit::from_gates(3, [Gate::Swap(0, 1), Gate::Swap(1, 2), Gate::Cnot(0, 1)]).unwrap();
        let counts = count_gates(&c);
        assert_eq!(counts.get(GateName::Swap), 2);
        assert_eq!(counts.swap_cnot_equivalents, 6);
        assert_eq!(counts.two_qubit_native(), 7);
    }
}
