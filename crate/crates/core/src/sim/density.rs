use std::collections::BTreeMap;

use num_complex::Complex64 as C;

use super::gates::{matrix, pauli_z, GateMatrix};
use super::kernels::{apply_1q, apply_2q, conj2, conj4, M2};
use super::statevector::StateVector;
use crate::circuit::{Circuit, ClbitRole, Gate};
use crate::error::{Error, Result};
use crate::noise::{self, NoiseModel};

/// Default cap on density-matrix width (4^10 complex doubles = 16 MiB).
pub const DENSITY_QUBIT_CAP: usize = 10;

/// A `2^n × 2^n` operator stored row-major.
///
/// The trace is not forced to one: quasi-probability fragments apply
/// trace-changing maps and the result must stay linear in the input.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<C>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_value(v: f64) -> Option<Sign> {
        if v == 1.0 {
            Some(Sign::Plus)
        } else if v == -1.0 {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

/// Local operators appearing in the virtual RZZ decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FragmentOp {
    /// `ρ ↦ (I + αZ) ρ (I + αZ)`.
    Projector(Sign),
    /// `ρ ↦ (I + iαZ) ρ (I − iαZ)`.
    Rotation(Sign),
    /// `ρ ↦ Z ρ Z`.
    PauliZ,
    Identity,
}

impl DensityMatrix {
    pub fn zero_state(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut data = vec![C::new(0.0, 0.0); dim * dim];
        data[0] = C::new(1.0, 0.0);
        DensityMatrix { n_qubits, data }
    }

    pub fn zeros(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        DensityMatrix {
            n_qubits,
            data: vec![C::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut rho = Self::zeros(n_qubits);
        for i in 0..dim {
            rho.data[i * dim + i] = C::new(1.0 / dim as f64, 0.0);
        }
        rho
    }

    pub fn from_statevector(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        let dim = a.len();
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(a[i] * a[j].conj());
            }
        }
        DensityMatrix {
            n_qubits: psi.n_qubits(),
            data,
        }
    }

    /// Row-major entries of a `2^n × 2^n` matrix.
    pub fn from_matrix(n_qubits: usize, data: Vec<C>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if data.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries for {n_qubits} qubits, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(DensityMatrix { n_qubits, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn data(&self) -> &[C] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> C {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).sum()
    }

    /// Largest `|ρ_ij − conj(ρ_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_distance(&self, other: &DensityMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&mut self, k: f64) {
        for z in &mut self.data {
            *z *= k;
        }
    }

    /// `self += k · other`.
    pub fn add_scaled(&mut self, other: &DensityMatrix, k: f64) -> Result<()> {
        self.check_same(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * k;
        }
        Ok(())
    }

    fn check_same(&self, other: &DensityMatrix) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::invalid(format!(
                "{}-qubit and {}-qubit operators do not match",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::invalid(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// `ρ ↦ A ρ B†` on one qubit, where `B = A` for a unitary conjugation.
    fn sandwich_1q(&mut self, q: usize, left: &M2, right: &M2) {
        let n = self.n_qubits;
        apply_1q(&mut self.data, q + n, left);
        apply_1q(&mut self.data, q, &conj2(right));
    }

    pub fn apply_unitary(&mut self, gate: &Gate) -> Result<()> {
        let n = self.n_qubits;
        match matrix(gate) {
            Some(GateMatrix::One(q, m)) => {
                self.check_qubit(q)?;
                self.sandwich_1q(q, &m, &m);
            }
            Some(GateMatrix::Two(a, b, m)) => {
                self.check_qubit(a)?;
                self.check_qubit(b)?;
                apply_2q(&mut self.data, a + n, b + n, &m);
                apply_2q(&mut self.data, a, b, &conj4(&m));
            }
            None => {
                return Err(Error::invalid(format!(
                    "{} is not a unitary gate",
                    gate.name()
                )))
            }
        }
        Ok(())
    }

    /// Unnormalized projection `P_b ρ P_b` onto outcome `bit` of qubit `q`.
    pub fn project(&mut self, q: usize, bit: bool) {
        let dim = self.dim();
        for r in 0..dim {
            for c in 0..dim {
                if ((r >> q) & 1 == 1) != bit || ((c >> q) & 1 == 1) != bit {
                    self.data[r * dim + c] = C::new(0.0, 0.0);
                }
            }
        }
    }

    /// Trace out `q` and replace it with |0>.
    pub fn reset(&mut self, q: usize) {
        let dim = self.dim();
        let b = 1usize << q;
        for r in 0..dim {
            for c in 0..dim {
                let idx = r * dim + c;
                if r & b == 0 && c & b == 0 {
                    let other = self.data[(r | b) * dim + (c | b)];
                    self.data[idx] += other;
                } else {
                    self.data[idx] = C::new(0.0, 0.0);
                }
            }
        }
    }

    /// `ρ ↦ (1 − p) ρ + p · Tr_Q(ρ) ⊗ I/2^|Q|` on the qubit set `Q`.
    pub(crate) fn mix_toward_identity(&mut self, qubits: &[usize], p: f64) {
        if p == 0.0 {
            return;
        }
        let dim = self.dim();
        let d = 1usize << qubits.len();
        let mask: usize = qubits.iter().map(|q| 1usize << q).sum();
        let offsets: Vec<usize> = (0..d)
            .map(|s| {
                qubits
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| (s >> k) & 1 == 1)
                    .map(|(_, q)| 1usize << q)
                    .sum()
            })
            .collect();
        let mut block = vec![C::new(0.0, 0.0); d * d];
        for r0 in (0..dim).filter(|r| r & mask == 0) {
            for c0 in (0..dim).filter(|c| c & mask == 0) {
                let mut tr = C::new(0.0, 0.0);
                for s in 0..d {
                    for t in 0..d {
                        block[s * d + t] = self.data[(r0 | offsets[s]) * dim + (c0 | offsets[t])];
                    }
                    tr += block[s * d + s];
                }
                for s in 0..d {
                    for t in 0..d {
                        let mut v = block[s * d + t] * (1.0 - p);
                        if s == t {
                            v += tr * (p / d as f64);
                        }
                        self.data[(r0 | offsets[s]) * dim + (c0 | offsets[t])] = v;
                    }
                }
            }
        }
    }

    pub fn apply_fragment_operator(&mut self, qubit: usize, op: FragmentOp) -> Result<()> {
        self.check_qubit(qubit)?;
        let o = C::new(0.0, 0.0);
        match op {
            FragmentOp::Identity => {}
            FragmentOp::PauliZ => {
                let z = pauli_z();
                self.sandwich_1q(qubit, &z, &z);
            }
            FragmentOp::Projector(alpha) => {
                let a = alpha.value();
                let d = [[C::new(1.0 + a, 0.0), o], [o, C::new(1.0 - a, 0.0)]];
                self.sandwich_1q(qubit, &d, &d);
            }
            FragmentOp::Rotation(alpha) => {
                let a = alpha.value();
                let d = [[C::new(1.0, a), o], [o, C::new(1.0, -a)]];
                self.sandwich_1q(qubit, &d, &d);
            }
        }
        Ok(())
    }
}

/// Free-function form of [`DensityMatrix::apply_fragment_operator`].
pub fn apply_fragment_operator(
    state: &DensityMatrix,
    qubit: usize,
    op: FragmentOp,
) -> Result<DensityMatrix> {
    let mut out = state.clone();
    out.apply_fragment_operator(qubit, op)?;
    Ok(out)
}

/// Unnormalized states conditioned on each classical-register value.
///
/// Bit `c` of a key is classical bit `c`. The traces of all branches sum to
/// the trace of the unconditioned state.
#[derive(Debug, Clone)]
pub struct Branches {
    n_qubits: usize,
    entries: BTreeMap<u64, DensityMatrix>,
}

impl Branches {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &DensityMatrix)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Weight a classical-register value receives from the bit roles:
    /// `(-1)^b` per sign bit, an indicator per postselected bit.
    pub fn register_weight(roles: &[ClbitRole], key: u64) -> f64 {
        let mut w = 1.0;
        for (c, role) in roles.iter().enumerate() {
            let bit = (key >> c) & 1 == 1;
            match role {
                ClbitRole::Plain => {}
                ClbitRole::Sign => {
                    if bit {
                        w = -w;
                    }
                }
                ClbitRole::Postselect(want) => {
                    if bit != *want {
                        return 0.0;
                    }
                }
            }
        }
        w
    }

    /// `Σ_c w(c) ρ_c` with `w` from [`Branches::register_weight`].
    pub fn combine(&self, roles: &[ClbitRole]) -> DensityMatrix {
        let mut out = DensityMatrix::zeros(self.n_qubits);
        for (&key, rho) in &self.entries {
            let w = Self::register_weight(roles, key);
            if w != 0.0 {
                out.add_scaled(rho, w).expect("branches share a width");
            }
        }
        out
    }
}

/// Exact channel evolution from |0...0>, with unconditioned measurement
/// outcomes summed according to the circuit's classical-bit roles.
pub fn run_density(circuit: &Circuit, noise: Option<&NoiseModel>) -> Result<DensityMatrix> {
    let branches = run_density_branches(circuit, noise, DENSITY_QUBIT_CAP)?;
    Ok(branches.combine(circuit.roles()))
}

pub fn run_density_branches(
    circuit: &Circuit,
    noise: Option<&NoiseModel>,
    qubit_cap: usize,
) -> Result<Branches> {
    let n = circuit.n_qubits();
    if n > qubit_cap {
        return Err(Error::ResourceLimit(format!(
            "{n} qubits exceeds the density-matrix cap of {qubit_cap}"
        )));
    }
    if circuit.n_clbits() > 64 {
        return Err(Error::ResourceLimit("more than 64 classical bits".into()));
    }
    let mut entries = BTreeMap::new();
    entries.insert(0u64, DensityMatrix::zero_state(n));
    for gate in circuit.gates() {
        match gate {
            Gate::Measure { qubit, clbit } => {
                let flip = noise.map_or(0.0, |m| m.readout_flip);
                let mut next: BTreeMap<u64, DensityMatrix> = BTreeMap::new();
                for (key, rho) in entries {
                    let mut zero = rho.clone();
                    zero.project(*qubit, false);
                    let mut one = rho;
                    one.project(*qubit, true);
                    let (rec0, rec1) = if flip > 0.0 {
                        let mut r0 = zero.clone();
                        r0.scale(1.0 - flip);
                        r0.add_scaled(&one, flip)?;
                        let mut r1 = one;
                        r1.scale(1.0 - flip);
                        r1.add_scaled(&zero, flip)?;
                        (r0, r1)
                    } else {
                        (zero, one)
                    };
                    let base = key & !(1u64 << clbit);
                    for (bit, mut branch) in [(0u64, rec0), (1u64, rec1)] {
                        if let Some(m) = noise {
                            noise::apply_gate_noise(m, gate, &mut branch)?;
                        }
                        let k = base | (bit << clbit);
                        match next.get_mut(&k) {
                            Some(existing) => existing.add_scaled(&branch, 1.0)?,
                            None => {
                                next.insert(k, branch);
                            }
                        }
                    }
                }
                entries = next;
            }
            Gate::Reset(q) => {
                for rho in entries.values_mut() {
                    rho.reset(*q);
                    if let Some(m) = noise {
                        noise::apply_gate_noise(m, gate, rho)?;
                    }
                }
            }
            Gate::Conditional { clbit, gate: inner } => {
                for (key, rho) in entries.iter_mut() {
                    if (key >> clbit) & 1 == 1 {
                        rho.apply_unitary(inner)?;
                        if let Some(m) = noise {
                            noise::apply_gate_noise(m, inner, rho)?;
                        }
                    }
                }
            }
            _ => {
                for rho in entries.values_mut() {
                    rho.apply_unitary(gate)?;
                    if let Some(m) = noise {
                        noise::apply_gate_noise(m, gate, rho)?;
                    }
                }
            }
        }
    }
    Ok(Branches {
        n_qubits: n,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::run_statevector;

    #[test]
    fn reset_sends_one_to_zero() {
        let c = Circuit::from_gates(1, [Gate::X(0), Gate::Reset(0)]).unwrap();
        let rho = run_density(&c, None).unwrap();
        assert!(rho.frobenius_distance(&DensityMatrix::zero_state(1)) < 1e-15);
    }

    #[test]
    fn noiseless_density_matches_statevector() {
        let c = Circuit::from_gates(
            3,
            [
                Gate::H(0),
                Gate::Rx(1, 0.3),
                Gate::Cnot(0, 2),
                Gate::Rzz(1, 2, -0.7),
                Gate::Rzx(2, 0, 1.1),
                Gate::Swap(0, 1),
                Gate::Sx(2),
            ],
        )
        .unwrap();
        let psi = run_statevector(&c).unwrap();
        let rho = run_density(&c, None).unwrap();
        assert!(rho.frobenius_distance(&DensityMatrix::from_statevector(&psi)) < 1e-12);
    }

    #[test]
    fn measurement_dephases_and_postselects() {
        let mut c = Circuit::new(1, 1);
        c.extend([Gate::H(0), Gate::Measure { qubit: 0, clbit: 0 }])
            .unwrap();
        let rho = run_density(&c, None).unwrap();
        assert!((rho.get(0, 0).re - 0.5).abs() < 1e-12);
        assert!(rho.get(0, 1).norm() < 1e-12);

        c.set_role(0, ClbitRole::Postselect(true)).unwrap();
        let rho = run_density(&c, None).unwrap();
        assert!((rho.trace() - 0.5).abs() < 1e-12);
        assert!((rho.get(1, 1).re - 0.5).abs() < 1e-12);

        c.set_role(0, ClbitRole::Sign).unwrap();
        let rho = run_density(&c, None).unwrap();
        assert!(rho.trace().abs() < 1e-12);
    }

    #[test]
    fn classical_feedback_flips_target() {
        // measure |1>, then conditionally flip qubit 1
        let mut c = Circuit::new(2, 1);
        c.extend([
            Gate::X(0),
            Gate::Measure { qubit: 0, clbit: 0 },
            Gate::Conditional {
                clbit: 0,
                gate: Box::new(Gate::X(1)),
            },
        ])
        .unwrap();
        let rho = run_density(&c, None).unwrap();
        assert!((rho.get(3, 3).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_cap_is_enforced() {
        let c = Circuit::new(11, 0);
        assert!(matches!(
            run_density(&c, None),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn fragment_operator_traces() {
        let zero = DensityMatrix::zero_state(1);
        let p = apply_fragment_operator(&zero, 0, FragmentOp::Projector(Sign::Plus)).unwrap();
        assert!((p.trace() - 4.0).abs() < 1e-15);

        let mut one = DensityMatrix::zero_state(1);
        one.apply_unitary(&Gate::X(0)).unwrap();
        let p = apply_fragment_operator(&one, 0, FragmentOp::Projector(Sign::Plus)).unwrap();
        assert!(p.data().iter().all(|z| z.norm() == 0.0));

        let mut plus = DensityMatrix::zero_state(2);
        plus.apply_unitary(&Gate::H(1)).unwrap();
        plus.apply_unitary(&Gate::Rx(0, 0.4)).unwrap();
        for alpha in Sign::BOTH {
            let r = apply_fragment_operator(&plus, 1, FragmentOp::Rotation(alpha)).unwrap();
            assert!((r.trace() - 2.0).abs() < 1e-14);
        }
        assert!(apply_fragment_operator(&plus, 2, FragmentOp::PauliZ).is_err());
    }

    #[test]
    fn rotation_operator_is_scaled_rz() {
        let mut rho = DensityMatrix::zero_state(1);
        rho.apply_unitary(&Gate::H(0)).unwrap();
        for alpha in Sign::BOTH {
            let via_op = apply_fragment_operator(&rho, 0, FragmentOp::Rotation(alpha)).unwrap();
            let mut via_rz = rho.clone();
            via_rz
                .apply_unitary(&Gate::Rz(0, -alpha.value() * std::f64::consts::FRAC_PI_2))
                .unwrap();
            via_rz.scale(2.0);
            assert!(via_op.frobenius_distance(&via_rz) < 1e-14);
        }
    }
}
