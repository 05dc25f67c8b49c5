//! Depolarizing gate-noise model.
//!
//! Average device gate errors are used directly as depolarizing strengths:
//! 0.03 % per single-qubit gate and 0.87 % per CNOT by default. A native RZX
//! interaction can be charged in proportion to its rotation angle, modelling
//! a pulse whose duration scales with its area.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::sim::DensityMatrix;

pub const DEFAULT_P1: f64 = 0.0003;
pub const DEFAULT_P2: f64 = 0.0087;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PetScaling {
    /// RZX costs a full two-qubit error regardless of angle.
    Off,
    /// RZX(θ) costs `p2 · |θ|/π`, clamped to `[p1, p2]`.
    LinearInAngle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "RawNoise")]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub pet_scaling: PetScaling,
    #[serde(default)]
    pub reset_error: f64,
    #[serde(default)]
    pub readout_flip: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    p1: f64,
    p2: f64,
    pet_scaling: PetScaling,
    #[serde(default)]
    reset_error: f64,
    #[serde(default)]
    readout_flip: f64,
}

impl TryFrom<RawNoise> for NoiseModel {
    type Error = Error;

    fn try_from(r: RawNoise) -> Result<Self> {
        let m = NoiseModel {
            p1: r.p1,
            p2: r.p2,
            pet_scaling: r.pet_scaling,
            reset_error: r.reset_error,
            readout_flip: r.readout_flip,
        };
        m.validate()?;
        Ok(m)
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            p1: DEFAULT_P1,
            p2: DEFAULT_P2,
            pet_scaling: PetScaling::LinearInAngle,
            reset_error: 0.0,
            readout_flip: 0.0,
        }
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must lie in [0, 1], got {p}"
        )))
    }
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel {
            p1: 0.0,
            p2: 0.0,
            pet_scaling: PetScaling::LinearInAngle,
            reset_error: 0.0,
            readout_flip: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("p1", self.p1)?;
        check_probability("p2", self.p2)?;
        check_probability("reset_error", self.reset_error)?;
        check_probability("readout_flip", self.readout_flip)
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.reset_error == 0.0 && self.readout_flip == 0.0
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("noise model serializes")
    }

    /// Depolarizing strength charged per application of `gate`.
    ///
    /// SWAP and an uncompiled RZZ are charged per constituent CNOT; see
    /// [`NoiseModel::cnot_multiplicity`].
    pub fn noise_for_gate(&self, gate: &Gate) -> f64 {
        match gate {
            Gate::X(_) | Gate::Sx(_) | Gate::H(_) | Gate::Rx(..) | Gate::Rz(..) => self.p1,
            Gate::Cnot(..) | Gate::Swap(..) | Gate::Rzz(..) => self.p2,
            Gate::Rzx(_, _, theta) => match self.pet_scaling {
                PetScaling::Off => self.p2,
                PetScaling::LinearInAngle => {
                    let scaled = self.p2 * wrap_angle(*theta).abs() / PI;
                    scaled.clamp(self.p1.min(self.p2), self.p2)
                }
            },
            Gate::Measure { .. } | Gate::Reset(_) => self.reset_error,
            Gate::Conditional { gate, .. } => self.noise_for_gate(gate),
        }
    }

    /// How many times the per-gate channel is applied: 3 for SWAP, 2 for an
    /// uncompiled RZZ, otherwise 1.
    pub fn cnot_multiplicity(gate: &Gate) -> usize {
        match gate {
            Gate::Swap(..) => 3,
            Gate::Rzz(..) => 2,
            Gate::Conditional { gate, .. } => Self::cnot_multiplicity(gate),
            _ => 1,
        }
    }

    /// Total depolarizing strength `gate` contributes, summed over its
    /// repetitions.
    pub fn gate_error_budget(&self, gate: &Gate) -> f64 {
        self.noise_for_gate(gate) * Self::cnot_multiplicity(gate) as f64
    }
}

/// Maps an angle onto `(-π, π]`; RZX(θ) and RZX(θ ± 2π) differ by a global
/// phase only.
fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// `ρ ↦ (1 − p) ρ + p · Tr_Q(ρ) ⊗ I/2^|Q|` on one or two qubits.
pub fn depolarize(state: &mut DensityMatrix, qubits: &[usize], p: f64) -> Result<()> {
    check_probability("depolarizing strength", p)?;
    if qubits.is_empty() || qubits.len() > 2 {
        return Err(Error::invalid(format!(
            "depolarizing acts on 1 or 2 qubits, got {}",
            qubits.len()
        )));
    }
    if qubits.len() == 2 && qubits[0] == qubits[1] {
        return Err(Error::invalid("depolarizing qubits must be distinct"));
    }
    if let Some(&q) = qubits.iter().find(|&&q| q >= state.n_qubits()) {
        return Err(Error::invalid(format!(
            "qubit {q} out of range for {} qubits",
            state.n_qubits()
        )));
    }
    state.mix_toward_identity(qubits, p);
    Ok(())
}

/// Applies the noise `model` assigns to `gate` on the gate's qubits.
pub fn apply_gate_noise(model: &NoiseModel, gate: &Gate, state: &mut DensityMatrix) -> Result<()> {
    let p = model.noise_for_gate(gate);
    if p == 0.0 {
        return Ok(());
    }
    let qubits = gate.qubits();
    for _ in 0..NoiseModel::cnot_multiplicity(gate) {
        depolarize(state, &qubits, p)?;
    }
    Ok(())
}
