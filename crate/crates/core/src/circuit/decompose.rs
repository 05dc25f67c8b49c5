use serde::{Deserialize, Serialize};

use super::{Circuit, Gate, Qubit};
use crate::error::{Error, Result};

/// How `Rzz` gates are lowered onto hardware interactions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RzzCompilation {
    /// Leave `Rzz` in place.
    Keep,
    /// CNOT · RZ · CNOT.
    Cnot,
    /// H · RZX · H on the target (pulse-efficient form).
    PulseEfficient,
}

fn finite(theta: f64) -> Result<()> {
    if theta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "RZZ angle must be finite, got {theta}"
        )))
    }
}

/// `Rzz(a, b, θ)` as two CNOTs around a Z rotation of the target.
///
/// CNOT conjugation maps `Z_b` to `Z_a Z_b`, so the sequence is exact
/// (no global phase).
pub fn decompose_rzz_cnot(a: Qubit, b: Qubit, theta: f64) -> Result<Vec<Gate>> {
    finite(theta)?;
    Ok(vec![Gate::Cnot(a, b), Gate::Rz(b, theta), Gate::Cnot(a, b)])
}

/// `Rzz(a, b, θ)` as one native `Rzx(a, b, θ)` with the target's X axis
/// rotated onto Z by Hadamards.
pub fn decompose_rzz_rzx(a: Qubit, b: Qubit, theta: f64) -> Result<Vec<Gate>> {
    finite(theta)?;
    Ok(vec![Gate::H(b), Gate::Rzx(a, b, theta), Gate::H(b)])
}

/// Rewrites every `Rzz` (including classically controlled ones) with the
/// chosen lowering. Other gates pass through.
pub fn compile_rzz(circuit: &Circuit, how: RzzCompilation) -> Result<Circuit> {
    let lower = |a, b, t| match how {
        RzzCompilation::Keep => Ok(vec![Gate::Rzz(a, b, t)]),
        RzzCompilation::Cnot => decompose_rzz_cnot(a, b, t),
        RzzCompilation::PulseEfficient => decompose_rzz_rzx(a, b, t),
    };
    let mut out = Circuit::new(circuit.n_qubits(), circuit.n_clbits());
    for (i, role) in circuit.roles().iter().enumerate() {
        out.set_role(i, *role)?;
    }
    for g in circuit.gates() {
        match g {
            Gate::Rzz(a, b, t) => {
                out.extend(lower(*a, *b, *t)?)?;
            }
            Gate::Conditional { clbit, gate } => match **gate {
                Gate::Rzz(a, b, t) => {
                    out.extend(lower(a, b, t)?.into_iter().map(|inner| Gate::Conditional {
                        clbit: *clbit,
                        gate: Box::new(inner),
                    }))?;
                }
                _ => {
                    out.push(g.clone())?;
                }
            },
            _ => {
                out.push(g.clone())?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{count_gates, GateName};

    #[test]
    fn rejects_non_finite_angles() {
        assert!(decompose_rzz_cnot(0, 1, f64::NAN).is_err());
        assert!(decompose_rzz_rzx(0, 1, f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn two_qubit_gate_counts() {
        let cnot = Circuit::from_gates(2, decompose_rzz_cnot(0, 1, 0.4).unwrap()).unwrap();
        assert_eq!(count_gates(&cnot).get(GateName::Cnot), 2);
        let pet = Circuit::from_gates(
            2,
            decompose_rzz_rzx(0, 1, std::f64::consts::FRAC_PI_2).unwrap(),
        )
        .unwrap();
        let counts = count_gates(&pet);
        assert_eq!(counts.get(GateName::Rzx), 1);
        assert_eq!(counts.two_qubit_native(), 1);
    }

    #[test]
    fn compile_keeps_roles_and_conditionals() {
        let mut c = Circuit::new(3, 1);
        c.set_role(0, crate::circuit::ClbitRole::Sign).unwrap();
        c.push(Gate::Measure { qubit: 0, clbit: 0 }).unwrap();
        c.push(Gate::Conditional {
            clbit: 0,
            gate: Box::new(Gate::Rzz(1, 2, 0.3)),
        })
        .unwrap();
        let out = compile_rzz(&c, RzzCompilation::Cnot).unwrap();
        assert_eq!(out.len(), 4);
        assert_eq!(out.role(0), crate::circuit::ClbitRole::Sign);
        assert!(out.gates()[1..]
            .iter()
            .all(|g| matches!(g, Gate::Conditional { clbit: 0, .. })));
    }
}
