//! Projected-fragment simplification.
//!
//! When the projected qubit is in the product state `RX(2β)|0>` at the
//! point of projection (any gates in between commute with `Z` on it), the
//! projection onto `|b>` factors into the classical probability
//! `cos²β` or `sin²β` times a circuit where the qubit is reset to `|b>`.
//! Two-qubit gates that commute with `Z` on the fixed qubit then act as
//! single-qubit gates on their partner: `RZZ(θ)` becomes `RZ(±θ)`.

use super::{QpdTerm, TermFamily};
use crate::circuit::{Circuit, ClbitRole, Gate, Qubit};
use crate::error::{Error, Result};
use crate::sim::Sign;

/// Caller's assertion that the projected qubit is `RX(2β)|0>` in product
/// with the rest of the register when the projector acts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductPrep {
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplifiedTerm {
    /// Probability of the kept projector outcome.
    pub classical_factor: f64,
    pub projected: CutSide,
    /// Value the projected qubit is fixed to (`false` = |0>).
    pub fixed_bit: bool,
    /// An `Rzz(θ)` touching the fixed qubit becomes `RZ(sign · θ)` on its
    /// partner.
    pub partner_rz_sign: f64,
}

fn outcome_probability(beta: f64, bit: bool) -> f64 {
    if bit {
        beta.sin().powi(2)
    } else {
        beta.cos().powi(2)
    }
}

/// Term-level simplification of a projector-rotation term.
pub fn simplify_projected(term: &QpdTerm, prep: Option<ProductPrep>) -> Result<SimplifiedTerm> {
    let (projected, alpha) = match term.family {
        TermFamily::ProjRot { alpha_a, .. } => (CutSide::A, alpha_a),
        TermFamily::RotProj { alpha_b, .. } => (CutSide::B, alpha_b),
        other => {
            return Err(Error::invalid(format!(
                "{other:?} has no projector to simplify"
            )))
        }
    };
    let prep = prep.ok_or_else(|| {
        Error::Precondition("projected qubit is not asserted to be in a product state".into())
    })?;
    if !prep.beta.is_finite() {
        return Err(Error::invalid("preparation angle must be finite"));
    }
    let fixed_bit = alpha == Sign::Minus;
    Ok(SimplifiedTerm {
        classical_factor: outcome_probability(prep.beta, fixed_bit),
        projected,
        fixed_bit,
        partner_rz_sign: if fixed_bit { -1.0 } else { 1.0 },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplifiedCircuit {
    pub classical_factor: f64,
    pub qubit: Qubit,
    pub fixed_bit: bool,
    pub beta: f64,
    pub circuit: Circuit,
}

/// What a `Z_q`-commuting gate becomes once `q` is fixed to a basis state.
fn reduce_on_fixed(gate: &Gate, q: Qubit, bit: bool) -> Option<Option<Gate>> {
    let z = if bit { -1.0 } else { 1.0 };
    match *gate {
        Gate::Rz(p, _) if p == q => Some(None),
        Gate::Rzz(a, b, t) if a == q => Some(Some(Gate::Rz(b, z * t))),
        Gate::Rzz(a, b, t) if b == q => Some(Some(Gate::Rz(a, z * t))),
        Gate::Rzx(a, b, t) if a == q => Some(Some(Gate::Rx(b, z * t))),
        Gate::Cnot(a, b) if a == q => Some(bit.then_some(Gate::X(b))),
        _ => None,
    }
}

/// Replaces the postselected measurement writing `clbit` by its outcome
/// probability, verifying the product-state precondition from the circuit
/// structure.
///
/// Returns [`Error::Precondition`] when the measured qubit's history is not
/// an optional leading `RX` followed only by gates commuting with `Z` on it.
pub fn simplify_postselected_measure(circuit: &Circuit, clbit: usize) -> Result<SimplifiedCircuit> {
    if clbit >= circuit.n_clbits() {
        return Err(Error::invalid(format!("no classical bit {clbit}")));
    }
    let ClbitRole::Postselect(bit) = circuit.role(clbit) else {
        return Err(Error::invalid(format!(
            "classical bit {clbit} is not postselected"
        )));
    };
    let refuse = |why: &str| Err(Error::Precondition(format!("classical bit {clbit}: {why}")));
    let writers: Vec<usize> = circuit
        .gates()
        .iter()
        .enumerate()
        .filter(|(_, g)| matches!(g, Gate::Measure { clbit: c, .. } if *c == clbit))
        .map(|(i, _)| i)
        .collect();
    let &[at] = writers.as_slice() else {
        return refuse("must be written by exactly one measurement");
    };
    if circuit
        .gates()
        .iter()
        .any(|g| matches!(g, Gate::Conditional { clbit: c, .. } if *c == clbit))
    {
        return refuse("drives classical control");
    }
    let Gate::Measure { qubit: q, .. } = circuit.gates()[at] else {
        unreachable!()
    };

    let touching: Vec<usize> = (0..at)
        .filter(|&i| circuit.gates()[i].qubits().contains(&q))
        .collect();
    let (prep_at, beta, rest) = match touching.first() {
        Some(&i) => match circuit.gates()[i] {
            Gate::Rx(_, t) => (Some(i), t / 2.0, &touching[1..]),
            _ => (None, 0.0, &touching[..]),
        },
        None => (None, 0.0, &touching[..]),
    };
    for &i in rest {
        if reduce_on_fixed(&circuit.gates()[i], q, bit).is_none() {
            return refuse(&format!(
                "{} at gate {i} does not commute with Z on qubit {q}",
                circuit.gates()[i].name()
            ));
        }
    }

    let mut out = Circuit::new(circuit.n_qubits(), circuit.n_clbits());
    for (c, role) in circuit.roles().iter().enumerate() {
        out.set_role(c, if c == clbit { ClbitRole::Plain } else { *role })?;
    }
    let prepare = |out: &mut Circuit| -> Result<()> {
        out.push(Gate::Reset(q))?;
        if bit {
            out.push(Gate::X(q))?;
        }
        Ok(())
    };
    let insert_prep_at = prep_at.or(touching.first().copied()).unwrap_or(at);
    for (i, gate) in circuit.gates().iter().enumerate() {
        if i == insert_prep_at {
            prepare(&mut out)?;
        }
        if Some(i) == prep_at || i == at {
            continue;
        }
        if i < at && rest.contains(&i) {
            if let Some(Some(reduced)) = reduce_on_fixed(gate, q, bit) {
                out.push(reduced)?;
            }
            continue;
        }
        out.push(gate.clone())?;
    }
    Ok(SimplifiedCircuit {
        classical_factor: outcome_probability(beta, bit),
        qubit: q,
        fixed_bit: bit,
        beta,
        circuit: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpd::decompose_vrzz;
    use crate::sim::{run_density, Expectation, PauliString};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn term_level_factors() {
        let terms = decompose_vrzz(0.787).unwrap();
        let pp = terms[2]; // PROJ_ROT(+,+)
        let s = simplify_projected(&pp, Some(ProductPrep { beta: 0.0 })).unwrap();
        assert_eq!(s.classical_factor, 1.0);
        assert_eq!(s.projected, CutSide::A);
        assert_eq!(s.partner_rz_sign, 1.0);
        let s = simplify_projected(&pp, Some(ProductPrep { beta: FRAC_PI_2 })).unwrap();
        assert!(s.classical_factor < 1e-30);
        let s = simplify_projected(&pp, Some(ProductPrep { beta: 0.393 })).unwrap();
        assert!((s.classical_factor - 0.393f64.cos().powi(2)).abs() < 1e-15);
        assert!((s.classical_factor - 0.853).abs() < 5e-4);

        let rp_minus = terms[7]; // ROT_PROJ(+,-)
        let s = simplify_projected(&rp_minus, Some(ProductPrep { beta: 0.393 })).unwrap();
        assert_eq!(s.projected, CutSide::B);
        assert!(s.fixed_bit);
        assert_eq!(s.partner_rz_sign, -1.0);

        assert!(matches!(
            simplify_projected(&pp, None),
            Err(Error::Precondition(_))
        ));
        assert!(simplify_projected(&terms[0], Some(ProductPrep { beta: 0.1 })).is_err());
    }

    fn projected_circuit(bit: bool) -> Circuit {
        let mut c = Circuit::new(3, 0);
        c.extend([
            Gate::Rx(0, 0.786),
            Gate::Rx(1, 0.786),
            Gate::Rx(2, 0.786),
            Gate::Rzz(0, 1, -0.787),
            Gate::Rzz(1, 2, -0.787),
            Gate::Rz(0, 0.3),
        ])
        .unwrap();
        let clbit = c.add_clbit(ClbitRole::Postselect(bit));
        c.push(Gate::Measure { qubit: 0, clbit }).unwrap();
        c.push(Gate::Rz(2, FRAC_PI_2)).unwrap();
        c.push(Gate::H(0)).unwrap();
        c
    }

    #[test]
    fn simplified_circuit_reproduces_postselected_state() {
        for bit in [false, true] {
            let c = projected_circuit(bit);
            let full = run_density(&c, None).unwrap();
            let s = simplify_postselected_measure(&c, 0).unwrap();
            assert!((s.beta - 0.393).abs() < 1e-15);
            assert!(!s
                .circuit
                .gates()
                .iter()
                .any(|g| matches!(g, Gate::Measure { .. })));
            let mut simp = run_density(&s.circuit, None).unwrap();
            simp.scale(s.classical_factor);
            assert!(full.frobenius_distance(&simp) < 1e-12, "bit {bit}");
            for p in ["XII", "IYI", "IZX", "ZZZ"] {
                let p: PauliString = p.parse().unwrap();
                let d = full.pauli_expectation(&p) - simp.pauli_expectation(&p);
                assert!(d.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn refuses_entangled_history() {
        let mut c = Circuit::new(2, 0);
        c.extend([Gate::Rx(0, 0.4), Gate::Cnot(1, 0)]).unwrap();
        let clbit = c.add_clbit(ClbitRole::Postselect(false));
        c.push(Gate::Measure { qubit: 0, clbit }).unwrap();
        assert!(matches!(
            simplify_postselected_measure(&c, 0),
            Err(Error::Precondition(_))
        ));

        let mut h = Circuit::new(1, 0);
        h.push(Gate::H(0)).unwrap();
        h.push(Gate::Rx(0, 0.1)).unwrap();
        let clbit = h.add_clbit(ClbitRole::Postselect(true));
        h.push(Gate::Measure { qubit: 0, clbit }).unwrap();
        assert!(simplify_postselected_measure(&h, 0).is_err());
    }

    #[test]
    fn untouched_qubit_has_unit_factor_for_zero() {
        let mut c = Circuit::new(2, 0);
        c.push(Gate::H(1)).unwrap();
        let clbit = c.add_clbit(ClbitRole::Postselect(false));
        c.push(Gate::Measure { qubit: 0, clbit }).unwrap();
        let s = simplify_postselected_measure(&c, 0).unwrap();
        assert_eq!(s.classical_factor, 1.0);
        assert_eq!(s.circuit.gates(), &[Gate::H(1), Gate::Reset(0)]);
    }
}
