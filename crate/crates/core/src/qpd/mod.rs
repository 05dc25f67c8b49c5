//! Quasi-probability decomposition of a virtual `RZZ` gate.
//!
//! For `U = exp(+i θ/2 Z_a Z_b)` the channel `ρ ↦ U ρ U†` is written as
//!
//! ```text
//! cos²(θ/2) S(I⊗I) + sin²(θ/2) S(Z⊗Z)
//!   + (1/8) cos(θ/2) sin(θ/2) Σ_{α_a, α_b = ±1} α_a α_b
//!       [ S((I + α_a Z) ⊗ (I + iα_b Z)) + S((I + iα_a Z) ⊗ (I + α_b Z)) ]
//! ```
//!
//! with `S(A) ρ = A ρ A†`. `S(I + αZ)` is four times a Z-measurement branch
//! and `S(I + iαZ)` is twice a `RZ(-απ/2)` conjugation, so every term is a
//! scaled local instrument.
//!
//! Circuit gates use `Rzz(θ) = exp(-i θ/2 Z⊗Z)`; [`decompose_rzz_gate`] is
//! the one place where a gate angle is negated into a decomposition angle.

mod fragments;
mod manifest;
mod simplify;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{apply_fragment_operator, DensityMatrix, FragmentOp, Sign};

pub use fragments::{
    synthesize_fragments, CutChoice, CutCircuit, Fragment, FragmentMode, FragmentOptions, LocalOp,
    VirtualCut, DEFAULT_MAX_CUTS,
};
pub use manifest::{CutSpec, FragmentEntry, FragmentManifest, LabelEntry};
pub use simplify::{
    simplify_postselected_measure, simplify_projected, CutSide, ProductPrep, SimplifiedCircuit,
    SimplifiedTerm,
};

/// Number of terms in one decomposition.
pub const TERMS_PER_CUT: usize = 10;
/// Number of signed instruments after grouping.
pub const GROUPS_PER_CUT: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermFamily {
    II,
    ZZ,
    /// Projector on `a`, rotation on `b`.
    ProjRot {
        alpha_a: Sign,
        alpha_b: Sign,
    },
    /// Rotation on `a`, projector on `b`.
    RotProj {
        alpha_a: Sign,
        alpha_b: Sign,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QpdTerm {
    pub coefficient: f64,
    pub op_a: FragmentOp,
    pub op_b: FragmentOp,
    pub family: TermFamily,
}

fn op_scale(op: FragmentOp) -> f64 {
    match op {
        FragmentOp::Projector(_) => 4.0,
        FragmentOp::Rotation(_) => 2.0,
        FragmentOp::PauliZ | FragmentOp::Identity => 1.0,
    }
}

impl QpdTerm {
    /// Coefficient times the trace scale of the two local operators: the
    /// weight carried by the term's trace-non-increasing realization.
    pub fn executable_weight(&self) -> f64 {
        self.coefficient * op_scale(self.op_a) * op_scale(self.op_b)
    }
}

/// The ten terms for `S(exp(+i θ/2 Z_a Z_b))`, in the order II, ZZ, the four
/// projector-rotation terms, then the four rotation-projector terms (each
/// quadruple ordered `(+,+), (+,−), (−,+), (−,−)` in `(α_a, α_b)`).
pub fn decompose_vrzz(theta_eq3: f64) -> Result<Vec<QpdTerm>> {
    if !theta_eq3.is_finite() {
        return Err(Error::invalid(format!(
            "decomposition angle must be finite, got {theta_eq3}"
        )));
    }
    let (s, c) = (theta_eq3 / 2.0).sin_cos();
    let cross = c * s / 8.0;
    let mut terms = vec![
        QpdTerm {
            coefficient: c * c,
            op_a: FragmentOp::Identity,
            op_b: FragmentOp::Identity,
            family: TermFamily::II,
        },
        QpdTerm {
            coefficient: s * s,
            op_a: FragmentOp::PauliZ,
            op_b: FragmentOp::PauliZ,
            family: TermFamily::ZZ,
        },
    ];
    for proj_first in [true, false] {
        for alpha_a in Sign::BOTH {
            for alpha_b in Sign::BOTH {
                let coefficient = cross * alpha_a.value() * alpha_b.value();
                let term = if proj_first {
                    QpdTerm {
                        coefficient,
                        op_a: FragmentOp::Projector(alpha_a),
                        op_b: FragmentOp::Rotation(alpha_b),
                        family: TermFamily::ProjRot { alpha_a, alpha_b },
                    }
                } else {
                    QpdTerm {
                        coefficient,
                        op_a: FragmentOp::Rotation(alpha_a),
                        op_b: FragmentOp::Projector(alpha_b),
                        family: TermFamily::RotProj { alpha_a, alpha_b },
                    }
                };
                terms.push(term);
            }
        }
    }
    Ok(terms)
}

/// Terms for a circuit gate `Rzz(theta_gate)`, i.e. `theta_eq3 = -theta_gate`.
pub fn decompose_rzz_gate(theta_gate: f64) -> Result<Vec<QpdTerm>> {
    decompose_vrzz(-theta_gate)
}

/// `Σ coefficient · (op_a ⊗ op_b)(ρ)` on a two-qubit state, with `op_a` on
/// qubit 0 and `op_b` on qubit 1.
pub fn reconstruct_channel(terms: &[QpdTerm], rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.n_qubits() != 2 {
        return Err(Error::invalid(format!(
            "channel reconstruction needs a 2-qubit state, got {} qubits",
            rho.n_qubits()
        )));
    }
    let mut out = DensityMatrix::zeros(2);
    for t in terms {
        let mut branch = apply_fragment_operator(rho, 0, t.op_a)?;
        branch.apply_fragment_operator(1, t.op_b)?;
        out.add_scaled(&branch, t.coefficient)?;
    }
    Ok(out)
}

/// Sampling overhead of the grouped decomposition, `1 + 2|sin θ|`.
pub fn gamma(theta_eq3: f64) -> f64 {
    1.0 + 2.0 * theta_eq3.sin().abs()
}

/// The same overhead recomputed as `Σ |weight|` over grouped instruments.
pub fn gamma_from_groups(groups: &[GroupedInstrument]) -> f64 {
    groups.iter().map(|g| g.weight.abs()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    #[serde(rename = "II")]
    II,
    #[serde(rename = "ZZ")]
    ZZ,
    /// Signed measurement on `a`, `RZ(-α_b π/2)` on `b`.
    #[serde(rename = "MEAS_ROT")]
    MeasRot,
    /// `RZ(-α_a π/2)` on `a`, signed measurement on `b`.
    #[serde(rename = "ROT_MEAS")]
    RotMeas,
}

/// One executable, trace-preserving instrument pair with its signed weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupedInstrument {
    pub kind: GroupKind,
    /// Sign of the rotation side, for `MeasRot`/`RotMeas`.
    pub rotation: Option<Sign>,
    pub weight: f64,
    pub side_a: LocalOp,
    pub side_b: LocalOp,
}

/// Collapses the ten terms into six instruments by folding each pair of
/// projector terms that differ only in the projector sign into one signed
/// Z measurement.
pub fn group_for_sampling(terms: &[QpdTerm]) -> Result<Vec<GroupedInstrument>> {
    if terms.len() != TERMS_PER_CUT {
        return Err(Error::invalid(format!(
            "expected {TERMS_PER_CUT} terms, got {}",
            terms.len()
        )));
    }
    let find = |family: TermFamily| -> Result<&QpdTerm> {
        let mut it = terms.iter().filter(|t| t.family == family);
        match (it.next(), it.next()) {
            (Some(t), None) => Ok(t),
            _ => Err(Error::invalid(format!(
                "term list must contain {family:?} exactly once"
            ))),
        }
    };
    let check_ops = |t: &QpdTerm, a: FragmentOp, b: FragmentOp| -> Result<()> {
        if t.op_a != a || t.op_b != b {
            return Err(Error::invalid(format!(
                "term {:?} carries operators {:?} ⊗ {:?}",
                t.family, t.op_a, t.op_b
            )));
        }
        Ok(())
    };
    let ii = find(TermFamily::II)?;
    check_ops(ii, FragmentOp::Identity, FragmentOp::Identity)?;
    let zz = find(TermFamily::ZZ)?;
    check_ops(zz, FragmentOp::PauliZ, FragmentOp::PauliZ)?;

    let mut groups = vec![
        GroupedInstrument {
            kind: GroupKind::II,
            rotation: None,
            weight: ii.executable_weight(),
            side_a: LocalOp::Identity,
            side_b: LocalOp::Identity,
        },
        GroupedInstrument {
            kind: GroupKind::ZZ,
            rotation: None,
            weight: zz.executable_weight(),
            side_a: LocalOp::PauliZ,
            side_b: LocalOp::PauliZ,
        },
    ];
    for kind in [GroupKind::MeasRot, GroupKind::RotMeas] {
        for rot in Sign::BOTH {
            let term_for = |proj: Sign| -> Result<&QpdTerm> {
                let (family, a, b) = match kind {
                    GroupKind::MeasRot => (
                        TermFamily::ProjRot {
                            alpha_a: proj,
                            alpha_b: rot,
                        },
                        FragmentOp::Projector(proj),
                        FragmentOp::Rotation(rot),
                    ),
                    _ => (
                        TermFamily::RotProj {
                            alpha_a: rot,
                            alpha_b: proj,
                        },
                        FragmentOp::Rotation(rot),
                        FragmentOp::Projector(proj),
                    ),
                };
                let t = find(family)?;
                check_ops(t, a, b)?;
                Ok(t)
            };
            let plus = term_for(Sign::Plus)?.executable_weight();
            let minus = term_for(Sign::Minus)?.executable_weight();
            // the pair folds into one signed measurement only when it is
            // antisymmetric in the projector sign
            if (plus + minus).abs() > 1e-12 * (plus.abs() + minus.abs()).max(1e-300) {
                return Err(Error::invalid(format!(
                    "{kind:?} terms with rotation {rot:?} are not antisymmetric in the projector sign"
                )));
            }
            let weight = (plus - minus) / 2.0;
            let (side_a, side_b) = match kind {
                GroupKind::MeasRot => (LocalOp::SignedMeasure, LocalOp::Rotation(rot)),
                _ => (LocalOp::Rotation(rot), LocalOp::SignedMeasure),
            };
            groups.push(GroupedInstrument {
                kind,
                rotation: Some(rot),
                weight,
                side_a,
                side_b,
            });
        }
    }
    Ok(groups)
}

/// `Σ coefficient · value` over `(coefficient, raw expectation)` pairs.
pub fn reconstruct_expectation(per_term_values: &[(f64, f64)]) -> Result<f64> {
    if per_term_values.is_empty() {
        return Err(Error::invalid("no term values to reconstruct from"));
    }
    Ok(per_term_values.iter().map(|(c, v)| c * v).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn coefficients_at_special_angles() {
        let t0 = decompose_vrzz(0.0).unwrap();
        assert_eq!(t0.len(), 10);
        assert_eq!(t0[0].coefficient, 1.0);
        assert!(t0[1..].iter().all(|t| t.coefficient == 0.0));

        let tpi = decompose_vrzz(PI).unwrap();
        assert!(tpi[0].coefficient.abs() < 1e-30);
        assert!((tpi[1].coefficient - 1.0).abs() < 1e-15);
        assert!(tpi[2..].iter().all(|t| t.coefficient.abs() < 1e-16));

        let th = decompose_vrzz(FRAC_PI_2).unwrap();
        assert!((th[0].coefficient - 0.5).abs() < 1e-15);
        assert!((th[1].coefficient - 0.5).abs() < 1e-15);
        for t in &th[2..] {
            assert!((t.coefficient.abs() - 1.0 / 16.0).abs() < 1e-15);
        }
        assert!(decompose_vrzz(f64::NAN).is_err());
    }

    #[test]
    fn cross_coefficients_carry_alpha_product() {
        for t in decompose_vrzz(0.9).unwrap() {
            if let TermFamily::ProjRot { alpha_a, alpha_b }
            | TermFamily::RotProj { alpha_a, alpha_b } = t.family
            {
                let expect =
                    (0.45f64).cos() * (0.45f64).sin() / 8.0 * alpha_a.value() * alpha_b.value();
                assert_eq!(t.coefficient, expect);
            }
        }
    }

    #[test]
    fn maximally_mixed_input_is_fixed() {
        let rho = DensityMatrix::maximally_mixed(2);
        for theta in [0.3, -1.2, 2.9] {
            let out = reconstruct_channel(&decompose_vrzz(theta).unwrap(), &rho).unwrap();
            assert!(out.frobenius_distance(&rho) < 1e-14);
        }
    }

    #[test]
    fn zero_zero_is_an_eigenstate() {
        let rho = DensityMatrix::zero_state(2);
        let out = reconstruct_channel(&decompose_vrzz(FRAC_PI_2).unwrap(), &rho).unwrap();
        assert!(out.frobenius_distance(&rho) < 1e-14);
        assert!(
            reconstruct_channel(&decompose_vrzz(0.1).unwrap(), &DensityMatrix::zero_state(3))
                .is_err()
        );
    }

    #[test]
    fn grouping_yields_six_and_gamma() {
        for theta in [0.0, 0.787, FRAC_PI_2, -2.0, 4.0] {
            let g = group_for_sampling(&decompose_vrzz(theta).unwrap()).unwrap();
            assert_eq!(g.len(), GROUPS_PER_CUT);
            assert!((gamma_from_groups(&g) - gamma(theta)).abs() < 1e-12);
        }
        let g0 = group_for_sampling(&decompose_vrzz(0.0).unwrap()).unwrap();
        assert!(g0[1..].iter().all(|g| g.weight == 0.0));
        assert_eq!(g0[0].weight, 1.0);
        assert_eq!(gamma(0.0), 1.0);
        assert_eq!(gamma(FRAC_PI_2), 3.0);
    }

    #[test]
    fn grouping_rejects_malformed_lists() {
        let terms = decompose_vrzz(0.7).unwrap();
        assert!(group_for_sampling(&terms[..9]).is_err());
        let mut dup = terms.clone();
        dup[1] = dup[0];
        assert!(group_for_sampling(&dup).is_err());
        let mut skew = terms.clone();
        skew[2].coefficient *= 2.0;
        assert!(group_for_sampling(&skew).is_err());
        let mut wrong_op = terms;
        wrong_op[3].op_b = FragmentOp::Identity;
        assert!(group_for_sampling(&wrong_op).is_err());
    }

    #[test]
    fn expectation_reconstruction() {
        assert_eq!(reconstruct_expectation(&[(1.0, 0.7)]).unwrap(), 0.7);
        assert_eq!(
            reconstruct_expectation(&[(0.5, 1.0), (0.5, -1.0)]).unwrap(),
            0.0
        );
        assert!(reconstruct_expectation(&[]).is_err());
    }

    #[test]
    fn gate_angle_is_negated_once() {
        let a = decompose_rzz_gate(0.4).unwrap();
        let b = decompose_vrzz(-0.4).unwrap();
        assert_eq!(a, b);
    }
}
