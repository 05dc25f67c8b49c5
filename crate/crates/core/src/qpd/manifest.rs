//! JSON manifest describing a synthesized fragment set.

use serde::{Deserialize, Serialize};

use super::fragments::{CutCircuit, Fragment, FragmentMode};
use crate::circuit::{parse_circuit, write_circuit, Circuit};
use crate::error::{Error, Result};
use crate::sim::Sign;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutSpec {
    pub qubit_a: usize,
    pub qubit_b: usize,
    /// Angle of the decomposition, `-θ_gate`.
    pub theta_eq3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelEntry {
    pub family: String,
    pub alpha_a: Option<i8>,
    pub alpha_b: Option<i8>,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FragmentEntry {
    pub index: usize,
    pub terms: Vec<LabelEntry>,
    pub weight: f64,
    pub simplified: usize,
    /// Circuit in the text format.
    pub circuit: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FragmentManifest {
    pub mode: FragmentMode,
    pub cuts: Vec<CutSpec>,
    pub fragments: Vec<FragmentEntry>,
}

const FAMILIES: [&str; 6] = ["II", "ZZ", "PROJ_ROT", "ROT_PROJ", "MEAS_ROT", "ROT_MEAS"];

fn sign_value(s: Option<Sign>) -> Option<i8> {
    s.map(|s| s.value() as i8)
}

impl FragmentManifest {
    pub fn new(cut_circuit: &CutCircuit, mode: FragmentMode, fragments: &[Fragment]) -> Self {
        FragmentManifest {
            mode,
            cuts: cut_circuit
                .cuts()
                .iter()
                .map(|c| CutSpec {
                    qubit_a: c.qubit_a,
                    qubit_b: c.qubit_b,
                    theta_eq3: -c.theta_gate,
                })
                .collect(),
            fragments: fragments
                .iter()
                .map(|f| FragmentEntry {
                    index: f.index,
                    terms: f
                        .choices
                        .iter()
                        .map(|c| LabelEntry {
                            family: c.family.to_string(),
                            alpha_a: sign_value(c.alpha_a),
                            alpha_b: sign_value(c.alpha_b),
                            coefficient: c.coefficient,
                        })
                        .collect(),
                    weight: f.weight,
                    simplified: f.simplified,
                    circuit: write_circuit(&f.circuit),
                })
                .collect(),
        }
    }

    /// Checks internal consistency: one label per cut, known families,
    /// `±1` signs, finite numbers and parseable circuits.
    pub fn validate(&self) -> Result<()> {
        for c in &self.cuts {
            if c.qubit_a == c.qubit_b || !c.theta_eq3.is_finite() {
                return Err(Error::invalid(format!("bad cut {c:?}")));
            }
        }
        for f in &self.fragments {
            let bad = |why: String| Err(Error::invalid(format!("fragment {}: {why}", f.index)));
            if f.terms.len() != self.cuts.len() {
                return bad(format!(
                    "{} labels for {} cuts",
                    f.terms.len(),
                    self.cuts.len()
                ));
            }
            if !f.weight.is_finite() {
                return bad("non-finite weight".into());
            }
            for t in &f.terms {
                if !FAMILIES.contains(&t.family.as_str()) {
                    return bad(format!("unknown family {:?}", t.family));
                }
                let ok_sign = |a: Option<i8>| matches!(a, None | Some(1) | Some(-1));
                if !ok_sign(t.alpha_a) || !ok_sign(t.alpha_b) || !t.coefficient.is_finite() {
                    return bad(format!("bad label {t:?}"));
                }
            }
            let circuit = parse_circuit(&f.circuit)
                .map_err(|e| e.context(format!("fragment {}", f.index)))?;
            if let Some(c) = self
                .cuts
                .iter()
                .find(|c| c.qubit_a.max(c.qubit_b) >= circuit.n_qubits())
            {
                return bad(format!(
                    "cut on qubits ({}, {}) outside circuit",
                    c.qubit_a, c.qubit_b
                ));
            }
        }
        Ok(())
    }

    pub fn circuits(&self) -> Result<Vec<Circuit>> {
        self.fragments
            .iter()
            .map(|f| parse_circuit(&f.circuit))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: FragmentManifest = serde_json::from_str(s)?;
        m.validate()?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::qpd::{synthesize_fragments, FragmentOptions, VirtualCut};

    fn cut() -> CutCircuit {
        let base = Circuit::from_gates(2, [Gate::Rx(0, 0.786), Gate::Rx(1, 0.786)]).unwrap();
        CutCircuit::new(
            base,
            vec![VirtualCut {
                position: 2,
                qubit_a: 0,
                qubit_b: 1,
                theta_gate: -0.787,
            }],
        )
        .unwrap()
    }

    #[test]
    fn round_trip() {
        let cc = cut();
        for mode in [FragmentMode::Enumerated, FragmentMode::Grouped] {
            let opts = FragmentOptions {
                mode,
                simplify: true,
                ..Default::default()
            };
            let frags = synthesize_fragments(&cc, opts).unwrap();
            let m = FragmentManifest::new(&cc, mode, &frags);
            assert_eq!(m.cuts[0].theta_eq3, 0.787);
            let back = FragmentManifest::from_json(&m.to_json()).unwrap();
            assert_eq!(back, m);
            let circuits = back.circuits().unwrap();
            for (c, f) in circuits.iter().zip(&frags) {
                assert_eq!(c, &f.circuit);
            }
        }
    }

    #[test]
    fn rejects_inconsistent_manifests() {
        let cc = cut();
        let frags = synthesize_fragments(&cc, FragmentOptions::default()).unwrap();
        let good = FragmentManifest::new(&cc, FragmentMode::Enumerated, &frags);

        let mut m = good.clone();
        m.fragments[0].terms.clear();
        assert!(FragmentManifest::from_json(&m.to_json()).is_err());

        let mut m = good.clone();
        m.fragments[1].circuit = "QUBITS 2\nFOO 0".into();
        assert!(FragmentManifest::from_json(&m.to_json()).is_err());

        let mut m = good.clone();
        m.fragments[2].terms[0].alpha_a = Some(3);
        assert!(FragmentManifest::from_json(&m.to_json()).is_err());

        let mut m = good;
        m.fragments[2].terms[0].family = "XY".into();
        assert!(FragmentManifest::from_json(&m.to_json()).is_err());
    }
}
