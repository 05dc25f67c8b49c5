use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::simplify::simplify_postselected_measure;
use super::{decompose_rzz_gate, group_for_sampling, GroupKind, TermFamily};
use crate::circuit::{compile_rzz, Circuit, ClbitRole, Gate, Qubit, RzzCompilation};
use crate::error::{Error, Result};
use crate::sim::{FragmentOp, Sign};

/// Default guard on the number of virtual gates in one circuit.
pub const DEFAULT_MAX_CUTS: usize = 3;

/// A local, trace-non-increasing operation on one cut qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalOp {
    Identity,
    /// `RZ(π)`, i.e. Z up to phase.
    PauliZ,
    /// `RZ(-α π/2)`.
    Rotation(Sign),
    /// Z measurement keeping only outcome `(1 - α)/2`.
    Postselect(Sign),
    /// Z measurement whose outcome multiplies the shot sign by `(-1)^b`.
    SignedMeasure,
}

impl LocalOp {
    pub(crate) fn from_fragment_op(op: FragmentOp) -> LocalOp {
        match op {
            FragmentOp::Identity => LocalOp::Identity,
            FragmentOp::PauliZ => LocalOp::PauliZ,
            FragmentOp::Rotation(a) => LocalOp::Rotation(a),
            FragmentOp::Projector(a) => LocalOp::Postselect(a),
        }
    }

    pub fn append_to(self, circuit: &mut Circuit, qubit: Qubit) -> Result<()> {
        match self {
            LocalOp::Identity => {}
            LocalOp::PauliZ => {
                circuit.push(Gate::Rz(qubit, PI))?;
            }
            LocalOp::Rotation(a) => {
                circuit.push(Gate::Rz(qubit, -a.value() * FRAC_PI_2))?;
            }
            LocalOp::Postselect(a) => {
                let clbit = circuit.add_clbit(ClbitRole::Postselect(a == Sign::Minus));
                circuit.push(Gate::Measure { qubit, clbit })?;
            }
            LocalOp::SignedMeasure => {
                let clbit = circuit.add_clbit(ClbitRole::Sign);
                circuit.push(Gate::Measure { qubit, clbit })?;
            }
        }
        Ok(())
    }
}

/// A virtual `Rzz(qubit_a, qubit_b, theta_gate)` inserted before gate index
/// `position` of the base circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirtualCut {
    pub position: usize,
    pub qubit_a: Qubit,
    pub qubit_b: Qubit,
    pub theta_gate: f64,
}

/// A circuit with some two-qubit gates left out and replaced by virtual cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct CutCircuit {
    base: Circuit,
    cuts: Vec<VirtualCut>,
}

impl CutCircuit {
    pub fn new(base: Circuit, cuts: Vec<VirtualCut>) -> Result<Self> {
        let n = base.n_qubits();
        let mut last = 0;
        for cut in &cuts {
            if cut.position > base.len() || cut.position < last {
                return Err(Error::invalid(format!(
                    "cut positions must be non-decreasing and at most {}",
                    base.len()
                )));
            }
            last = cut.position;
            if cut.qubit_a >= n || cut.qubit_b >= n || cut.qubit_a == cut.qubit_b {
                return Err(Error::invalid(format!(
                    "cut qubits ({}, {}) invalid for {n} qubits",
                    cut.qubit_a, cut.qubit_b
                )));
            }
            if !cut.theta_gate.is_finite() {
                return Err(Error::invalid("cut angle must be finite"));
            }
        }
        Ok(CutCircuit { base, cuts })
    }

    pub fn base(&self) -> &Circuit {
        &self.base
    }

    pub fn cuts(&self) -> &[VirtualCut] {
        &self.cuts
    }

    /// The uncut circuit, with each cut restored as an `Rzz` gate.
    pub fn uncut(&self) -> Result<Circuit> {
        self.assemble(
            &vec![(LocalOp::Identity, LocalOp::Identity); self.cuts.len()],
            true,
        )
    }

    fn assemble(&self, ops: &[(LocalOp, LocalOp)], restore: bool) -> Result<Circuit> {
        let mut c = Circuit::new(self.base.n_qubits(), self.base.n_clbits());
        for (i, role) in self.base.roles().iter().enumerate() {
            c.set_role(i, *role)?;
        }
        let mut k = 0;
        for (idx, gate) in self.base.gates().iter().enumerate() {
            while k < self.cuts.len() && self.cuts[k].position == idx {
                self.insert_cut(&mut c, k, ops, restore)?;
                k += 1;
            }
            c.push(gate.clone())?;
        }
        while k < self.cuts.len() {
            self.insert_cut(&mut c, k, ops, restore)?;
            k += 1;
        }
        Ok(c)
    }

    fn insert_cut(
        &self,
        c: &mut Circuit,
        k: usize,
        ops: &[(LocalOp, LocalOp)],
        restore: bool,
    ) -> Result<()> {
        let cut = self.cuts[k];
        if restore {
            c.push(Gate::Rzz(cut.qubit_a, cut.qubit_b, cut.theta_gate))?;
        } else {
            ops[k].0.append_to(c, cut.qubit_a)?;
            ops[k].1.append_to(c, cut.qubit_b)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FragmentMode {
    /// All ten terms per cut.
    Enumerated,
    /// Six signed instruments per cut.
    Grouped,
}

impl FragmentMode {
    pub fn per_cut(self) -> usize {
        match self {
            FragmentMode::Enumerated => super::TERMS_PER_CUT,
            FragmentMode::Grouped => super::GROUPS_PER_CUT,
        }
    }
}

/// Label of one per-cut choice, as written to manifests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutChoice {
    pub family: &'static str,
    pub alpha_a: Option<Sign>,
    pub alpha_b: Option<Sign>,
    /// Raw decomposition coefficient (enumerated) or instrument weight
    /// (grouped).
    pub coefficient: f64,
    /// Weight of the executable realization.
    pub weight: f64,
    pub side_a: LocalOp,
    pub side_b: LocalOp,
}

fn choices_for(cut: &VirtualCut, mode: FragmentMode) -> Result<Vec<CutChoice>> {
    let terms = decompose_rzz_gate(cut.theta_gate)?;
    Ok(match mode {
        FragmentMode::Enumerated => terms
            .iter()
            .map(|t| {
                let (family, alpha_a, alpha_b) = match t.family {
                    TermFamily::II => ("II", None, None),
                    TermFamily::ZZ => ("ZZ", None, None),
                    TermFamily::ProjRot { alpha_a, alpha_b } => {
                        ("PROJ_ROT", Some(alpha_a), Some(alpha_b))
                    }
                    TermFamily::RotProj { alpha_a, alpha_b } => {
                        ("ROT_PROJ", Some(alpha_a), Some(alpha_b))
                    }
                };
                CutChoice {
                    family,
                    alpha_a,
                    alpha_b,
                    coefficient: t.coefficient,
                    weight: t.executable_weight(),
                    side_a: LocalOp::from_fragment_op(t.op_a),
                    side_b: LocalOp::from_fragment_op(t.op_b),
                }
            })
            .collect(),
        FragmentMode::Grouped => group_for_sampling(&terms)?
            .into_iter()
            .map(|g| {
                let (family, alpha_a, alpha_b) = match g.kind {
                    GroupKind::II => ("II", None, None),
                    GroupKind::ZZ => ("ZZ", None, None),
                    GroupKind::MeasRot => ("MEAS_ROT", None, g.rotation),
                    GroupKind::RotMeas => ("ROT_MEAS", g.rotation, None),
                };
                CutChoice {
                    family,
                    alpha_a,
                    alpha_b,
                    coefficient: g.weight,
                    weight: g.weight,
                    side_a: g.side_a,
                    side_b: g.side_b,
                }
            })
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FragmentOptions {
    pub mode: FragmentMode,
    /// Replace postselected measurements on product-state qubits by a
    /// classical probability and a reset.
    pub simplify: bool,
    pub compile: RzzCompilation,
    pub max_cuts: usize,
}

impl Default for FragmentOptions {
    fn default() -> Self {
        FragmentOptions {
            mode: FragmentMode::Enumerated,
            simplify: false,
            compile: RzzCompilation::Keep,
            max_cuts: DEFAULT_MAX_CUTS,
        }
    }
}

/// One executable fragment circuit and the weight its results enter with.
#[derive(Debug, Clone, PartialEq)]
pub struct Fragment {
    pub index: usize,
    pub choices: Vec<CutChoice>,
    pub weight: f64,
    pub circuit: Circuit,
    /// Number of postselected measurements replaced by a classical factor.
    pub simplified: usize,
}

/// Every fragment of `cut_circuit`: the Cartesian product of per-cut
/// choices, with the first cut as the slowest-varying index.
pub fn synthesize_fragments(
    cut_circuit: &CutCircuit,
    opts: FragmentOptions,
) -> Result<Vec<Fragment>> {
    let m = cut_circuit.cuts().len();
    if m > opts.max_cuts {
        return Err(Error::ResourceLimit(format!(
            "{m} virtual gates would need {}^{m} fragment circuits (limit is {} cuts)",
            opts.mode.per_cut(),
            opts.max_cuts
        )));
    }
    let per_cut = cut_circuit
        .cuts()
        .iter()
        .map(|c| choices_for(c, opts.mode))
        .collect::<Result<Vec<_>>>()?;
    let k = opts.mode.per_cut();
    let total = k.pow(m as u32);
    (0..total)
        .into_par_iter()
        .map(|index| {
            let mut rem = index;
            let mut digits = vec![0; m];
            for d in (0..m).rev() {
                digits[d] = rem % k;
                rem /= k;
            }
            let choices: Vec<CutChoice> = digits
                .iter()
                .enumerate()
                .map(|(cut, &d)| per_cut[cut][d])
                .collect();
            build_fragment(cut_circuit, index, choices, opts)
        })
        .collect()
}

fn build_fragment(
    cut_circuit: &CutCircuit,
    index: usize,
    choices: Vec<CutChoice>,
    opts: FragmentOptions,
) -> Result<Fragment> {
    let ops: Vec<(LocalOp, LocalOp)> = choices.iter().map(|c| (c.side_a, c.side_b)).collect();
    let mut circuit = cut_circuit.assemble(&ops, false)?;
    let mut weight: f64 = choices.iter().map(|c| c.weight).product();
    let mut simplified = 0;
    if opts.simplify {
        let postselected: Vec<usize> = circuit
            .roles()
            .iter()
            .enumerate()
            .filter(|(_, r)| matches!(r, ClbitRole::Postselect(_)))
            .map(|(c, _)| c)
            .collect();
        for clbit in postselected {
            match simplify_postselected_measure(&circuit, clbit) {
                Ok(s) => {
                    weight *= s.classical_factor;
                    circuit = s.circuit;
                    simplified += 1;
                }
                Err(Error::Precondition(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let circuit = compile_rzz(&circuit, opts.compile)?;
    Ok(Fragment {
        index,
        choices,
        weight,
        circuit,
        simplified,
    })
}
