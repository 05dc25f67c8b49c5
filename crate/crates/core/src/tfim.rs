//! Transverse-field Ising chain on a ring.
//!
//! `H = -J Σ Z_i Z_{i+1} + h Σ X_i`, evolved from |0...0> by first-order
//! Trotter steps `exp(-i H_ZZ dt) exp(-i H_X dt)`. Each step is an `RX(2 h dt)`
//! on every qubit followed by `Rzz(-2 J dt)` on the ring edges
//! `(i, i+1 mod n)` in ascending `i`, so the ring-closing edge `(n-1, 0)` is
//! the last gate of the layer.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::{
    compile_rzz, route_on_path, Circuit, CouplingMap, Gate, Layout, RzzCompilation,
};
use crate::error::{Error, Result};
use crate::qpd::{synthesize_fragments, CutCircuit, Fragment, FragmentOptions, VirtualCut};
use crate::sim::Expectation;
use crate::sim::{run_statevector, Pauli, PauliString, StateVector, STATEVECTOR_QUBIT_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TfimParams {
    pub n_qubits: usize,
    pub h: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub dt: f64,
    pub n_steps: usize,
    #[serde(default)]
    pub boundary: Boundary,
}

impl Default for TfimParams {
    fn default() -> Self {
        TfimParams {
            n_qubits: 8,
            h: 0.786,
            j: 0.787,
            dt: 0.5,
            n_steps: 1,
            boundary: Boundary::Periodic,
        }
    }
}

impl TfimParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 2 {
            return Err(Error::invalid("the ring needs at least 2 qubits"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.n_steps < 1 {
            return Err(Error::invalid("at least one Trotter step is required"));
        }
        if !self.h.is_finite() || !self.j.is_finite() {
            return Err(Error::invalid("h and J must be finite"));
        }
        Ok(())
    }

    pub fn rx_angle(&self) -> f64 {
        2.0 * self.h * self.dt
    }

    /// Gate angle of each ring-edge `Rzz`, chosen so the edge implements
    /// `exp(+i J dt Z⊗Z)`.
    pub fn rzz_angle(&self) -> f64 {
        -2.0 * self.j * self.dt
    }

    /// `β = h dt`: qubits are `RX(2β)|0>` before their first interaction.
    pub fn beta(&self) -> f64 {
        self.h * self.dt
    }

    fn edges(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.n_qubits;
        (0..n).map(move |i| (i, (i + 1) % n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Plain `Rzz` gates on the ring, no routing.
    Ideal,
    /// Ring closure routed with SWAPs on a path, `Rzz` lowered to CNOTs.
    RoutedOriginal,
    /// Ring closure cut virtually, remaining `Rzz` lowered to CNOTs.
    Vtqg,
    /// Ring closure cut virtually, remaining `Rzz` lowered to native `RZX`.
    VtqgPet,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Ideal,
        Variant::RoutedOriginal,
        Variant::Vtqg,
        Variant::VtqgPet,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Ideal => "ideal",
            Variant::RoutedOriginal => "routed_original",
            Variant::Vtqg => "vtqg",
            Variant::VtqgPet => "vtqg_pet",
        }
    }

    pub fn is_virtual(self) -> bool {
        matches!(self, Variant::Vtqg | Variant::VtqgPet)
    }

    pub fn compilation(self) -> RzzCompilation {
        match self {
            Variant::Ideal => RzzCompilation::Keep,
            Variant::RoutedOriginal | Variant::Vtqg => RzzCompilation::Cnot,
            Variant::VtqgPet => RzzCompilation::PulseEfficient,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown variant {s:?}")))
    }
}

/// A built variant: either one physical circuit or a cut circuit whose
/// fragments are synthesized on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotterCircuit {
    pub variant: Variant,
    /// The executable circuit; for virtual variants, the uncut reference
    /// with every cut restored as an `Rzz` (already lowered).
    pub circuit: Circuit,
    /// Where each logical qubit is measured.
    pub layout: Layout,
    pub cut: Option<CutCircuit>,
}

impl TrotterCircuit {
    /// Executable fragments. Non-virtual variants yield their circuit as a
    /// single fragment of weight 1.
    pub fn fragments(&self, opts: FragmentOptions) -> Result<Vec<Fragment>> {
        match &self.cut {
            Some(cut) => synthesize_fragments(
                cut,
                FragmentOptions {
                    compile: self.variant.compilation(),
                    ..opts
                },
            ),
            None => Ok(vec![Fragment {
                index: 0,
                choices: Vec::new(),
                weight: 1.0,
                circuit: self.circuit.clone(),
                simplified: 0,
            }]),
        }
    }
}

fn ideal_circuit(p: &TfimParams) -> Result<Circuit> {
    let mut c = Circuit::new(p.n_qubits, 0);
    for _ in 0..p.n_steps {
        for q in 0..p.n_qubits {
            c.push(Gate::Rx(q, p.rx_angle()))?;
        }
        for (a, b) in p.edges() {
            c.push(Gate::Rzz(a, b, p.rzz_angle()))?;
        }
    }
    Ok(c)
}

fn cut_circuit(p: &TfimParams) -> Result<CutCircuit> {
    let n = p.n_qubits;
    let mut base = Circuit::new(n, 0);
    let mut cuts = Vec::with_capacity(p.n_steps);
    for _ in 0..p.n_steps {
        for q in 0..n {
            base.push(Gate::Rx(q, p.rx_angle()))?;
        }
        for (a, b) in p.edges().take(n - 1) {
            base.push(Gate::Rzz(a, b, p.rzz_angle()))?;
        }
        cuts.push(VirtualCut {
            position: base.len(),
            qubit_a: 0,
            qubit_b: n - 1,
            theta_gate: p.rzz_angle(),
        });
    }
    CutCircuit::new(base, cuts)
}

/// Builds one Trotterized variant. Virtual variants need one cut per step
/// and are refused when that exceeds `max_cuts`.
pub fn build_trotter_circuit(
    params: &TfimParams,
    variant: Variant,
    max_cuts: usize,
) -> Result<TrotterCircuit> {
    params.validate()?;
    let n = params.n_qubits;
    match variant {
        Variant::Ideal => Ok(TrotterCircuit {
            variant,
            circuit: ideal_circuit(params)?,
            layout: Layout::identity(n),
            cut: None,
        }),
        Variant::RoutedOriginal => {
            let (routed, layout) = route_on_path(&ideal_circuit(params)?, &CouplingMap::path(n))?;
            Ok(TrotterCircuit {
                variant,
                circuit: compile_rzz(&routed, variant.compilation())?,
                layout,
                cut: None,
            })
        }
        Variant::Vtqg | Variant::VtqgPet => {
            if params.n_steps > max_cuts {
                return Err(Error::ResourceLimit(format!(
                    "{} Trotter steps need {} virtual gates, more than the limit of {max_cuts}",
                    params.n_steps, params.n_steps
                )));
            }
            let cut = cut_circuit(params)?;
            Ok(TrotterCircuit {
                variant,
                circuit: compile_rzz(&cut.uncut()?, variant.compilation())?,
                layout: Layout::identity(n),
                cut: Some(cut),
            })
        }
    }
}

/// Per-qubit Bloch components, indexed by logical qubit.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BlochComponents {
    pub sx: Vec<f64>,
    pub sy: Vec<f64>,
    pub sz: Vec<f64>,
}

impl BlochComponents {
    pub fn zeros(n: usize) -> Self {
        BlochComponents {
            sx: vec![0.0; n],
            sy: vec![0.0; n],
            sz: vec![0.0; n],
        }
    }

    /// Reads `<X_q>, <Y_q>, <Z_q>` of every logical qubit from a state whose
    /// logical qubit `l` sits on physical qubit `layout.physical(l)`.
    pub fn measure<S: Expectation + ?Sized>(state: &S, layout: &Layout) -> Self {
        let n = state.n_qubits();
        let mut out = BlochComponents::zeros(n);
        for l in 0..n {
            let q = layout.physical(l);
            out.sx[l] = state.pauli_expectation(&PauliString::single(n, q, Pauli::X));
            out.sy[l] = state.pauli_expectation(&PauliString::single(n, q, Pauli::Y));
            out.sz[l] = state.pauli_expectation(&PauliString::single(n, q, Pauli::Z));
        }
        out
    }

    pub fn component(&self, p: Pauli) -> &[f64] {
        match p {
            Pauli::X => &self.sx,
            Pauli::Y => &self.sy,
            Pauli::Z => &self.sz,
            Pauli::I => panic!("identity has no Bloch component"),
        }
    }

    pub fn means(&self) -> [f64; 3] {
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        [mean(&self.sx), mean(&self.sy), mean(&self.sz)]
    }

    pub fn magnetization(&self) -> Result<f64> {
        magnetization(&self.sx, &self.sy, &self.sz)
    }
}

/// Norm of the qubit-averaged Bloch vector.
pub fn magnetization(sx: &[f64], sy: &[f64], sz: &[f64]) -> Result<f64> {
    let n = sx.len();
    if sy.len() != n || sz.len() != n {
        return Err(Error::invalid(format!(
            "component arrays have lengths {}, {}, {}",
            n,
            sy.len(),
            sz.len()
        )));
    }
    if n == 0 {
        return Err(Error::invalid("no qubits"));
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (x, y, z) = (mean(sx), mean(sy), mean(sz));
    Ok((x * x + y * y + z * z).sqrt())
}

/// Ideal-variant Bloch components from the statevector simulator.
pub fn exact_components(params: &TfimParams) -> Result<BlochComponents> {
    params.validate()?;
    if params.n_qubits > STATEVECTOR_QUBIT_CAP {
        return Err(Error::ResourceLimit(format!(
            "{} qubits exceeds the statevector cap of {STATEVECTOR_QUBIT_CAP}",
            params.n_qubits
        )));
    }
    let psi: StateVector = run_statevector(&ideal_circuit(params)?)?;
    Ok(BlochComponents::measure(
        &psi,
        &Layout::identity(params.n_qubits),
    ))
}

/// Noiseless magnetization of the ideal circuit.
pub fn exact_reference(params: &TfimParams) -> Result<f64> {
    exact_components(params)?.magnetization()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{count_gates, GateName};
    use crate::qpd::FragmentMode;
    use crate::qpd::DEFAULT_MAX_CUTS;

    fn params(n: usize, steps: usize) -> TfimParams {
        TfimParams {
            n_qubits: n,
            n_steps: steps,
            ..Default::default()
        }
    }

    #[test]
    fn ideal_structure() {
        let t = build_trotter_circuit(&params(4, 1), Variant::Ideal, 3).unwrap();
        let c = count_gates(&t.circuit);
        assert_eq!(c.get(GateName::Rx), 4);
        assert_eq!(c.get(GateName::Rzz), 4);
        assert_eq!(t.circuit.len(), 8);
        assert_eq!(t.circuit.gates()[7], Gate::Rzz(3, 0, -0.787));
    }

    #[test]
    fn routed_eight_has_six_swaps() {
        let t = build_trotter_circuit(&params(8, 1), Variant::RoutedOriginal, 3).unwrap();
        let c = count_gates(&t.circuit);
        assert_eq!(c.get(GateName::Swap), 6);
        assert_eq!(c.get(GateName::Rzz), 0);
        assert_eq!(c.get(GateName::Cnot), 16);
        assert!(!t.layout.is_identity());
    }

    #[test]
    fn vtqg_fragment_counts_and_guard() {
        let t = build_trotter_circuit(&params(8, 2), Variant::Vtqg, DEFAULT_MAX_CUTS).unwrap();
        assert_eq!(t.fragments(FragmentOptions::default()).unwrap().len(), 100);
        let t1 = build_trotter_circuit(&params(4, 1), Variant::VtqgPet, 3).unwrap();
        let grouped = FragmentOptions {
            mode: FragmentMode::Grouped,
            ..Default::default()
        };
        let frags = t1.fragments(grouped).unwrap();
        assert_eq!(frags.len(), 6);
        for f in &frags {
            assert_eq!(count_gates(&f.circuit).get(GateName::Rzz), 0);
            assert_eq!(count_gates(&f.circuit).get(GateName::Rzx), 3);
        }
        assert!(matches!(
            build_trotter_circuit(&params(4, 4), Variant::Vtqg, 3),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn magnetization_examples() {
        assert_eq!(magnetization(&[0.0; 3], &[0.0; 3], &[1.0; 3]).unwrap(), 1.0);
        assert_eq!(magnetization(&[0.0; 3], &[0.0; 3], &[0.0; 3]).unwrap(), 0.0);
        assert!(magnetization(&[0.0; 3], &[0.0; 2], &[0.0; 3]).is_err());
        let m = magnetization(&[0.6, 0.0], &[0.0, 0.0], &[0.8, 0.8]).unwrap();
        assert!((m - (0.09f64 + 0.64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_field_keeps_all_up() {
        for (j, dt) in [(0.787, 0.5), (-1.3, 0.2), (4.0, 2.0)] {
            let p = TfimParams {
                h: 0.0,
                j,
                dt,
                ..params(6, 2)
            };
            assert!((exact_reference(&p).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ideal_run_is_translation_symmetric() {
        for n in [3, 4, 8] {
            let b = exact_components(&params(n, 2)).unwrap();
            for comp in [&b.sx, &b.sy, &b.sz] {
                for v in comp.iter() {
                    assert!((v - comp[0]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn params_validation_and_json() {
        assert!(params(1, 1).validate().is_err());
        assert!(params(4, 0).validate().is_err());
        assert!(TfimParams {
            dt: 0.0,
            ..params(4, 1)
        }
        .validate()
        .is_err());
        let p = params(4, 1);
        let js = serde_json::to_string(&p).unwrap();
        assert!(js.contains("\"J\":0.787"));
        assert_eq!(serde_json::from_str::<TfimParams>(&js).unwrap(), p);
        assert_eq!("vtqg_pet".parse::<Variant>().unwrap(), Variant::VtqgPet);
        assert!("pet".parse::<Variant>().is_err());
    }
}
