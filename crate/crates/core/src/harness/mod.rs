//! Experiment orchestration: build each variant, execute its fragments
//! exactly or by shot sampling, and reconstruct the magnetization.
//!
//! Work is spread over rayon, but every reduction runs in (repetition,
//! fragment, basis) order, so results depend only on the configuration.

mod results;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::count_gates;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::qpd::{Fragment, FragmentMode, FragmentOptions, DEFAULT_MAX_CUTS};
use crate::sim::{run_density, Basis, Pauli, ShotSampler};
use crate::tfim::{
    build_trotter_circuit, exact_reference, BlochComponents, TfimParams, TrotterCircuit, Variant,
};

pub use results::{
    emit_results, parse_results, read_results, render_summary, report_summary, results_to_string,
    OutputFormat, ResultRecord, SummaryRow,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Exact density-matrix traces.
    Exact,
    /// Finite shots in three measurement bases.
    Sampling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShotAllocation {
    /// Every fragment circuit gets `shots` shots per basis.
    PerFragment,
    /// The same total budget, split in proportion to `|weight|`.
    Proportional,
}

fn default_variants() -> Vec<Variant> {
    vec![Variant::RoutedOriginal, Variant::Vtqg, Variant::VtqgPet]
}

fn default_shots() -> usize {
    8192
}

fn default_repetitions() -> usize {
    20
}

fn default_true() -> bool {
    true
}

fn default_max_cuts() -> usize {
    DEFAULT_MAX_CUTS
}

fn default_mode() -> Mode {
    Mode::Sampling
}

fn default_allocation() -> ShotAllocation {
    ShotAllocation::PerFragment
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub params: TfimParams,
    #[serde(default = "default_variants")]
    pub variants: Vec<Variant>,
    #[serde(default)]
    pub noise: NoiseModel,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_allocation")]
    pub shot_allocation: ShotAllocation,
    /// Fragment set for virtual variants; when absent, enumerated in exact
    /// mode and grouped in sampling mode.
    #[serde(default)]
    pub grouping: Option<FragmentMode>,
    /// Replace postselected measurements on product-state qubits by a
    /// classical factor where the circuit allows it.
    #[serde(default = "default_true")]
    pub simplify: bool,
    /// Fill `wall_ms`; off by default so outputs are reproducible byte for
    /// byte.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default = "default_max_cuts")]
    pub max_cuts: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            params: TfimParams::default(),
            variants: default_variants(),
            noise: NoiseModel::default(),
            mode: default_mode(),
            shots: default_shots(),
            repetitions: default_repetitions(),
            seed: 0,
            shot_allocation: default_allocation(),
            grouping: None,
            simplify: true,
            record_timing: false,
            max_cuts: DEFAULT_MAX_CUTS,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.noise.validate()?;
        if self.variants.is_empty() {
            return Err(Error::invalid("no variants selected"));
        }
        for (i, v) in self.variants.iter().enumerate() {
            if self.variants[..i].contains(v) {
                return Err(Error::invalid(format!("variant {v} listed twice")));
            }
        }
        if self.mode == Mode::Sampling && self.shots == 0 {
            return Err(Error::invalid("sampling mode needs at least one shot"));
        }
        if self.repetitions == 0 {
            return Err(Error::invalid("at least one repetition is required"));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn fragment_mode(&self) -> FragmentMode {
        self.grouping.unwrap_or(match self.mode {
            Mode::Exact => FragmentMode::Enumerated,
            Mode::Sampling => FragmentMode::Grouped,
        })
    }

    pub fn fragment_options(&self) -> FragmentOptions {
        FragmentOptions {
            mode: self.fragment_mode(),
            simplify: self.simplify,
            max_cuts: self.max_cuts,
            ..Default::default()
        }
    }
}

/// One reconstructed measurement of the qubit-averaged Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    /// Qubit-averaged `<X>, <Y>, <Z>`.
    pub components: [f64; 3],
    pub component_se: [f64; 3],
    pub mag: f64,
    /// Delta-method standard error of `mag`.
    pub mag_se: f64,
}

impl Estimate {
    fn new(components: [f64; 3], component_se: [f64; 3]) -> Self {
        let mag = components.iter().map(|c| c * c).sum::<f64>().sqrt();
        let mag_se = if mag > 0.0 {
            components
                .iter()
                .zip(&component_se)
                .map(|(c, s)| (c / mag * s).powi(2))
                .sum::<f64>()
                .sqrt()
        } else {
            component_se.iter().map(|s| s * s).sum::<f64>().sqrt()
        };
        Estimate {
            components,
            component_se,
            mag,
            mag_se,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantRun {
    pub variant: Variant,
    pub n_qubits: usize,
    pub fragments: usize,
    /// Circuits executed per repetition (fragments × bases when sampling).
    pub circuits_executed: usize,
    /// Native two-qubit gate count of the executed circuit (the all-`II`
    /// fragment for virtual variants).
    pub two_qubit_gates: usize,
    pub ideal: f64,
    pub repetitions: Vec<Estimate>,
    pub wall_ms: f64,
}

impl VariantRun {
    pub fn records(&self) -> Vec<ResultRecord> {
        self.repetitions
            .iter()
            .enumerate()
            .map(|(r, e)| ResultRecord {
                variant: self.variant,
                n_qubits: self.n_qubits,
                repetition: r,
                mag: e.mag,
                sx: e.components[0],
                sy: e.components[1],
                sz: e.components[2],
                ideal: self.ideal,
                fragments: self.fragments,
                two_qubit_gates: self.two_qubit_gates,
                wall_ms: self.wall_ms,
            })
            .collect()
    }
}

const BASES: [(Basis, Pauli); 3] = [
    (Basis::X, Pauli::X),
    (Basis::Y, Pauli::Y),
    (Basis::Z, Pauli::Z),
];

/// Exact qubit-averaged components: the weighted sum of each fragment's
/// Bloch components, read through the variant's layout.
fn exact_components(
    built: &TrotterCircuit,
    fragments: &[Fragment],
    noise: &NoiseModel,
) -> Result<[f64; 3]> {
    let per_fragment = fragments
        .par_iter()
        .map(|f| {
            let rho = run_density(&f.circuit, Some(noise))?;
            Ok(BlochComponents::measure(&rho, &built.layout).means())
        })
        .collect::<Result<Vec<_>>>()?;
    let readout = 1.0 - 2.0 * noise.readout_flip;
    let mut total = [0.0; 3];
    for (f, means) in fragments.iter().zip(&per_fragment) {
        for k in 0..3 {
            total[k] += f.weight * means[k] * readout;
        }
    }
    Ok(total)
}

fn shot_counts(config: &ExperimentConfig, fragments: &[Fragment]) -> Vec<usize> {
    match config.shot_allocation {
        ShotAllocation::PerFragment => vec![config.shots; fragments.len()],
        ShotAllocation::Proportional => {
            let norm: f64 = fragments.iter().map(|f| f.weight.abs()).sum();
            let budget = (config.shots * fragments.len()) as f64;
            fragments
                .iter()
                .map(|f| {
                    if f.weight == 0.0 || norm == 0.0 {
                        0
                    } else {
                        ((budget * f.weight.abs() / norm).round() as usize).max(1)
                    }
                })
                .collect()
        }
    }
}

/// SplitMix64 finalizer over a running state, used to give each
/// (repetition, fragment, basis) its own stream.
fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut z = base;
    for &p in parts {
        z = z.wrapping_add(p.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// Mean and variance of the mean of the per-shot qubit-averaged value.
fn sample_mean(
    sampler: &ShotSampler,
    roles: &[crate::circuit::ClbitRole],
    layout: &[usize],
    n_shots: usize,
    seed: u64,
) -> (f64, f64) {
    if n_shots == 0 {
        return (0.0, 0.0);
    }
    let base = ChaCha8Rng::seed_from_u64(seed);
    let n = layout.len() as f64;
    let (mut s, mut s2) = (0.0, 0.0);
    for k in 0..n_shots as u64 {
        let shot = sampler.shot(&base, k);
        let w = shot.weight(roles);
        let y = if w == 0.0 {
            0.0
        } else {
            w * layout.iter().map(|&q| shot.z_value(q)).sum::<f64>() / n
        };
        s += y;
        s2 += y * y;
    }
    let m = n_shots as f64;
    let mean = s / m;
    let var = if n_shots > 1 {
        ((s2 - m * mean * mean) / (m - 1.0)).max(0.0)
    } else {
        0.0
    };
    (mean, var / m)
}

fn sampled_estimates(
    config: &ExperimentConfig,
    built: &TrotterCircuit,
    fragments: &[Fragment],
) -> Result<Vec<Estimate>> {
    let n = built.circuit.n_qubits();
    let samplers = fragments
        .par_iter()
        .map(|f| {
            BASES
                .iter()
                .map(|(b, _)| ShotSampler::new(&f.circuit, Some(&config.noise), &vec![*b; n]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let counts = shot_counts(config, fragments);
    let physical: Vec<usize> = (0..n).map(|l| built.layout.physical(l)).collect();
    let jobs: Vec<(usize, usize, usize)> = (0..config.repetitions)
        .flat_map(|r| (0..fragments.len()).flat_map(move |f| (0..3).map(move |b| (r, f, b))))
        .collect();
    let means: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&(r, f, b)| {
            let rep_seed = config.seed.wrapping_add(r as u64);
            let seed = derive_seed(rep_seed, &[f as u64, b as u64]);
            sample_mean(
                &samplers[f][b],
                fragments[f].circuit.roles(),
                &physical,
                counts[f],
                seed,
            )
        })
        .collect();
    let per_rep = fragments.len() * 3;
    Ok(means
        .chunks(per_rep)
        .map(|rep| {
            let mut comp = [0.0; 3];
            let mut var = [0.0; 3];
            for (i, &(mean, v)) in rep.iter().enumerate() {
                let (f, b) = (i / 3, i % 3);
                let w = fragments[f].weight;
                comp[b] += w * mean;
                var[b] += w * w * v;
            }
            Estimate::new(comp, var.map(f64::sqrt))
        })
        .collect())
}

/// Runs every repetition of one variant.
pub fn run_variant(config: &ExperimentConfig, variant: Variant, ideal: f64) -> Result<VariantRun> {
    let start = Instant::now();
    let run = || -> Result<VariantRun> {
        let built = build_trotter_circuit(&config.params, variant, config.max_cuts)?;
        let fragments = built.fragments(config.fragment_options())?;
        let two_qubit_gates = count_gates(&fragments[0].circuit).two_qubit_native();
        let (repetitions, circuits_executed) = match config.mode {
            Mode::Exact => {
                let e = Estimate::new(
                    exact_components(&built, &fragments, &config.noise)?,
                    [0.0; 3],
                );
                (vec![e; config.repetitions], fragments.len())
            }
            Mode::Sampling => (
                sampled_estimates(config, &built, &fragments)?,
                3 * fragments.len(),
            ),
        };
        Ok(VariantRun {
            variant,
            n_qubits: config.params.n_qubits,
            fragments: fragments.len(),
            circuits_executed,
            two_qubit_gates,
            ideal,
            repetitions,
            wall_ms: 0.0,
        })
    };
    let mut out = run().map_err(|e| e.context(format!("variant {variant}")))?;
    if config.record_timing {
        out.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    }
    Ok(out)
}

/// Runs all configured variants; records are ordered by variant (as
/// listed) and then repetition.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    let ideal = exact_reference(&config.params)?;
    let mut records = Vec::new();
    for &variant in &config.variants {
        records.extend(run_variant(config, variant, ideal)?.records());
    }
    Ok(records)
}
