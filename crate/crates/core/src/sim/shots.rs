//! Seeded shot sampling.
//!
//! A circuit is evolved once to its exact classical-register branches; shots
//! are then drawn from the joint distribution of register value and terminal
//! outcome. Shot `k` of a run seeded with `s` uses ChaCha8 seeded from `s` on
//! stream `k`, so any shot can be reproduced on its own and batches can be
//! split across workers without changing results.

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::density::{run_density_branches, DENSITY_QUBIT_CAP};
use crate::circuit::{Circuit, ClbitRole, Gate};
use crate::error::{Error, Result};
use crate::noise::NoiseModel;

/// Terminal measurement basis for one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    /// Gates that rotate this basis onto Z before measurement.
    pub fn pre_rotation(self, q: usize) -> Vec<Gate> {
        match self {
            Basis::Z => vec![],
            Basis::X => vec![Gate::H(q)],
            Basis::Y => vec![Gate::Rz(q, -std::f64::consts::FRAC_PI_2), Gate::H(q)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotOutcome {
    /// Terminal outcome; bit `q` is qubit `q`.
    pub bits: u64,
    /// Mid-circuit classical register; bit `c` is classical bit `c`.
    pub clbits: u64,
    /// Accumulated quasi-probability sign, `+1` or `-1`.
    pub sign: i8,
}

impl ShotOutcome {
    pub fn bit(&self, q: usize) -> bool {
        (self.bits >> q) & 1 == 1
    }

    pub fn clbit(&self, c: usize) -> bool {
        (self.clbits >> c) & 1 == 1
    }

    /// `(-1)^{bit q}`.
    pub fn z_value(&self, q: usize) -> f64 {
        if self.bit(q) {
            -1.0
        } else {
            1.0
        }
    }

    /// Sign times the postselection indicator of `roles`.
    pub fn weight(&self, roles: &[ClbitRole]) -> f64 {
        for (c, role) in roles.iter().enumerate() {
            if let ClbitRole::Postselect(want) = role {
                if self.clbit(c) != *want {
                    return 0.0;
                }
            }
        }
        f64::from(self.sign)
    }
}

/// Precomputed outcome distribution of one (circuit, noise, basis) setting.
#[derive(Debug, Clone)]
pub struct ShotSampler {
    n_qubits: usize,
    readout_flip: f64,
    /// (cumulative probability, register value, terminal outcome, sign)
    table: Vec<(f64, u64, u64, i8)>,
    total: f64,
}

impl ShotSampler {
    pub fn new(circuit: &Circuit, noise: Option<&NoiseModel>, basis: &[Basis]) -> Result<Self> {
        let n = circuit.n_qubits();
        if basis.len() != n {
            return Err(Error::invalid(format!(
                "{} measurement bases given for {n} qubits",
                basis.len()
            )));
        }
        if n > 63 {
            return Err(Error::ResourceLimit("too many qubits to sample".into()));
        }
        let mut measured = circuit.clone();
        for (q, b) in basis.iter().enumerate() {
            measured.extend(b.pre_rotation(q))?;
        }
        let branches = run_density_branches(&measured, noise, DENSITY_QUBIT_CAP)?;
        let sign_mask: u64 = circuit
            .roles()
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == ClbitRole::Sign)
            .map(|(c, _)| 1u64 << c)
            .sum();
        let mut table = Vec::new();
        let mut acc = 0.0;
        for (key, rho) in branches.iter() {
            let sign = if (key & sign_mask).count_ones() % 2 == 1 {
                -1
            } else {
                1
            };
            for k in 0..rho.dim() {
                let p = rho.get(k, k).re.max(0.0);
                if p > 0.0 {
                    acc += p;
                    table.push((acc, key, k as u64, sign));
                }
            }
        }
        if table.is_empty() {
            return Err(Error::invalid(
                "circuit has an all-zero outcome distribution",
            ));
        }
        Ok(ShotSampler {
            n_qubits: n,
            readout_flip: noise.map_or(0.0, |m| m.readout_flip),
            table,
            total: acc,
        })
    }

    /// Shot `index` of a run seeded with `seed`.
    pub fn shot(&self, base: &ChaCha8Rng, index: u64) -> ShotOutcome {
        let mut rng = base.clone();
        rng.set_stream(index);
        let u = rng.random::<f64>() * self.total;
        let i = self
            .table
            .partition_point(|(cum, ..)| *cum <= u)
            .min(self.table.len() - 1);
        let (_, clbits, mut bits, sign) = self.table[i];
        if self.readout_flip > 0.0 {
            for q in 0..self.n_qubits {
                if rng.random::<f64>() < self.readout_flip {
                    bits ^= 1 << q;
                }
            }
        }
        ShotOutcome { bits, clbits, sign }
    }

    pub fn sample(&self, n_shots: usize, seed: u64) -> Vec<ShotOutcome> {
        let base = ChaCha8Rng::seed_from_u64(seed);
        (0..n_shots as u64).map(|k| self.shot(&base, k)).collect()
    }
}

/// Samples `n_shots` terminal measurements in the given per-qubit bases.
pub fn sample_shots(
    circuit: &Circuit,
    noise: Option<&NoiseModel>,
    n_shots: usize,
    seed: u64,
    basis: &[Basis],
) -> Result<Vec<ShotOutcome>> {
    Ok(ShotSampler::new(circuit, noise, basis)?.sample(n_shots, seed))
}

/// Writes `shot_index,bits,sign`. `bits` lists qubit 0 first; when the
/// circuit has classical bits they follow after a `|`.
pub fn write_shots_csv(
    outcomes: &[ShotOutcome],
    n_qubits: usize,
    n_clbits: usize,
    path: &Path,
) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    writeln!(f, "shot_index,bits,sign").map_err(io)?;
    for (i, s) in outcomes.iter().enumerate() {
        let mut bits: String = (0..n_qubits)
            .map(|q| if s.bit(q) { '1' } else { '0' })
            .collect();
        if n_clbits > 0 {
            bits.push('|');
            bits.extend((0..n_clbits).map(|c| if s.clbit(c) { '1' } else { '0' }));
        }
        writeln!(f, "{i},{bits},{}", s.sign).map_err(io)?;
    }
    f.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_always_reads_zero() {
        let c = Circuit::new(2, 0);
        for seed in [0, 1, 99] {
            let shots = sample_shots(&c, None, 200, seed, &[Basis::Z, Basis::Z]).unwrap();
            assert!(shots.iter().all(|s| s.bits == 0 && s.sign == 1));
        }
    }

    #[test]
    fn bell_state_is_correlated() {
        let c = Circuit::from_gates(2, [Gate::H(0), Gate::Cnot(0, 1)]).unwrap();
        let shots = sample_shots(&c, None, 2000, 7, &[Basis::Z, Basis::Z]).unwrap();
        assert!(shots.iter().all(|s| s.bits == 0 || s.bits == 3));
        assert!(shots.iter().any(|s| s.bits == 3));
    }

    #[test]
    fn plus_state_mean_is_half() {
        let c = Circuit::from_gates(1, [Gate::H(0)]).unwrap();
        let n = 100_000;
        let shots = sample_shots(&c, None, n, 2024, &[Basis::Z]).unwrap();
        let mean = shots.iter().filter(|s| s.bit(0)).count() as f64 / n as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((mean - 0.5).abs() < 5.0 * sigma, "mean {mean}");
        // X basis: |+> always reads 0
        let shots = sample_shots(&c, None, 500, 1, &[Basis::X]).unwrap();
        assert!(shots.iter().all(|s| !s.bit(0)));
    }

    #[test]
    fn y_basis_reads_y_eigenstate() {
        let c = Circuit::from_gates(1, [Gate::Rx(0, -std::f64::consts::FRAC_PI_2)]).unwrap();
        let shots = sample_shots(&c, None, 500, 3, &[Basis::Y]).unwrap();
        assert!(shots.iter().all(|s| !s.bit(0)));
    }

    #[test]
    fn identical_seeds_reproduce_and_shots_are_independent_of_batch() {
        let c = Circuit::from_gates(2, [Gate::H(0), Gate::Rx(1, 1.0)]).unwrap();
        let a = sample_shots(&c, None, 1000, 42, &[Basis::Z, Basis::Z]).unwrap();
        let b = sample_shots(&c, None, 1000, 42, &[Basis::Z, Basis::Z]).unwrap();
        assert_eq!(a, b);
        let sampler = ShotSampler::new(&c, None, &[Basis::Z, Basis::Z]).unwrap();
        let base = ChaCha8Rng::seed_from_u64(42);
        assert_eq!(sampler.shot(&base, 777), a[777]);
        let other = sample_shots(&c, None, 1000, 43, &[Basis::Z, Basis::Z]).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn signed_instrument_sets_sign() {
        let mut c = Circuit::new(1, 1);
        c.set_role(0, ClbitRole::Sign).unwrap();
        c.extend([Gate::X(0), Gate::Measure { qubit: 0, clbit: 0 }])
            .unwrap();
        let shots = sample_shots(&c, None, 50, 0, &[Basis::Z]).unwrap();
        assert!(shots.iter().all(|s| s.sign == -1 && s.clbit(0) && s.bit(0)));
    }

    #[test]
    fn shot_csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("shots.csv");
        let shots = [ShotOutcome {
            bits: 0b01,
            clbits: 1,
            sign: -1,
        }];
        write_shots_csv(&shots, 2, 1, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "shot_index,bits,sign\n0,10|1,-1\n");
    }
}
