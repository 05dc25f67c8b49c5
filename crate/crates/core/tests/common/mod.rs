//! Independent dense-matrix oracles and random inputs shared by the
//! integration tests.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use vtqg::circuit::{Circuit, Gate};
use vtqg::sim::{DensityMatrix, Pauli};

pub fn zero() -> C {
    C::new(0.0, 0.0)
}

pub fn identity(d: usize) -> Vec<C> {
    let mut m = vec![zero(); d * d];
    for k in 0..d {
        m[k * d + k] = C::new(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &[C], b: &[C], d: usize) -> Vec<C> {
    let mut out = vec![zero(); d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == zero() {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    out
}

pub fn dagger(a: &[C], d: usize) -> Vec<C> {
    let mut out = vec![zero(); d * d];
    for i in 0..d {
        for j in 0..d {
            out[j * d + i] = a[i * d + j].conj();
        }
    }
    out
}

/// Dense Pauli string on `n` qubits; qubit `q` is bit `q` of the index.
pub fn pauli_matrix(n: usize, factors: &[(usize, Pauli)]) -> Vec<C> {
    let d = 1 << n;
    let mut m = vec![zero(); d * d];
    for col in 0..d {
        let mut row = col;
        let mut amp = C::new(1.0, 0.0);
        for &(q, p) in factors {
            let bit = (col >> q) & 1 == 1;
            let sign = if bit { -1.0 } else { 1.0 };
            match p {
                Pauli::I => {}
                Pauli::X => row ^= 1 << q,
                Pauli::Z => amp *= sign,
                Pauli::Y => {
                    row ^= 1 << q;
                    amp *= C::new(0.0, sign);
                }
            }
        }
        m[row * d + col] = amp;
    }
    m
}

/// `exp(-i θ/2 P)` by Taylor series, with squaring for large arguments.
pub fn expm_pauli(n: usize, factors: &[(usize, Pauli)], theta: f64) -> Vec<C> {
    let d = 1 << n;
    let squarings = (theta.abs().log2().ceil().max(0.0)) as u32;
    let scale = (2f64).powi(squarings as i32);
    let gen: Vec<C> = pauli_matrix(n, factors)
        .into_iter()
        .map(|x| x * C::new(0.0, -theta / 2.0 / scale))
        .collect();
    let mut sum = identity(d);
    let mut term = identity(d);
    for k in 1..40 {
        term = matmul(&term, &gen, d)
            .into_iter()
            .map(|x| x / k as f64)
            .collect();
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum, d);
    }
    sum
}

/// Largest entry of `a - e^{iφ} b` for the phase aligning their largest
/// entries.
pub fn distance_up_to_phase(a: &[C], b: &[C]) -> f64 {
    let k = (0..a.len())
        .max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm()))
        .unwrap();
    let phase = if b[k].norm() > 0.0 {
        a[k] / b[k] * (b[k].norm() / a[k].norm())
    } else {
        C::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

pub fn random_angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI)
}

pub fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

pub fn random_unitary_gate(rng: &mut ChaCha8Rng, n: usize) -> Gate {
    let q = rng.random_range(0..n);
    let (a, b) = random_pair(rng, n);
    let t = random_angle(rng);
    match rng.random_range(0..9) {
        0 => Gate::X(q),
        1 => Gate::Sx(q),
        2 => Gate::H(q),
        3 => Gate::Rx(q, t),
        4 => Gate::Rz(q, t),
        5 => Gate::Rzz(a, b, t),
        6 => Gate::Rzx(a, b, t),
        7 => Gate::Cnot(a, b),
        _ => Gate::Swap(a, b),
    }
}

pub fn random_circuit(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Circuit {
    let gates: Vec<Gate> = (0..len).map(|_| random_unitary_gate(rng, n)).collect();
    Circuit::from_gates(n, gates).unwrap()
}

/// Smallest eigenvalue of a Hermitian density matrix.
pub fn min_eigenvalue(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let m = nalgebra::DMatrix::from_fn(d, d, |i, j| rho.get(i, j));
    let h = (&m + m.adjoint()) * C::new(0.5, 0.0);
    h.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
