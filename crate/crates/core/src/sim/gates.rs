//! Dense matrices of the fixed gate set.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C;

use super::kernels::{M2, M4};
use crate::circuit::Gate;

const O: C = C::new(0.0, 0.0);
const L: C = C::new(1.0, 0.0);

fn cis(phi: f64) -> C {
    C::from_polar(1.0, phi)
}

pub fn rx(theta: f64) -> M2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        [C::new(c, 0.0), C::new(0.0, -s)],
        [C::new(0.0, -s), C::new(c, 0.0)],
    ]
}

pub fn rz(theta: f64) -> M2 {
    [[cis(-theta / 2.0), O], [O, cis(theta / 2.0)]]
}

pub fn hadamard() -> M2 {
    let h = C::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn pauli_x() -> M2 {
    [[O, L], [L, O]]
}

pub fn pauli_z() -> M2 {
    [[L, O], [O, -L]]
}

pub fn sqrt_x() -> M2 {
    let a = C::new(0.5, 0.5);
    let b = C::new(0.5, -0.5);
    [[a, b], [b, a]]
}

pub fn rzz(theta: f64) -> M4 {
    let m = cis(-theta / 2.0);
    let p = cis(theta / 2.0);
    [[m, O, O, O], [O, p, O, O], [O, O, p, O], [O, O, O, m]]
}

/// `exp(-i θ/2 Z⊗X)`: `RX(θ)` on the second operand when the first is |0>,
/// `RX(-θ)` when it is |1>.
pub fn rzx(theta: f64) -> M4 {
    let a = rx(theta);
    let b = rx(-theta);
    [
        [a[0][0], a[0][1], O, O],
        [a[1][0], a[1][1], O, O],
        [O, O, b[0][0], b[0][1]],
        [O, O, b[1][0], b[1][1]],
    ]
}

pub fn cnot() -> M4 {
    [[L, O, O, O], [O, L, O, O], [O, O, O, L], [O, O, L, O]]
}

pub fn swap() -> M4 {
    [[L, O, O, O], [O, O, L, O], [O, L, O, O], [O, O, O, L]]
}

pub(crate) enum GateMatrix {
    One(usize, M2),
    Two(usize, usize, M4),
}

/// Matrix and operands of a unitary gate; `None` for measurement, reset and
/// classical control.
pub(crate) fn matrix(gate: &Gate) -> Option<GateMatrix> {
    use GateMatrix::*;
    Some(match *gate {
        Gate::X(q) => One(q, pauli_x()),
        Gate::Sx(q) => One(q, sqrt_x()),
        Gate::H(q) => One(q, hadamard()),
        Gate::Rx(q, t) => One(q, rx(t)),
        Gate::Rz(q, t) => One(q, rz(t)),
        Gate::Rzz(a, b, t) => Two(a, b, rzz(t)),
        Gate::Rzx(a, b, t) => Two(a, b, rzx(t)),
        Gate::Cnot(a, b) => Two(a, b, cnot()),
        Gate::Swap(a, b) => Two(a, b, swap()),
        Gate::Measure { .. } | Gate::Reset(_) | Gate::Conditional { .. } => return None,
    })
}
