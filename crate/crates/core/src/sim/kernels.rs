//! In-place gate kernels on a flat amplitude vector.
//!
//! `bit` arguments index bits of the vector offset, not qubits: the density
//! matrix reuses these kernels by treating row and column indices as the
//! high and low halves of a doubled register.

use num_complex::Complex64 as C;

pub(crate) type M2 = [[C; 2]; 2];
pub(crate) type M4 = [[C; 4]; 4];

pub(crate) fn apply_1q(amps: &mut [C], bit: usize, m: &M2) {
    let stride = 1usize << bit;
    let len = amps.len();
    let mut base = 0;
    while base < len {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
        }
        base += 2 * stride;
    }
}

/// Applies `m` with local index `2 * bit(hi) + bit(lo)`.
pub(crate) fn apply_2q(amps: &mut [C], hi: usize, lo: usize, m: &M4) {
    let (mh, ml) = (1usize << hi, 1usize << lo);
    let mask = mh | ml;
    for i in 0..amps.len() {
        if i & mask != 0 {
            continue;
        }
        let idx = [i, i | ml, i | mh, i | mh | ml];
        let v = idx.map(|k| amps[k]);
        for (r, &k) in idx.iter().enumerate() {
            amps[k] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
        }
    }
}

pub(crate) fn conj2(m: &M2) -> M2 {
    m.map(|row| row.map(|z| z.conj()))
}

pub(crate) fn conj4(m: &M4) -> M4 {
    m.map(|row| row.map(|z| z.conj()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_kernel_respects_operand_order() {
        // CNOT with control on bit 1, target on bit 0: |10> (index 2) -> |11> (index 3)
        let o = C::new(0.0, 0.0);
        let l = C::new(1.0, 0.0);
        let cnot = [[l, o, o, o], [o, l, o, o], [o, o, o, l], [o, o, l, o]];
        let mut v = vec![o, o, l, o];
        apply_2q(&mut v, 1, 0, &cnot);
        assert_eq!(v, vec![o, o, o, l]);
        // reversed roles: control bit 0, target bit 1: |01> (index 1) -> |11>
        let mut v = vec![o, l, o, o];
        apply_2q(&mut v, 0, 1, &cnot);
        assert_eq!(v, vec![o, o, o, l]);
    }
}
