//! In-place gate kernels on flat amplitude arrays; qubit `q` is bit `q` of the index.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{ry_matrix, Gate, Mat2};

/// Inserts a zero bit at position `bit` of `k`.
#[inline]
pub(crate) fn insert_zero(k: usize, bit: usize) -> usize {
    let low = k & ((1 << bit) - 1);
    ((k >> bit) << (bit + 1)) | low
}

/// Enumerates indices of `len` whose bits in `bits` (sorted ascending) are all zero.
#[inline]
pub(crate) fn for_each_zero_base(len: usize, bits: &[usize], mut f: impl FnMut(usize)) {
    let count = len >> bits.len();
    for k in 0..count {
        let mut i = k;
        for &b in bits {
            i = insert_zero(i, b);
        }
        f(i);
    }
}

fn conj2(m: &Mat2) -> Mat2 {
    [[m[0][0].conj(), m[0][1].conj()], [m[1][0].conj(), m[1][1].conj()]]
}

pub(crate) fn apply_1q(amps: &mut [Complex64], q: usize, m: &Mat2) {
    let stride = 1usize << q;
    for_each_zero_base(amps.len(), &[q], |i| {
        let (a0, a1) = (amps[i], amps[i + stride]);
        amps[i] = m[0][0] * a0 + m[0][1] * a1;
        amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
    });
}

fn apply_x(amps: &mut [Complex64], q: usize) {
    let stride = 1usize << q;
    for_each_zero_base(amps.len(), &[q], |i| amps.swap(i, i + stride));
}

fn sorted_pair(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

fn apply_cnot(amps: &mut [Complex64], control: usize, target: usize) {
    let (cb, tb) = (1usize << control, 1usize << target);
    for_each_zero_base(amps.len(), &sorted_pair(control, target), |i| {
        amps.swap(i | cb, i | cb | tb);
    });
}

fn apply_controlled_1q(amps: &mut [Complex64], control: usize, target: usize, m: &Mat2) {
    let (cb, tb) = (1usize << control, 1usize << target);
    for_each_zero_base(amps.len(), &sorted_pair(control, target), |i| {
        let (i0, i1) = (i | cb, i | cb | tb);
        let (a0, a1) = (amps[i0], amps[i1]);
        amps[i0] = m[0][0] * a0 + m[0][1] * a1;
        amps[i1] = m[1][0] * a0 + m[1][1] * a1;
    });
}

/// Register value of `controls` in basis index `i`.
#[inline]
pub(crate) fn gather(i: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &q)| acc | (((i >> q) & 1) << j))
}

fn apply_conditional_ry(amps: &mut [Complex64], controls: &[usize], table: &[Option<(f64, f64)>], target: usize) {
    let tb = 1usize << target;
    for_each_zero_base(amps.len(), &[target], |i| {
        if let Some((c, s)) = table[gather(i, controls)] {
            let (a0, a1) = (amps[i], amps[i + tb]);
            amps[i] = a0 * c - a1 * s;
            amps[i + tb] = a0 * s + a1 * c;
        }
    });
}

fn apply_dense(amps: &mut [Complex64], qubits: &[usize], m: &DMatrix<Complex64>, conj: bool) {
    let k = qubits.len();
    let dim = 1usize << k;
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    let offsets: Vec<usize> = (0..dim)
        .map(|l| qubits.iter().enumerate().map(|(j, &q)| ((l >> j) & 1) << q).sum())
        .collect();
    let mat: Vec<Complex64> = (0..dim * dim)
        .map(|x| {
            let v = m[(x / dim, x % dim)];
            if conj {
                v.conj()
            } else {
                v
            }
        })
        .collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); dim];
    for_each_zero_base(amps.len(), &sorted, |base| {
        for (b, &o) in buf.iter_mut().zip(&offsets) {
            *b = amps[base | o];
        }
        for (r, &o) in offsets.iter().enumerate() {
            let row = &mat[r * dim..(r + 1) * dim];
            amps[base | o] = row.iter().zip(&buf).map(|(x, y)| x * y).sum();
        }
    });
}

/// Applies `gate` with every qubit shifted by `offset`; `conj` applies the
/// entrywise complex conjugate of the gate matrix instead.
pub(crate) fn apply_gate_flat(amps: &mut [Complex64], gate: &Gate, offset: usize, conj: bool) {
    match gate {
        Gate::PauliX(q) => apply_x(amps, q + offset),
        Gate::Cnot { control, target } => apply_cnot(amps, control + offset, target + offset),
        Gate::ControlledRy { angle, control, target } => {
            apply_controlled_1q(amps, control + offset, target + offset, &ry_matrix(*angle))
        }
        Gate::ConditionalRy {
            controls,
            angles,
            target,
        } => {
            let mut table = vec![None; 1 << controls.len()];
            for (&x, &a) in angles {
                let (s, c) = (a / 2.0).sin_cos();
                table[x] = Some((c, s));
            }
            let shifted: Vec<usize> = controls.iter().map(|q| q + offset).collect();
            apply_conditional_ry(amps, &shifted, &table, target + offset);
        }
        Gate::DenseBlock { qubits, matrix } => {
            let shifted: Vec<usize> = qubits.iter().map(|q| q + offset).collect();
            apply_dense(amps, &shifted, matrix, conj);
        }
        single => {
            let m = single.single_qubit_matrix().expect("uncontrolled single-qubit gate");
            let m = if conj { conj2(&m) } else { m };
            apply_1q(amps, single.qubits()[0] + offset, &m);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_zero_bits() {
        assert_eq!(insert_zero(0b11, 1), 0b101);
        assert_eq!(insert_zero(0b11, 0), 0b110);
        let mut seen = Vec::new();
        for_each_zero_base(16, &[1, 3], |i| seen.push(i));
        assert_eq!(seen, vec![0, 1, 4, 5]);
    }

    #[test]
    fn gather_bits() {
        assert_eq!(gather(0b1010, &[1, 3]), 0b11);
        assert_eq!(gather(0b1010, &[3, 0]), 0b01);
    }
}
