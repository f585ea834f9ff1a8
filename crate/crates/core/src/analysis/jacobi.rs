//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{PiteError, Result};

pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues ascending, eigenvectors as matching columns.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
    pub sweeps: usize,
}

fn off_norm(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Hermiticity defect `‖A - A†‖_max`.
pub fn hermitian_defect(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Diagonalizes a Hermitian matrix by cyclic sweeps of complex Givens
/// rotations until the off-diagonal Frobenius norm drops below
/// `1e-12 · max(1, ‖A‖_F)`.
pub fn jacobi_eigen(matrix: &DMatrix<Complex64>) -> Result<Eigen> {
    let n = matrix.nrows();
    if n != matrix.ncols() {
        return Err(PiteError::InvalidArgument(format!(
            "eigensolver needs a square matrix, got {}x{}",
            n,
            matrix.ncols()
        )));
    }
    if hermitian_defect(matrix) > 1e-10 * (1.0 + matrix.norm()) {
        return Err(PiteError::InvalidArgument("matrix is not Hermitian".into()));
    }
    let mut a = matrix.clone();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let tol = JACOBI_TOL * a.norm().max(1.0);
    let mut sweeps = 0;
    while off_norm(&a) > tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(PiteError::NoConvergence {
                sweeps,
                off: off_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigen {
        values,
        vectors,
        sweeps,
    })
}

/// Zeroes `a[p][q]` with `A <- G† A G`, `V <- V G` where
/// `G = [[c, s], [-s e^{-iφ}, c e^{-iφ}]]` on rows/columns `p, q`
/// and `a[p][q] = |b| e^{iφ}`.
fn rotate(a: &mut DMatrix<Complex64>, v: &mut DMatrix<Complex64>, p: usize, q: usize) {
    let b = a[(p, q)];
    let abs_b = b.norm();
    if abs_b < 1e-300 {
        return;
    }
    let phase = b / abs_b;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let theta = (aqq - app) / (2.0 * abs_b);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e = phase.conj();
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -e * s;
    let g_qq = e * c;
    let n = a.nrows();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * abs_b, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * abs_b, 0.0);
    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Largest `‖A v_i - λ_i v_i‖`.
pub fn max_residual(matrix: &DMatrix<Complex64>, eig: &Eigen) -> f64 {
    (0..eig.values.len())
        .map(|i| {
            let col = eig.vectors.column(i);
            (matrix * col - col * Complex64::new(eig.values[i], 0.0)).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_y() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let e = jacobi_eigen(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(max_residual(&m, &e) < 1e-13);
    }

    #[test]
    fn already_diagonal() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(3.0, 0.0), c(-1.0, 0.0)]));
        let e = jacobi_eigen(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 3.0]);
        assert_eq!(e.sweeps, 0);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(jacobi_eigen(&m).is_err());
    }

    fn random_hermitian(n: usize, vals: &[f64]) -> DMatrix<Complex64> {
        let m = DMatrix::from_fn(n, n, |i, j| {
            c(vals[(i * n + j) % vals.len()], vals[(j * n + i + 7) % vals.len()])
        });
        (&m + m.adjoint()) * c(0.5, 0.0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn residual_and_orthonormality(n in 1usize..12, vals in prop::collection::vec(-2.0f64..2.0, 16..64)) {
            let m = random_hermitian(n, &vals);
            let e = jacobi_eigen(&m).unwrap();
            prop_assert!(max_residual(&m, &e) < 1e-10);
            let gram = e.vectors.adjoint() * &e.vectors;
            prop_assert!((gram - DMatrix::<Complex64>::identity(n, n)).norm() < 1e-10);
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let trace: f64 = (0..n).map(|i| m[(i, i)].re).sum();
            prop_assert!((trace - e.values.iter().sum::<f64>()).abs() < 1e-10);
        }
    }
}
