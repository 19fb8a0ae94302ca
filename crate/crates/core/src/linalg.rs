//! Small dense linear algebra over [`Scalar`] entries.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::jet::Scalar;

/// Gauss-Jordan inverse with partial pivoting on point values. Panics on a
/// singular matrix.
pub fn invert<S: Scalar>(m: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = m.len();
    let mut a: Vec<Vec<S>> = m.to_vec();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .value()
                    .norm()
                    .total_cmp(&a[j][col].value().norm())
            })
            .unwrap();
        assert!(a[pivot][col].value().norm() > 0.0, "singular matrix");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].inverse();
        for k in 0..n {
            a[col][k] = a[col][k].times(&p);
            inv[col][k] = inv[col][k].times(&p);
        }
        for row in 0..n {
            if row == col || a[row][col].is_exact_zero() {
                continue;
            }
            let f = a[row][col].clone();
            for k in 0..n {
                let t = f.times(&a[col][k]);
                a[row][k] = a[row][k].minus(&t);
                let t = f.times(&inv[col][k]);
                inv[row][k] = inv[row][k].minus(&t);
            }
        }
    }
    inv
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mat = DMatrix::from_fn(n, n, |i, j| 0.5 * (m[i][j] + m[j][i]));
    let mut ev: Vec<f64> = SymmetricEigen::new(mat).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of a Hermitian matrix given row-major, ascending.
pub fn hermitian_eigenvalues(n: usize, h: &[Complex64]) -> Vec<f64> {
    let mat = DMatrix::from_fn(n, n, |i, j| 0.5 * (h[i * n + j] + h[j * n + i].conj()));
    let mut ev: Vec<f64> = SymmetricEigen::new(mat).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Real parts of point values.
pub fn real_values<S: Scalar>(m: &[Vec<S>]) -> Vec<Vec<f64>> {
    m.iter()
        .map(|row| row.iter().map(|s| s.value().re).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;

    #[test]
    fn inverse_of_jet_matrix() {
        let xs = Jet::coordinates(&[0.3, 0.7], 2);
        let m = vec![
            vec![&xs[0] + &Jet::real(2.0), xs[1].clone()],
            vec![xs[1].clone(), (&xs[0] * &xs[1]).exp()],
        ];
        let inv = invert(&m);
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Jet::real(0.0);
                for k in 0..2 {
                    s = &s + &(&m[i][k] * &inv[k][j]);
                }
                let e = if i == j { 1.0 } else { 0.0 };
                for (idx, co) in s.coefficients().iter().enumerate() {
                    let target = if idx == 0 { e } else { 0.0 };
                    assert!((co - Complex64::new(target, 0.0)).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let m = vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ];
        let inv = invert(&m);
        assert_eq!(inv[0][1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn eigenvalues_sorted() {
        let ev = symmetric_eigenvalues(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }
}
