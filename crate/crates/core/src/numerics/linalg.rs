//! Small dense linear algebra: cyclic Jacobi eigen-decomposition, one-sided
//! Jacobi singular values and Gram–Schmidt under a bilinear form.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Asymmetry (relative to `max(1, ‖m‖)`) tolerated by [`sym_eigen`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: DVector<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: DMatrix<f64>,
}

impl SymEigen {
    /// Sum of the `k` smallest eigenvalues.
    pub fn sum_smallest(&self, k: usize) -> f64 {
        self.values.iter().take(k).sum()
    }

    /// Sum of the `k` largest eigenvalues.
    pub fn sum_largest(&self, k: usize) -> f64 {
        self.values.iter().rev().take(k).sum()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Symmetric eigen-decomposition by cyclic Jacobi rotations.
pub fn sym_eigen(m: &DMatrix<f64>) -> Result<SymEigen> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::NotSquare { rows: n, cols: m.ncols() });
    }
    let scale = max_abs(m).max(1.0);
    let asym = max_abs(&(m - m.transpose()));
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::NonSymmetric { asymmetry: asym });
    }
    let mut a = (m + m.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= f64::EPSILON * 1e-3 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| a[(i, i)]));
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &v.column(i));
    }
    Ok(SymEigen { values, vectors })
}

/// Singular values (descending) by one-sided Jacobi rotations; accurate for
/// small singular values, which matters for focal-point multiplicities.
pub fn singular_values(a: &DMatrix<f64>) -> DVector<f64> {
    let (rows, cols) = a.shape();
    let mut u = if rows >= cols { a.clone() } else { a.transpose() };
    let n = u.ncols();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = u.column(p).norm_squared();
                let beta: f64 = u.column(q).norm_squared();
                let gamma: f64 = u.column(p).dot(&u.column(q));
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..u.nrows() {
                    let up = u[(k, p)];
                    let uq = u[(k, q)];
                    u[(k, p)] = c * up - s * uq;
                    u[(k, q)] = s * up + c * uq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = (0..n).map(|j| u.column(j).norm()).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    DVector::from_vec(s)
}

/// Gram–Schmidt (twice, for stability) of `vectors` under `⟨a, b⟩ = aᵀ G b`.
///
/// Fails with `DegenerateSpan` when a residual falls below `1e-10` of the
/// original vector length.
pub fn orthonormalize(vectors: &[DVector<f64>], inner: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != inner.nrows() {
            return Err(Error::DimensionMismatch { expected: inner.nrows(), got: v.len() });
        }
        let original = ip(inner, v, v).max(0.0).sqrt();
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = ip(inner, b, &w);
                w.axpy(-c, b, 1.0);
            }
        }
        let len = ip(inner, &w, &w).max(0.0).sqrt();
        if original == 0.0 || len <= 1e-10 * original {
            return Err(Error::DegenerateSpan { index, pivot: len });
        }
        basis.push(w / len);
    }
    Ok(basis)
}

/// Extend an orthonormal set to an orthonormal basis of the whole space,
/// drawing candidates from the coordinate directions with largest residual.
pub fn complete_basis(partial: &[DVector<f64>], inner: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let n = inner.nrows();
    let mut basis: Vec<DVector<f64>> = partial.to_vec();
    while basis.len() < n {
        let mut best: Option<(f64, DVector<f64>)> = None;
        for i in 0..n {
            let mut w = DVector::zeros(n);
            w[i] = 1.0;
            let norm0 = ip(inner, &w, &w).sqrt();
            w /= norm0;
            for _ in 0..2 {
                for b in &basis {
                    let c = ip(inner, b, &w);
                    w.axpy(-c, b, 1.0);
                }
            }
            let len = ip(inner, &w, &w).max(0.0).sqrt();
            if best.as_ref().is_none_or(|(l, _)| len > *l) {
                best = Some((len, w));
            }
        }
        let (len, w) = best.expect("dimension > 0");
        basis.push(w / len);
    }
    basis
}

/// `aᵀ G b`.
pub fn ip(g: &DMatrix<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let n = a.len();
    let mut s = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += g[(i, j)] * b[j];
        }
        s += a[i] * row;
    }
    s
}

/// Largest absolute entry of `m - mᵀ`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    max_abs(&(m - m.transpose()))
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Spectral norm via singular values.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m)[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_eigenvalues() {
        let e = sym_eigen(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(e.values.as_slice(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_sorted() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let e = sym_eigen(&m).unwrap();
        assert_eq!(e.values.as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn swap_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = sym_eigen(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(sym_eigen(&DMatrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(sym_eigen(&m), Err(Error::NonSymmetric { .. })));
    }

    #[test]
    fn gram_schmidt_examples() {
        let eye = DMatrix::identity(2, 2);
        let e1 = DVector::from_vec(vec![1.0, 0.0]);
        let e2 = DVector::from_vec(vec![0.0, 1.0]);
        let out = orthonormalize(&[e1.clone(), e2.clone()], &eye).unwrap();
        assert_eq!(out, vec![e1.clone(), e2.clone()]);

        let out = orthonormalize(&[e1.clone(), DVector::from_vec(vec![1.0, 1.0])], &eye).unwrap();
        assert!((&out[1] - &e2).norm() < 1e-15);

        let weighted = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0]));
        let out = orthonormalize(&[e1], &weighted).unwrap();
        assert!((out[0][0] - 0.5).abs() < 1e-15 && out[0][1] == 0.0);
    }

    #[test]
    fn gram_schmidt_detects_rank_deficiency() {
        let eye = DMatrix::identity(2, 2);
        let a = DVector::from_vec(vec![1.0, 2.0]);
        let err = orthonormalize(&[a.clone(), a * 3.0], &eye).unwrap_err();
        assert!(matches!(err, Error::DegenerateSpan { index: 1, .. }));
    }

    #[test]
    fn singular_values_of_diagonal() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, -3.0, 2.0, 0.0]);
        let s = singular_values(&m);
        assert!((s[0] - 3.0).abs() < 1e-14 && (s[1] - 2.0).abs() < 1e-14);
        let tiny = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-14]);
        assert!((singular_values(&tiny)[1] - 1e-14).abs() < 1e-28);
    }

    fn symmetric_strategy() -> impl Strategy<Value = DMatrix<f64>> {
        (1usize..=12).prop_flat_map(|n| {
            proptest::collection::vec(-10.0f64..10.0, n * n).prop_map(move |data| {
                let m = DMatrix::from_vec(n, n, data);
                (&m + m.transpose()) * 0.5
            })
        })
    }

    proptest! {
        #[test]
        fn eigen_reconstruction(m in symmetric_strategy()) {
            let e = sym_eigen(&m).unwrap();
            let n = m.nrows();
            let recon = &e.vectors * DMatrix::from_diagonal(&e.values) * e.vectors.transpose();
            let norm = m.norm().max(1.0);
            prop_assert!((recon - &m).norm() <= 1e-9 * norm);
            let ortho = e.vectors.transpose() * &e.vectors - DMatrix::<f64>::identity(n, n);
            prop_assert!(ortho.norm() < 1e-10);
            for i in 0..n {
                let residual = &m * e.vectors.column(i) - e.vectors.column(i) * e.values[i];
                prop_assert!(residual.norm() <= 1e-10 * norm);
            }
            prop_assert!(e.values.as_slice().windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn singular_values_match_eigen_of_gram(data in proptest::collection::vec(-5.0f64..5.0, 9)) {
            let a = DMatrix::from_vec(3, 3, data);
            let s = singular_values(&a);
            let e = sym_eigen(&(a.transpose() * &a)).unwrap();
            for i in 0..3 {
                prop_assert!((s[i] * s[i] - e.values[2 - i]).abs() < 1e-9 * (1.0 + e.values[2]));
            }
        }
    }
}
