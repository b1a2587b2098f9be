//! Small dense linear algebra: 3x3 systems, orthonormalization, and
//! eigenvalues of small symmetric matrices. Everything here operates on
//! matrices of dimension at most a few dozen, so simple direct methods
//! are both adequate and easy to audit.

// Indexed loops mirror the textbook formulas for this matrix code.
#![allow(clippy::needless_range_loop)]

use crate::su2::{adjoint, AlgebraElement, GroupElement};

/// Row-major 3x3 matrix acting on algebra elements.
#[derive(Debug, Clone, Copy)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);

    /// Matrix of the adjoint action of `g` in the basis {i, j, k}.
    pub fn from_adjoint(g: &GroupElement) -> Mat3 {
        let cols = AlgebraElement::basis().map(|e| adjoint(g, &e));
        let mut m = [[0.0; 3]; 3];
        for (c, col) in cols.iter().enumerate() {
            m[0][c] = col.x;
            m[1][c] = col.y;
            m[2][c] = col.z;
        }
        Mat3(m)
    }

    pub fn sub(&self, other: &Mat3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = self.0[r][c] - other.0[r][c];
            }
        }
        Mat3(m)
    }

    pub fn mul_vec(&self, v: &AlgebraElement) -> AlgebraElement {
        let x = [v.x, v.y, v.z];
        let mut out = [0.0; 3];
        for r in 0..3 {
            out[r] = (0..3).map(|c| self.0[r][c] * x[c]).sum();
        }
        AlgebraElement::new(out[0], out[1], out[2])
    }

    pub fn transpose(&self) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = self.0[c][r];
            }
        }
        Mat3(m)
    }

    pub fn mul(&self, other: &Mat3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = (0..3).map(|k| self.0[r][k] * other.0[k][c]).sum();
            }
        }
        Mat3(m)
    }

    pub fn add(&self, other: &Mat3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = self.0[r][c] + other.0[r][c];
            }
        }
        Mat3(m)
    }

    /// Solve `self * x = b` by Gaussian elimination with partial
    /// pivoting. Returns `None` when the pivot falls below `tol`.
    pub fn solve(&self, b: &AlgebraElement, tol: f64) -> Option<AlgebraElement> {
        let mut a = self.0;
        let mut rhs = [b.x, b.y, b.z];
        for col in 0..3 {
            let (pivot_row, pivot) = (col..3)
                .map(|r| (r, a[r][col].abs()))
                .max_by(|l, r| l.1.total_cmp(&r.1))
                .unwrap();
            if pivot < tol {
                return None;
            }
            a.swap(col, pivot_row);
            rhs.swap(col, pivot_row);
            for r in (col + 1)..3 {
                let f = a[r][col] / a[col][col];
                for c in col..3 {
                    a[r][c] -= f * a[col][c];
                }
                rhs[r] -= f * rhs[col];
            }
        }
        let mut x = [0.0; 3];
        for row in (0..3).rev() {
            let mut s = rhs[row];
            for c in (row + 1)..3 {
                s -= a[row][c] * x[c];
            }
            x[row] = s / a[row][row];
        }
        Some(AlgebraElement::new(x[0], x[1], x[2]))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthonormalize `rows` in place by modified Gram-Schmidt with one
/// re-orthogonalization pass, dropping rows whose residual norm falls
/// below `tol`. Returns the retained orthonormal rows (the row-space
/// basis); their count is the numerical rank.
pub fn orthonormal_rows(rows: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let n = norm(&v);
        if n > tol {
            for vi in v.iter_mut() {
                *vi /= n;
            }
            basis.push(v);
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of `constraints`
/// inside R^dim. The constraint rows need not be independent.
pub fn null_space(constraints: &[Vec<f64>], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    let row_basis = orthonormal_rows(constraints, tol);
    let mut basis = row_basis.clone();
    let mut complement = Vec::new();
    for axis in 0..dim {
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let n = norm(&v);
        if n > tol {
            for vi in v.iter_mut() {
                *vi /= n;
            }
            complement.push(v.clone());
            basis.push(v);
        }
    }
    complement
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
/// Returns the eigenvalues sorted ascending.
pub fn symmetric_eigenvalues(mat: &[Vec<f64>]) -> Vec<f64> {
    let n = mat.len();
    let mut a: Vec<Vec<f64>> = mat.to_vec();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

/// Singular values of a small (possibly non-square) matrix, ascending:
/// square roots of the eigenvalues of A^T A.
pub fn singular_values(mat: &[Vec<f64>]) -> Vec<f64> {
    if mat.is_empty() {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut ata = vec![vec![0.0; cols]; cols];
    for row in mat {
        for i in 0..cols {
            for j in 0..cols {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    symmetric_eigenvalues(&ata)
        .into_iter()
        .map(|e| e.max(0.0).sqrt())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_3x3() {
        let m = Mat3([[2.0, 1.0, 0.0], [1.0, 3.0, -1.0], [0.0, -1.0, 4.0]]);
        let x = AlgebraElement::new(0.3, -0.7, 1.1);
        let b = m.mul_vec(&x);
        let back = m.solve(&b, 1e-12).unwrap();
        assert!(back.sub(&x).norm() < 1e-12);
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = Mat3([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]]);
        assert!(m
            .solve(&AlgebraElement::new(1.0, 2.0, 0.0), 1e-10)
            .is_none());
    }

    #[test]
    fn null_space_dimensions() {
        // Two independent constraints in R^4 leave a 2-dim complement.
        let rows = vec![
            vec![1.0, 0.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0, 0.0],
            vec![2.0, 1.0, 0.0, 0.0], // dependent
        ];
        let ns = null_space(&rows, 4, 1e-10);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert!(dot(v, r).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_eigenvalues() {
        let m = vec![
            vec![2.0, 1.0, 0.0],
            vec![1.0, 2.0, 0.0],
            vec![0.0, 0.0, 5.0],
        ];
        let eigs = symmetric_eigenvalues(&m);
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
        assert!((eigs[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn singular_values_of_diag() {
        let m = vec![vec![3.0, 0.0], vec![0.0, -4.0], vec![0.0, 0.0]];
        let sv = singular_values(&m);
        assert!((sv[0] - 3.0).abs() < 1e-12);
        assert!((sv[1] - 4.0).abs() < 1e-12);
    }
}
