//! Small dense complex linear algebra used by the numeric modules.
//!
//! Everything here works on matrices of size at most `C(n, n/2)` for the
//! ambient dimensions this crate targets, so allocation-free kernels are used
//! where they sit in hot loops (determinants of minors) and nalgebra elsewhere.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::C64;

/// Determinant of a `k x k` row-major complex matrix by Gaussian elimination
/// with partial pivoting. The buffer is overwritten.
pub(crate) fn det_in_place(m: &mut [C64], k: usize) -> C64 {
    debug_assert_eq!(m.len(), k * k);
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..k {
        let mut pivot = col;
        let mut best = m[col * k + col].norm_sqr();
        for row in col + 1..k {
            let v = m[row * k + col].norm_sqr();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..k {
                m.swap(col * k + j, pivot * k + j);
            }
            det = -det;
        }
        let d = m[col * k + col];
        det *= d;
        for row in col + 1..k {
            let factor = m[row * k + col] / d;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for j in col..k {
                let sub = factor * m[col * k + j];
                m[row * k + j] -= sub;
            }
        }
    }
    det
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub(crate) fn hermitian_eigen(h: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    // Symmetrize explicitly: the solver only reads one triangle.
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Smallest eigenvalue and a unit eigenvector for it.
pub(crate) fn min_eigenpair(h: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let (values, vectors) = hermitian_eigen(h);
    (values[0], vectors.column(0).into_owned())
}

/// Largest absolute deviation from Hermitian symmetry.
pub(crate) fn hermitian_residual(h: &DMatrix<C64>) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..h.nrows() {
        for j in 0..h.ncols() {
            r = r.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    r
}

pub(crate) fn max_abs(h: &DMatrix<C64>) -> f64 {
    h.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Orthonormalizes the columns of `frame` in place (modified Gram-Schmidt).
/// Returns `false` if the columns are numerically dependent.
pub(crate) fn orthonormalize(frame: &mut [Vec<C64>]) -> bool {
    for i in 0..frame.len() {
        for j in 0..i {
            let (head, tail) = frame.split_at_mut(i);
            let proj = inner(&head[j], &tail[0]);
            for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                *x -= proj * y;
            }
        }
        let norm = norm(&frame[i]);
        if norm < 1e-12 {
            return false;
        }
        for x in frame[i].iter_mut() {
            *x /= norm;
        }
    }
    true
}

/// `<a, b>` conjugate-linear in the first slot.
pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = [c(1.0, 2.0), c(0.5, -1.0), c(3.0, 0.0), c(-2.0, 1.0)];
        let expected = m[0] * m[3] - m[1] * m[2];
        let mut buf = m;
        assert!((det_in_place(&mut buf, 2) - expected).norm() < 1e-14);

        let m3 = [
            c(2.0, 0.0),
            c(0.0, 1.0),
            c(1.0, 1.0),
            c(0.0, -1.0),
            c(3.0, 0.0),
            c(1.0, 0.0),
            c(1.0, -1.0),
            c(1.0, 0.0),
            c(4.0, 0.0),
        ];
        let e = |i: usize, j: usize| m3[i * 3 + j];
        let expected = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
        let mut buf = m3;
        assert!((det_in_place(&mut buf, 3) - expected).norm() < 1e-12);
    }

    #[test]
    fn singular_determinant_is_zero() {
        let mut m = [c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        assert_eq!(det_in_place(&mut m, 2), c(0.0, 0.0));
    }

    #[test]
    fn eigen_sorted_ascending() {
        let h = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]);
        let (values, vectors) = hermitian_eigen(&h);
        assert!((values[0] - 1.0).abs() < 1e-12);
        assert!((values[1] - 3.0).abs() < 1e-12);
        let v = vectors.column(0);
        let hv = &h * v;
        for i in 0..2 {
            assert!((hv[i] - v[i] * values[0]).norm() < 1e-12);
        }
    }

    #[test]
    fn gram_schmidt_detects_dependence() {
        let mut frame = vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(2.0, 0.0), c(0.0, 0.0)]];
        assert!(!orthonormalize(&mut frame));
        let mut frame = vec![vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 1.0), c(2.0, 0.0)]];
        assert!(orthonormalize(&mut frame));
        assert!(inner(&frame[0], &frame[1]).norm() < 1e-14);
        assert!((norm(&frame[1]) - 1.0).abs() < 1e-14);
    }
}
