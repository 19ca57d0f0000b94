//! Nonnegative least squares (Lawson–Hanson active-set method).

use nalgebra::{DMatrix, DVector};

/// Solution of `min ‖A x - b‖₂` subject to `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct NnlsSolution {
    pub x: DVector<f64>,
    pub residual: f64,
    pub converged: bool,
}

fn solve_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[usize]) -> DVector<f64> {
    let sub = a.select_columns(passive);
    let svd = sub.svd(true, true);
    let eps = 1e-13 * svd.singular_values.max().max(f64::MIN_POSITIVE);
    svd.solve(b, eps).expect("u and v_t were computed")
}

pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, max_iter: usize) -> NnlsSolution {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs())) * b.norm().max(1.0);
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let mut converged = false;
    for _ in 0..max_iter {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..n).filter(|&j| !passive[j] && w[j] > tol).max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = candidate else {
            converged = true;
            break;
        };
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            if idx.is_empty() {
                break;
            }
            let z = solve_passive(a, b, &idx);
            if z.iter().all(|&v| v > 0.0) {
                x.fill(0.0);
                for (k, &col) in idx.iter().enumerate() {
                    x[col] = z[k];
                }
                break;
            }
            // Step back towards x until the first passive coordinate hits zero.
            let mut alpha: f64 = 1.0;
            for (k, &col) in idx.iter().enumerate() {
                if z[k] <= 0.0 {
                    let denom = x[col] - z[k];
                    alpha = alpha.min(if denom > 0.0 { x[col] / denom } else { 0.0 });
                }
            }
            for (k, &col) in idx.iter().enumerate() {
                x[col] += alpha * (z[k] - x[col]);
                if x[col] <= 0.0 || (z[k] <= 0.0 && x[col] <= 1e-15 * scale) {
                    x[col] = 0.0;
                    passive[col] = false;
                }
            }
        }
    }
    let residual = (a * &x - b).norm();
    NnlsSolution { x, residual, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive oracle: least squares on every support, keep feasible ones.
    fn brute(a: &DMatrix<f64>, b: &DVector<f64>) -> f64 {
        let n = a.ncols();
        let mut best = b.norm();
        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|&k| mask & (1 << k) != 0).collect();
            let z = solve_passive(a, b, &idx);
            if z.iter().all(|&v| v >= -1e-12) {
                let mut x = DVector::zeros(n);
                for (k, &c) in idx.iter().enumerate() {
                    x[c] = z[k].max(0.0);
                }
                best = best.min((a * x - b).norm());
            }
        }
        best
    }

    #[test]
    fn matches_exhaustive_search() {
        let mut s = 7u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for _ in 0..40 {
            let a = DMatrix::from_fn(5, 4, |_, _| next());
            let b = DVector::from_fn(5, |_, _| next());
            let sol = nnls(&a, &b, 100);
            assert!(sol.converged);
            assert!(sol.x.iter().all(|&v| v >= 0.0));
            assert!((sol.residual - brute(&a, &b)).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_nonnegative_combination() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 1.0, 0.0, 1.0, 1.0]);
        let b = DVector::from_row_slice(&[2.0, 3.0]);
        let sol = nnls(&a, &b, 50);
        assert!(sol.residual < 1e-12);
    }
}
