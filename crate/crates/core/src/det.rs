//! Determinants over commutative rings without division.

use std::collections::HashMap;

/// Ring operations needed for a cofactor expansion.
pub(crate) trait DetRing: Clone {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

/// Laplace expansion along rows, memoized on the set of used columns.
/// Zero entries are skipped, so sparse band matrices (the Jacobi–Trudi
/// shape) stay cheap.
pub(crate) fn laplace_det<T: DetRing>(entries: &[Vec<T>], zero: &T, one: &T) -> T {
    let k = entries.len();
    assert!(k < 32, "determinant too large");
    assert!(entries.iter().all(|row| row.len() == k), "matrix must be square");
    let mut memo: HashMap<u32, T> = HashMap::new();
    rec(entries, 0, &mut memo, zero, one)
}

fn rec<T: DetRing>(entries: &[Vec<T>], used: u32, memo: &mut HashMap<u32, T>, zero: &T, one: &T) -> T {
    let k = entries.len();
    let row = used.count_ones() as usize;
    if row == k {
        return one.clone();
    }
    if let Some(v) = memo.get(&used) {
        return v.clone();
    }
    let mut acc = zero.clone();
    let mut position = 0;
    for col in 0..k {
        if used & (1 << col) != 0 {
            continue;
        }
        let e = &entries[row][col];
        if !e.is_zero() {
            let minor = rec(entries, used | (1 << col), memo, zero, one);
            if !minor.is_zero() {
                let term = e.mul(&minor);
                acc = if position % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
        }
        position += 1;
    }
    memo.insert(used, acc.clone());
    acc
}
