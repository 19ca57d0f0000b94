//! Integer sequences, partitions and their conjugates.

use std::fmt;

use super::SymbolicError;

/// A finite sequence `σ ∈ ℤᵏ`, the index of a (generalized) Schur class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IntSequence(Vec<i64>);

impl IntSequence {
    pub fn new(entries: Vec<i64>) -> Self {
        IntSequence(entries)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|σ| = σ_1 + … + σ_k`.
    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Weakly decreasing and nonnegative.
    pub fn is_partition(&self) -> bool {
        self.0.iter().all(|&x| x >= 0) && self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// `(σ_k, …, σ_1)`.
    pub fn reversed(&self) -> Self {
        IntSequence(self.0.iter().rev().copied().collect())
    }

    /// Drops trailing zeros.
    pub fn trimmed(&self) -> Self {
        let mut v = self.0.clone();
        while v.last() == Some(&0) {
            v.pop();
        }
        IntSequence(v)
    }

    /// Pads with zeros (or truncates zeros) to length `k`.
    pub fn padded(&self, k: usize) -> Self {
        let mut v = self.trimmed().0;
        assert!(v.len() <= k, "cannot pad {self} to length {k}");
        v.resize(k, 0);
        IntSequence(v)
    }

    /// True when `σ` is a partition of its weight into parts `≤ r`, i.e. a
    /// member of `Λ(len, r)`.
    pub fn fits_box(&self, r: usize) -> bool {
        self.is_partition() && self.0.first().map_or(true, |&a| a as usize <= r)
    }
}

impl From<Vec<i64>> for IntSequence {
    fn from(v: Vec<i64>) -> Self {
        IntSequence(v)
    }
}

impl From<&[i64]> for IntSequence {
    fn from(v: &[i64]) -> Self {
        IntSequence(v.to_vec())
    }
}

impl<const K: usize> From<[i64; K]> for IntSequence {
    fn from(v: [i64; K]) -> Self {
        IntSequence(v.to_vec())
    }
}

impl fmt::Display for IntSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `Λ(k, r)`: all `r ≥ σ_1 ≥ … ≥ σ_k ≥ 0` with `|σ| = k`, written with
/// length `k`, in decreasing lexicographic order.
pub fn enumerate_partitions(k: usize, r: usize) -> Vec<IntSequence> {
    fn rec(left: i64, max: i64, slots: usize, acc: &mut Vec<i64>, out: &mut Vec<IntSequence>) {
        if slots == 0 {
            if left == 0 {
                out.push(IntSequence(acc.clone()));
            }
            return;
        }
        if left > max * slots as i64 {
            return;
        }
        for part in (0..=max.min(left)).rev() {
            acc.push(part);
            rec(left - part, part, slots - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(k as i64, r as i64, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `σ'_j = #{i : σ_i ≥ j}`, returned without trailing zeros.
pub fn conjugate_partition(sigma: &IntSequence) -> Result<IntSequence, SymbolicError> {
    if !sigma.is_partition() {
        return Err(SymbolicError::NotAPartition(sigma.clone()));
    }
    let top = sigma.0.first().copied().unwrap_or(0);
    Ok(IntSequence((1..=top).map(|j| sigma.0.iter().filter(|&&x| x >= j).count() as i64).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_boxes() {
        assert_eq!(enumerate_partitions(2, 2), vec![IntSequence::from([2, 0]), IntSequence::from([1, 1])]);
        assert_eq!(
            enumerate_partitions(3, 3),
            vec![IntSequence::from([3, 0, 0]), IntSequence::from([2, 1, 0]), IntSequence::from([1, 1, 1])]
        );
        assert_eq!(enumerate_partitions(0, 4), vec![IntSequence::default()]);
        assert!(enumerate_partitions(3, 0).is_empty());
    }

    #[test]
    fn counts_match_lattice_point_enumeration() {
        for k in 0..=6usize {
            for r in 0..=4usize {
                // every point of {0..r}^k, kept when weakly decreasing with sum k
                let mut brute = 0;
                let total = (r + 1).pow(k as u32);
                for code in 0..total {
                    let mut c = code;
                    let v: Vec<i64> = (0..k)
                        .map(|_| {
                            let d = (c % (r + 1)) as i64;
                            c /= r + 1;
                            d
                        })
                        .collect();
                    let s = IntSequence(v);
                    if s.is_partition() && s.weight() == k as i64 {
                        brute += 1;
                    }
                }
                assert_eq!(enumerate_partitions(k, r).len(), brute, "k={k} r={r}");
            }
        }
    }

    #[test]
    fn conjugates() {
        assert_eq!(conjugate_partition(&[2, 1, 0].into()).unwrap(), IntSequence::from([2, 1]));
        assert_eq!(conjugate_partition(&[1, 1, 1].into()).unwrap(), IntSequence::from([3]));
        assert!(conjugate_partition(&[0, 1].into()).is_err());
        for k in 0..=6 {
            for r in 0..=4 {
                for s in enumerate_partitions(k, r) {
                    let back = conjugate_partition(&conjugate_partition(&s).unwrap()).unwrap();
                    assert_eq!(back, s.trimmed());
                }
            }
        }
    }

    #[test]
    fn display_and_reverse() {
        let s = IntSequence::from([-2, 1, 4]);
        assert_eq!(s.to_string(), "(-2,1,4)");
        assert_eq!(s.reversed(), IntSequence::from([4, 1, -2]));
        assert_eq!(s.weight(), 3);
        assert!(!s.is_partition());
    }
}
