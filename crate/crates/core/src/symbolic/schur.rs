//! Schur polynomials in Chern variables, generalized Schur polynomials in
//! Segre variables, and their expansions in Chern roots.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::partition::{conjugate_partition, enumerate_partitions, IntSequence};
use super::poly::{Alphabet, Chern, Poly, Roots, Segre};
use super::SymbolicError;
use crate::det::{laplace_det, DetRing};

impl<A: Alphabet> DetRing for Poly<A> {
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// `det(a_{σ_i + j - i})` for the given sequence of entries.
pub(crate) fn jacobi_trudi_det<A: Alphabet>(sigma: &IntSequence, entry: impl Fn(i64) -> Poly<A>) -> Poly<A> {
    let k = sigma.len();
    let parts = sigma.entries();
    let m: Vec<Vec<Poly<A>>> =
        (0..k).map(|i| (0..k).map(|j| entry(parts[i] + j as i64 - i as i64)).collect()).collect();
    laplace_det(&m, &Poly::zero(), &Poly::one())
}

/// `S_σ(c_1, …, c_r) = det(c_{σ_i + j - i})` with `c_0 = 1` and `c_ℓ = 0`
/// outside `[0, r]`. Any partition is accepted, including ones whose parts
/// exceed `r`.
pub fn schur_in_chern(sigma: &IntSequence, r: usize) -> Result<Poly<Chern>, SymbolicError> {
    if !sigma.is_partition() {
        return Err(SymbolicError::NotAPartition(sigma.clone()));
    }
    Ok(jacobi_trudi_det(sigma, |l| chern_var(l, r)))
}

fn chern_var(l: i64, r: usize) -> Poly<Chern> {
    match l {
        0 => Poly::one(),
        l if l < 0 || l as usize > r => Poly::zero(),
        l => Poly::var(l as usize),
    }
}

/// `s_σ = det(s_{σ_i + j - i})` for any integer sequence, with `s_0 = 1`,
/// `s_ℓ = 0` for `ℓ < 0` and every `s_ℓ`, `ℓ ≥ 1`, a free variable.
pub fn gschur_in_segre(sigma: &IntSequence) -> Poly<Segre> {
    jacobi_trudi_det(sigma, |l| match l {
        0 => Poly::one(),
        l if l < 0 => Poly::zero(),
        l => Poly::var(l as usize),
    })
}

/// As [`gschur_in_segre`], with `s_ℓ = 0` for `ℓ > n_max` as well.
pub fn gschur_in_segre_truncated(sigma: &IntSequence, n_max: usize) -> Poly<Segre> {
    gschur_in_segre(sigma).kill_vars(&((n_max + 1)..=gschur_max_var(sigma)).collect::<Vec<_>>())
}

fn gschur_max_var(sigma: &IntSequence) -> usize {
    let k = sigma.len() as i64;
    sigma.entries().iter().map(|&s| (s + k).max(0) as usize).max().unwrap_or(0)
}

/// `s_k` in Chern variables of a rank-`r` bundle: the degree-`k` part of
/// `(1 + c_1 + … + c_r)^{-1}`.
pub fn segre_in_chern(k: usize, r: usize) -> Poly<Chern> {
    segre_table(k, r).swap_remove(k)
}

fn segre_table(k: usize, r: usize) -> Vec<Poly<Chern>> {
    let mut s: Vec<Poly<Chern>> = vec![Poly::one()];
    for d in 1..=k {
        let mut acc = Poly::zero();
        for j in 1..=d.min(r) {
            acc = &acc - &(&Poly::var(j) * &s[d - j]);
        }
        s.push(acc);
    }
    s
}

/// Rewrites Segre variables of a rank-`r` bundle in its Chern variables.
pub fn segre_to_chern(p: &Poly<Segre>, r: usize) -> Poly<Chern> {
    let table = segre_table(p.num_vars(), r);
    p.substitute(|i| table[i].clone())
}

/// `e_k(x_1, …, x_r)`.
pub fn elementary(k: usize, r: usize) -> Poly<Roots> {
    let mut out = Poly::zero();
    for subset in 0u32..(1 << r) {
        if subset.count_ones() as usize == k {
            let e: Vec<u32> = (0..r).map(|i| (subset >> i) & 1).collect();
            out = &out + &Poly::monomial(&e, 1);
        }
    }
    out
}

/// `h_k(x_1, …, x_r)`.
pub fn complete_homogeneous(k: usize, r: usize) -> Poly<Roots> {
    fn rec(var: usize, r: usize, left: u32, acc: &mut Vec<u32>, out: &mut Poly<Roots>) {
        if var == r - 1 {
            acc.push(left);
            *out = &*out + &Poly::monomial(acc, 1);
            acc.pop();
            return;
        }
        for a in 0..=left {
            acc.push(a);
            rec(var + 1, r, left - a, acc, out);
            acc.pop();
        }
    }
    let mut out = Poly::zero();
    if r == 0 {
        return if k == 0 { Poly::one() } else { out };
    }
    rec(0, r, k as u32, &mut Vec::new(), &mut out);
    out
}

/// Alphabets that have an image in the Chern roots `x_i` of the dual bundle.
pub trait RootExpansion: Alphabet {
    fn root_image(k: usize, r: usize) -> Poly<Roots>;
}

impl RootExpansion for Chern {
    /// `c_k(E) = e_k(-x)`, zero above the rank.
    fn root_image(k: usize, r: usize) -> Poly<Roots> {
        if k > r {
            return Poly::zero();
        }
        let e = elementary(k, r);
        if k % 2 == 1 {
            -e
        } else {
            e
        }
    }
}

impl RootExpansion for Segre {
    /// `s_k(E) = h_k(x)`.
    fn root_image(k: usize, r: usize) -> Poly<Roots> {
        complete_homogeneous(k, r)
    }
}

/// Substitutes Chern or Segre variables by their expressions in the roots.
pub fn expand_in_roots<A: RootExpansion>(q: &Poly<A>, r: usize) -> Poly<Roots> {
    q.substitute(|k| A::root_image(k, r))
}

/// `s_σ = (-1)^{|σ|} S_{σ'}` as an exact identity in Chern variables.
pub fn jacobi_trudi_check(sigma: &IntSequence, r: usize) -> Result<bool, SymbolicError> {
    let conj = conjugate_partition(sigma)?;
    let lhs = segre_to_chern(&gschur_in_segre(sigma), r);
    let mut rhs = schur_in_chern(&conj, r)?;
    if sigma.weight() % 2 != 0 {
        rhs = -rhs;
    }
    Ok(lhs == rhs)
}

/// Coefficients of `S_σ · S_τ` in the basis `{S_λ : λ ∈ Λ(|σ|+|τ|, r)}`,
/// found by an exact linear solve. Zero coefficients are omitted.
pub fn schur_product_expand(
    sigma: &IntSequence,
    tau: &IntSequence,
    r: usize,
) -> Result<BTreeMap<IntSequence, BigInt>, SymbolicError> {
    let product = &schur_in_chern(sigma, r)? * &schur_in_chern(tau, r)?;
    let weight = sigma.weight() + tau.weight();
    let basis = enumerate_partitions(weight as usize, r);
    let columns: Vec<Poly<Chern>> = basis.iter().map(|l| schur_in_chern(l, r)).collect::<Result<_, _>>()?;
    let mut monomials: Vec<Vec<u32>> = columns.iter().flat_map(|c| c.terms().map(|(e, _)| e.clone())).collect();
    monomials.extend(product.terms().map(|(e, _)| e.clone()));
    monomials.sort();
    monomials.dedup();

    // Augmented system: rows are monomials, columns basis elements + rhs.
    let cols = basis.len();
    let mut a: Vec<Vec<BigRational>> = monomials
        .iter()
        .map(|m| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| BigRational::from_integer(c.coeff(m))).collect();
            row.push(BigRational::from_integer(product.coeff(m)));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else {
            return Err(SymbolicError::Inconsistent(format!("Schur basis of degree {weight} is degenerate")));
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..=cols {
                    let sub = &f * &a[row][j];
                    a[i][j] = &a[i][j] - &sub;
                }
            }
        }
        pivots.push(row);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[cols].is_zero()) {
        return Err(SymbolicError::Inconsistent(format!("{sigma}·{tau} is outside the Schur span")));
    }
    let mut out = BTreeMap::new();
    for (col, &r) in pivots.iter().enumerate() {
        let v = &a[r][cols];
        if !v.is_integer() {
            return Err(SymbolicError::Inconsistent(format!("non-integral coefficient {v}")));
        }
        if !v.is_zero() {
            out.insert(basis[col].clone(), v.to_integer());
        }
    }
    Ok(out)
}

/// True when every coefficient of the expansion is nonnegative.
pub fn is_nonnegative_expansion(coeffs: &BTreeMap<IntSequence, BigInt>) -> bool {
    coeffs.values().all(|c| !c.is_negative())
}
