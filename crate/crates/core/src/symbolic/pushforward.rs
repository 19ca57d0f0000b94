//! Push-forward of polynomials in the tautological classes `ξ_1, …, ξ_r` of a
//! flag bundle, together with two independent oracles.
//!
//! Sign conventions, in one place:
//!
//! * `x_i` are the Chern roots of the dual bundle and `ξ_i ↦ x_i`;
//! * `s_k(E) = h_k(x)` and `c_k(E) = e_k(-x)`;
//! * for a complete flag bundle the fiber integral is
//!   `Σ_w sign(w)·w(P) / Π_{i<j}(x_j - x_i)`;
//! * a monomial in the form-level classes `Ξ_j = -ξ_j` of degree `d_ρ + k`
//!   differs from the `ξ` monomial by `(-1)^{d_ρ + k}`.

use std::fmt;

use num_bigint::BigInt;

use super::partition::IntSequence;
use super::poly::{Chern, Poly, Roots, Segre, Xi};
use super::schur::{expand_in_roots, gschur_in_segre};
use super::SymbolicError;

/// `0 = ρ_0 < ρ_1 < … < ρ_m = r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlagType {
    rho: Vec<usize>,
}

impl FlagType {
    pub fn new(rho: Vec<usize>) -> Result<Self, SymbolicError> {
        let ok = rho.len() >= 2 && rho[0] == 0 && rho.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(SymbolicError::InvalidFlagType(rho));
        }
        Ok(FlagType { rho })
    }

    /// `ρ = (0, 1, …, r)`.
    pub fn complete(r: usize) -> Self {
        FlagType::new((0..=r).collect()).expect("r >= 1")
    }

    /// `ρ = (0, 1, r)`: lines in a rank-`r` bundle.
    pub fn projective(r: usize) -> Self {
        FlagType::new(vec![0, 1, r]).expect("r >= 2")
    }

    pub fn rho(&self) -> &[usize] {
        &self.rho
    }

    pub fn rank(&self) -> usize {
        *self.rho.last().expect("nonempty")
    }

    pub fn m(&self) -> usize {
        self.rho.len() - 1
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.rank()
    }

    /// Sizes `ρ_s - ρ_{s-1}`, `s = 1..m`.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.rho.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Fiber dimension `d_ρ = Σ_{s<t} b_s b_t` over block sizes `b`.
    pub fn relative_dimension(&self) -> usize {
        let b = self.block_sizes();
        let mut d = 0;
        for s in 0..b.len() {
            for t in s + 1..b.len() {
                d += b[s] * b[t];
            }
        }
        d
    }

    /// Root blocks as 1-based index ranges, one per `s = 1..m`: block `s` is
    /// `r - ρ_s < i ≤ r - ρ_{s-1}`.
    pub fn root_blocks(&self) -> Vec<std::ops::RangeInclusive<usize>> {
        let r = self.rank();
        (1..=self.m()).map(|s| (r - self.rho[s] + 1)..=(r - self.rho[s - 1])).collect()
    }
}

impl fmt::Display for FlagType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rho.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `ν_i = r - ρ_s` for `r - ρ_s < i ≤ r - ρ_{s-1}`.
pub fn dp_nu(rho: &FlagType) -> IntSequence {
    let r = rho.rank();
    let mut nu = vec![0i64; r];
    for (s, block) in rho.root_blocks().into_iter().enumerate() {
        for i in block {
            nu[i - 1] = (r - rho.rho()[s + 1]) as i64;
        }
    }
    IntSequence::new(nu)
}

/// Fails unless `p` is invariant under permutations inside each root block.
fn check_block_symmetry(p: &Poly<Xi>, rho: &FlagType) -> Result<(), SymbolicError> {
    let r = rho.rank();
    if p.num_vars() > r {
        return Err(SymbolicError::TooManyVariables { got: p.num_vars(), rank: r });
    }
    for block in rho.root_blocks() {
        let (lo, hi) = (*block.start(), *block.end());
        // Adjacent transpositions generate the block's symmetric group.
        for i in lo..hi {
            let mut perm: Vec<usize> = (0..r).collect();
            perm.swap(i - 1, i);
            if p.permute(&perm) != *p {
                return Err(SymbolicError::BlockSymmetry { flag: rho.clone(), i, j: i + 1 });
            }
        }
    }
    Ok(())
}

/// `(π_ρ)_* Σ a_λ ξ^λ = Σ a_λ s_{(λ - ν)^←}(E)`.
pub fn dp_pushforward(p: &Poly<Xi>, rho: &FlagType) -> Result<Poly<Segre>, SymbolicError> {
    check_block_symmetry(p, rho)?;
    let r = rho.rank();
    let nu = dp_nu(rho);
    let mut out = Poly::zero();
    for (e, a) in p.terms() {
        let seq: Vec<i64> = (0..r).map(|i| e.get(i).copied().unwrap_or(0) as i64 - nu.entries()[i]).collect();
        let class = gschur_in_segre(&IntSequence::new(seq).reversed());
        out = &out + &class.scale(a);
    }
    Ok(out)
}

/// `(-1)^{d_ρ + k}` relating a degree-`d_ρ + k` monomial in `Ξ = -ξ` to the
/// same monomial in `ξ`.
pub fn forms_sign_adjust(f_degree: usize, rho: &FlagType, k: usize) -> Result<i32, SymbolicError> {
    let d = rho.relative_dimension();
    if f_degree != d + k {
        return Err(SymbolicError::DegreeMismatch { degree: f_degree, expected: d + k });
    }
    Ok(if (d + k) % 2 == 0 { 1 } else { -1 })
}

fn permutations(r: usize) -> Vec<(Vec<usize>, i64)> {
    // Heap's algorithm; each swap flips the sign.
    let mut out = Vec::new();
    let mut a: Vec<usize> = (0..r).collect();
    let mut c = vec![0usize; r];
    let mut sign = 1i64;
    out.push((a.clone(), sign));
    let mut i = 0;
    while i < r {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            sign = -sign;
            out.push((a.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Antisymmetrizes over the variables `1..=r` and divides by
/// `Π_{i<j}(x_j - x_i)`.
fn symmetrize(p: &Poly<Roots>, r: usize) -> Result<Poly<Roots>, SymbolicError> {
    let mut acc = Poly::zero();
    for (perm, sign) in permutations(r) {
        acc = &acc + &p.permute(&perm).scale(&BigInt::from(sign));
    }
    for i in 1..=r {
        for j in i + 1..=r {
            acc = acc.div_difference(j, i).ok_or(SymbolicError::InexactDivision)?;
        }
    }
    Ok(acc)
}

/// Complete-flag push-forward by full symmetrization in the roots.
pub fn complete_flag_oracle(p: &Poly<Xi>, r: usize) -> Result<Poly<Roots>, SymbolicError> {
    if p.num_vars() > r {
        return Err(SymbolicError::TooManyVariables { got: p.num_vars(), rank: r });
    }
    symmetrize(&p.relabel(), r)
}

/// Push-forward of `ζ^{r-1+k}` along `ℙ(E) → X` in Chern variables, from the
/// relation `Σ c_i(E) ζ^{r-i} = 0`: the answer `a_k` satisfies `a_0 = 1`
/// and `a_k = -Σ_{i=1}^{min(k,r)} c_i a_{k-i}`.
pub fn projective_oracle(k: usize, r: usize) -> Poly<Chern> {
    let mut a: Vec<Poly<Chern>> = vec![Poly::one()];
    for d in 1..=k {
        let mut acc = Poly::zero();
        for i in 1..=d.min(r) {
            acc = &acc - &(&Poly::var(i) * &a[d - i]);
        }
        a.push(acc);
    }
    a.swap_remove(k)
}

/// Complete-flag push-forward computed through the tower
/// `F(E) → ℙ(E) → X`: the complete-flag push-forward of the quotient block
/// `ξ_1..ξ_{r-1}` by symmetrization, then the `(0,1,r)` rule, then roots.
pub fn pushforward_via_projective_tower(p: &Poly<Xi>, r: usize) -> Result<Poly<Roots>, SymbolicError> {
    if r < 2 {
        return Err(SymbolicError::InvalidFlagType(vec![0, 1, r]));
    }
    if p.num_vars() > r {
        return Err(SymbolicError::TooManyVariables { got: p.num_vars(), rank: r });
    }
    let inner = symmetrize(&p.relabel(), r - 1)?;
    let classes = dp_pushforward(&inner.relabel(), &FlagType::projective(r))?;
    Ok(expand_in_roots(&classes, r))
}

/// All monomials of total degree `d` in `r` variables, as `ξ` polynomials.
pub fn monomials(r: usize, d: u32) -> Vec<Poly<Xi>> {
    fn rec(var: usize, r: usize, left: u32, acc: &mut Vec<u32>, out: &mut Vec<Poly<Xi>>) {
        if var + 1 == r {
            acc.push(left);
            out.push(Poly::monomial(acc, 1));
            acc.pop();
            return;
        }
        for a in (0..=left).rev() {
            acc.push(a);
            rec(var + 1, r, left - a, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if d == 0 {
            out.push(Poly::one());
        }
        return out;
    }
    rec(0, r, d, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::schur::{segre_to_chern, RootExpansion};

    fn xi(e: &[u32]) -> Poly<Xi> {
        Poly::monomial(e, 1)
    }

    #[test]
    fn nu_sequences() {
        assert_eq!(dp_nu(&FlagType::complete(3)), IntSequence::from([0, 1, 2]));
        assert_eq!(dp_nu(&FlagType::projective(3)), IntSequence::from([0, 0, 2]));
        assert_eq!(dp_nu(&FlagType::new(vec![0, 4]).unwrap()), IntSequence::from([0, 0, 0, 0]));
    }

    #[test]
    fn flag_types() {
        assert!(FlagType::new(vec![0, 2, 2]).is_err());
        assert!(FlagType::new(vec![1, 2]).is_err());
        assert_eq!(FlagType::complete(3).relative_dimension(), 3);
        assert_eq!(FlagType::projective(3).relative_dimension(), 2);
        assert_eq!(FlagType::complete(4).relative_dimension(), 6);
        assert_eq!(FlagType::projective(3).root_blocks(), vec![3..=3, 1..=2]);
    }

    #[test]
    fn proof_pushforwards() {
        let got = dp_pushforward(&xi(&[4, 2, 0]), &FlagType::complete(3)).unwrap();
        assert_eq!(got, gschur_in_segre(&[-2, 1, 4].into()));
        let got = dp_pushforward(&xi(&[4, 2]), &FlagType::complete(2)).unwrap();
        assert_eq!(got, gschur_in_segre(&[1, 4].into()));
        let got = dp_pushforward(&xi(&[1]), &FlagType::complete(2)).unwrap();
        assert_eq!(got, Poly::constant(-1));
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(complete_flag_oracle(&xi(&[1]), 2).unwrap(), Poly::constant(-1));
        assert!(complete_flag_oracle(&xi(&[1, 1]), 2).unwrap().is_zero());
        let lhs = expand_in_roots(&gschur_in_segre(&[-2, 1, 4].into()), 3);
        assert_eq!(complete_flag_oracle(&xi(&[4, 2, 0]), 3).unwrap(), lhs);
    }

    #[test]
    fn block_symmetry_is_enforced() {
        let rho = FlagType::projective(3);
        assert!(matches!(dp_pushforward(&xi(&[1]), &rho), Err(SymbolicError::BlockSymmetry { .. })));
        let sym = &xi(&[1, 0, 2]) + &xi(&[0, 1, 2]);
        assert!(dp_pushforward(&sym, &rho).is_ok());
        assert!(dp_pushforward(&xi(&[0, 0, 0, 1]), &rho).is_err());
    }

    #[test]
    fn projective_matches_dp() {
        for r in 2..=4 {
            for k in 0..=3 {
                let mut e = vec![0; r];
                e[r - 1] = (r - 1 + k) as u32;
                let dp = dp_pushforward(&xi(&e), &FlagType::projective(r)).unwrap();
                let s_k = if k == 0 { Poly::one() } else { Poly::var(k) };
                assert_eq!(dp, s_k, "r={r} k={k}");
                assert_eq!(segre_to_chern(&dp, r), projective_oracle(k, r));
            }
        }
    }

    #[test]
    fn sign_table() {
        assert_eq!(forms_sign_adjust(6, &FlagType::complete(3), 3).unwrap(), 1);
        assert_eq!(forms_sign_adjust(1, &FlagType::complete(2), 0).unwrap(), -1);
        assert_eq!(forms_sign_adjust(2, &FlagType::complete(2), 1).unwrap(), 1);
        assert!(forms_sign_adjust(3, &FlagType::complete(2), 1).is_err());
    }

    #[test]
    fn tower_small() {
        let p = xi(&[1, 0, 3]);
        assert_eq!(pushforward_via_projective_tower(&p, 3).unwrap(), complete_flag_oracle(&p, 3).unwrap());
        // π_*(ξ_1 ξ_3^{2+k}) = -s_k
        let lhs = complete_flag_oracle(&xi(&[1, 0, 4]), 3).unwrap();
        assert_eq!(lhs, -Segre::root_image(2, 3));
    }

    #[test]
    fn heap_permutations_have_correct_signs() {
        let perms = permutations(4);
        assert_eq!(perms.len(), 24);
        for (p, s) in perms {
            let mut inv = 0;
            for i in 0..4 {
                for j in i + 1..4 {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            assert_eq!(s, if inv % 2 == 0 { 1 } else { -1 });
        }
    }
}
