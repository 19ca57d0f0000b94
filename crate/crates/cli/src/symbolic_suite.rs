//! Exact symbolic identities, all compared as integer polynomials.

use chern_positivity::symbolic::{
    complete_flag_oracle, dp_pushforward, enumerate_partitions, expand_in_roots, gschur_in_segre, jacobi_trudi_check,
    monomials, projective_oracle, pushforward_via_projective_tower, segre_to_chern, Chern, FlagType, IntSequence, Poly,
    Xi,
};

use crate::report::IdentityRecord;

/// Collects the failures of a family of exact checks into one record.
fn family(name: &str, cases: impl IntoIterator<Item = (String, bool)>) -> IdentityRecord {
    let mut total = 0;
    let mut failed = Vec::new();
    for (label, ok) in cases {
        total += 1;
        if !ok {
            failed.push(label);
        }
    }
    let detail = if failed.is_empty() {
        format!("{total} cases")
    } else {
        format!("{} of {total} cases failed, first: {}", failed.len(), failed[0])
    };
    IdentityRecord::exact(name, failed.is_empty(), Some(detail))
}

/// `dp_pushforward` against full symmetrization, complete flags
/// `r ∈ {2,3,4}`, monomials of degree `d_ρ + k`, `k ≤ 3`.
pub fn oracle_equivalence() -> IdentityRecord {
    let mut cases = Vec::new();
    for r in 2..=4usize {
        let rho = FlagType::complete(r);
        let d = rho.relative_dimension() as u32;
        for k in 0..=3u32 {
            for m in monomials(r, d + k) {
                let ok = match (dp_pushforward(&m, &rho), complete_flag_oracle(&m, r)) {
                    (Ok(dp), Ok(oracle)) => expand_in_roots(&dp, r) == oracle,
                    _ => false,
                };
                cases.push((format!("r={r} {m}"), ok));
            }
        }
    }
    family("dp_pushforward = symmetrization oracle", cases)
}

fn xi(exponents: &[u32]) -> Poly<Xi> {
    Poly::monomial(exponents, 1)
}

fn seq(v: &[i64]) -> IntSequence {
    IntSequence::new(v.to_vec())
}

/// The two push-forwards used by the rank-3 argument.
pub fn proof_identities() -> Vec<IdentityRecord> {
    let c = |i| Poly::<Chern>::var(i);
    let mut out = Vec::new();

    let rank3 = dp_pushforward(&xi(&[4, 2, 0]), &FlagType::complete(3));
    let s = gschur_in_segre(&seq(&[-2, 1, 4]));
    out.push(IdentityRecord::exact("push(xi1^4 xi2^2, F(E), r=3) = s(-2,1,4)", rank3.as_ref() == Ok(&s), None));
    let expected = &(&c(1) * &c(2)) - &c(3);
    let got = segre_to_chern(&s, 3);
    out.push(IdentityRecord::exact("s(-2,1,4) = c1*c2 - c3", got == expected, Some(format!("{got}"))));

    let rank2 = dp_pushforward(&xi(&[4, 2]), &FlagType::complete(2));
    let s = gschur_in_segre(&seq(&[1, 4]));
    out.push(IdentityRecord::exact("push(xi1^4 xi2^2, F(Q), r=2) = s(1,4)", rank2.as_ref() == Ok(&s), None));
    let expected = &c(1) * &c(2).pow(2);
    let got = segre_to_chern(&s, 2);
    out.push(IdentityRecord::exact("s(1,4) = c1*c2^2 when c3 = c4 = 0", got == expected, Some(format!("{got}"))));
    out
}

pub fn jacobi_trudi() -> IdentityRecord {
    let mut cases = Vec::new();
    for k in 0..=6 {
        for r in 1..=4 {
            for sigma in enumerate_partitions(k, r) {
                cases.push((format!("{sigma} r={r}"), jacobi_trudi_check(&sigma, r).unwrap_or(false)));
            }
        }
    }
    family("Jacobi-Trudi", cases)
}

/// Complete flags of rank 3 through the tower `F(E) → ℙ(E) → X`.
pub fn tower_consistency() -> IdentityRecord {
    let mut cases = Vec::new();
    for deg in 0..=6u32 {
        for m in monomials(3, deg) {
            let ok = match (pushforward_via_projective_tower(&m, 3), complete_flag_oracle(&m, 3)) {
                (Ok(a), Ok(b)) => a == b,
                _ => false,
            };
            cases.push((format!("{m}"), ok));
        }
    }
    family("projective tower = symmetrization oracle", cases)
}

pub fn projective() -> IdentityRecord {
    let mut cases = Vec::new();
    for r in 2..=4usize {
        for k in 0..=4usize {
            let mut e = vec![0; r];
            e[r - 1] = (r - 1 + k) as u32;
            let ok = dp_pushforward(&Poly::monomial(&e, 1), &FlagType::projective(r))
                .map(|dp| segre_to_chern(&dp, r) == projective_oracle(k, r))
                .unwrap_or(false);
            cases.push((format!("r={r} k={k}"), ok));
        }
    }
    family("projective push-forward = Chern recursion", cases)
}

pub fn run_all() -> Vec<IdentityRecord> {
    let mut out = vec![oracle_equivalence()];
    out.extend(proof_identities());
    out.push(jacobi_trudi());
    out.push(tower_consistency());
    out.push(projective());
    out
}
