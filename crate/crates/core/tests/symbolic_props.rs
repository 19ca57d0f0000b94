use chern_positivity::symbolic::{
    complete_flag_oracle, conjugate_partition, dp_pushforward, enumerate_partitions, expand_in_roots,
    is_nonnegative_expansion, jacobi_trudi_check, monomials, projective_oracle, pushforward_via_projective_tower,
    schur_in_chern, schur_product_expand, segre_to_chern, FlagType, IntSequence, Poly,
};
use proptest::prelude::*;

#[test]
fn oracle_equivalence_on_complete_flags() {
    for r in 2..=4usize {
        let rho = FlagType::complete(r);
        let d = rho.relative_dimension() as u32;
        for k in 0..=3u32 {
            for m in monomials(r, d + k) {
                let dp = expand_in_roots(&dp_pushforward(&m, &rho).unwrap(), r);
                let oracle = complete_flag_oracle(&m, r).unwrap();
                assert_eq!(dp, oracle, "r={r} monomial {m}");
                assert!(oracle.is_zero() || oracle.total_degree() == Some(k));
            }
        }
    }
}

#[test]
fn low_degree_pushforwards_vanish() {
    for r in 2..=4usize {
        let rho = FlagType::complete(r);
        let d = rho.relative_dimension() as u32;
        for deg in 0..d {
            for m in monomials(r, deg) {
                assert!(dp_pushforward(&m, &rho).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn tower_consistency() {
    for deg in 0..=6u32 {
        for m in monomials(3, deg) {
            let tower = pushforward_via_projective_tower(&m, 3).unwrap();
            assert_eq!(tower, complete_flag_oracle(&m, 3).unwrap(), "{m}");
        }
    }
}

#[test]
fn projective_pushforward_matches_oracle() {
    for r in 2..=4usize {
        for k in 0..=4usize {
            let mut e = vec![0; r];
            e[r - 1] = (r - 1 + k) as u32;
            let dp = dp_pushforward(&Poly::monomial(&e, 1), &FlagType::projective(r)).unwrap();
            assert_eq!(segre_to_chern(&dp, r), projective_oracle(k, r));
        }
    }
}

#[test]
fn jacobi_trudi_sweep() {
    for k in 0..=6 {
        for r in 0..=4 {
            for sigma in enumerate_partitions(k, r) {
                assert!(jacobi_trudi_check(&sigma, r.max(1)).unwrap(), "{sigma} r={r}");
            }
        }
    }
}

#[test]
fn schur_products_are_nonnegative() {
    for r in 1..=4usize {
        for a in 1..=5usize {
            for b in 1..=(6 - a) {
                for sigma in enumerate_partitions(a, r) {
                    for tau in enumerate_partitions(b, r) {
                        let e = schur_product_expand(&sigma, &tau, r).unwrap();
                        assert!(is_nonnegative_expansion(&e), "{sigma} * {tau}, r={r}: {e:?}");
                        // re-expand and compare exactly
                        let mut back = Poly::zero();
                        for (lambda, c) in &e {
                            back = &back + &schur_in_chern(lambda, r).unwrap().scale(c);
                        }
                        assert_eq!(back, &schur_in_chern(&sigma, r).unwrap() * &schur_in_chern(&tau, r).unwrap());
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn conjugation_is_an_involution(parts in proptest::collection::vec(0i64..6, 0..6)) {
        let mut p = parts.clone();
        p.sort_unstable_by(|a, b| b.cmp(a));
        let sigma = IntSequence::new(p);
        let back = conjugate_partition(&conjugate_partition(&sigma).unwrap()).unwrap();
        prop_assert_eq!(back, sigma.trimmed());
    }
}
