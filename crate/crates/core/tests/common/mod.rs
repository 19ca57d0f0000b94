#![allow(dead_code)]

use chern_positivity::exterior::{i_pow, Covector, ExteriorForm, MultiIndex};
use chern_positivity::generators::complex_gaussian;
use chern_positivity::C64;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A form of bidegree `(p, q)` with Gaussian coefficients on every basis pair.
pub fn random_form(rng: &mut ChaCha8Rng, n: usize, p: usize, q: usize) -> ExteriorForm {
    let rows = MultiIndex::all(n, p);
    let cols = MultiIndex::all(n, q);
    let coeffs = complex_gaussian(rng, rows.len() * cols.len(), 1.0);
    let mut terms = Vec::new();
    for (a, &i) in rows.iter().enumerate() {
        for (b, &j) in cols.iter().enumerate() {
            terms.push(((i, j), coeffs[a * cols.len() + b]));
        }
    }
    ExteriorForm::from_terms(n, p, q, terms).unwrap()
}

/// Real `(p,p)`-form with a random Hermitian Plücker matrix.
pub fn random_real(rng: &mut ChaCha8Rng, n: usize, p: usize) -> ExteriorForm {
    let basis = MultiIndex::all(n, p);
    let k = basis.len();
    let b = DMatrix::from_vec(k, k, complex_gaussian(rng, k * k, 1.0));
    let h = (&b + b.adjoint()) * C64::new(0.5, 0.0);
    ExteriorForm::from_plucker_matrix(n, p, &basis, &h).unwrap()
}

/// `Σ_s i^{p²} ξ_s∧ξ̄_s` for `terms` random `(p,0)`-forms, plus `shift`
/// times the identity Plücker matrix.
pub fn random_hermitian_positive(rng: &mut ChaCha8Rng, n: usize, p: usize, terms: usize, shift: f64) -> ExteriorForm {
    let basis = MultiIndex::all(n, p);
    let k = basis.len();
    let b = DMatrix::from_vec(k, terms, complex_gaussian(rng, k * terms, 1.0));
    let mut h = &b * b.adjoint();
    for d in 0..k {
        h[(d, d)] += shift;
    }
    ExteriorForm::from_plucker_matrix(n, p, &basis, &h).unwrap()
}

pub fn random_covectors(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Covector> {
    (0..k).map(|_| Covector::new(complex_gaussian(rng, n, 1.0))).collect()
}

/// `Σ_s λ_s i^{p²} α_s∧ᾱ_s` with decomposable `α_s` and `λ_s > 0`.
pub fn random_strongly_positive(rng: &mut ChaCha8Rng, n: usize, p: usize, atoms: usize) -> ExteriorForm {
    let mut acc = ExteriorForm::zero(n, p, p);
    for _ in 0..atoms {
        let alpha = chern_positivity::decomposable(n, &random_covectors(rng, n, p)).unwrap();
        acc = &acc + &(&alpha ^ &alpha.conjugate()).scale(i_pow(p * p));
    }
    acc
}

pub fn rel_dist(a: &ExteriorForm, b: &ExteriorForm) -> f64 {
    a.distance(b).unwrap() / a.max_abs().max(b.max_abs()).max(f64::MIN_POSITIVE)
}
