//! Membership tests for the cones `SP ⊆ HP ⊆ WP` of strongly, Hermitian and
//! weakly positive `(p,p)`-forms.
//!
//! * [`check_positive`] searches for a negative pairing
//!   `(-i)^{p²} u(w_1,…,w_p, w̄_1,…,w̄_p)`. Refutations are sound. Certificates
//!   are exact when the Plücker matrix is positive semidefinite, otherwise
//!   search-based and flagged `heuristic`.
//! * [`check_hermitian_positive`] diagonalizes the Hermitian form
//!   `β ↦ vol(u ∧ i^{q²} β ∧ β̄)` and is exact up to rounding.
//! * [`check_strongly_positive`] fits `u` by a nonnegative combination of
//!   decomposable atoms `i^{p²} α∧ᾱ`, or refutes it with a Hermitian
//!   positive `(q,q)`-form pairing negatively against it.

mod nnls;

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exterior::{decomposable, i_pow, Covector, ExteriorForm, FormError, MultiIndex};
use crate::generators::{complex_gaussian, derive_seed};
use crate::linalg;
use crate::C64;

pub use nnls::{nnls, NnlsSolution};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PositivityError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("invalid search budget: {0}")]
    InvalidBudget(String),
}

/// Effort and tolerance of a randomized search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBudget {
    pub random_starts: usize,
    pub local_iters: usize,
    pub tol: f64,
    pub rng_seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { random_starts: 64, local_iters: 200, tol: 1e-9, rng_seed: 0 }
    }
}

impl SearchBudget {
    pub fn with_seed(self, rng_seed: u64) -> Self {
        SearchBudget { rng_seed, ..self }
    }

    pub fn validate(&self) -> Result<(), PositivityError> {
        if self.random_starts == 0 || self.local_iters == 0 {
            return Err(PositivityError::InvalidBudget("starts and iterations must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(PositivityError::InvalidBudget(format!("tolerance {} must be positive", self.tol)));
        }
        Ok(())
    }

    /// Seed of the `start`-th random start.
    pub fn start_seed(&self, start: u64) -> u64 {
        derive_seed(self.rng_seed, start)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Certified,
    Refuted,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Certified => "certified",
            Status::Refuted => "refuted",
            Status::Unknown => "unknown",
        })
    }
}

/// Evidence attached to a verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Test vectors `w_1, …, w_p` (orthonormal) for the pairing.
    Vectors(Vec<Covector>),
    /// A `(q,0)`-form `β` with `vol(u ∧ i^{q²} β∧β̄) < 0`.
    TestForm(ExteriorForm),
    /// A Hermitian positive `(q,q)`-form `v` with `vol(u ∧ v) < 0`.
    Pairing(ExteriorForm),
    /// Nonnegative combination of decomposable atoms reproducing `u`.
    Certificate(SpCertificate),
}

impl Witness {
    /// Recomputes the witnessed quantity from the form alone: the pairing or
    /// volume coefficient for refutations, the fit residual for certificates.
    pub fn replay(&self, u: &ExteriorForm) -> Result<f64, FormError> {
        match self {
            Witness::Vectors(w) => u.evaluate_pairing(w),
            Witness::TestForm(beta) => {
                let q = beta.bidegree().0;
                let v = (beta ^ &beta.conjugate()).scale(i_pow(q * q));
                (u ^ &v).volume_coefficient()
            }
            Witness::Pairing(v) => (u ^ v).volume_coefficient(),
            Witness::Certificate(c) => c.to_form().distance(u),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositivityVerdict {
    pub status: Status,
    /// Smallest pairing found, or the lowest Plücker eigenvalue when that
    /// already certifies (weak test), smallest eigenvalue (Hermitian
    /// test, and strong test when refuted) or relative fit residual (strong
    /// test otherwise).
    pub margin: f64,
    /// A refuting witness replays below `-threshold`.
    pub threshold: f64,
    pub witness: Option<Witness>,
    /// Set when a certificate rests on a finite search.
    pub heuristic: bool,
}

impl PositivityVerdict {
    pub fn is_certified(&self) -> bool {
        self.status == Status::Certified
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }
}

fn require_real_pp(u: &ExteriorForm) -> Result<usize, FormError> {
    let (p, q) = u.bidegree();
    if p != q {
        return Err(FormError::BidegreeMismatch(p, q, p, p));
    }
    let residual = u.reality_residual();
    if residual > u.real_tolerance() {
        return Err(FormError::NotReal { residual });
    }
    Ok(p)
}

fn certified_zero(threshold: f64) -> PositivityVerdict {
    PositivityVerdict { status: Status::Certified, margin: 0.0, threshold, witness: None, heuristic: false }
}

/// `det(W_I)` for every `I` in `basis`, `W` given by columns.
fn plucker_coordinates(frame: &[Vec<C64>], basis: &[MultiIndex]) -> Vec<C64> {
    let p = frame.len();
    let mut buf = vec![Complex64::new(0.0, 0.0); p * p];
    basis
        .iter()
        .map(|i| {
            for (r, &row) in i.indices().iter().enumerate() {
                for (c, col) in frame.iter().enumerate() {
                    buf[r * p + c] = col[row - 1];
                }
            }
            linalg::det_in_place(&mut buf, p)
        })
        .collect()
}

/// `Σ H_IJ m_I m̄_J`, the normalized pairing of the frame.
fn frame_value(h: &DMatrix<C64>, m: &[C64]) -> f64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (a, ma) in m.iter().enumerate() {
        if ma.norm_sqr() == 0.0 {
            continue;
        }
        for (b, mb) in m.iter().enumerate() {
            s += h[(a, b)] * ma * mb.conj();
        }
    }
    s.re
}

/// Minimizes the pairing over column `k` with the others fixed.
fn update_column(h: &DMatrix<C64>, basis: &[MultiIndex], frame: &mut [Vec<C64>], k: usize) {
    let n = frame[k].len();
    let p = frame.len();
    // det W_I = Σ_j C[I][j] w_{j,k}
    let mut c = DMatrix::<C64>::zeros(basis.len(), n);
    let mut buf = vec![Complex64::new(0.0, 0.0); (p - 1) * (p - 1)];
    for (a, i) in basis.iter().enumerate() {
        let rows = i.indices();
        for (l, &row) in rows.iter().enumerate() {
            let mut t = 0;
            for (rr, &other_row) in rows.iter().enumerate() {
                if rr == l {
                    continue;
                }
                for (cc, col) in frame.iter().enumerate() {
                    if cc != k {
                        buf[t] = col[other_row - 1];
                        t += 1;
                    }
                }
            }
            let minor = linalg::det_in_place(&mut buf, p - 1);
            c[(a, row - 1)] = if (l + k) % 2 == 0 { minor } else { -minor };
        }
    }
    // value(w) = y^* (Cᵀ H C̄) y with y = w̄
    let m = c.transpose() * h * c.map(|z| z.conj());
    let (_, y) = linalg::min_eigenpair(&m);
    let mut w: Vec<C64> = y.iter().map(|z| z.conj()).collect();
    for (cc, col) in frame.iter().enumerate() {
        if cc != k {
            let proj = linalg::inner(col, &w);
            for (x, v) in w.iter_mut().zip(col) {
                *x -= proj * v;
            }
        }
    }
    let norm = linalg::norm(&w);
    if norm > 1e-8 {
        frame[k] = w.into_iter().map(|x| x / norm).collect();
    }
}

fn to_covectors(frame: &[Vec<C64>]) -> Vec<Covector> {
    frame.iter().map(|c| Covector::new(c.clone())).collect()
}

/// Weak positivity: searches unit frames `w_1..w_p` for a negative pairing.
///
/// Exact when the Plücker matrix is positive semidefinite or its lowest
/// eigenvector is decomposable (always for `p ∈ {0, 1, n-1, n}`); otherwise
/// falls back to the randomized frame search.
pub fn check_positive(u: &ExteriorForm, budget: &SearchBudget) -> Result<PositivityVerdict, PositivityError> {
    budget.validate()?;
    let p = require_real_pp(u)?;
    let n = u.n();
    let tol = budget.tol;
    if u.is_zero() {
        return Ok(certified_zero(tol));
    }
    let standard = |k: usize| -> Vec<Covector> { (1..=k).map(|j| Covector::basis(n, j)).collect() };
    if p == 0 || p == n {
        let value = u.evaluate_pairing(&standard(p))?;
        let status = if value < -tol { Status::Refuted } else { Status::Certified };
        let witness = (status == Status::Refuted).then(|| Witness::Vectors(standard(p)));
        return Ok(PositivityVerdict { status, margin: value, threshold: tol, witness, heuristic: false });
    }
    let gram = u.plucker_matrix()?;
    let (h, basis) = (gram.matrix, gram.basis);
    // Unit frames have unit Plücker vectors, so every pairing is at least
    // λ_min(H); it is attained when the eigenvector is decomposable.
    let (lambda, z) = linalg::min_eigenpair(&h);
    if lambda >= -tol {
        return Ok(PositivityVerdict {
            status: Status::Certified,
            margin: lambda,
            threshold: tol,
            witness: None,
            heuristic: false,
        });
    }
    let m: Vec<C64> = z.iter().map(|x| x.conj()).collect();
    if let Some(factors) = factorize(n, p, &basis, &m) {
        let mut frame: Vec<Vec<C64>> = factors.iter().map(|f| f.components().to_vec()).collect();
        if linalg::orthonormalize(&mut frame) {
            let w = to_covectors(&frame);
            let margin = u.evaluate_pairing(&w)?;
            if margin < -tol {
                return Ok(PositivityVerdict {
                    status: Status::Refuted,
                    margin,
                    threshold: tol,
                    witness: Some(Witness::Vectors(w)),
                    heuristic: false,
                });
            }
        }
    }
    let starts = budget.random_starts;
    let mut best: Option<(f64, Vec<Vec<C64>>)> = None;
    for start in 0..starts {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.start_seed(start as u64));
        let mut frame: Vec<Vec<C64>> = (0..p).map(|_| complex_gaussian(&mut rng, n, 1.0)).collect();
        if !linalg::orthonormalize(&mut frame) {
            continue;
        }
        let mut value = frame_value(&h, &plucker_coordinates(&frame, &basis));
        for _ in 0..budget.local_iters {
            for k in 0..p {
                update_column(&h, &basis, &mut frame, k);
            }
            let next = frame_value(&h, &plucker_coordinates(&frame, &basis));
            let gain = value - next;
            value = next;
            if gain.abs() <= 1e-14 * (1.0 + value.abs()) {
                break;
            }
        }
        if best.as_ref().map_or(true, |(b, _)| value < *b) {
            best = Some((value, frame));
        }
    }
    let Some((_, frame)) = best else {
        return Ok(PositivityVerdict {
            status: Status::Unknown,
            margin: f64::NAN,
            threshold: tol,
            witness: None,
            heuristic: true,
        });
    };
    let w = to_covectors(&frame);
    let margin = u.evaluate_pairing(&w)?;
    let (status, witness) =
        if margin < -tol { (Status::Refuted, Some(Witness::Vectors(w))) } else { (Status::Certified, None) };
    Ok(PositivityVerdict { status, margin, threshold: tol, witness, heuristic: status != Status::Refuted })
}

/// The `(q,0)`-form with coefficient vector `b` on `basis`.
fn form_from_vector(n: usize, q: usize, basis: &[MultiIndex], b: impl Iterator<Item = C64>) -> ExteriorForm {
    ExteriorForm::from_terms(n, q, 0, basis.iter().zip(b).map(|(&i, c)| ((i, MultiIndex::EMPTY), c)))
        .expect("basis matches bidegree")
}

struct GramSpectrum {
    min: f64,
    norm: f64,
    beta: ExteriorForm,
}

fn gram_spectrum(u: &ExteriorForm) -> Result<GramSpectrum, FormError> {
    let gram = u.hermitian_gram()?;
    let (values, vectors) = linalg::hermitian_eigen(&gram.matrix);
    let norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let q = u.n() - u.bidegree().0;
    let beta = form_from_vector(u.n(), q, &gram.basis, vectors.column(0).iter().map(|z| z.conj()));
    Ok(GramSpectrum { min: values[0], norm, beta })
}

/// Hermitian positivity: the smallest eigenvalue of the Hermitian form
/// `β ↦ vol(u ∧ i^{q²} β∧β̄)`. Certified iff it is at least `-tol·‖G‖`.
pub fn check_hermitian_positive(u: &ExteriorForm, tol: f64) -> Result<PositivityVerdict, PositivityError> {
    require_real_pp(u)?;
    if u.is_zero() {
        return Ok(certified_zero(0.0));
    }
    let g = gram_spectrum(u)?;
    let threshold = tol * g.norm;
    if g.min >= -threshold {
        Ok(PositivityVerdict { status: Status::Certified, margin: g.min, threshold, witness: None, heuristic: false })
    } else {
        Ok(PositivityVerdict {
            status: Status::Refuted,
            margin: g.min,
            threshold,
            witness: Some(Witness::TestForm(g.beta)),
            heuristic: false,
        })
    }
}

/// `u ≈ Σ_k λ_k · i^{p²} α_k∧ᾱ_k` with `λ_k ≥ 0` and each `α_k` a wedge of
/// the listed covectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SpCertificate {
    pub n: usize,
    pub p: usize,
    pub atoms: Vec<(f64, Vec<Covector>)>,
}

impl SpCertificate {
    fn atom_form(n: usize, p: usize, factors: &[Covector]) -> ExteriorForm {
        let alpha = decomposable(n, factors).expect("factor count within dimension");
        (&alpha ^ &alpha.conjugate()).scale(i_pow(p * p))
    }

    pub fn to_form(&self) -> ExteriorForm {
        let mut acc = ExteriorForm::zero(self.n, self.p, self.p);
        for (w, f) in &self.atoms {
            acc = &acc + &Self::atom_form(self.n, self.p, f).scale_real(*w);
        }
        acc
    }

    /// Certificate of the wedge product: atoms multiply pairwise, with
    /// concatenated factor lists. Atoms whose degree exceeds `n` vanish.
    pub fn wedge(&self, other: &Self) -> Self {
        let p = (self.p + other.p).min(self.n);
        let mut atoms = Vec::new();
        if self.p + other.p <= self.n {
            for (w1, f1) in &self.atoms {
                for (w2, f2) in &other.atoms {
                    let mut f = f1.clone();
                    f.extend(f2.iter().cloned());
                    atoms.push((w1 * w2, f));
                }
            }
        }
        SpCertificate { n: self.n, p, atoms }
    }

    pub fn factor_lists(&self) -> Vec<Vec<Covector>> {
        self.atoms.iter().map(|(_, f)| f.clone()).collect()
    }
}

/// Hermitian matrix → real vector, isometric for the Frobenius norm.
fn realify(h: &DMatrix<C64>) -> Vec<f64> {
    let n = h.nrows();
    let mut out = Vec::with_capacity(n * n);
    let s = std::f64::consts::SQRT_2;
    for i in 0..n {
        out.push(h[(i, i)].re);
        for j in i + 1..n {
            out.push(s * h[(i, j)].re);
            out.push(s * h[(i, j)].im);
        }
    }
    out
}

/// Factors `β_1..β_p` with `β_1∧…∧β_p = ξ`, if `ξ` (given by Plücker
/// coordinates on `basis`) is decomposable.
fn factorize(n: usize, p: usize, basis: &[MultiIndex], xi: &[C64]) -> Option<Vec<Covector>> {
    let target = MultiIndex::all(n, p + 1);
    let pos = |k: MultiIndex| target.iter().position(|&t| t == k);
    // column j: coefficients of e_j ∧ ξ
    let mut m = DMatrix::<C64>::zeros(target.len(), n);
    for j in 1..=n {
        for (a, &i) in basis.iter().enumerate() {
            if let Some((k, sign)) = MultiIndex::single(j).concat_sign(i) {
                let row = pos(k).expect("(p+1)-subset");
                m[(row, j - 1)] += xi[a] * sign;
            }
        }
    }
    let (values, vectors) = linalg::hermitian_eigen(&(m.adjoint() * &m));
    let top = values.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let kernel = values.iter().filter(|&&v| v <= 1e-10 * top).count();
    if kernel != p {
        return None;
    }
    let mut factors: Vec<Covector> =
        (0..p).map(|c| Covector::new(vectors.column(c).iter().copied().collect())).collect();
    let frame: Vec<Vec<C64>> = factors.iter().map(|f| f.components().to_vec()).collect();
    let b = plucker_coordinates(&frame, basis);
    let bb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    if bb == 0.0 {
        return None;
    }
    let scale: C64 = b.iter().zip(xi).map(|(x, y)| x.conj() * y).sum::<C64>() / bb;
    factors[0] = factors[0].scaled(scale);
    Some(factors)
}

/// [`check_strongly_positive_with`] without caller-supplied atoms.
pub fn check_strongly_positive(u: &ExteriorForm, budget: &SearchBudget) -> Result<PositivityVerdict, PositivityError> {
    check_strongly_positive_with(u, budget, &[])
}

/// Strong positivity. The dictionary holds `20·C(n,p)²` random decomposable
/// atoms, the decomposable eigenvectors of the Plücker matrix of `u`, and
/// the caller's `extra_atoms` (factor lists of length `p`).
pub fn check_strongly_positive_with(
    u: &ExteriorForm,
    budget: &SearchBudget,
    extra_atoms: &[Vec<Covector>],
) -> Result<PositivityVerdict, PositivityError> {
    budget.validate()?;
    let p = require_real_pp(u)?;
    let n = u.n();
    if u.is_zero() {
        return Ok(certified_zero(budget.tol));
    }
    // Dual refutation first: a negative eigenvalue of the test Gram matrix.
    let g = gram_spectrum(u)?;
    let threshold = budget.tol * g.norm;
    if g.min < -threshold {
        let q = n - p;
        let v = (&g.beta ^ &g.beta.conjugate()).scale(i_pow(q * q));
        return Ok(PositivityVerdict {
            status: Status::Refuted,
            margin: g.min,
            threshold,
            witness: Some(Witness::Pairing(v)),
            heuristic: false,
        });
    }

    let gram = u.plucker_matrix()?;
    let (h, basis) = (gram.matrix, gram.basis);
    let big_n = basis.len();
    let mut atoms: Vec<Vec<Covector>> = Vec::new();
    let (values, vectors) = linalg::hermitian_eigen(&h);
    let top = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (k, &lambda) in values.iter().enumerate() {
        if lambda > 1e-12 * top {
            let xi: Vec<C64> = vectors.column(k).iter().copied().collect();
            if let Some(f) = factorize(n, p, &basis, &xi) {
                atoms.push(f);
            }
        }
    }
    for f in extra_atoms {
        if f.len() != p || f.iter().any(|c| c.n() != n) {
            return Err(FormError::ArityMismatch { expected: p, got: f.len() }.into());
        }
        atoms.push(f.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.start_seed(u64::MAX));
    for _ in 0..20 * big_n * big_n {
        atoms.push((0..p).map(|_| Covector::new(complex_gaussian(&mut rng, n, 1.0))).collect());
    }

    let columns: Vec<Vec<f64>> = atoms
        .iter()
        .map(|f| {
            let frame: Vec<Vec<C64>> = f.iter().map(|c| c.components().to_vec()).collect();
            let a = DVector::from_vec(plucker_coordinates(&frame, &basis));
            realify(&(&a * a.adjoint()))
        })
        .collect();
    let rows = big_n * big_n;
    let a = DMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i]);
    let b = DVector::from_vec(realify(&h));
    let sol = nnls(&a, &b, 3 * columns.len());
    let relative = sol.residual / b.norm();
    let fit_tol = 1e-8;
    if relative <= fit_tol {
        let atoms = atoms.into_iter().zip(sol.x.iter()).filter(|(_, &w)| w > 0.0).map(|(f, &w)| (w, f)).collect();
        let cert = SpCertificate { n, p, atoms };
        return Ok(PositivityVerdict {
            status: Status::Certified,
            margin: relative,
            threshold: budget.tol,
            witness: Some(Witness::Certificate(cert)),
            heuristic: false,
        });
    }
    Ok(PositivityVerdict {
        status: Status::Unknown,
        margin: relative,
        threshold: budget.tol,
        witness: None,
        heuristic: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        Complex64::new(re, im)
    }

    fn ie(n: usize, j: usize) -> ExteriorForm {
        (&Covector::basis(n, j).to_form() ^ &Covector::basis(n, j).to_conj_form()).scale(c(0.0, 1.0))
    }

    fn non_decomposable() -> ExteriorForm {
        let e = |j| Covector::basis(4, j).to_form();
        let xi = &(&e(1) ^ &e(2)) + &(&e(3) ^ &e(4));
        (&xi ^ &xi.conjugate()).scale(i_pow(4))
    }

    #[test]
    fn weak_examples() {
        let b = SearchBudget::default();
        let u = &ie(3, 1) ^ &ie(3, 2);
        let v = check_positive(&u, &b).unwrap();
        assert_eq!(v.status, Status::Certified);
        assert!(v.margin >= 0.0);
        assert!(!v.heuristic);

        let u = -&ie(2, 1);
        let v = check_positive(&u, &b).unwrap();
        assert_eq!(v.status, Status::Refuted);
        assert!((v.margin + 1.0).abs() < 1e-12);
        let Some(Witness::Vectors(w)) = &v.witness else { panic!() };
        assert!((w[0].components()[0].norm() - 1.0).abs() < 1e-12);
        assert!(v.witness.as_ref().unwrap().replay(&u).unwrap() < -b.tol);
    }

    #[test]
    fn codegree_one_is_exact() {
        // a (2,2)-form on C^3 with one negative Plücker eigenvalue
        let basis = MultiIndex::all(3, 2);
        let h = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, 0.0),
                c(1.0, -1.0),
                c(1.0, 0.0),
                c(0.5, 0.0),
                c(0.0, 0.0),
                c(0.5, 0.0),
                c(3.0, 0.0),
            ],
        );
        let u = ExteriorForm::from_plucker_matrix(3, 2, &basis, &h).unwrap();
        let lambda = linalg::hermitian_eigen(&h).0[0];
        assert!(lambda < 0.0);
        let v = check_positive(&u, &SearchBudget { random_starts: 1, ..SearchBudget::default() }).unwrap();
        assert!(v.is_refuted() && !v.heuristic);
        assert!((v.margin - lambda).abs() < 1e-12);
    }

    #[test]
    fn weakly_but_not_hermitian_positive() {
        // H = Id - 1.5 P_ξ, ξ = (e_12 + e_34)/√2: decomposable unit vectors
        // overlap ξ by at most 1/2, so every pairing is at least 1/4
        let basis = MultiIndex::all(4, 2);
        let at = |i: &[usize]| basis.iter().position(|b| b.indices() == i).unwrap();
        let mut h = DMatrix::<C64>::identity(6, 6);
        let (a, b) = (at(&[1, 2]), at(&[3, 4]));
        for (x, y) in [(a, a), (a, b), (b, a), (b, b)] {
            h[(x, y)] -= c(0.75, 0.0);
        }
        let u = ExteriorForm::from_plucker_matrix(4, 2, &basis, &h).unwrap();
        assert!(check_hermitian_positive(&u, 1e-9).unwrap().is_refuted());
        let v = check_positive(&u, &SearchBudget::default()).unwrap();
        assert!(v.is_certified() && v.heuristic);
        assert!(v.margin >= 0.25 - 1e-9);
    }

    #[test]
    fn degenerate_degrees() {
        let b = SearchBudget::default();
        let one = ExteriorForm::one(3);
        assert!(check_positive(&one, &b).unwrap().is_certified());
        assert!(check_positive(&-&one, &b).unwrap().is_refuted());
        let vol = ExteriorForm::unit_volume(3);
        assert!(check_positive(&vol, &b).unwrap().is_certified());
        assert!(check_positive(&-&vol, &b).unwrap().is_refuted());
        let zero = ExteriorForm::zero(3, 2, 2);
        for v in [
            check_positive(&zero, &b).unwrap(),
            check_hermitian_positive(&zero, 1e-9).unwrap(),
            check_strongly_positive(&zero, &b).unwrap(),
        ] {
            assert_eq!(v.status, Status::Certified);
            assert_eq!(v.margin, 0.0);
        }
    }

    #[test]
    fn rejects_non_real_input() {
        let u = &Covector::basis(2, 1).to_form() ^ &Covector::basis(2, 2).to_conj_form();
        assert!(matches!(
            check_positive(&u, &SearchBudget::default()),
            Err(PositivityError::Form(FormError::NotReal { .. }))
        ));
        let budget = SearchBudget { tol: 0.0, ..SearchBudget::default() };
        assert!(check_positive(&ie(2, 1), &budget).is_err());
    }

    #[test]
    fn hermitian_examples() {
        assert!(check_hermitian_positive(&non_decomposable(), 1e-9).unwrap().is_certified());
        let u = -&ie(2, 1);
        let v = check_hermitian_positive(&u, 1e-9).unwrap();
        assert!(v.is_refuted());
        assert!(v.witness.unwrap().replay(&u).unwrap() < -v.threshold);
    }

    #[test]
    fn strong_examples() {
        let b = SearchBudget::default();
        let v = check_strongly_positive(&ie(3, 1), &b).unwrap();
        assert!(v.is_certified());
        let Some(Witness::Certificate(cert)) = &v.witness else { panic!() };
        assert!(cert.to_form().distance(&ie(3, 1)).unwrap() < 1e-8);

        let v = check_strongly_positive(&non_decomposable(), &b).unwrap();
        assert_ne!(v.status, Status::Certified);

        let u = -&ie(2, 1);
        let v = check_strongly_positive(&u, &b).unwrap();
        assert!(v.is_refuted());
        assert!(v.witness.unwrap().replay(&u).unwrap() < -v.threshold);
    }

    #[test]
    fn certificates_multiply() {
        let b = SearchBudget::default();
        let u1 = &ie(4, 1) + &ie(4, 2).scale_real(2.0);
        let u2 = &ie(4, 3) + &(&ie(4, 1) + &ie(4, 4));
        let cert = |u: &ExteriorForm| match check_strongly_positive(u, &b).unwrap().witness {
            Some(Witness::Certificate(c)) => c,
            other => panic!("{other:?}"),
        };
        let product = cert(&u1).wedge(&cert(&u2));
        let u = &u1 ^ &u2;
        assert!(product.to_form().distance(&u).unwrap() < 1e-8 * u.max_abs());
        let v = check_strongly_positive_with(&u, &b, &product.factor_lists()).unwrap();
        assert!(v.is_certified());
    }

    #[test]
    fn factorization_recovers_decomposables() {
        let n = 4;
        let f = vec![
            Covector::new(vec![c(1.0, 0.5), c(0.0, 1.0), c(2.0, 0.0), c(-1.0, 0.0)]),
            Covector::new(vec![c(0.0, 0.0), c(1.0, -1.0), c(0.5, 0.5), c(0.0, 3.0)]),
        ];
        let basis = MultiIndex::all(n, 2);
        let frame: Vec<Vec<C64>> = f.iter().map(|c| c.components().to_vec()).collect();
        let xi = plucker_coordinates(&frame, &basis);
        let g = factorize(n, 2, &basis, &xi).unwrap();
        let frame: Vec<Vec<C64>> = g.iter().map(|c| c.components().to_vec()).collect();
        let back = plucker_coordinates(&frame, &basis);
        for (a, b) in xi.iter().zip(&back) {
            assert!((a - b).norm() < 1e-10);
        }
        let mut bad = vec![c(0.0, 0.0); 6];
        bad[0] = c(1.0, 0.0); // e12
        bad[5] = c(1.0, 0.0); // e34
        assert!(factorize(n, 2, &basis, &bad).is_none());
    }

    #[test]
    fn seeds_are_spread() {
        let b = SearchBudget::default();
        assert_ne!(b.start_seed(0), b.start_seed(1));
        assert_ne!(b.start_seed(0), b.with_seed(1).start_seed(0));
    }
}
