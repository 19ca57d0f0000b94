//! Curvature tensors with a known positivity pedigree.
//!
//! Positive controls are dual-Nakano tensors `Θ = A∧Āᵗ`, split sums of
//! positive line bundles, tensors `ω ⊗ P` and convex mixtures of these; the
//! negative control plants a negative direction in `Θ_{11}`. Every random
//! draw is seeded, so a spec always produces the same tensor.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::chern_weil::{ChernError, CurvaturePoint};
use crate::exterior::{Covector, ExteriorForm, MultiIndex};
use crate::linalg;
use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("input is not positive: {0}")]
    NotPositive(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Curvature(#[from] ChernError),
}

/// splitmix64 of `(seed, index)`; used for every per-sample or per-start
/// seed in the crate.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `n` independent standard complex Gaussians `(a + ib)/√2`, times `scale`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> Vec<C64> {
    let s = scale / std::f64::consts::SQRT_2;
    (0..n)
        .map(|_| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            Complex64::new(a * s, b * s)
        })
        .collect()
}

/// A uniformly distributed unit vector in `ℂⁿ`.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v = complex_gaussian(rng, n, 1.0);
        let norm = linalg::norm(&v);
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// `i Σ_{jk} H_{jk} e_j∧ē_k`; real when `H` is Hermitian, positive when `H`
/// is positive semidefinite.
pub fn kahler_from_matrix(h: &DMatrix<C64>) -> ExteriorForm {
    let n = h.nrows();
    ExteriorForm::from_plucker_matrix(n, 1, &MultiIndex::all(n, 1), h).expect("square matrix")
}

/// Eigenvalues (ascending) of the Hermitian matrix of a real `(1,1)`-form
/// `ω = i Σ H_{jk} e_j∧ē_k`.
pub fn form_eigenvalues(omega: &ExteriorForm) -> Vec<f64> {
    let h = omega.plucker_matrix().expect("(1,1)-form").matrix;
    linalg::hermitian_eigen(&h).0
}

/// A random positive definite `H = B B*/n + δ·Id`, `δ = 0.1`.
fn random_positive_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DMatrix<C64> {
    let b = DMatrix::from_vec(n, n, complex_gaussian(rng, n * n, 1.0));
    let mut h = &b * b.adjoint() / Complex64::new(n as f64, 0.0);
    for j in 0..n {
        h[(j, j)] += 0.1;
    }
    h * Complex64::new(scale, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorKind {
    /// `A` is `r x m`.
    DualNakano {
        m: usize,
    },
    LineSum,
    PsdTensor,
    /// Random convex mixture of the three positive kinds.
    ConvexMix {
        parts: usize,
    },
    Indefinite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub n: usize,
    pub r: usize,
    pub kind: GeneratorKind,
    pub seed: u64,
    pub scale: f64,
}

impl GeneratorSpec {
    pub fn new(n: usize, r: usize, kind: GeneratorKind, seed: u64) -> Self {
        GeneratorSpec { n, r, kind, seed, scale: 1.0 }
    }

    pub fn dual_nakano(n: usize, r: usize, m: usize, seed: u64) -> Self {
        Self::new(n, r, GeneratorKind::DualNakano { m }, seed)
    }

    /// The `index`-th positive control of a battery: kinds cycle through
    /// dual-Nakano, line sum, `ω ⊗ P` and convex mixtures.
    pub fn positive_control(n: usize, r: usize, index: u64, seed: u64) -> Self {
        let kind = match index % 4 {
            0 => GeneratorKind::DualNakano { m: r + 1 },
            1 => GeneratorKind::LineSum,
            2 => GeneratorKind::PsdTensor,
            _ => GeneratorKind::ConvexMix { parts: 3 },
        };
        Self::new(n, r, kind, derive_seed(seed, index))
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.n == 0 || self.r == 0 {
            return Err(GeneratorError::InvalidSpec(format!("n={} and r={} must be positive", self.n, self.r)));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(GeneratorError::InvalidSpec(format!("scale {} must be positive", self.scale)));
        }
        match self.kind {
            GeneratorKind::DualNakano { m: 0 } => Err(GeneratorError::InvalidSpec("m must be positive".into())),
            GeneratorKind::ConvexMix { parts: 0 } => Err(GeneratorError::InvalidSpec("parts must be positive".into())),
            _ => Ok(()),
        }
    }

    pub fn try_generate(&self) -> Result<CurvaturePoint, GeneratorError> {
        self.validate()?;
        let (n, r) = (self.n, self.r);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        match self.kind {
            GeneratorKind::DualNakano { m } => Ok(dual_nakano_sample(n, r, m, self.scale, &mut rng)),
            GeneratorKind::LineSum => {
                let omegas: Vec<ExteriorForm> =
                    (0..r).map(|_| kahler_from_matrix(&random_positive_matrix(&mut rng, n, self.scale))).collect();
                line_sum(n, &omegas)
            }
            GeneratorKind::PsdTensor => {
                let omega = kahler_from_matrix(&random_positive_matrix(&mut rng, n, self.scale));
                // rank between 1 and r, so boundary cases occur
                let rank = rng.random_range(1..=r);
                let b = DMatrix::from_vec(r, rank, complex_gaussian(&mut rng, r * rank, 1.0));
                psd_tensor(&omega, &(&b * b.adjoint()))
            }
            GeneratorKind::ConvexMix { parts } => {
                let mut cs = Vec::with_capacity(parts);
                let mut weights = Vec::with_capacity(parts);
                for k in 0..parts {
                    let sub = GeneratorSpec {
                        kind: [GeneratorKind::DualNakano { m: r }, GeneratorKind::LineSum, GeneratorKind::PsdTensor]
                            [k % 3]
                            .clone(),
                        seed: derive_seed(self.seed, k as u64 + 1),
                        ..self.clone()
                    };
                    cs.push(sub.try_generate()?);
                    weights.push(rng.random::<f64>() + 1e-3);
                }
                let total: f64 = weights.iter().sum();
                let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
                convex_combine(&cs, &weights)
            }
            GeneratorKind::Indefinite => Ok(indefinite_control(n, r, self.seed)),
        }
    }

    /// [`Self::try_generate`], panicking on an invalid spec.
    pub fn generate(&self) -> CurvaturePoint {
        self.try_generate().expect("valid generator spec")
    }
}

/// `Θ_{αβ} = Σ_μ A_{αμ} ∧ conj(A_{βμ})` for an `r x m` matrix of covectors.
pub fn dual_nakano_from(n: usize, a: &[Vec<Covector>]) -> Result<CurvaturePoint, GeneratorError> {
    let r = a.len();
    let m = a.first().map_or(0, Vec::len);
    if r == 0 || m == 0 || a.iter().any(|row| row.len() != m || row.iter().any(|c| c.n() != n)) {
        return Err(GeneratorError::Shape(format!("A must be a nonempty r x m matrix of covectors on C^{n}")));
    }
    let holo: Vec<Vec<ExteriorForm>> = a.iter().map(|row| row.iter().map(Covector::to_form).collect()).collect();
    let anti: Vec<Vec<ExteriorForm>> = a.iter().map(|row| row.iter().map(Covector::to_conj_form).collect()).collect();
    Ok(CurvaturePoint::from_fn(n, r, |al, be| {
        let mut acc = ExteriorForm::zero(n, 1, 1);
        for mu in 0..m {
            acc = &acc + &(&holo[al][mu] ^ &anti[be][mu]);
        }
        acc
    })?)
}

fn dual_nakano_sample(n: usize, r: usize, m: usize, scale: f64, rng: &mut ChaCha8Rng) -> CurvaturePoint {
    let a: Vec<Vec<Covector>> =
        (0..r).map(|_| (0..m).map(|_| Covector::new(complex_gaussian(rng, n, scale))).collect()).collect();
    dual_nakano_from(n, &a).expect("consistent shape")
}

fn require_positive(omega: &ExteriorForm, n: usize, strict: bool) -> Result<(), GeneratorError> {
    if omega.n() != n || omega.bidegree() != (1, 1) {
        return Err(GeneratorError::Shape(format!("expected a (1,1)-form on C^{n}")));
    }
    if !omega.is_real(omega.real_tolerance()) {
        return Err(GeneratorError::NotPositive("form is not real".into()));
    }
    let values = form_eigenvalues(omega);
    let top = values.last().copied().unwrap_or(0.0).abs();
    let floor = if strict { 0.0 } else { -1e-12 * top.max(1.0) };
    if values[0] <= floor && (strict || values[0] < floor) {
        return Err(GeneratorError::NotPositive(format!("smallest eigenvalue {:e}", values[0])));
    }
    Ok(())
}

/// `Θ = diag(-i ω_1, …, -i ω_r)` for strictly positive `ω_α`.
pub fn line_sum(n: usize, omegas: &[ExteriorForm]) -> Result<CurvaturePoint, GeneratorError> {
    if omegas.is_empty() {
        return Err(GeneratorError::Shape("need at least one form".into()));
    }
    for w in omegas {
        require_positive(w, n, true)?;
    }
    let minus_i = Complex64::new(0.0, -1.0);
    Ok(CurvaturePoint::from_fn(n, omegas.len(), |a, b| {
        if a == b {
            omegas[a].scale(minus_i)
        } else {
            ExteriorForm::zero(n, 1, 1)
        }
    })?)
}

/// `Θ_{αβ} = -i P_{αβ} ω` for `ω ≥ 0` and `P ⪰ 0`.
pub fn psd_tensor(omega: &ExteriorForm, p: &DMatrix<C64>) -> Result<CurvaturePoint, GeneratorError> {
    let n = omega.n();
    require_positive(omega, n, false)?;
    let r = p.nrows();
    if r == 0 || p.ncols() != r {
        return Err(GeneratorError::Shape("P must be square and nonempty".into()));
    }
    let scale = linalg::max_abs(p).max(1.0);
    if linalg::hermitian_residual(p) > 1e-12 * scale {
        return Err(GeneratorError::NotPositive("P is not Hermitian".into()));
    }
    let (values, _) = linalg::hermitian_eigen(p);
    if values[0] < -1e-12 * scale {
        return Err(GeneratorError::NotPositive(format!("P has eigenvalue {:e}", values[0])));
    }
    let minus_i = Complex64::new(0.0, -1.0);
    Ok(CurvaturePoint::from_fn(n, r, |a, b| omega.scale(minus_i * p[(a, b)]))?)
}

/// `Θ - i·ε·ω ⊗ Id`, i.e. `iΘ + ε ω ⊗ Id`.
pub fn epsilon_perturb(c: &CurvaturePoint, omega: &ExteriorForm, eps: f64) -> Result<CurvaturePoint, GeneratorError> {
    if eps < 0.0 {
        return Err(GeneratorError::InvalidSpec(format!("eps {eps} must be nonnegative")));
    }
    require_positive(omega, c.n(), true)?;
    let shift = omega.scale(Complex64::new(0.0, -eps));
    Ok(c.map_entries(|a, b, t| if a == b { t + &shift } else { t.clone() }))
}

/// `Σ_i w_i Θ_i` for nonnegative weights.
pub fn convex_combine(cs: &[CurvaturePoint], weights: &[f64]) -> Result<CurvaturePoint, GeneratorError> {
    let Some(first) = cs.first() else {
        return Err(GeneratorError::Shape("need at least one curvature".into()));
    };
    if cs.len() != weights.len() {
        return Err(GeneratorError::Shape(format!("{} curvatures, {} weights", cs.len(), weights.len())));
    }
    if weights.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
        return Err(GeneratorError::InvalidSpec("weights must be nonnegative".into()));
    }
    if cs.iter().any(|c| c.n() != first.n() || c.r() != first.r()) {
        return Err(GeneratorError::Shape("all curvatures must share (n, r)".into()));
    }
    Ok(first.map_entries(|a, b, _| {
        let mut acc = ExteriorForm::zero(first.n(), 1, 1);
        for (c, &w) in cs.iter().zip(weights) {
            acc = &acc + &c.entry(a, b).scale_real(w);
        }
        acc
    }))
}

/// Dual-Nakano sample with `Θ_{11}` lowered by `(λ_max + 1)·Σ e_j∧ē_j`,
/// where `λ_max` is the top eigenvalue of the coefficient matrix of
/// `Θ_{11}`. Then `G(e_1, τ) ≤ -|τ|²`.
pub fn indefinite_control(n: usize, r: usize, seed: u64) -> CurvaturePoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = dual_nakano_sample(n, r, r + 1, 1.0, &mut rng);
    let t11 = base.entry(0, 0);
    let t = DMatrix::from_fn(n, n, |j, k| t11.coeff(MultiIndex::single(j + 1), MultiIndex::single(k + 1)));
    let lambda_max = *linalg::hermitian_eigen(&t).0.last().expect("n >= 1");
    let c = lambda_max + 1.0;
    // Σ e_j∧ē_j = -i·(i Σ e_j∧ē_j)
    let shift = ExteriorForm::kahler(n).scale(Complex64::new(0.0, -c));
    base.map_entries(|a, b, th| if (a, b) == (0, 0) { th - &shift } else { th.clone() })
}

/// A random curvature satisfying only the Hermitian symmetry
/// `conj(Θ_{αβ}) = -Θ_{βα}`, with no positivity.
pub fn random_hermitian(n: usize, r: usize, seed: u64) -> CurvaturePoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let coeffs = complex_gaussian(&mut rng, n * n, 1.0);
        ExteriorForm::from_terms(
            n,
            1,
            1,
            (0..n * n).map(|k| ((MultiIndex::single(k / n + 1), MultiIndex::single(k % n + 1)), coeffs[k])),
        )
        .expect("(1,1) terms")
    };
    let mut upper: Vec<Vec<ExteriorForm>> = vec![Vec::new(); r];
    for (a, row) in upper.iter_mut().enumerate() {
        for _ in a..r {
            row.push(draw());
        }
    }
    CurvaturePoint::from_fn(n, r, |a, b| {
        if a == b {
            let x = &upper[a][0];
            (x - &x.conjugate()).scale_real(0.5)
        } else if a < b {
            upper[a][b - a].clone()
        } else {
            -&upper[b][a - b].conjugate()
        }
    })
    .expect("valid shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::positivity::SearchBudget;

    #[test]
    fn single_covector_dual_nakano() {
        let cp = dual_nakano_from(2, &[vec![Covector::basis(2, 1)]]).unwrap();
        let expected = &Covector::basis(2, 1).to_form() ^ &Covector::basis(2, 1).to_conj_form();
        assert_eq!(cp.entry(0, 0), &expected);
        let rep = cp.griffiths_minimum(&SearchBudget::default()).unwrap();
        assert!(rep.min_value.abs() < 1e-12, "min over units is 0 (τ = e_2)");
        let g = cp
            .griffiths_biquadratic(&[Complex64::new(1.0, 0.0)], &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        assert!((g - 1.0).abs() < 1e-15);
    }

    #[test]
    fn every_kind_is_hermitian() {
        for kind in [
            GeneratorKind::DualNakano { m: 2 },
            GeneratorKind::LineSum,
            GeneratorKind::PsdTensor,
            GeneratorKind::ConvexMix { parts: 3 },
            GeneratorKind::Indefinite,
        ] {
            let cp = GeneratorSpec::new(3, 2, kind.clone(), 5).generate();
            assert!(cp.validate().is_empty(), "{kind:?}");
        }
    }

    #[test]
    fn line_sum_c1() {
        let n = 3;
        let omega = ExteriorForm::kahler(n);
        let cp = line_sum(n, &[omega.clone(), omega.clone(), omega.clone()]).unwrap();
        let expected = omega.scale_real(3.0 / (2.0 * std::f64::consts::PI));
        assert!(cp.chern_form(1).unwrap().distance(&expected).unwrap() < 1e-15);
        assert!(line_sum(n, &[-&omega]).is_err());
    }

    #[test]
    fn rank_one_psd_tensor_touches_zero() {
        let n = 2;
        let mut p = DMatrix::zeros(2, 2);
        p[(0, 0)] = Complex64::new(1.0, 0.0);
        let cp = psd_tensor(&ExteriorForm::kahler(n), &p).unwrap();
        let rep = cp.griffiths_minimum(&SearchBudget::default()).unwrap();
        assert!(rep.min_value.abs() < 1e-12);
        let zero = psd_tensor(&ExteriorForm::zero(n, 1, 1), &p).unwrap();
        assert!(zero.chern_form(1).unwrap().is_zero());
        p[(1, 1)] = Complex64::new(-1.0, 0.0);
        assert!(psd_tensor(&ExteriorForm::kahler(n), &p).is_err());
    }

    #[test]
    fn perturbation_and_mixing() {
        let cp = GeneratorSpec::dual_nakano(2, 2, 2, 1).generate();
        let omega = ExteriorForm::kahler(2);
        assert_eq!(epsilon_perturb(&cp, &omega, 0.0).unwrap(), cp);
        assert_eq!(convex_combine(std::slice::from_ref(&cp), &[1.0]).unwrap(), cp);
        let zero = convex_combine(&[cp.clone(), cp.clone()], &[0.0, 0.0]).unwrap();
        assert!(zero.max_abs() == 0.0);
        assert!(epsilon_perturb(&cp, &omega, -1.0).is_err());
    }

    #[test]
    fn indefinite_plants_negative_direction() {
        let cp = indefinite_control(2, 2, 3);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        for tau in [[one, zero], [zero, one]] {
            assert!(cp.griffiths_biquadratic(&[one, zero], &tau).unwrap() <= -1.0 + 1e-12);
        }
    }

    #[test]
    fn seeds_reproduce() {
        let a = GeneratorSpec::positive_control(3, 3, 7, 42).generate();
        let b = GeneratorSpec::positive_control(3, 3, 7, 42).generate();
        assert_eq!(a, b);
        assert_ne!(a, GeneratorSpec::positive_control(3, 3, 7, 43).generate());
    }
}
