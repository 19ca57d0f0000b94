//! Exterior forms of bidegree `(p, q)` on a fixed `ℂⁿ`.
//!
//! A form is stored sparsely as a map from index pairs `(I, J)` to complex
//! coefficients, where the pair stands for the basis element
//!
//! ```text
//! e_I ∧ ē_J = e_{i1}∧…∧e_{ip} ∧ ē_{j1}∧…∧ē_{jq}
//! ```
//!
//! with the holomorphic block always written first. Only exact zeros are
//! pruned; nothing is rounded away.
//!
//! Conjugation maps `c·e_I∧ē_J` to `(-1)^{pq}·c̄·e_J∧ē_I`, so that
//! `i·e_j∧ē_j` is real. The unit volume form is
//! `(i e_1∧ē_1)∧…∧(i e_n∧ē_n) = i^{n²}·e_{1…n}∧ē_{1…n}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, BitXor, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::linalg;
use crate::C64;

/// Largest supported ambient dimension. Multi-indices are bitmasks.
pub const MAX_DIM: usize = 16;

/// Relative tolerance used by the default reality and symmetry checks.
pub const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("ambient dimension {0} is not supported (1..={MAX_DIM})")]
    UnsupportedDimension(usize),
    #[error("invalid multi-index {indices:?} for dimension {n}")]
    InvalidIndex { indices: Vec<usize>, n: usize },
    #[error("bidegree ({p},{q}) out of range for dimension {n}")]
    BidegreeOutOfRange { p: usize, q: usize, n: usize },
    #[error("term of shape ({got_p},{got_q}) in a form of bidegree ({p},{q})")]
    TermShape { got_p: usize, got_q: usize, p: usize, q: usize },
    #[error("bidegree mismatch: ({0},{1}) vs ({2},{3})")]
    BidegreeMismatch(usize, usize, usize, usize),
    #[error("expected a top-degree ({n},{n}) form, got ({p},{q})")]
    NotTopDegree { p: usize, q: usize, n: usize },
    #[error("form is not real (residual {residual:e})")]
    NotReal { residual: f64 },
    #[error("expected {expected} vectors, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("vectors do not span a {expected}-dimensional subspace")]
    RankDeficient { expected: usize },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
}

/// `i^k`.
pub fn i_pow(k: usize) -> C64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `(-i)^k`.
pub fn neg_i_pow(k: usize) -> C64 {
    i_pow(k).conj()
}

/// A strictly increasing sequence of indices in `[1, n]`, stored as a bitmask
/// (bit `j - 1` set for index `j`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Builds a multi-index from 1-based indices, which must be strictly
    /// increasing and lie in `[1, n]`.
    pub fn new(indices: &[usize], n: usize) -> Result<Self, FormError> {
        let bad = || FormError::InvalidIndex { indices: indices.to_vec(), n };
        if n > MAX_DIM {
            return Err(FormError::UnsupportedDimension(n));
        }
        let mut mask = 0u32;
        let mut last = 0;
        for &i in indices {
            if i <= last || i > n {
                return Err(bad());
            }
            mask |= 1 << (i - 1);
            last = i;
        }
        Ok(MultiIndex(mask))
    }

    pub fn single(i: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&i), "index {i} out of range");
        MultiIndex(1 << (i - 1))
    }

    /// `{1, …, n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_DIM);
        MultiIndex(((1u64 << n) - 1) as u32)
    }

    pub fn from_mask(mask: u32) -> Self {
        MultiIndex(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=32).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// Largest index, or 0 for the empty index.
    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn complement(self, n: usize) -> Self {
        MultiIndex(Self::full(n).0 & !self.0)
    }

    /// Position of index `i` inside this multi-index (0-based).
    pub fn position(self, i: usize) -> Option<usize> {
        self.contains(i).then(|| (self.0 & ((1u32 << (i - 1)) - 1)).count_ones() as usize)
    }

    /// Sorts the concatenation `self ++ other` into increasing order.
    /// Returns `None` if the two share an index, otherwise the union and the
    /// sign of the sorting permutation.
    pub fn concat_sign(self, other: Self) -> Option<(Self, f64)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            // elements of self strictly greater than b + 1
            inversions += (self.0 >> (b + 1)).count_ones();
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        Some((MultiIndex(self.0 | other.0), sign))
    }

    /// All multi-indices of length `len` in `[1, n]`, lexicographically.
    pub fn all(n: usize, len: usize) -> Vec<Self> {
        fn rec(start: usize, n: usize, left: usize, acc: u32, out: &mut Vec<MultiIndex>) {
            if left == 0 {
                out.push(MultiIndex(acc));
                return;
            }
            for i in start..=n {
                if n - i + 1 < left {
                    break;
                }
                rec(i + 1, n, left - 1, acc | (1 << (i - 1)), out);
            }
        }
        let mut out = Vec::new();
        if len <= n {
            rec(1, n, len, 0, &mut out);
        }
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Components of a covector against the dual basis `e_1^∨, …, e_n^∨`.
///
/// The same type doubles as a tangent vector (components against `e_j`)
/// wherever forms are evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct Covector {
    components: Vec<C64>,
}

impl Covector {
    pub fn new(components: Vec<C64>) -> Self {
        Covector { components }
    }

    pub fn from_real(components: &[f64]) -> Self {
        Covector { components: components.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    /// `e_j^∨` (1-based).
    pub fn basis(n: usize, j: usize) -> Self {
        assert!(j >= 1 && j <= n, "basis index {j} out of range for n = {n}");
        let mut components = vec![Complex64::new(0.0, 0.0); n];
        components[j - 1] = Complex64::new(1.0, 0.0);
        Covector { components }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[C64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.components)
    }

    pub fn scaled(&self, c: C64) -> Self {
        Covector { components: self.components.iter().map(|z| z * c).collect() }
    }

    pub fn conj(&self) -> Self {
        Covector { components: self.components.iter().map(|z| z.conj()).collect() }
    }

    /// The `(1,0)`-form `Σ a_j e_j^∨`.
    pub fn to_form(&self) -> ExteriorForm {
        let n = self.n();
        ExteriorForm::from_terms_unchecked(
            n,
            1,
            0,
            self.components.iter().enumerate().map(|(j, &c)| ((MultiIndex(1 << j), MultiIndex::EMPTY), c)),
        )
    }

    /// The `(0,1)`-form `Σ ā_j ē_j^∨`, i.e. the conjugate of [`Self::to_form`].
    pub fn to_conj_form(&self) -> ExteriorForm {
        self.to_form().conjugate()
    }
}

impl Add for &Covector {
    type Output = Covector;
    fn add(self, rhs: &Covector) -> Covector {
        assert_eq!(self.n(), rhs.n(), "covector dimension mismatch");
        Covector { components: self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect() }
    }
}

/// Result of a wedge product. Products whose degree exceeds the ambient
/// dimension vanish identically; they are reported as `Annihilated`, carrying
/// the zero form of clamped bidegree.
#[derive(Clone, Debug, PartialEq)]
pub enum Wedge {
    Form(ExteriorForm),
    Annihilated(ExteriorForm),
}

impl Wedge {
    pub fn into_form(self) -> ExteriorForm {
        match self {
            Wedge::Form(f) | Wedge::Annihilated(f) => f,
        }
    }

    pub fn is_annihilated(&self) -> bool {
        matches!(self, Wedge::Annihilated(_))
    }
}

/// A complex exterior form of bidegree `(p, q)` on `ℂⁿ`.
#[derive(Clone, PartialEq)]
pub struct ExteriorForm {
    n: usize,
    p: usize,
    q: usize,
    coeffs: BTreeMap<(MultiIndex, MultiIndex), C64>,
}

/// Dense Hermitian matrix attached to a real `(p,p)`-form together with the
/// index basis of its rows and columns.
#[derive(Clone, Debug)]
pub struct HermitianGram {
    pub basis: Vec<MultiIndex>,
    pub matrix: DMatrix<C64>,
}

impl ExteriorForm {
    fn check_shape(n: usize, p: usize, q: usize) -> Result<(), FormError> {
        if n == 0 || n > MAX_DIM {
            return Err(FormError::UnsupportedDimension(n));
        }
        if p > n || q > n {
            return Err(FormError::BidegreeOutOfRange { p, q, n });
        }
        Ok(())
    }

    /// The zero form. Panics if the shape is invalid.
    pub fn zero(n: usize, p: usize, q: usize) -> Self {
        Self::check_shape(n, p, q).expect("invalid form shape");
        ExteriorForm { n, p, q, coeffs: BTreeMap::new() }
    }

    /// The constant `(0,0)`-form `c`.
    pub fn scalar(n: usize, c: C64) -> Self {
        let mut f = Self::zero(n, 0, 0);
        if c != Complex64::new(0.0, 0.0) {
            f.coeffs.insert((MultiIndex::EMPTY, MultiIndex::EMPTY), c);
        }
        f
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Complex64::new(1.0, 0.0))
    }

    /// `e_I ∧ ē_J`.
    pub fn basis(n: usize, i: MultiIndex, j: MultiIndex) -> Result<Self, FormError> {
        Self::from_terms(n, i.len(), j.len(), [((i, j), Complex64::new(1.0, 0.0))])
    }

    /// Builds a form from `(I, J) ↦ c` terms. Duplicate keys are summed and
    /// exact zeros dropped.
    pub fn from_terms<T>(n: usize, p: usize, q: usize, terms: T) -> Result<Self, FormError>
    where
        T: IntoIterator<Item = ((MultiIndex, MultiIndex), C64)>,
    {
        Self::check_shape(n, p, q)?;
        let full = MultiIndex::full(n).0;
        let mut f = ExteriorForm { n, p, q, coeffs: BTreeMap::new() };
        for ((i, j), c) in terms {
            if i.len() != p || j.len() != q {
                return Err(FormError::TermShape { got_p: i.len(), got_q: j.len(), p, q });
            }
            if i.0 & !full != 0 || j.0 & !full != 0 {
                let bad = if i.0 & !full != 0 { i } else { j };
                return Err(FormError::InvalidIndex { indices: bad.indices(), n });
            }
            *f.coeffs.entry((i, j)).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        f.prune();
        Ok(f)
    }

    pub(crate) fn from_terms_unchecked<T>(n: usize, p: usize, q: usize, terms: T) -> Self
    where
        T: IntoIterator<Item = ((MultiIndex, MultiIndex), C64)>,
    {
        let mut f = ExteriorForm { n, p, q, coeffs: BTreeMap::new() };
        for (key, c) in terms {
            *f.coeffs.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        f.prune();
        f
    }

    /// The standard Kähler form `i Σ_j e_j^∨ ∧ ē_j^∨`.
    pub fn kahler(n: usize) -> Self {
        Self::from_terms_unchecked(
            n,
            1,
            1,
            (1..=n).map(|j| ((MultiIndex::single(j), MultiIndex::single(j)), Complex64::new(0.0, 1.0))),
        )
    }

    /// The unit volume form `(i e_1∧ē_1)∧…∧(i e_n∧ē_n)`.
    pub fn unit_volume(n: usize) -> Self {
        let full = MultiIndex::full(n);
        Self::from_terms_unchecked(n, n, n, [((full, full), i_pow(n * n))])
    }

    /// `Σ_{I,J} h_{IJ} · i^{p²} e_I ∧ ē_J`. Real whenever `h` is Hermitian.
    pub fn from_plucker_matrix(n: usize, p: usize, basis: &[MultiIndex], h: &DMatrix<C64>) -> Result<Self, FormError> {
        Self::check_shape(n, p, p)?;
        if h.nrows() != basis.len() || h.ncols() != basis.len() {
            return Err(FormError::DimensionMismatch { left: h.nrows(), right: basis.len() });
        }
        let phase = i_pow(p * p);
        let mut terms = Vec::new();
        for (a, &ia) in basis.iter().enumerate() {
            for (b, &ib) in basis.iter().enumerate() {
                terms.push(((ia, ib), h[(a, b)] * phase));
            }
        }
        Self::from_terms(n, p, p, terms)
    }

    /// Inverse of [`Self::from_plucker_matrix`] on the lexicographic basis of
    /// `p`-subsets: `h_{IJ} = (-i)^{p²} u_{IJ}`.
    pub fn plucker_matrix(&self) -> Result<HermitianGram, FormError> {
        if self.p != self.q {
            return Err(FormError::BidegreeMismatch(self.p, self.q, self.p, self.p));
        }
        let basis = MultiIndex::all(self.n, self.p);
        let pos: BTreeMap<MultiIndex, usize> = basis.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let phase = neg_i_pow(self.p * self.p);
        let mut matrix = DMatrix::zeros(basis.len(), basis.len());
        for (&(i, j), &c) in &self.coeffs {
            matrix[(pos[&i], pos[&j])] = c * phase;
        }
        Ok(HermitianGram { basis, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn coeff(&self, i: MultiIndex, j: MultiIndex) -> C64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &C64)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Max-norm distance to another form of the same shape.
    pub fn distance(&self, other: &Self) -> Result<f64, FormError> {
        self.check_same_shape(other)?;
        let mut d: f64 = 0.0;
        for (k, a) in &self.coeffs {
            let b = other.coeffs.get(k).copied().unwrap_or_default();
            d = d.max((a - b).norm());
        }
        for (k, b) in &other.coeffs {
            if !self.coeffs.contains_key(k) {
                d = d.max(b.norm());
            }
        }
        Ok(d)
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), FormError> {
        if self.n != other.n {
            return Err(FormError::DimensionMismatch { left: self.n, right: other.n });
        }
        if (self.p, self.q) != (other.p, other.q) {
            return Err(FormError::BidegreeMismatch(self.p, self.q, other.p, other.q));
        }
        Ok(())
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut f = self.clone();
        for v in f.coeffs.values_mut() {
            *v *= c;
        }
        f.prune();
        f
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FormError> {
        self.check_same_shape(other)?;
        let mut f = self.clone();
        for (k, v) in &other.coeffs {
            *f.coeffs.entry(*k).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        f.prune();
        Ok(f)
    }

    /// Exterior product. The sign is the one obtained by moving the second
    /// factor's holomorphic block past the first factor's antiholomorphic
    /// block, then sorting each block.
    pub fn wedge(&self, other: &Self) -> Result<Wedge, FormError> {
        if self.n != other.n {
            return Err(FormError::DimensionMismatch { left: self.n, right: other.n });
        }
        let n = self.n;
        let (p, q) = (self.p + other.p, self.q + other.q);
        if p > n || q > n {
            return Ok(Wedge::Annihilated(Self::zero(n, p.min(n), q.min(n))));
        }
        let koszul = if (self.q * other.p) % 2 == 0 { 1.0 } else { -1.0 };
        let mut coeffs: BTreeMap<(MultiIndex, MultiIndex), C64> = BTreeMap::new();
        for (&(i1, j1), a) in &self.coeffs {
            for (&(i2, j2), b) in &other.coeffs {
                let Some((i, si)) = i1.concat_sign(i2) else { continue };
                let Some((j, sj)) = j1.concat_sign(j2) else { continue };
                *coeffs.entry((i, j)).or_insert(Complex64::new(0.0, 0.0)) += a * b * (koszul * si * sj);
            }
        }
        let mut f = ExteriorForm { n, p, q, coeffs };
        f.prune();
        Ok(Wedge::Form(f))
    }

    /// `u ∧ u ∧ … ∧ u` (`k` factors); `u^0 = 1`.
    pub fn wedge_power(&self, k: usize) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = &acc ^ self;
        }
        acc
    }

    /// Complex conjugate: `c·e_I∧ē_J ↦ (-1)^{pq}·c̄·e_J∧ē_I`.
    pub fn conjugate(&self) -> Self {
        let sign = if (self.p * self.q) % 2 == 0 { 1.0 } else { -1.0 };
        ExteriorForm {
            n: self.n,
            p: self.q,
            q: self.p,
            coeffs: self.coeffs.iter().map(|(&(i, j), c)| ((j, i), c.conj() * sign)).collect(),
        }
    }

    /// Coefficient-wise max distance between `u` and `ū`; infinite when the
    /// bidegree is not `(p,p)`.
    pub fn reality_residual(&self) -> f64 {
        if self.p != self.q {
            return f64::INFINITY;
        }
        self.distance(&self.conjugate()).expect("same shape")
    }

    /// `(u + ū)/2`, the nearest real form for `(p,p)`-forms.
    pub fn real_part(&self) -> Result<Self, FormError> {
        if self.p != self.q {
            return Err(FormError::BidegreeMismatch(self.p, self.q, self.p, self.p));
        }
        Ok((self + &self.conjugate()).scale_real(0.5))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.reality_residual() <= tol
    }

    /// Default tolerance for reality checks: `1e-9 · max |coefficient|`.
    pub fn real_tolerance(&self) -> f64 {
        REL_TOL * self.max_abs()
    }

    fn require_real(&self) -> Result<(), FormError> {
        let residual = self.reality_residual();
        if residual > self.real_tolerance() {
            return Err(FormError::NotReal { residual });
        }
        Ok(())
    }

    /// The real `τ` with `self = τ · (i e_1∧ē_1)∧…∧(i e_n∧ē_n)`.
    pub fn volume_coefficient(&self) -> Result<f64, FormError> {
        let c = self.top_coefficient()?;
        let tol = REL_TOL * c.norm().max(1.0);
        if c.im.abs() > tol {
            return Err(FormError::NotReal { residual: c.im.abs() });
        }
        Ok(c.re)
    }

    /// Complex volume coefficient, without the reality check.
    pub fn top_coefficient(&self) -> Result<C64, FormError> {
        if self.p != self.n || self.q != self.n {
            return Err(FormError::NotTopDegree { p: self.p, q: self.q, n: self.n });
        }
        let full = MultiIndex::full(self.n);
        Ok(self.coeff(full, full) * neg_i_pow(self.n * self.n))
    }

    /// `(-i)^{p²} u(w_1,…,w_p, w̄_1,…,w̄_p)` for a real `(p,p)`-form.
    ///
    /// The evaluation of `e_I∧ē_J` on these arguments factors as
    /// `det(W_I)·conj(det(W_J))`, where `W_I` is the `p x p` block of
    /// coordinates of the `w`'s in the rows `I`.
    pub fn evaluate_pairing(&self, w: &[Covector]) -> Result<f64, FormError> {
        self.check_vectors(w)?;
        self.require_real()?;
        let mut minors: BTreeMap<MultiIndex, C64> = BTreeMap::new();
        let mut value = Complex64::new(0.0, 0.0);
        for (&(i, j), c) in &self.coeffs {
            let mi = *minors.entry(i).or_insert_with(|| minor(w, i));
            let mj = *minors.entry(j).or_insert_with(|| minor(w, j));
            value += c * mi * mj.conj();
        }
        Ok((value * neg_i_pow(self.p * self.p)).re)
    }

    fn check_vectors(&self, w: &[Covector]) -> Result<(), FormError> {
        if self.p != self.q {
            return Err(FormError::BidegreeMismatch(self.p, self.q, self.p, self.p));
        }
        if w.len() != self.p {
            return Err(FormError::ArityMismatch { expected: self.p, got: w.len() });
        }
        for v in w {
            if v.n() != self.n {
                return Err(FormError::DimensionMismatch { left: self.n, right: v.n() });
            }
        }
        Ok(())
    }

    /// Volume coefficient of the pull-back of `u` to `span(S)`, written in the
    /// basis `S` of that subspace.
    pub fn restrict(&self, s: &[Covector]) -> Result<f64, FormError> {
        self.check_vectors(s)?;
        self.require_real()?;
        let p = self.p;
        if p == 0 {
            return Ok(self.coeff(MultiIndex::EMPTY, MultiIndex::EMPTY).re);
        }
        let frame = DMatrix::from_fn(self.n, p, |row, col| s[col].components()[row]);
        let sv = frame.singular_values();
        let largest = sv.max();
        if sv.min() <= 1e-12 * largest.max(f64::MIN_POSITIVE) {
            return Err(FormError::RankDeficient { expected: p });
        }
        // Pull back e_i^∨ along the inclusion ℂ^p → ℂⁿ given by the columns of S.
        let pulled: Vec<Covector> =
            (0..self.n).map(|row| Covector::new((0..p).map(|col| frame[(row, col)]).collect())).collect();
        let mut holo: BTreeMap<MultiIndex, ExteriorForm> = BTreeMap::new();
        let mut restricted = Self::zero(p, p, p);
        for (&(i, j), c) in &self.coeffs {
            for idx in [i, j] {
                holo.entry(idx).or_insert_with(|| {
                    let factors: Vec<Covector> = idx.indices().iter().map(|&k| pulled[k - 1].clone()).collect();
                    decomposable(p, &factors).expect("consistent dimensions")
                });
            }
            let term = &holo[&i] ^ &holo[&j].conjugate();
            restricted = &restricted + &term.scale(*c);
        }
        restricted.volume_coefficient()
    }

    /// The Hermitian form `(β, η) ↦ vol(u ∧ i^{q²} β ∧ η̄)` on `(q,0)`-forms,
    /// `q = n - p`, as a matrix over the lexicographic basis of `q`-subsets.
    pub fn hermitian_gram(&self) -> Result<HermitianGram, FormError> {
        if self.p != self.q {
            return Err(FormError::BidegreeMismatch(self.p, self.q, self.p, self.p));
        }
        self.require_real()?;
        let n = self.n;
        let q = n - self.p;
        let basis = MultiIndex::all(n, q);
        let phase = i_pow(q * q);
        let mut matrix = DMatrix::zeros(basis.len(), basis.len());
        for (a, &ia) in basis.iter().enumerate() {
            for (b, &ib) in basis.iter().enumerate() {
                let test = Self::basis(n, ia, ib)?.scale(phase);
                let top = (self ^ &test).top_coefficient()?;
                matrix[(a, b)] = top;
            }
        }
        let residual = linalg::hermitian_residual(&matrix);
        if residual > REL_TOL * linalg::max_abs(&matrix).max(f64::MIN_POSITIVE) {
            return Err(FormError::NotHermitian { residual });
        }
        Ok(HermitianGram { basis, matrix })
    }
}

/// `det(W_I)` for the vectors `w` restricted to the coordinates in `rows`.
fn minor(w: &[Covector], rows: MultiIndex) -> C64 {
    let k = w.len();
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let idx = rows.indices();
    let mut buf: Vec<C64> = Vec::with_capacity(k * k);
    for &r in &idx {
        for v in w {
            buf.push(v.components()[r - 1]);
        }
    }
    linalg::det_in_place(&mut buf, k)
}

/// `β_1 ∧ … ∧ β_k` as a `(k,0)`-form on `ℂⁿ`. Dependent factors give zero.
pub fn decomposable(n: usize, factors: &[Covector]) -> Result<ExteriorForm, FormError> {
    if factors.len() > n {
        return Err(FormError::BidegreeOutOfRange { p: factors.len(), q: 0, n });
    }
    let mut acc = ExteriorForm::one(n);
    for f in factors {
        if f.n() != n {
            return Err(FormError::DimensionMismatch { left: n, right: f.n() });
        }
        acc = acc.wedge(&f.to_form())?.into_form();
    }
    Ok(acc)
}

impl fmt::Debug for ExteriorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExteriorForm(n={}, ({},{})) ", self.n, self.p, self.q)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExteriorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (&(i, j), c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) e{i}∧ē{j}")?;
        }
        Ok(())
    }
}

impl Add for &ExteriorForm {
    type Output = ExteriorForm;
    /// Panics on shape mismatch; see [`ExteriorForm::checked_add`].
    fn add(self, rhs: &ExteriorForm) -> ExteriorForm {
        self.checked_add(rhs).expect("form shape mismatch in addition")
    }
}

impl Sub for &ExteriorForm {
    type Output = ExteriorForm;
    fn sub(self, rhs: &ExteriorForm) -> ExteriorForm {
        self.checked_add(&-rhs).expect("form shape mismatch in subtraction")
    }
}

impl Neg for &ExteriorForm {
    type Output = ExteriorForm;
    fn neg(self) -> ExteriorForm {
        self.scale_real(-1.0)
    }
}

impl Mul<C64> for &ExteriorForm {
    type Output = ExteriorForm;
    fn mul(self, c: C64) -> ExteriorForm {
        self.scale(c)
    }
}

impl Mul<f64> for &ExteriorForm {
    type Output = ExteriorForm;
    fn mul(self, c: f64) -> ExteriorForm {
        self.scale_real(c)
    }
}

/// Wedge product; panics on dimension mismatch. Degree overflow yields the
/// zero form of clamped bidegree.
impl BitXor for &ExteriorForm {
    type Output = ExteriorForm;
    fn bitxor(self, rhs: &ExteriorForm) -> ExteriorForm {
        self.wedge(rhs).expect("form dimension mismatch in wedge").into_form()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        Complex64::new(re, im)
    }

    fn e(n: usize, j: usize) -> ExteriorForm {
        Covector::basis(n, j).to_form()
    }

    fn eb(n: usize, j: usize) -> ExteriorForm {
        Covector::basis(n, j).to_conj_form()
    }

    fn idx(i: &[usize], n: usize) -> MultiIndex {
        MultiIndex::new(i, n).unwrap()
    }

    /// `i e_j ∧ ē_j`
    fn unit11(n: usize, j: usize) -> ExteriorForm {
        (&e(n, j) ^ &eb(n, j)).scale(c(0.0, 1.0))
    }

    #[test]
    fn multi_index_validation() {
        assert!(MultiIndex::new(&[1, 3], 3).is_ok());
        assert!(MultiIndex::new(&[3, 1], 3).is_err());
        assert!(MultiIndex::new(&[1, 1], 3).is_err());
        assert!(MultiIndex::new(&[0], 3).is_err());
        assert!(MultiIndex::new(&[4], 3).is_err());
        assert_eq!(idx(&[2, 4], 5).indices(), vec![2, 4]);
        assert_eq!(MultiIndex::all(4, 2).len(), 6);
        assert_eq!(MultiIndex::all(4, 2)[0], idx(&[1, 2], 4));
        assert_eq!(MultiIndex::all(4, 2)[5], idx(&[3, 4], 4));
        assert_eq!(MultiIndex::all(3, 0), vec![MultiIndex::EMPTY]);
        assert_eq!(idx(&[2, 4], 5).position(4), Some(1));
    }

    #[test]
    fn concat_sign_counts_inversions() {
        let (u, s) = idx(&[2], 3).concat_sign(idx(&[1], 3)).unwrap();
        assert_eq!(u, idx(&[1, 2], 3));
        assert_eq!(s, -1.0);
        let (_, s) = idx(&[1, 3], 4).concat_sign(idx(&[2, 4], 4)).unwrap();
        assert_eq!(s, -1.0);
        let (_, s) = idx(&[3, 4], 4).concat_sign(idx(&[1, 2], 4)).unwrap();
        assert_eq!(s, 1.0);
        assert!(idx(&[1], 2).concat_sign(idx(&[1, 2], 2)).is_none());
    }

    #[test]
    fn wedge_of_covector_with_itself_vanishes() {
        assert!((&e(2, 1) ^ &e(2, 1)).is_zero());
    }

    #[test]
    fn wedge_basis_case() {
        let f = &e(2, 1) ^ &eb(2, 1);
        assert_eq!(f.bidegree(), (1, 1));
        assert_eq!(f.coeff(idx(&[1], 2), idx(&[1], 2)), c(1.0, 0.0));
        assert_eq!(f.num_terms(), 1);
    }

    #[test]
    fn wedge_square_of_symplectic_sum() {
        // (e1∧e2 + e3∧e4)^2 = 2 e1∧e2∧e3∧e4
        let n = 4;
        let xi = &(&e(n, 1) ^ &e(n, 2)) + &(&e(n, 3) ^ &e(n, 4));
        let sq = &xi ^ &xi;
        let full = MultiIndex::full(4);
        assert_eq!(sq.bidegree(), (4, 0));
        assert_eq!(sq.num_terms(), 1);
        assert_eq!(sq.coeff(full, MultiIndex::EMPTY), c(2.0, 0.0));
    }

    #[test]
    fn wedge_overflow_is_annihilated() {
        let a = &e(2, 1) ^ &e(2, 2);
        let w = a.wedge(&e(2, 1)).unwrap();
        assert!(w.is_annihilated());
        assert_eq!(w.into_form().bidegree(), (2, 0));
        assert!(matches!(e(2, 1).wedge(&e(3, 1)), Err(FormError::DimensionMismatch { .. })));
    }

    #[test]
    fn conjugation_examples() {
        let u = unit11(1, 1);
        assert_eq!(u.conjugate(), u);
        assert_eq!(e(2, 1).conjugate(), eb(2, 1));
        let f = (&e(2, 1) ^ &e(2, 2)).scale(c(2.0, 3.0));
        let g = f.conjugate();
        assert_eq!(g.bidegree(), (0, 2));
        assert_eq!(g.coeff(MultiIndex::EMPTY, idx(&[1, 2], 2)), c(2.0, -3.0));
        assert_eq!(g, (&eb(2, 1) ^ &eb(2, 2)).scale(c(2.0, -3.0)));
    }

    #[test]
    fn reality_examples() {
        assert!(unit11(2, 1).is_real(1e-12));
        assert!(!(&e(2, 1) ^ &eb(2, 2)).is_real(1e-12));
        let mixed = &(&e(2, 1) ^ &eb(2, 2)) + &(&e(2, 2) ^ &eb(2, 1));
        assert!(mixed.scale(c(0.0, 1.0)).is_real(1e-12));
        assert!(!e(2, 1).is_real(1e-12));
    }

    #[test]
    fn volume_examples() {
        let v = &unit11(2, 1) ^ &unit11(2, 2);
        assert!((v.volume_coefficient().unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(ExteriorForm::zero(2, 2, 2).volume_coefficient().unwrap(), 0.0);
        let w = unit11(1, 1).scale_real(2.0);
        assert!((w.volume_coefficient().unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(ExteriorForm::unit_volume(3), {
            let a = &unit11(3, 1) ^ &unit11(3, 2);
            &a ^ &unit11(3, 3)
        });
        assert!(matches!(unit11(2, 1).volume_coefficient(), Err(FormError::NotTopDegree { .. })));
        // e∧ē without the factor i is purely imaginary as a volume
        assert!(matches!((&e(1, 1) ^ &eb(1, 1)).volume_coefficient(), Err(FormError::NotReal { .. })));
    }

    #[test]
    fn pairing_examples() {
        let u = unit11(2, 1);
        assert!((u.evaluate_pairing(&[Covector::basis(2, 1)]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(u.evaluate_pairing(&[Covector::basis(2, 2)]).unwrap(), 0.0);
        let v = &unit11(2, 1) ^ &unit11(2, 2);
        let val = v.evaluate_pairing(&[Covector::basis(2, 1), Covector::basis(2, 2)]).unwrap();
        assert!((val - 1.0).abs() < 1e-15);
        assert!(matches!(u.evaluate_pairing(&[]), Err(FormError::ArityMismatch { .. })));
        let nonreal = &e(2, 1) ^ &eb(2, 2);
        assert!(matches!(nonreal.evaluate_pairing(&[Covector::basis(2, 1)]), Err(FormError::NotReal { .. })));
    }

    #[test]
    fn restrict_examples() {
        let u3 = &unit11(3, 1) ^ &unit11(3, 2);
        let r = u3.restrict(&[Covector::basis(3, 1), Covector::basis(3, 2)]).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
        let r = u3.restrict(&[Covector::basis(3, 1), Covector::basis(3, 3)]).unwrap();
        assert!(r.abs() < 1e-14);
        let s = [Covector::basis(3, 1), &Covector::basis(3, 1) + &Covector::basis(3, 2)];
        let r = u3.restrict(&s).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
        assert!((r - u3.evaluate_pairing(&s).unwrap()).abs() < 1e-14);
        let dependent = [Covector::basis(3, 1), Covector::basis(3, 1).scaled(c(2.0, 0.0))];
        assert!(matches!(u3.restrict(&dependent), Err(FormError::RankDeficient { .. })));
    }

    #[test]
    fn decomposable_examples() {
        let f = decomposable(2, &[Covector::basis(2, 1), Covector::basis(2, 2)]).unwrap();
        assert_eq!(f, &e(2, 1) ^ &e(2, 2));
        assert!(decomposable(2, &[Covector::basis(2, 1), Covector::basis(2, 1)]).unwrap().is_zero());
        let sum = &Covector::basis(2, 1) + &Covector::basis(2, 2);
        let f = decomposable(2, &[sum, Covector::basis(2, 2)]).unwrap();
        assert_eq!(f, &e(2, 1) ^ &e(2, 2));
        assert_eq!(decomposable(3, &[]).unwrap(), ExteriorForm::one(3));
    }

    #[test]
    fn gram_examples() {
        let g = unit11(1, 1).hermitian_gram().unwrap();
        assert_eq!(g.matrix.nrows(), 1);
        assert!((g.matrix[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);

        let g = unit11(2, 1).hermitian_gram().unwrap();
        assert_eq!(g.basis, vec![idx(&[1], 2), idx(&[2], 2)]);
        assert!(g.matrix[(0, 0)].norm() < 1e-15);
        assert!((g.matrix[(1, 1)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(g.matrix[(0, 1)].norm() < 1e-15);

        let g = ExteriorForm::one(2).hermitian_gram().unwrap();
        assert_eq!(g.basis, vec![idx(&[1, 2], 2)]);
        assert!((g.matrix[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn plucker_matrix_round_trip() {
        let basis = MultiIndex::all(3, 2);
        let h = DMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                c(1.0 + i as f64, 0.0)
            } else if i < j {
                c(0.5, 0.25 * (i + j) as f64)
            } else {
                c(0.5, -0.25 * (i + j) as f64)
            }
        });
        let u = ExteriorForm::from_plucker_matrix(3, 2, &basis, &h).unwrap();
        assert!(u.is_real(1e-14));
        let back = u.plucker_matrix().unwrap();
        assert!((back.matrix - h).norm() < 1e-14);
    }
}
