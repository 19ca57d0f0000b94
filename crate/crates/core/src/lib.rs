//! Pointwise Chern–Weil forms and their positivity.
//!
//! The crate works at a single point of a complex manifold: a curvature tensor
//! is an `r x r` matrix of `(1,1)`-forms on `ℂⁿ`, from which Chern, Segre and
//! Schur forms are computed and tested against the cones of weakly,
//! Hermitian and strongly positive `(p,p)`-forms. The [`symbolic`] module
//! holds the exact integer layer (Schur polynomials, generalized Schur
//! classes and flag-bundle push-forwards) used as ground truth.

pub mod chern_weil;
mod det;
pub mod exterior;
pub mod generators;
mod linalg;
pub mod positivity;
pub mod symbolic;

pub use num_complex::Complex64;

/// Complex scalar used by every numeric module.
pub type C64 = Complex64;

pub use chern_weil::{CurvaturePoint, GriffithsReport, GriffithsStatus, Violation};
pub use exterior::{decomposable, Covector, ExteriorForm, FormError, MultiIndex, Wedge};
pub use positivity::{PositivityVerdict, SearchBudget, Status};
