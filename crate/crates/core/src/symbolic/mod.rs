//! Exact symbolic layer: partitions, Schur and Segre polynomials, and
//! push-forwards from flag bundles. All arithmetic is over `ℤ` (or `ℚ` for
//! the Schur-basis solve); nothing here touches floating point.

mod partition;
mod poly;
mod pushforward;
mod schur;

use thiserror::Error;

pub use partition::{conjugate_partition, enumerate_partitions, IntSequence};
pub use poly::{Alphabet, Chern, Exponents, Poly, Roots, Segre, Xi};
pub use pushforward::{
    complete_flag_oracle, dp_nu, dp_pushforward, forms_sign_adjust, monomials, projective_oracle,
    pushforward_via_projective_tower, FlagType,
};
pub use schur::{
    complete_homogeneous, elementary, expand_in_roots, gschur_in_segre, gschur_in_segre_truncated,
    is_nonnegative_expansion, jacobi_trudi_check, schur_in_chern, schur_product_expand, segre_in_chern, segre_to_chern,
    RootExpansion,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("{0} is not a partition")]
    NotAPartition(IntSequence),
    #[error("invalid flag type {0:?}: need 0 = rho_0 < rho_1 < ... < rho_m")]
    InvalidFlagType(Vec<usize>),
    #[error("polynomial is not symmetric under x{i} <-> x{j}, required by flag type {flag}")]
    BlockSymmetry { flag: FlagType, i: usize, j: usize },
    #[error("polynomial uses {got} variables, rank is {rank}")]
    TooManyVariables { got: usize, rank: usize },
    #[error("degree {degree} does not equal d_rho + k = {expected}")]
    DegreeMismatch { degree: usize, expected: usize },
    #[error("symmetrized polynomial is not divisible by the Vandermonde product")]
    InexactDivision,
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
}
