//! Dense complex linear algebra for the small (≤ 8) matrices used throughout.
//!
//! All tolerances are relative to the max-row-sum norm.

#![allow(clippy::needless_range_loop)]

mod eigen;
mod expm;
mod lu;
mod matrix;
mod svd;

pub use eigen::{eigen, eigenvalues, EigenPair, DEGENERACY_TOL, MAX_EIGEN_DIMENSION};
pub use expm::expm;
pub use lu::{condition_estimate, determinant, inverse, solve_linear, Lu, MAX_CONDITION};
pub use matrix::{anticommutator, bilinear, commutator, vdot, vnorm, ComplexMatrix, ComplexVector};
pub use svd::{nullspace, singular_values, svd, Svd};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("{len} entries cannot fill a {rows}x{cols} matrix")]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("non-finite entry")]
    NonFinite,
    #[error("{op}: incompatible dimensions {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is singular (condition estimate {condition:e})")]
    Singular { condition: f64 },
    #[error("eigenvalue iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("dimension {dimension} exceeds the supported maximum {limit}")]
    TooLarge { dimension: usize, limit: usize },
}
