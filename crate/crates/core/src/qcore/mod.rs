//! Dense complex linear algebra and the two-qubit state toolbox: tensor products, partial
//! trace and transpose, Hermitian eigendecomposition, the PPT and CHSH (Horodecki) criteria and
//! the standard state constructors.

mod eig;
mod matrix;
mod state;

use thiserror::Error;

pub use eig::{eig_hermitian, HermitianEigen};
pub use matrix::{inner, norm_sqr, ComplexMatrix};
pub use state::{
    bell_diagonal, partial_trace, werner, BellState, BellWeights, DensityMatrix, PureState,
    Subsystem,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcoreError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDim(usize),
    #[error("matrix of dimension {0} exceeds the eigensolver limit of 8")]
    TooLarge(usize),
    #[error("matrix is not Hermitian (max |M - M†| = {0:e})")]
    NotHermitian(f64),
    #[error("trace {0} differs from 1")]
    Trace(f64),
    #[error("operator has negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("Bell weights must be non-negative and sum to 1")]
    InvalidWeights,
    #[error("{0} out of range: {1}")]
    OutOfRange(&'static str, f64),
}
