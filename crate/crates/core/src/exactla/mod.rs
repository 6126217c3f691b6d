//! Exact arithmetic over ℚ and prime fields, dense linear algebra, integer
//! Smith normal form and root finding for minimal polynomials.

mod matrix;
mod poly;
mod scalar;
mod snf;

pub use matrix::{Matrix, Subspace};
pub use poly::{Poly, RootSet};
pub use scalar::{Field, Scalar};
pub use snf::{smith_normal_form, IntMatrix, SmithForm};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
}
