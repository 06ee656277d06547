//! Dense tensors with reverse-mode differentiation.
//!
//! The primitive set is exactly what the transformer in [`crate::model`]
//! needs: matrix products, bias/residual adds, GELU, causal softmax, layer
//! norm, embedding lookup and masked cross-entropy. Every primitive has a
//! hand-written adjoint; [`gradcheck`] verifies them against central finite
//! differences.
//!
//! All accumulation happens in the scalar type `T` with reductions in a
//! fixed order, so identical inputs produce bit-identical results.

mod gradcheck;
mod scalar;
mod tape;
mod tensor;

pub use gradcheck::{finite_difference_check, grad};
pub use scalar::Scalar;
pub use tape::{Tape, Var};
pub use tensor::Tensor;

use thiserror::Error;

/// Errors raised by tensor and tape operations.
#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    #[error("non-finite value produced by {op}")]
    NonFinite { op: &'static str },

    #[error("loss evaluated to a non-finite value")]
    NonFiniteLoss,

    #[error("loss must be a scalar, got shape {0:?}")]
    NonScalarLoss(Vec<usize>),

    #[error("index {index} out of range for {op} (limit {limit})")]
    BadIndex {
        op: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("epsilon must be positive")]
    InvalidEpsilon,
}

pub type Result<T> = std::result::Result<T, NumericsError>;
