//! Per-parameter importance from fine-tuning gradients, and top-k% mask
//! construction.
//!
//! A short SGD fine-tune runs on an ability's train split; at every step
//! the score accumulates `|gradient * pre-step weight|` per parameter and
//! the final score is the mean over steps. The fine-tuned weights are
//! discarded: only the scores leave this module. Masks select the top-k%
//! of eligible parameters, ranked globally across tensors.

mod estimate;
mod mask;

pub use estimate::{diagnostic_loss, estimate_importance, FinetuneConfig};
pub use mask::{select_topk, sweep_k, AblationMask};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostics::AbilityId;
use crate::model::{ModelError, ParameterStore};

/// Nonnegative score per parameter, aligned with the store's entry order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ImportanceMap {
    pub ability: AbilityId,
    /// One score vector per store entry, index-aligned with entry tensors.
    pub scores: Vec<Vec<f64>>,
    pub steps_accumulated: usize,
}

impl ImportanceMap {
    /// Score at a named coordinate, if it exists.
    pub fn score(&self, store: &ParameterStore, name: &str, offset: usize) -> Option<f64> {
        let pos = store.position(name)?;
        self.scores.get(pos)?.get(offset).copied()
    }

    pub fn total_entries(&self) -> usize {
        self.scores.iter().map(|s| s.len()).sum()
    }

    /// Check alignment with a store and score nonnegativity.
    pub fn validate(&self, store: &ParameterStore) -> Result<()> {
        if self.scores.len() != store.entries().len() {
            return Err(ImportanceError::Misaligned);
        }
        for (s, e) in self.scores.iter().zip(store.entries()) {
            if s.len() != e.tensor.len() {
                return Err(ImportanceError::Misaligned);
            }
            if s.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(ImportanceError::BadScore);
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ImportanceError {
    #[error("dataset is empty")]
    EmptyDataset,

    #[error("k must be in (0, 100], got {0}")]
    InvalidK(f64),

    #[error("kind set must not be empty")]
    EmptyKinds,

    #[error("importance map does not align with the parameter store")]
    Misaligned,

    #[error("importance map holds a negative or non-finite score")]
    BadScore,

    #[error("more than 10% of items were skipped for context overflow ({skipped}/{total})")]
    TooManySkips { skipped: usize, total: usize },

    #[error("model failure: {0}")]
    Model(#[from] ModelError),

    #[error("io failure: {0}")]
    IoFailure(#[from] std::io::Error),

    #[error("file version {found} not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("file checksum mismatch or truncated file")]
    CorruptChecksum,
}

pub type Result<T> = std::result::Result<T, ImportanceError>;
