//! Small decoder-only transformer: parameter registry with kind labels,
//! scoring, greedy decoding, SGD training, checkpoint I/O and exact
//! ablation-mask application.
//!
//! A [`ParameterStore`] is immutable once built; training and ablation
//! return new stores. Scoring and decoding are pure functions of
//! (checkpoint bytes, input tokens).

mod ablation;
mod checkpoint;
mod config;
mod params;
mod tokenizer;
mod train;
mod transformer;

pub use ablation::apply_ablation;
pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, CHECKPOINT_VERSION};
pub use config::ModelConfig;
pub use params::{init_model, ParamEntry, ParamKind, ParameterStore};
pub use tokenizer::Tokenizer;
pub use train::{train, TrainConfig};
pub use transformer::{forward_logits, logits, StoreVars};

use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model config: {0}")]
    InvalidConfig(String),

    #[error("token not in vocabulary: {token:?}")]
    UnknownToken { token: String },

    #[error("sequence of {needed} tokens exceeds context length {limit}")]
    ContextOverflow { needed: usize, limit: usize },

    #[error("continuation must not be empty")]
    EmptyContinuation,

    #[error("prompt must not be empty")]
    EmptyPrompt,

    #[error("training corpus is empty")]
    EmptyCorpus,

    #[error("invalid hyperparameter: {0}")]
    InvalidHyper(String),

    #[error("unknown parameter coordinate {name}[{offset}]")]
    UnknownCoordinate { name: String, offset: usize },

    #[error("duplicate parameter name {0:?}")]
    DuplicateParam(String),

    #[error("loss became non-finite at step {step}")]
    NonFiniteLoss { step: usize },

    #[error("numerics failure: {0}")]
    Numerics(#[from] NumericsError),

    #[error("io failure: {0}")]
    IoFailure(#[from] std::io::Error),

    #[error("checkpoint version {found} not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("checkpoint checksum mismatch or truncated file")]
    CorruptChecksum,
}

pub type Result<T> = std::result::Result<T, ModelError>;
