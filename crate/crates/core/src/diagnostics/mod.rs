//! Deterministic generation, validation, storage and splitting of the ten
//! ability diagnostic datasets.
//!
//! Each ability has a template engine paired with a solver. The engine
//! proposes an item; the solver recomputes the correct option from the item
//! text alone. Generation rejects and resamples until the solver agrees, so
//! every emitted item is machine-verified. Items are a pure function of
//! `(ability, seed, item index, attempt)` and datasets are byte-identical
//! across runs.

mod ability;
mod engines;
mod gen;
mod io;
mod item;
mod lexicon;
mod verify;

pub use ability::AbilityId;
pub use gen::{generate_dataset, leakage_filter};
pub use io::{load_dataset, load_items, save_dataset};
pub use item::{DiagnosticDataset, DiagnosticItem, Split};
pub use lexicon::{lexicon, render_prompt};
pub use verify::{verify_item, FailReason, VerifyOutcome};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("template space exhausted after {rejected} rejected samples (wanted {wanted} items)")]
    GenerationExhausted { rejected: usize, wanted: usize },

    #[error("generation requires n >= 1")]
    EmptyRequest,

    #[error("io failure: {0}")]
    IoFailure(#[from] std::io::Error),

    #[error("schema violation at record {record}: {key}")]
    SchemaViolation { record: usize, key: String },

    #[error("sidecar manifest missing or invalid: {0}")]
    BadManifest(String),
}

pub type Result<T> = std::result::Result<T, DataError>;
