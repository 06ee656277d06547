//! Ability-impact profiling for small decoder-only language models.
//!
//! The pipeline implemented by this crate:
//!
//! 1. **diagnostics** — generate ten solver-verified multiple-choice
//!    datasets, one per operationalized ability.
//! 2. **model** — train (or load) a toy decoder-only transformer over a
//!    closed word-level lexicon.
//! 3. **importance** — estimate per-parameter relevance to each ability
//!    from fine-tuning gradients (|grad * weight|), then select the top-k%
//!    into an ablation mask.
//! 4. **harness** — score the baseline and each ability-ablated model on
//!    benchmark tasks (MCQ log-likelihood or generated exact match).
//! 5. **profile** — turn accuracies into Ability Impact Scores, compare
//!    profiles across models with Jensen-Shannon similarity, and emit
//!    radar/chord visualizations.
//!
//! Numeric kernels in [`numerics`] are generic over the scalar type via
//! `num-traits`; the shipped pipeline runs everything in `f64` through the
//! aliases at the crate root.

pub mod diagnostics;
pub mod harness;
pub mod importance;
pub mod model;
pub mod numerics;
pub mod profile;

// pub use diagnostics::{AbilityId, DiagnosticDataset, DiagnosticItem};
// pub use harness::{EvalResult, TaskFormat, TaskSpec};
// pub use importance::{AblationMask, FinetuneConfig, ImportanceMap};
// pub use model::{Checkpoint, ModelConfig, ParamKind, ParameterStore, Tokenizer};
// pub use profile::{BenchmarkProfile, SimilarityReport};

/// Scalar type the shipped pipeline runs at.
pub type Scalar64 = f64;
/// Dense tensor at pipeline precision.
pub type Tensor64 = numerics::Tensor<f64>;
/// Single-precision tensor, for callers that trade accuracy for memory.
pub type Tensor32 = numerics::Tensor<f32>;
/// Computation record at pipeline precision.
pub type Tape64 = numerics::Tape<f64>;
