use serde::{Deserialize, Serialize};

use super::AbilityId;

/// One multiple-choice record. The wire schema is exactly these five keys.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticItem {
    pub context: String,
    pub question: String,
    pub options: Vec<String>,
    pub answer: String,
    pub answer_index: usize,
}

impl DiagnosticItem {
    pub fn new(
        context: impl Into<String>,
        question: impl Into<String>,
        options: Vec<String>,
        answer_index: usize,
    ) -> Self {
        let options: Vec<String> = options;
        let answer = options.get(answer_index).cloned().unwrap_or_default();
        Self {
            context: context.into(),
            question: question.into(),
            options,
            answer,
            answer_index,
        }
    }
}

/// Train/heldout tag per item.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Heldout,
}

/// A generated diagnostic dataset with its provenance and split tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagnosticDataset {
    pub ability: AbilityId,
    pub seed: u64,
    pub items: Vec<DiagnosticItem>,
    pub splits: Vec<Split>,
}

impl DiagnosticDataset {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn train_items(&self) -> Vec<&DiagnosticItem> {
        self.items
            .iter()
            .zip(&self.splits)
            .filter(|(_, s)| **s == Split::Train)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn heldout_items(&self) -> Vec<&DiagnosticItem> {
        self.items
            .iter()
            .zip(&self.splits)
            .filter(|(_, s)| **s == Split::Heldout)
            .map(|(i, _)| i)
            .collect()
    }
}
