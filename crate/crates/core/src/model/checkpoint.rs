use std::path::Path;

use serde_json::json;

use crate::container::{
    f64s_from_le_bytes, f64s_to_le_bytes, read_container, write_container, ContainerError,
};
use crate::Tensor64;

use super::transformer::log_prob_at;
use super::{
    logits, ModelConfig, ModelError, ParamEntry, ParamKind, ParameterStore, Result, Tokenizer,
};

pub const CHECKPOINT_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"ABPFCKPT";

/// A complete model: architecture, parameters and vocabulary.
#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub config: ModelConfig,
    pub store: ParameterStore,
    pub tokenizer: Tokenizer,
}

impl Checkpoint {
    pub fn new(config: ModelConfig, store: ParameterStore, tokenizer: Tokenizer) -> Result<Self> {
        config.validate()?;
        if tokenizer.vocab_size() != config.vocab_size {
            return Err(ModelError::InvalidConfig(format!(
                "tokenizer has {} words but config.vocab_size is {}",
                tokenizer.vocab_size(),
                config.vocab_size
            )));
        }
        Ok(Self { config, store, tokenizer })
    }

    /// Same architecture and vocabulary with replacement parameters.
    pub fn with_store(&self, store: ParameterStore) -> Result<Self> {
        Self::new(self.config.clone(), store, self.tokenizer.clone())
    }

    /// Next-token logits for every position (`[len, vocab]`).
    pub fn logits(&self, tokens: &[usize]) -> Result<Tensor64> {
        logits(&self.config, &self.store, tokens)
    }

    /// Log-probability of `continuation` given `prompt`.
    ///
    /// Returns `(total, per_token_mean)`; both are sums/means of log
    /// softmax values, hence `<= 0`.
    pub fn sequence_logprob(&self, prompt: &[usize], continuation: &[usize]) -> Result<(f64, f64)> {
        if continuation.is_empty() {
            return Err(ModelError::EmptyContinuation);
        }
        if prompt.is_empty() {
            return Err(ModelError::EmptyPrompt);
        }
        let total_len = prompt.len() + continuation.len();
        if total_len > self.config.context_length {
            return Err(ModelError::ContextOverflow {
                needed: total_len,
                limit: self.config.context_length,
            });
        }
        let mut seq = Vec::with_capacity(total_len - 1);
        seq.extend_from_slice(prompt);
        seq.extend_from_slice(&continuation[..continuation.len() - 1]);
        let logit_rows = self.logits(&seq)?;
        let v = self.config.vocab_size;
        let data = logit_rows.data();
        let mut total = 0.0;
        for (j, &tok) in continuation.iter().enumerate() {
            let row_idx = prompt.len() - 1 + j;
            let row = &data[row_idx * v..(row_idx + 1) * v];
            total += log_prob_at(row, tok);
        }
        Ok((total, total / continuation.len() as f64))
    }

    /// Greedy decoding: emit the argmax token until a stop token comes up
    /// (not emitted), `max_new_tokens` are produced, or the context fills.
    /// Argmax ties resolve to the lowest token id.
    pub fn greedy_decode(
        &self,
        prompt: &[usize],
        max_new_tokens: usize,
        stop: &[usize],
    ) -> Result<Vec<usize>> {
        if prompt.is_empty() {
            return Err(ModelError::EmptyPrompt);
        }
        if prompt.len() > self.config.context_length {
            return Err(ModelError::ContextOverflow {
                needed: prompt.len(),
                limit: self.config.context_length,
            });
        }
        let v = self.config.vocab_size;
        let mut seq = prompt.to_vec();
        let mut out = Vec::new();
        while out.len() < max_new_tokens && seq.len() <= self.config.context_length {
            let logit_rows = self.logits(&seq)?;
            let last = &logit_rows.data()[(seq.len() - 1) * v..seq.len() * v];
            let mut best = 0usize;
            for (i, &x) in last.iter().enumerate() {
                if x > last[best] {
                    best = i;
                }
            }
            if stop.contains(&best) {
                break;
            }
            out.push(best);
            seq.push(best);
        }
        Ok(out)
    }
}

/// Write a checkpoint. `load_checkpoint(save_checkpoint(x)) == x` bit-exactly.
pub fn save_checkpoint(ckpt: &Checkpoint, path: &Path) -> Result<()> {
    let tensors: Vec<serde_json::Value> = ckpt
        .store
        .entries()
        .iter()
        .map(|e| {
            json!({
                "name": e.name,
                "kind": e.kind.as_str(),
                "shape": e.tensor.shape(),
            })
        })
        .collect();
    let header = json!({
        "config": serde_json::to_value(&ckpt.config).expect("config serializes"),
        "tensors": tensors,
        "vocab": ckpt.tokenizer.vocab(),
    });
    let mut payload = Vec::with_capacity(ckpt.store.total_params() * 8);
    for e in ckpt.store.entries() {
        f64s_to_le_bytes(e.tensor.data(), &mut payload);
    }
    write_container(path, MAGIC, CHECKPOINT_VERSION, &header, &payload).map_err(container_err)
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let (header, payload) =
        read_container(path, MAGIC, CHECKPOINT_VERSION).map_err(container_err)?;
    let config: ModelConfig =
        serde_json::from_value(header["config"].clone()).map_err(|_| ModelError::CorruptChecksum)?;
    let vocab: Vec<String> =
        serde_json::from_value(header["vocab"].clone()).map_err(|_| ModelError::CorruptChecksum)?;
    let table = header["tensors"]
        .as_array()
        .ok_or(ModelError::CorruptChecksum)?;

    let values = f64s_from_le_bytes(&payload).ok_or(ModelError::CorruptChecksum)?;
    let mut entries = Vec::with_capacity(table.len());
    let mut cursor = 0usize;
    for t in table {
        let name = t["name"].as_str().ok_or(ModelError::CorruptChecksum)?;
        let kind: ParamKind = t["kind"]
            .as_str()
            .ok_or(ModelError::CorruptChecksum)?
            .parse()?;
        let shape: Vec<usize> =
            serde_json::from_value(t["shape"].clone()).map_err(|_| ModelError::CorruptChecksum)?;
        let n: usize = shape.iter().product();
        if cursor + n > values.len() {
            return Err(ModelError::CorruptChecksum);
        }
        let tensor = Tensor64::new(shape, values[cursor..cursor + n].to_vec())
            .map_err(|_| ModelError::CorruptChecksum)?;
        cursor += n;
        entries.push(ParamEntry { name: name.to_string(), kind, tensor });
    }
    if cursor != values.len() {
        return Err(ModelError::CorruptChecksum);
    }

    // The vocab list in the header is already in id order; rebuilding from
    // the non-reserved words reproduces it.
    let tokenizer = Tokenizer::from_words(vocab.iter().skip(3).cloned());
    if tokenizer.vocab() != vocab.as_slice() {
        return Err(ModelError::CorruptChecksum);
    }
    Checkpoint::new(config, ParameterStore::from_entries(entries)?, tokenizer)
}

fn container_err(e: ContainerError) -> ModelError {
    match e {
        ContainerError::Io(e) => ModelError::IoFailure(e),
        ContainerError::VersionMismatch { found, expected } => {
            ModelError::VersionMismatch { found, expected }
        }
        ContainerError::Corrupt => ModelError::CorruptChecksum,
    }
}
