use rand::{seq::SliceRandom, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{render_prompt, DiagnosticItem};
use crate::model::{Checkpoint, ModelError, ParameterStore};
use crate::Tensor64;

use super::{ImportanceError, ImportanceMap, Result};

/// Hyperparameters of the gradient-estimation fine-tune.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinetuneConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl FinetuneConfig {
    fn validate(&self) -> Result<()> {
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(ImportanceError::Model(ModelError::InvalidHyper(
                "epochs and batch_size must be >= 1".into(),
            )));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(ImportanceError::Model(ModelError::InvalidHyper(
                "learning_rate must be positive".into(),
            )));
        }
        Ok(())
    }
}

/// Mean per-token negative log-likelihood of each item's gold option
/// continuation given its rendered prompt, averaged over the batch.
///
/// Items too long for the context are skipped and counted; more than 10%
/// skips aborts.
pub fn diagnostic_loss(model: &Checkpoint, batch: &[DiagnosticItem]) -> Result<f64> {
    if batch.is_empty() {
        return Err(ImportanceError::EmptyDataset);
    }
    let mut total = 0.0;
    let mut used = 0usize;
    let mut skipped = 0usize;
    for item in batch {
        match item_loss(model, item)? {
            Some(loss) => {
                total += loss;
                used += 1;
            }
            None => skipped += 1,
        }
    }
    if skipped * 10 > batch.len() {
        return Err(ImportanceError::TooManySkips { skipped, total: batch.len() });
    }
    if used == 0 {
        return Err(ImportanceError::EmptyDataset);
    }
    Ok(total / used as f64)
}

/// NLL of one item, or `None` when it does not fit the context.
fn item_loss(model: &Checkpoint, item: &DiagnosticItem) -> Result<Option<f64>> {
    let (seq, weights) = match render_training_sequence(model, item)? {
        Some(x) => x,
        None => return Ok(None),
    };
    let loss = crate::model::masked_nll(&model.config, &model.store, &seq, &weights)?;
    Ok(Some(loss))
}

/// Tokenized prompt + gold continuation with continuation-only loss
/// weights (one weight per predicted position).
pub(crate) fn render_training_sequence(
    model: &Checkpoint,
    item: &DiagnosticItem,
) -> Result<Option<(Vec<usize>, Vec<f64>)>> {
    let (prompt, conts) = render_prompt(item);
    let mut seq = model.tokenizer.encode(&prompt).map_err(ImportanceError::Model)?;
    let prompt_len = seq.len();
    let gold = &conts[item.answer_index];
    seq.extend(model.tokenizer.encode(gold).map_err(ImportanceError::Model)?);
    seq.push(model.tokenizer.eot_id());
    if seq.len() > model.config.context_length {
        return Ok(None);
    }
    // predicted positions are 1..len; weight only the continuation + eot
    let predicted = seq.len() - 1;
    let mut weights = vec![0.0; predicted];
    for w in weights.iter_mut().skip(prompt_len - 1) {
        *w = 1.0;
    }
    Ok(Some((seq, weights)))
}

/// Run the estimation fine-tune and return the importance map.
///
/// Scores accumulate `|g_j(t) * theta_j(t)|` with pre-step parameter
/// values; the final score is the mean over steps. The fine-tuned state is
/// discarded and the input model is returned untouched by construction
/// (it is never mutated).
pub fn estimate_importance(
    model: &Checkpoint,
    train_items: &[DiagnosticItem],
    ability: crate::diagnostics::AbilityId,
    cfg: &FinetuneConfig,
) -> Result<ImportanceMap> {
    cfg.validate()?;
    if train_items.is_empty() {
        return Err(ImportanceError::EmptyDataset);
    }

    // Tokenize up front; oversized items are skipped with the same 10%
    // abort rule as diagnostic_loss.
    let mut sequences: Vec<(Vec<usize>, Vec<f64>)> = Vec::with_capacity(train_items.len());
    let mut skipped = 0usize;
    for item in train_items {
        match render_training_sequence(model, item)? {
            Some(sw) => sequences.push(sw),
            None => skipped += 1,
        }
    }
    if skipped * 10 > train_items.len() {
        return Err(ImportanceError::TooManySkips { skipped, total: train_items.len() });
    }
    if sequences.is_empty() {
        return Err(ImportanceError::EmptyDataset);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sizes: Vec<usize> = model.store.entries().iter().map(|e| e.tensor.len()).collect();
    let mut accum: Vec<Vec<f64>> = sizes.iter().map(|&n| vec![0.0; n]).collect();
    let mut current: ParameterStore = model.store.clone();
    let mut steps = 0usize;

    for _epoch in 0..cfg.epochs {
        let mut order: Vec<usize> = (0..sequences.len()).collect();
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size) {
            // batch-mean gradient at the pre-step parameters
            let mut grad: Vec<Vec<f64>> = sizes.iter().map(|&n| vec![0.0; n]).collect();
            for &i in chunk {
                let (seq, w) = &sequences[i];
                let (loss, item_grads) =
                    crate::model::weighted_pass(&model.config, &current, seq, Some(w))
                        .map_err(|e| step_error(e, steps))?;
                if !loss.is_finite() {
                    return Err(ImportanceError::Model(ModelError::NonFiniteLoss {
                        step: steps,
                    }));
                }
                for (acc, g) in grad.iter_mut().zip(item_grads) {
                    for (a, &v) in acc.iter_mut().zip(&g) {
                        *a += v;
                    }
                }
            }
            let inv_batch = 1.0 / chunk.len() as f64;
            for g in grad.iter_mut() {
                for v in g.iter_mut() {
                    *v *= inv_batch;
                }
            }
            current = score_then_sgd_step(&current, &grad, cfg.learning_rate, &mut accum)
                .map_err(|_| ImportanceError::Model(ModelError::NonFiniteLoss { step: steps }))?;
            steps += 1;
        }
    }
    // `current` (the fine-tuned state) drops here.

    let inv_steps = 1.0 / steps as f64;
    for s in accum.iter_mut() {
        for v in s.iter_mut() {
            *v *= inv_steps;
        }
    }
    let map = ImportanceMap { ability, scores: accum, steps_accumulated: steps };
    map.validate(&model.store)?;
    Ok(map)
}

/// One estimation step: add `|g * w|` to the running scores using the
/// pre-step weights, then return the post-SGD-step store.
pub(crate) fn score_then_sgd_step(
    current: &ParameterStore,
    grad_mean: &[Vec<f64>],
    learning_rate: f64,
    accum: &mut [Vec<f64>],
) -> crate::model::Result<ParameterStore> {
    let mut new_tensors = Vec::with_capacity(current.entries().len());
    for ((entry, g), acc) in current.entries().iter().zip(grad_mean).zip(accum.iter_mut()) {
        let data: Vec<f64> = entry
            .tensor
            .data()
            .iter()
            .zip(g.iter())
            .zip(acc.iter_mut())
            .map(|((&w, &gv), a)| {
                *a += (gv * w).abs();
                w - learning_rate * gv
            })
            .collect();
        new_tensors.push(Tensor64::new(entry.tensor.shape().to_vec(), data).map_err(
            crate::model::ModelError::Numerics,
        )?);
    }
    current.with_tensors(new_tensors)
}

fn step_error(e: ModelError, step: usize) -> ImportanceError {
    match e {
        ModelError::Numerics(crate::numerics::NumericsError::NonFiniteLoss)
        | ModelError::Numerics(crate::numerics::NumericsError::NonFinite { .. }) => {
            ImportanceError::Model(ModelError::NonFiniteLoss { step })
        }
        other => ImportanceError::Model(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{generate_dataset, AbilityId};
    use crate::model::{init_model, ModelConfig, Tokenizer};

    fn tiny_model() -> Checkpoint {
        let tokenizer = Tokenizer::from_words(crate::diagnostics::lexicon());
        let config = ModelConfig {
            vocab_size: tokenizer.vocab_size(),
            context_length: 96,
            num_layers: 1,
            model_dim: 16,
            num_heads: 2,
            mlp_hidden_dim: 32,
            seed: 13,
        };
        let store = init_model(&config).unwrap();
        Checkpoint::new(config, store, tokenizer).unwrap()
    }

    #[test]
    fn importance_is_deterministic_and_leaves_model_untouched() {
        let model = tiny_model();
        let before = model.store.clone();
        let ds = generate_dataset(AbilityId::Spat, 20, 5).unwrap();
        let items: Vec<_> = ds.train_items().into_iter().cloned().collect();
        let cfg = FinetuneConfig { epochs: 1, batch_size: 4, learning_rate: 0.05, seed: 2 };
        let a = estimate_importance(&model, &items, AbilityId::Spat, &cfg).unwrap();
        let b = estimate_importance(&model, &items, AbilityId::Spat, &cfg).unwrap();
        assert!(model.store.bit_eq(&before));
        assert_eq!(a.steps_accumulated, b.steps_accumulated);
        for (x, y) in a.scores.iter().zip(&b.scores) {
            assert!(x.iter().zip(y).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
        a.validate(&model.store).unwrap();
    }

    #[test]
    fn scores_are_nonnegative_and_cover_every_parameter() {
        let model = tiny_model();
        let ds = generate_dataset(AbilityId::Ana, 10, 5).unwrap();
        let items: Vec<_> = ds.train_items().into_iter().cloned().collect();
        let cfg = FinetuneConfig { epochs: 1, batch_size: 8, learning_rate: 0.05, seed: 3 };
        let map = estimate_importance(&model, &items, AbilityId::Ana, &cfg).unwrap();
        assert_eq!(map.total_entries(), model.store.total_params());
        assert!(map.scores.iter().flatten().all(|&s| s >= 0.0));
    }

    #[test]
    fn empty_dataset_is_rejected() {
        let model = tiny_model();
        let cfg = FinetuneConfig { epochs: 1, batch_size: 4, learning_rate: 0.05, seed: 2 };
        assert!(matches!(
            estimate_importance(&model, &[], AbilityId::Ana, &cfg),
            Err(ImportanceError::EmptyDataset)
        ));
    }

    #[test]
    fn two_item_loss_is_the_mean_of_single_item_losses() {
        let model = tiny_model();
        let ds = generate_dataset(AbilityId::Quant, 10, 9).unwrap();
        let (a, b) = (&ds.items[0], &ds.items[1]);
        let la = diagnostic_loss(&model, std::slice::from_ref(a)).unwrap();
        let lb = diagnostic_loss(&model, std::slice::from_ref(b)).unwrap();
        let lab = diagnostic_loss(&model, &[a.clone(), b.clone()]).unwrap();
        assert!((lab - (la + lb) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_model_loss_is_log_vocab() {
        // zero all parameters: logits are identically zero, the
        // distribution is uniform, and the loss is ln |V| per token.
        let model = tiny_model();
        let zeros: Vec<Tensor64> = model
            .store
            .entries()
            .iter()
            .map(|e| Tensor64::zeros(e.tensor.shape().to_vec()))
            .collect();
        let store = model.store.with_tensors(zeros).unwrap();
        let flat = model.with_store(store).unwrap();
        let ds = generate_dataset(AbilityId::Com, 10, 4).unwrap();
        let loss = diagnostic_loss(&flat, &ds.items[..4]).unwrap();
        let expected = (flat.config.vocab_size as f64).ln();
        assert!((loss - expected).abs() < 1e-9, "{loss} vs {expected}");
    }
}
