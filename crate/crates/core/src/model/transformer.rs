use crate::numerics::{Tape, Var};

use super::{ModelConfig, ModelError, ParameterStore, Result};
use crate::Tensor64;

/// Tape leaves for every store entry, in entry order.
pub struct StoreVars {
    vars: Vec<Var>,
    names: Vec<String>,
}

impl StoreVars {
    pub fn register(tape: &mut Tape<f64>, store: &ParameterStore) -> Self {
        let mut vars = Vec::with_capacity(store.entries().len());
        let mut names = Vec::with_capacity(store.entries().len());
        for e in store.entries() {
            vars.push(tape.leaf(e.tensor.clone()));
            names.push(e.name.clone());
        }
        Self { vars, names }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    fn get(&self, store: &ParameterStore, name: &str) -> Result<Var> {
        store
            .position(name)
            .map(|i| self.vars[i])
            .ok_or_else(|| ModelError::UnknownCoordinate { name: name.into(), offset: 0 })
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }
}

/// Record the full forward pass for `tokens` and return the logits node
/// (`[len, vocab]`). Pre-norm blocks: attention then MLP, learned positions.
pub fn forward_logits(
    tape: &mut Tape<f64>,
    config: &ModelConfig,
    store: &ParameterStore,
    vars: &StoreVars,
    tokens: &[usize],
) -> Result<Var> {
    if tokens.is_empty() {
        return Err(ModelError::EmptyPrompt);
    }
    if tokens.len() > config.context_length {
        return Err(ModelError::ContextOverflow {
            needed: tokens.len(),
            limit: config.context_length,
        });
    }
    let dh = config.head_dim();
    let scale = 1.0 / (dh as f64).sqrt();
    let positions: Vec<usize> = (0..tokens.len()).collect();

    let tok_table = vars.get(store, "tok_embeddings.weight")?;
    let pos_table = vars.get(store, "pos_embeddings.weight")?;
    let te = tape.embedding(tok_table, tokens)?;
    let pe = tape.embedding(pos_table, &positions)?;
    let mut x = tape.add(te, pe)?;

    for l in 0..config.num_layers {
        let p = format!("layers.{l}");
        let ln1g = vars.get(store, &format!("{p}.ln1.gamma"))?;
        let ln1b = vars.get(store, &format!("{p}.ln1.beta"))?;
        let a = tape.layer_norm(x, ln1g, ln1b)?;

        let q = {
            let w = vars.get(store, &format!("{p}.attn.wq"))?;
            let b = vars.get(store, &format!("{p}.attn.bq"))?;
            let h = tape.matmul(a, w)?;
            tape.add_bias(h, b)?
        };
        let k = {
            let w = vars.get(store, &format!("{p}.attn.wk"))?;
            let b = vars.get(store, &format!("{p}.attn.bk"))?;
            let h = tape.matmul(a, w)?;
            tape.add_bias(h, b)?
        };
        let v = {
            let w = vars.get(store, &format!("{p}.attn.wv"))?;
            let b = vars.get(store, &format!("{p}.attn.bv"))?;
            let h = tape.matmul(a, w)?;
            tape.add_bias(h, b)?
        };

        let mut head_outputs = Vec::with_capacity(config.num_heads);
        for h in 0..config.num_heads {
            let qh = tape.slice_cols(q, h * dh, dh)?;
            let kh = tape.slice_cols(k, h * dh, dh)?;
            let vh = tape.slice_cols(v, h * dh, dh)?;
            let scores = tape.matmul_bt(qh, kh)?;
            let scores = tape.scale(scores, scale)?;
            let attn = tape.causal_softmax(scores)?;
            head_outputs.push(tape.matmul(attn, vh)?);
        }
        let ctx = tape.concat_cols(&head_outputs)?;
        let attn_out = {
            let w = vars.get(store, &format!("{p}.attn.wo"))?;
            let b = vars.get(store, &format!("{p}.attn.bo"))?;
            let h = tape.matmul(ctx, w)?;
            tape.add_bias(h, b)?
        };
        x = tape.add(x, attn_out)?;

        let ln2g = vars.get(store, &format!("{p}.ln2.gamma"))?;
        let ln2b = vars.get(store, &format!("{p}.ln2.beta"))?;
        let m = tape.layer_norm(x, ln2g, ln2b)?;
        let mlp_out = {
            let w1 = vars.get(store, &format!("{p}.mlp.w1"))?;
            let b1 = vars.get(store, &format!("{p}.mlp.b1"))?;
            let w2 = vars.get(store, &format!("{p}.mlp.w2"))?;
            let b2 = vars.get(store, &format!("{p}.mlp.b2"))?;
            let h = tape.matmul(m, w1)?;
            let h = tape.add_bias(h, b1)?;
            let h = tape.gelu(h)?;
            let h = tape.matmul(h, w2)?;
            tape.add_bias(h, b2)?
        };
        x = tape.add(x, mlp_out)?;
    }

    let fg = vars.get(store, "final_ln.gamma")?;
    let fb = vars.get(store, "final_ln.beta")?;
    let f = tape.layer_norm(x, fg, fb)?;
    let head = vars.get(store, "head.weight")?;
    let logits = tape.matmul(f, head)?;
    Ok(logits)
}

/// Next-token logits for every position of `tokens` (`[len, vocab]`),
/// without keeping the tape around.
pub fn logits(config: &ModelConfig, store: &ParameterStore, tokens: &[usize]) -> Result<Tensor64> {
    let mut tape = Tape::new();
    let vars = StoreVars::register(&mut tape, store);
    let node = forward_logits(&mut tape, config, store, &vars, tokens)?;
    Ok(tape.value(node).clone())
}

/// Row-wise log-softmax value at one column, computed with the usual
/// max-shifted log-sum-exp.
pub(crate) fn log_prob_at(row: &[f64], col: usize) -> f64 {
    let max = row.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v));
    let denom: f64 = row.iter().map(|&v| (v - max).exp()).sum();
    (row[col] - max) - denom.ln()
}
