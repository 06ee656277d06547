use serde::{Deserialize, Serialize};

use super::{ModelError, Result};

/// Architecture hyperparameters of the toy transformer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub vocab_size: usize,
    pub context_length: usize,
    pub num_layers: usize,
    pub model_dim: usize,
    pub num_heads: usize,
    pub mlp_hidden_dim: usize,
    pub seed: u64,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("vocab_size", self.vocab_size),
            ("context_length", self.context_length),
            ("num_layers", self.num_layers),
            ("model_dim", self.model_dim),
            ("num_heads", self.num_heads),
            ("mlp_hidden_dim", self.mlp_hidden_dim),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(ModelError::InvalidConfig(format!("{name} must be >= 1")));
            }
        }
        if self.model_dim % self.num_heads != 0 {
            return Err(ModelError::InvalidConfig(format!(
                "num_heads {} must divide model_dim {}",
                self.num_heads, self.model_dim
            )));
        }
        Ok(())
    }

    pub fn head_dim(&self) -> usize {
        self.model_dim / self.num_heads
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_indivisible_heads() {
        let cfg = ModelConfig {
            vocab_size: 16,
            context_length: 8,
            num_layers: 1,
            model_dim: 8,
            num_heads: 3,
            mlp_hidden_dim: 16,
            seed: 0,
        };
        assert!(matches!(cfg.validate(), Err(ModelError::InvalidConfig(_))));
    }

    #[test]
    fn rejects_zero_dims() {
        let cfg = ModelConfig {
            vocab_size: 0,
            context_length: 8,
            num_layers: 1,
            model_dim: 8,
            num_heads: 2,
            mlp_hidden_dim: 16,
            seed: 0,
        };
        assert!(cfg.validate().is_err());
    }
}
