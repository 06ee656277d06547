use crate::importance::AblationMask;

use super::{ModelError, ParameterStore, Result};

/// Zero exactly the masked coordinates, returning a new store.
///
/// Every other entry stays bit-identical and the input is not modified.
pub fn apply_ablation(store: &ParameterStore, mask: &AblationMask) -> Result<ParameterStore> {
    // Group mask offsets by tensor; coordinates are sorted by name.
    let mut tensors: Vec<_> = store.entries().iter().map(|e| e.tensor.clone()).collect();
    let coords = mask.coordinates();
    let mut i = 0;
    while i < coords.len() {
        let name = &coords[i].0;
        let mut j = i;
        while j < coords.len() && coords[j].0 == *name {
            j += 1;
        }
        let pos = store
            .position(name)
            .ok_or_else(|| ModelError::UnknownCoordinate { name: name.clone(), offset: coords[i].1 })?;
        let offsets: Vec<usize> = coords[i..j].iter().map(|c| c.1).collect();
        let len = tensors[pos].len();
        if let Some(&bad) = offsets.iter().find(|&&o| o >= len) {
            return Err(ModelError::UnknownCoordinate { name: name.clone(), offset: bad });
        }
        tensors[pos] = tensors[pos]
            .with_zeroed(&offsets)
            .map_err(ModelError::Numerics)?;
        i = j;
    }
    store.with_tensors(tensors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::importance::AblationMask;
    use crate::model::{init_model, ModelConfig, ParamKind};

    fn cfg() -> ModelConfig {
        ModelConfig {
            vocab_size: 16,
            context_length: 8,
            num_layers: 1,
            model_dim: 8,
            num_heads: 2,
            mlp_hidden_dim: 16,
            seed: 3,
        }
    }

    fn mask_of(coords: Vec<(String, usize)>) -> AblationMask {
        AblationMask::from_parts(
            crate::diagnostics::AbilityId::Ana,
            1.0,
            vec![ParamKind::Mlp],
            coords,
        )
        .unwrap()
    }

    #[test]
    fn empty_mask_is_identity() {
        let store = init_model(&cfg()).unwrap();
        let out = apply_ablation(&store, &mask_of(vec![])).unwrap();
        assert!(out.bit_eq(&store));
    }

    #[test]
    fn exactly_the_masked_entries_change() {
        let store = init_model(&cfg()).unwrap();
        let coords = vec![
            ("layers.0.mlp.w1".to_string(), 0),
            ("layers.0.mlp.w1".to_string(), 7),
            ("layers.0.mlp.w2".to_string(), 3),
        ];
        let out = apply_ablation(&store, &mask_of(coords.clone())).unwrap();

        // Full-store diff oracle: walk every entry byte by byte.
        let mut changed = Vec::new();
        for (a, b) in store.entries().iter().zip(out.entries()) {
            for (off, (x, y)) in a.tensor.data().iter().zip(b.tensor.data()).enumerate() {
                if x.to_bits() != y.to_bits() {
                    changed.push((a.name.clone(), off));
                    assert_eq!(*y, 0.0);
                }
            }
        }
        // w1[0] started non-zero, w2 is zero-initialized, so only entries
        // that were non-zero before show up in the byte diff.
        for c in &changed {
            assert!(coords.contains(c));
        }
        let read_back = out.tensor("layers.0.mlp.w1").unwrap();
        assert_eq!(read_back.data()[0], 0.0);
        assert_eq!(read_back.data()[7], 0.0);
        // Input untouched.
        assert_ne!(store.tensor("layers.0.mlp.w1").unwrap().data()[0], 0.0);
    }

    #[test]
    fn unknown_coordinate_is_an_error() {
        let store = init_model(&cfg()).unwrap();
        let err = apply_ablation(&store, &mask_of(vec![("nope".into(), 0)]));
        assert!(matches!(err, Err(ModelError::UnknownCoordinate { .. })));
        let err = apply_ablation(
            &store,
            &mask_of(vec![("layers.0.mlp.b1".into(), 1_000_000)]),
        );
        assert!(matches!(err, Err(ModelError::UnknownCoordinate { .. })));
    }
}
