use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::engines::engine_for;
use super::verify::{leaks, verify_item};
use super::{AbilityId, DataError, DiagnosticDataset, DiagnosticItem, Result, Split};

/// Rejected-sample budget, as a multiple of the requested item count.
const REJECTION_BUDGET: usize = 50;

/// Generate `n` solver-verified, deduplicated items.
///
/// Each candidate comes from an RNG keyed by `(seed, item index, attempt)`,
/// so the dataset is byte-identical for a fixed `(ability, n, seed)` and
/// items could be produced concurrently and emitted in index order. Items
/// whose `(context, question)` pair was already taken are rejected like
/// solver failures; the run aborts after `50 * n` rejections.
pub fn generate_dataset(ability: AbilityId, n: usize, seed: u64) -> Result<DiagnosticDataset> {
    if n == 0 {
        return Err(DataError::EmptyRequest);
    }
    let engine = engine_for(ability);
    let budget = REJECTION_BUDGET * n;
    let mut rejected = 0usize;
    let mut seen: HashSet<(String, String)> = HashSet::with_capacity(n);
    let mut items: Vec<DiagnosticItem> = Vec::with_capacity(n);
    let mut splits: Vec<Split> = Vec::with_capacity(n);

    for index in 0..n {
        let mut attempt = 0u64;
        loop {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((index as u64) << 24) | attempt);
            let candidate = engine.generate(&mut rng);

            let fresh = !seen.contains(&(candidate.context.clone(), candidate.question.clone()));
            if fresh && verify_item(&candidate, ability).is_pass() {
                seen.insert((candidate.context.clone(), candidate.question.clone()));
                items.push(candidate);
                // every tenth item is held out
                splits.push(if index % 10 == 9 { Split::Heldout } else { Split::Train });
                break;
            }
            rejected += 1;
            attempt += 1;
            if rejected > budget {
                return Err(DataError::GenerationExhausted { rejected, wanted: n });
            }
        }
    }
    Ok(DiagnosticDataset { ability, seed, items, splits })
}

/// Drop every item whose answer text occurs (case-insensitively) inside its
/// question or context. Survivor order is preserved.
pub fn leakage_filter(items: &[DiagnosticItem]) -> Vec<DiagnosticItem> {
    items.iter().filter(|i| !leaks(i)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_gives_identical_datasets() {
        let a = generate_dataset(AbilityId::Spat, 50, 7).unwrap();
        let b = generate_dataset(AbilityId::Spat, 50, 7).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn different_seeds_differ() {
        let a = generate_dataset(AbilityId::Spat, 30, 7).unwrap();
        let b = generate_dataset(AbilityId::Spat, 30, 8).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn all_items_pass_verification_and_are_unique() {
        for ability in [AbilityId::Ana, AbilityId::Quant, AbilityId::Temp] {
            let ds = generate_dataset(ability, 120, 3).unwrap();
            let mut seen = HashSet::new();
            for item in &ds.items {
                assert!(verify_item(item, ability).is_pass());
                assert!(seen.insert((item.context.clone(), item.question.clone())));
            }
        }
    }

    #[test]
    fn split_is_ninety_ten() {
        let ds = generate_dataset(AbilityId::Com, 100, 1).unwrap();
        assert_eq!(ds.heldout_items().len(), 10);
        assert_eq!(ds.train_items().len(), 90);
    }

    #[test]
    fn zero_items_rejected() {
        assert!(matches!(
            generate_dataset(AbilityId::Ana, 0, 1),
            Err(DataError::EmptyRequest)
        ));
    }

    #[test]
    fn leakage_filter_removes_leaky_items_and_keeps_order() {
        let leaky = DiagnosticItem::new(
            "the answer paris is hidden here",
            "what is the capital city of france ?",
            vec!["paris".into(), "rome".into(), "oslo".into(), "cairo".into()],
            0,
        );
        let clean = DiagnosticItem::new(
            "this question is about world geography .",
            "what is the capital city of australia ?",
            vec!["sydney".into(), "canberra".into(), "perth".into(), "cairo".into()],
            1,
        );
        let out = leakage_filter(&[leaky, clean.clone()]);
        assert_eq!(out, vec![clean]);
        assert!(leakage_filter(&[]).is_empty());
    }
}
