//! One template engine per ability. Every engine pairs a generator with a
//! solver that recomputes the correct option index from the item text
//! alone; generation keeps only items the solver confirms.

mod ana;
mod com;
mod cxt;
mod ded;
mod ind;
mod ltk;
mod quant;
mod sem;
mod spat;
mod temp;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::verify::FailReason;
use super::{AbilityId, DiagnosticItem};

pub(crate) trait Engine: Sync {
    fn ability(&self) -> AbilityId;
    /// Propose one candidate item. Candidates may still be rejected by the
    /// solver or the dedup pass.
    fn generate(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem;
    /// Recompute the correct option index from (context, question, options)
    /// alone.
    fn solve(&self, item: &DiagnosticItem) -> Result<usize, FailReason>;
    /// Every word this engine can emit, for the closed lexicon.
    fn vocabulary(&self) -> Vec<String>;
}

pub(crate) fn engine_for(ability: AbilityId) -> &'static dyn Engine {
    match ability {
        AbilityId::Ana => &ana::AnalogyEngine,
        AbilityId::Com => &com::CommonsenseEngine,
        AbilityId::Cxt => &cxt::ContextRecallEngine,
        AbilityId::Ded => &ded::DeductionEngine,
        AbilityId::Ind => &ind::InductionEngine,
        AbilityId::LTK => &ltk::KnowledgeEngine,
        AbilityId::Quant => &quant::QuantEngine,
        AbilityId::Sem => &sem::SemanticEngine,
        AbilityId::Spat => &spat::SpatialEngine,
        AbilityId::Temp => &temp::TemporalEngine,
    }
}

pub(crate) fn all_engines() -> impl Iterator<Item = &'static dyn Engine> {
    AbilityId::ALL.iter().map(|&a| engine_for(a))
}

// --- shared sampling helpers ---

pub(crate) fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

/// `n` distinct elements, order of first appearance in the draw.
pub(crate) fn pick_distinct<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T], n: usize) -> Vec<&'a T> {
    assert!(n <= items.len());
    let mut idx: Vec<usize> = Vec::with_capacity(n);
    while idx.len() < n {
        let i = rng.gen_range(0..items.len());
        if !idx.contains(&i) {
            idx.push(i);
        }
    }
    idx.into_iter().map(|i| &items[i]).collect()
}

/// Place the gold answer at a uniformly random index among the distractors.
pub(crate) fn place_gold(
    rng: &mut ChaCha8Rng,
    gold: String,
    distractors: Vec<String>,
) -> (Vec<String>, usize) {
    let n = distractors.len() + 1;
    let answer_index = rng.gen_range(0..n);
    let mut options = Vec::with_capacity(n);
    let mut d = distractors.into_iter();
    for i in 0..n {
        if i == answer_index {
            options.push(gold.clone());
        } else {
            options.push(d.next().expect("enough distractors"));
        }
    }
    (options, answer_index)
}

/// Index of the single option equal to `gold`; fails when it is missing.
/// Option distinctness is checked separately by the schema validator.
pub(crate) fn index_of_gold(options: &[String], gold: &str) -> Result<usize, FailReason> {
    options
        .iter()
        .position(|o| o == gold)
        .ok_or(FailReason::NoSolution)
}

pub(crate) fn words_of(texts: &[&str]) -> Vec<String> {
    texts
        .iter()
        .flat_map(|t| t.split_whitespace())
        .map(|w| w.to_string())
        .collect()
}
