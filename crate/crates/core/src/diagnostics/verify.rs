use std::fmt;

use super::engines::engine_for;
use super::lexicon::lexicon_set;
use super::{AbilityId, DiagnosticItem};

/// Why an item failed verification. The first violated rule is reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailReason {
    NotFourOptions,
    DuplicateOptions,
    IndexMismatch,
    UnknownWord(String),
    LeakedAnswer,
    SolverMismatch { solver_index: usize },
    AmbiguousDistractor,
    UnparseableContext,
    UnparseableQuestion,
    NoSolution,
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailReason::NotFourOptions => write!(f, "item must have exactly four options"),
            FailReason::DuplicateOptions => write!(f, "options are not pairwise distinct"),
            FailReason::IndexMismatch => write!(f, "answer does not match options[answer_index]"),
            FailReason::UnknownWord(w) => write!(f, "word outside the closed lexicon: {w:?}"),
            FailReason::LeakedAnswer => write!(f, "answer text appears in the question or context"),
            FailReason::SolverMismatch { solver_index } => {
                write!(f, "solver picked option {solver_index} instead")
            }
            FailReason::AmbiguousDistractor => write!(f, "more than one option is correct"),
            FailReason::UnparseableContext => write!(f, "context does not parse"),
            FailReason::UnparseableQuestion => write!(f, "question does not parse"),
            FailReason::NoSolution => write!(f, "no option satisfies the solver"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyOutcome {
    Pass,
    Fail(FailReason),
}

impl VerifyOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, VerifyOutcome::Pass)
    }
}

/// Check one item against the schema rules and the ability's solver.
/// Total: never errors, always returns pass or the first violated rule.
pub fn verify_item(item: &DiagnosticItem, ability: AbilityId) -> VerifyOutcome {
    use VerifyOutcome::Fail;

    if item.options.len() != 4 {
        return Fail(FailReason::NotFourOptions);
    }
    for i in 0..item.options.len() {
        for j in (i + 1)..item.options.len() {
            if item.options[i] == item.options[j] {
                return Fail(FailReason::DuplicateOptions);
            }
        }
    }
    if item.answer_index >= item.options.len()
        || item.options[item.answer_index] != item.answer
    {
        return Fail(FailReason::IndexMismatch);
    }

    let lex = lexicon_set();
    for text in std::iter::once(&item.context)
        .chain(std::iter::once(&item.question))
        .chain(item.options.iter())
    {
        for word in text.split_whitespace() {
            if !lex.contains(word) {
                return Fail(FailReason::UnknownWord(word.to_string()));
            }
        }
    }

    // Lexical leakage is enforced inline for the knowledge-recall ability;
    // extractive abilities legitimately repeat the answer in the passage.
    if ability == AbilityId::LTK && leaks(item) {
        return Fail(FailReason::LeakedAnswer);
    }

    match engine_for(ability).solve(item) {
        Ok(idx) if idx == item.answer_index => VerifyOutcome::Pass,
        Ok(idx) => Fail(FailReason::SolverMismatch { solver_index: idx }),
        Err(reason) => Fail(reason),
    }
}

pub(crate) fn leaks(item: &DiagnosticItem) -> bool {
    let answer = item.answer.to_lowercase();
    item.question.to_lowercase().contains(&answer)
        || item.context.to_lowercase().contains(&answer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn valid_item() -> DiagnosticItem {
        DiagnosticItem::new(
            "light : dark :: truth : ?",
            "which option best completes the analogy ?",
            vec!["lie".into(), "fact".into(), "shadow".into(), "wisdom".into()],
            0,
        )
    }

    #[test]
    fn valid_item_passes() {
        assert!(verify_item(&valid_item(), AbilityId::Ana).is_pass());
    }

    #[test]
    fn index_mismatch_is_reported_first() {
        let mut item = valid_item();
        item.answer = "fact".into(); // no longer options[0]
        assert_eq!(
            verify_item(&item, AbilityId::Ana),
            VerifyOutcome::Fail(FailReason::IndexMismatch)
        );
    }

    #[test]
    fn unknown_word_is_rejected() {
        let mut item = valid_item();
        item.context = "light : dark :: zeppelin : ?".into();
        assert_eq!(
            verify_item(&item, AbilityId::Ana),
            VerifyOutcome::Fail(FailReason::UnknownWord("zeppelin".into()))
        );
    }

    #[test]
    fn solver_disagreement_is_reported() {
        let mut item = valid_item();
        item.answer_index = 1;
        item.answer = "fact".into();
        assert_eq!(
            verify_item(&item, AbilityId::Ana),
            VerifyOutcome::Fail(FailReason::SolverMismatch { solver_index: 0 })
        );
    }
}
