use std::collections::HashMap;

use super::{ModelError, Result};

pub const PAD: &str = "<pad>";
pub const UNK: &str = "<unk>";
pub const EOT: &str = "<eot>";

/// Word-level tokenizer over a closed lexicon.
///
/// Text is canonical when tokens are separated by single spaces; on such
/// text `decode(encode(t)) == t`. Out-of-vocabulary words are an error, not
/// a silent fallback.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tokenizer {
    vocab: Vec<String>,
    index: HashMap<String, usize>,
}

impl Tokenizer {
    /// Build from a word list. Words are deduplicated and sorted so the id
    /// assignment is deterministic; ids 0..=2 are reserved for the pad,
    /// unknown and end-of-text markers.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut uniq: Vec<String> = words
            .into_iter()
            .map(Into::into)
            .filter(|w| !w.is_empty() && w != PAD && w != UNK && w != EOT)
            .collect();
        uniq.sort_unstable();
        uniq.dedup();
        let mut vocab = vec![PAD.to_string(), UNK.to_string(), EOT.to_string()];
        vocab.extend(uniq);
        let index = vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Self { vocab, index }
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn pad_id(&self) -> usize {
        0
    }

    pub fn unk_id(&self) -> usize {
        1
    }

    pub fn eot_id(&self) -> usize {
        2
    }

    pub fn id_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn encode(&self, text: &str) -> Result<Vec<usize>> {
        text.split_whitespace()
            .map(|w| {
                self.index
                    .get(w)
                    .copied()
                    .ok_or_else(|| ModelError::UnknownToken { token: w.to_string() })
            })
            .collect()
    }

    pub fn decode(&self, ids: &[usize]) -> Result<String> {
        let words: Result<Vec<&str>> = ids
            .iter()
            .map(|&id| {
                self.vocab
                    .get(id)
                    .map(|s| s.as_str())
                    .ok_or_else(|| ModelError::UnknownToken { token: format!("<id {id}>") })
            })
            .collect();
        Ok(words?.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode_identity_on_canonical_text() {
        let tok = Tokenizer::from_words(["the", "circle", "is", "above", "square"]);
        let text = "the circle is above the square";
        let ids = tok.encode(text).unwrap();
        assert_eq!(tok.decode(&ids).unwrap(), text);
    }

    #[test]
    fn out_of_vocabulary_is_an_error() {
        let tok = Tokenizer::from_words(["a"]);
        assert!(matches!(
            tok.encode("a b"),
            Err(ModelError::UnknownToken { .. })
        ));
    }

    #[test]
    fn word_order_does_not_change_ids() {
        let a = Tokenizer::from_words(["b", "a", "c"]);
        let b = Tokenizer::from_words(["c", "a", "b", "a"]);
        assert_eq!(a, b);
    }

    #[test]
    fn reserved_ids_are_stable() {
        let tok = Tokenizer::from_words(["zz"]);
        assert_eq!(tok.pad_id(), 0);
        assert_eq!(tok.unk_id(), 1);
        assert_eq!(tok.eot_id(), 2);
        assert_eq!(tok.id_of("zz"), Some(3));
    }
}
