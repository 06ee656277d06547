use std::collections::HashSet;
use std::sync::OnceLock;

use super::engines::all_engines;
use super::DiagnosticItem;

/// The closed lexicon: every word any diagnostic engine can emit, plus the
/// prompt-rendering glue. Sorted and deduplicated, without the reserved
/// tokenizer specials.
pub fn lexicon() -> Vec<String> {
    let mut words: Vec<String> = all_engines().flat_map(|e| e.vocabulary()).collect();
    words.extend(
        ["(a)", "(b)", "(c)", "(d)", "answer", ":", ".", ",", "?", ";"].map(String::from),
    );
    words.sort_unstable();
    words.dedup();
    words
}

pub(crate) fn lexicon_set() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| lexicon().into_iter().collect())
}

/// Render an item as a scoring prompt plus the four candidate
/// continuations (the option texts, in order).
///
/// The prompt is `context question (a) ... (d) answer :`; two items that
/// differ only in `answer_index` render to the same prompt with a
/// different gold continuation.
pub fn render_prompt(item: &DiagnosticItem) -> (String, Vec<String>) {
    let labels = ["(a)", "(b)", "(c)", "(d)", "(e)"];
    let mut prompt = format!("{} {}", item.context, item.question);
    for (i, opt) in item.options.iter().enumerate() {
        prompt.push(' ');
        prompt.push_str(labels.get(i).unwrap_or(&"(?)"));
        prompt.push(' ');
        prompt.push_str(opt);
    }
    prompt.push_str(" answer :");
    (prompt, item.options.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicon_is_sorted_and_unique() {
        let lex = lexicon();
        let mut sorted = lex.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(lex, sorted);
        assert!(lex.len() > 500, "lexicon unexpectedly small: {}", lex.len());
    }

    #[test]
    fn prompt_contains_each_option_exactly_once() {
        let item = DiagnosticItem::new(
            "light : dark :: truth : ?",
            "which option best completes the analogy ?",
            vec!["lie".into(), "fact".into(), "shadow".into(), "wisdom".into()],
            0,
        );
        let (prompt, conts) = render_prompt(&item);
        for opt in &item.options {
            assert_eq!(prompt.matches(&format!(" {opt}")).count(), 1, "{prompt}");
        }
        assert_eq!(conts, item.options);
        assert!(prompt.ends_with("answer :"));
    }

    #[test]
    fn answer_index_does_not_change_the_prompt() {
        let a = DiagnosticItem::new("c", "q", vec!["x".into(), "y".into()], 0);
        let b = DiagnosticItem::new("c", "q", vec!["x".into(), "y".into()], 1);
        assert_eq!(render_prompt(&a).0, render_prompt(&b).0);
    }
}
