//! Semantic relationship items: two-hop kinship composition and three-level
//! workplace hierarchies. The solver rebuilds the relation graph from the
//! passage and recomputes the queried relationship.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::verify::FailReason;
use crate::diagnostics::{AbilityId, DiagnosticItem};

use super::{index_of_gold, pick, pick_distinct, place_gold, words_of, Engine};

pub(crate) struct SemanticEngine;

const MALES: &[&str] = &["Bob", "Charlie", "David", "Frank", "George", "Henry", "Oscar", "Peter"];
const FEMALES: &[&str] = &["Alice", "Carol", "Diana", "Emma", "Grace", "Helen", "Olivia", "Rose"];

/// Kinship step classes used for composition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Step {
    Parent,
    Sibling,
    Child,
}

const PARENT_WORDS: [(&str, bool); 2] = [("mother", false), ("father", true)];
const SIBLING_WORDS: [(&str, bool); 2] = [("sister", false), ("brother", true)];
const CHILD_WORDS: [(&str, bool); 2] = [("daughter", false), ("son", true)];

fn word_for(step: Step, male: bool) -> &'static str {
    let bank = match step {
        Step::Parent => &PARENT_WORDS,
        Step::Sibling => &SIBLING_WORDS,
        Step::Child => &CHILD_WORDS,
    };
    bank.iter().find(|&&(_, m)| m == male).unwrap().0
}

fn step_of(word: &str) -> Option<(Step, bool)> {
    for (bank, step) in [
        (&PARENT_WORDS, Step::Parent),
        (&SIBLING_WORDS, Step::Sibling),
        (&CHILD_WORDS, Step::Child),
    ] {
        if let Some(&(_, male)) = bank.iter().find(|&&(w, _)| w == word) {
            return Some((step, male));
        }
    }
    None
}

/// Composition: `a` is `s1` of `b`, `b` is `s2` of `c`  =>  `a` is ? of `c`.
/// Full-sibling and shared-household assumptions apply, as usual in such
/// puzzles.
fn compose(s1: Step, s2: Step, a_male: bool) -> Option<&'static str> {
    match (s1, s2, a_male) {
        (Step::Parent, Step::Parent, false) => Some("grandmother"),
        (Step::Parent, Step::Parent, true) => Some("grandfather"),
        (Step::Sibling, Step::Parent, false) => Some("aunt"),
        (Step::Sibling, Step::Parent, true) => Some("uncle"),
        (Step::Parent, Step::Sibling, false) => Some("mother"),
        (Step::Parent, Step::Sibling, true) => Some("father"),
        (Step::Child, Step::Child, false) => Some("granddaughter"),
        (Step::Child, Step::Child, true) => Some("grandson"),
        (Step::Sibling, Step::Sibling, false) => Some("sister"),
        (Step::Sibling, Step::Sibling, true) => Some("brother"),
        // child of C's sibling
        (Step::Child, Step::Sibling, false) => Some("niece"),
        (Step::Child, Step::Sibling, true) => Some("nephew"),
        // sibling of C's child, hence also C's child
        (Step::Sibling, Step::Child, false) => Some("daughter"),
        (Step::Sibling, Step::Child, true) => Some("son"),
        _ => None,
    }
}

const KIN_ANSWERS_F: &[&str] = &[
    "grandmother", "aunt", "mother", "granddaughter", "sister", "daughter", "niece",
];
const KIN_ANSWERS_M: &[&str] = &[
    "grandfather", "uncle", "father", "grandson", "brother", "son", "nephew",
];

impl Engine for SemanticEngine {
    fn ability(&self) -> AbilityId {
        AbilityId::Sem
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        if rng.gen_bool(0.6) {
            // Kinship: pick a composable (s1, s2) pair.
            let combos = [
                (Step::Parent, Step::Parent),
                (Step::Sibling, Step::Parent),
                (Step::Parent, Step::Sibling),
                (Step::Child, Step::Child),
                (Step::Sibling, Step::Sibling),
                (Step::Child, Step::Sibling),
                (Step::Sibling, Step::Child),
            ];
            let &(s1, s2) = pick(rng, &combos);
            let a_male = rng.gen_bool(0.5);
            let b_male = rng.gen_bool(0.5);
            let c_male = rng.gen_bool(0.5);
            let a = pick_name(rng, a_male, &[]);
            let b = pick_name(rng, b_male, &[&a]);
            let c = pick_name(rng, c_male, &[&a, &b]);
            let rel1 = word_for(s1, a_male);
            let rel2 = word_for(s2, b_male);
            let gold_word = compose(s1, s2, a_male).expect("composable pair");
            let pronoun = if c_male { "his" } else { "her" };
            let gold = format!("{pronoun} {gold_word}");
            let pool = if a_male { KIN_ANSWERS_M } else { KIN_ANSWERS_F };
            let mut distractors = Vec::new();
            for cand in pick_distinct(rng, pool, pool.len()) {
                if *cand != gold_word && distractors.len() < 3 {
                    distractors.push(format!("{pronoun} {cand}"));
                }
            }
            let context = format!("{a} is {b} 's {rel1} . {b} is {c} 's {rel2} .");
            let question = format!("who is {a} to {c} ?");
            let (options, answer_index) = place_gold(rng, gold, distractors);
            DiagnosticItem::new(context, question, options, answer_index)
        } else {
            // Hierarchy: a manages b, b manages c.
            let names = pick_distinct(
                rng,
                &MALES.iter().chain(FEMALES).copied().collect::<Vec<_>>(),
                4,
            );
            let (a, b, c, stranger) = (names[0], names[1], names[2], names[3]);
            let context = format!("{a} manages {b} . {b} manages {c} .");
            let (question, gold) = if rng.gen_bool(0.5) {
                (format!("who manages the person who manages {c} ?"), a)
            } else {
                ("who is at the top of the reporting chain ?".to_string(), a)
            };
            let distractors = vec![b.to_string(), c.to_string(), stranger.to_string()];
            let (options, answer_index) = place_gold(rng, gold.to_string(), distractors);
            DiagnosticItem::new(context, question, options, answer_index)
        }
    }

    fn solve(&self, item: &DiagnosticItem) -> Result<usize, FailReason> {
        let q: Vec<&str> = item.question.split_whitespace().collect();
        match q.as_slice() {
            ["who", "is", a, "to", c, "?"] => {
                let mut kin: Vec<(String, String, Step, bool)> = Vec::new();
                for sentence in item.context.split(" . ") {
                    let s = sentence.trim_end_matches(" .").trim();
                    if s.is_empty() {
                        continue;
                    }
                    let t: Vec<&str> = s.split_whitespace().collect();
                    match t.as_slice() {
                        [x, "is", y, "'s", rel] => {
                            let (step, male) =
                                step_of(rel).ok_or(FailReason::UnparseableContext)?;
                            kin.push((x.to_string(), y.to_string(), step, male));
                        }
                        _ => return Err(FailReason::UnparseableContext),
                    }
                }
                // Chain a -> m -> c.
                let first = kin
                    .iter()
                    .find(|(x, _, _, _)| x.as_str() == *a)
                    .ok_or(FailReason::NoSolution)?;
                let second = kin
                    .iter()
                    .find(|(x, _, _, _)| *x == first.1 && x.as_str() != *a)
                    .ok_or(FailReason::NoSolution)?;
                if second.1 != *c {
                    return Err(FailReason::NoSolution);
                }
                let a_male = first.3;
                let gold_word =
                    compose(first.2, second.2, a_male).ok_or(FailReason::NoSolution)?;
                let c_male = MALES.contains(c);
                let pronoun = if c_male { "his" } else { "her" };
                index_of_gold(&item.options, &format!("{pronoun} {gold_word}"))
            }
            ["who", "manages", "the", "person", "who", "manages", c, "?"]
            | ["who", "is", "at", "the", "top", "of", "the", "reporting", "chain", "?", ..] => {
                let mut manages: Vec<(String, String)> = Vec::new();
                for sentence in item.context.split(" . ") {
                    let s = sentence.trim_end_matches(" .").trim();
                    if s.is_empty() {
                        continue;
                    }
                    let t: Vec<&str> = s.split_whitespace().collect();
                    match t.as_slice() {
                        [x, "manages", y] => manages.push((x.to_string(), y.to_string())),
                        _ => return Err(FailReason::UnparseableContext),
                    }
                }
                let gold = if q[1] == "manages" {
                    let c = q[6];
                    let mid = manages
                        .iter()
                        .find(|(_, y)| y == c)
                        .ok_or(FailReason::NoSolution)?;
                    manages
                        .iter()
                        .find(|(_, y)| *y == mid.0)
                        .ok_or(FailReason::NoSolution)?
                        .0
                        .clone()
                } else {
                    // top of the chain: manages someone, managed by nobody
                    let tops: Vec<&String> = manages
                        .iter()
                        .map(|(x, _)| x)
                        .filter(|x| !manages.iter().any(|(_, y)| y == *x))
                        .collect();
                    match tops.as_slice() {
                        [one] => (*one).clone(),
                        [] => return Err(FailReason::NoSolution),
                        _ => return Err(FailReason::AmbiguousDistractor),
                    }
                };
                index_of_gold(&item.options, &gold)
            }
            _ => Err(FailReason::UnparseableQuestion),
        }
    }

    fn vocabulary(&self) -> Vec<String> {
        let mut v = words_of(&[
            "is 's . ? who to manages the person at top of reporting chain his her",
        ]);
        v.extend(MALES.iter().chain(FEMALES).map(|s| s.to_string()));
        v.extend(KIN_ANSWERS_F.iter().chain(KIN_ANSWERS_M).map(|s| s.to_string()));
        v
    }
}

fn pick_name(rng: &mut ChaCha8Rng, male: bool, used: &[&str]) -> String {
    let bank = if male { MALES } else { FEMALES };
    loop {
        let n = pick(rng, bank);
        if !used.contains(n) {
            return n.to_string();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_items_solve_to_their_answer_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..400 {
            let item = SemanticEngine.generate(&mut rng);
            assert_eq!(
                SemanticEngine.solve(&item).unwrap(),
                item.answer_index,
                "item: {item:?}"
            );
        }
    }

    #[test]
    fn mother_of_a_father_is_the_grandmother() {
        let item = DiagnosticItem::new(
            "Alice is Bob 's mother . Bob is Charlie 's father .",
            "who is Alice to Charlie ?",
            vec![
                "his grandmother".into(),
                "his aunt".into(),
                "his sister".into(),
                "his niece".into(),
            ],
            0,
        );
        assert_eq!(SemanticEngine.solve(&item).unwrap(), 0);
    }

    #[test]
    fn two_hop_hierarchy_resolves_to_the_top() {
        let item = DiagnosticItem::new(
            "Grace manages Henry . Henry manages Oscar .",
            "who manages the person who manages Oscar ?",
            vec!["Grace".into(), "Henry".into(), "Oscar".into(), "Rose".into()],
            0,
        );
        assert_eq!(SemanticEngine.solve(&item).unwrap(), 0);
    }
}
