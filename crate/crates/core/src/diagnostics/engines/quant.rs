//! Quantitative word problems: two arithmetic operations over small
//! numbers, one injected irrelevant number, and distractors derived from
//! common slips (off-by-one, wrong operator, using the irrelevant value).
//! The solver re-parses the story and recomputes the result.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::verify::FailReason;
use crate::diagnostics::{AbilityId, DiagnosticItem};

use super::{pick, place_gold, words_of, Engine};

pub(crate) struct QuantEngine;

const MALES: &[&str] = &["Victor", "Omar", "Ravi", "Stefan", "Yusuf", "Marco", "Dmitri", "Kenji"];
const FEMALES: &[&str] = &["Priya", "Sofia", "Amara", "Yuki", "Fatima", "Elena", "Nadia", "Rosa"];

const ITEMS: &[&str] = &[
    "apples", "pencils", "marbles", "stickers", "coins", "books", "cookies", "shells", "cards",
    "buttons", "oranges", "stamps",
];

/// Irrelevant-number sentences; `{d}` is the decoy value, `{other}` a
/// second name.
const DECOY_SENTENCES: &[&str] = &[
    "{other} is {d} years old .",
    "the walk to school takes {d} minutes .",
    "{other} watched for {d} minutes .",
    "the shop is {d} steps away .",
];

fn name_pair(rng: &mut ChaCha8Rng) -> (String, &'static str, String) {
    let male = rng.gen_bool(0.5);
    let (bank, pronoun) = if male { (MALES, "he") } else { (FEMALES, "she") };
    let name = pick(rng, bank).to_string();
    let other_bank = if male { FEMALES } else { MALES };
    let other = pick(rng, other_bank).to_string();
    (name, pronoun, other)
}

impl Engine for QuantEngine {
    fn ability(&self) -> AbilityId {
        AbilityId::Quant
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        let (name, pronoun, other) = name_pair(rng);
        let item = pick(rng, ITEMS).to_string();
        let d = rng.gen_range(3..=60i64);
        let decoy_sentence = pick(rng, DECOY_SENTENCES)
            .replace("{other}", &other)
            .replace("{d}", &d.to_string());

        let (story, question, gold, slips): (String, String, i64, Vec<i64>) =
            match rng.gen_range(0..5u8) {
                0 => {
                    // had a, gave b away, bought c more
                    let a = rng.gen_range(5..=20i64);
                    let b = rng.gen_range(1..a);
                    let c = rng.gen_range(1..=12i64);
                    let gold = a - b + c;
                    (
                        format!(
                            "{name} had {a} {item} . {pronoun} gave {b} {item} to {other} and then bought {c} more ."
                        ),
                        format!("how many {item} does {name} have now ?"),
                        gold,
                        vec![a + b + c, a - b - c, gold + 1, gold - 1, a - b + d],
                    )
                }
                1 => {
                    // k boxes of m each
                    let k = rng.gen_range(2..=9i64);
                    let m = rng.gen_range(2..=9i64);
                    let gold = k * m;
                    (
                        format!("{name} bought {k} boxes of {item} . each box holds {m} {item} ."),
                        format!("how many {item} did {name} buy in total ?"),
                        gold,
                        vec![k + m, gold + m, gold - m, gold + 1, gold - 1],
                    )
                }
                2 => {
                    // shared equally
                    let k = rng.gen_range(2..=6i64);
                    let q = rng.gen_range(2..=9i64);
                    let a = k * q;
                    (
                        format!("{name} had {a} {item} and shared them equally among {k} friends ."),
                        format!("how many {item} did each friend get ?"),
                        q,
                        vec![a - k, q + 1, q - 1, q + k, a],
                    )
                }
                3 => {
                    // picked a, picked c more, lost b
                    let a = rng.gen_range(4..=15i64);
                    let c = rng.gen_range(2..=12i64);
                    let b = rng.gen_range(1..(a + c).min(12));
                    let gold = a + c - b;
                    (
                        format!(
                            "{name} picked {a} {item} in the morning and {c} more in the afternoon . {pronoun} then lost {b} of them ."
                        ),
                        format!("how many {item} does {name} have now ?"),
                        gold,
                        vec![a + c + b, gold + 1, gold - 1, a - b, a + c],
                    )
                }
                _ => {
                    // spent twice
                    let b = rng.gen_range(2..=9i64);
                    let c = rng.gen_range(2..=9i64);
                    let a = b + c + rng.gen_range(1..=10i64);
                    let gold = a - b - c;
                    (
                        format!(
                            "{name} had {a} coins . {pronoun} spent {b} coins on a toy and {c} coins on a snack ."
                        ),
                        format!("how many coins does {name} have left ?"),
                        gold,
                        vec![a - b + c, a + b + c, gold + 1, gold - 1, a - b],
                    )
                }
            };

        let context = format!("{story} {decoy_sentence}");
        let mut distractors: Vec<String> = Vec::new();
        for cand in slips {
            if cand >= 0 && cand != gold {
                let s = cand.to_string();
                if !distractors.contains(&s) {
                    distractors.push(s);
                }
            }
            if distractors.len() == 3 {
                break;
            }
        }
        // Slip collisions can leave fewer than three; pad with offsets.
        let mut bump = 2i64;
        while distractors.len() < 3 {
            let cand = gold + bump;
            let s = cand.to_string();
            if cand >= 0 && cand != gold && !distractors.contains(&s) {
                distractors.push(s);
            }
            bump += 1;
        }
        let (options, answer_index) = place_gold(rng, gold.to_string(), distractors);
        DiagnosticItem::new(context, question, options, answer_index)
    }

    fn solve(&self, item: &DiagnosticItem) -> Result<usize, FailReason> {
        let toks: Vec<&str> = item.context.split_whitespace().collect();
        let num_after = |kw_seq: &[&str]| -> Option<i64> {
            // first position where the keyword sequence matches; the number
            // immediately before or after depending on the pattern
            toks.windows(kw_seq.len() + 1).find_map(|w| {
                if w[1..] == *kw_seq {
                    w[0].parse::<i64>().ok()
                } else {
                    None
                }
            })
        };
        let num_pairs = |a_kw: &str| -> Option<i64> {
            toks.iter()
                .position(|t| *t == a_kw)
                .and_then(|i| toks.get(i + 1))
                .and_then(|t| t.parse::<i64>().ok())
        };

        let q = &item.question;
        let gold: i64 = if q.starts_with("how many") && q.contains("have now ?") {
            if item.context.contains("gave") && item.context.contains("bought") {
                let a = num_pairs("had").ok_or(FailReason::UnparseableContext)?;
                let b = num_pairs("gave").ok_or(FailReason::UnparseableContext)?;
                let c = num_pairs("bought").ok_or(FailReason::UnparseableContext)?;
                a - b + c
            } else if item.context.contains("picked") && item.context.contains("lost") {
                let a = num_pairs("picked").ok_or(FailReason::UnparseableContext)?;
                let c = num_after(&["more", "in", "the", "afternoon"])
                    .ok_or(FailReason::UnparseableContext)?;
                let b = num_pairs("lost").ok_or(FailReason::UnparseableContext)?;
                a + c - b
            } else {
                return Err(FailReason::UnparseableContext);
            }
        } else if q.contains("buy in total ?") {
            let k = num_pairs("bought").ok_or(FailReason::UnparseableContext)?;
            let m = num_pairs("holds").ok_or(FailReason::UnparseableContext)?;
            k * m
        } else if q.contains("each friend get ?") {
            let a = num_pairs("had").ok_or(FailReason::UnparseableContext)?;
            let k = num_after(&["friends"]).ok_or(FailReason::UnparseableContext)?;
            if k == 0 || a % k != 0 {
                return Err(FailReason::NoSolution);
            }
            a / k
        } else if q.contains("have left ?") {
            let a = num_pairs("had").ok_or(FailReason::UnparseableContext)?;
            let b = num_pairs("spent").ok_or(FailReason::UnparseableContext)?;
            let c = num_after(&["coins", "on", "a", "snack"])
                .ok_or(FailReason::UnparseableContext)?;
            a - b - c
        } else {
            return Err(FailReason::UnparseableQuestion);
        };

        let gold_text = gold.to_string();
        let hits: Vec<usize> = item
            .options
            .iter()
            .enumerate()
            .filter(|(_, o)| **o == gold_text)
            .map(|(i, _)| i)
            .collect();
        match hits.as_slice() {
            [one] => Ok(*one),
            [] => Err(FailReason::NoSolution),
            _ => Err(FailReason::AmbiguousDistractor),
        }
    }

    fn vocabulary(&self) -> Vec<String> {
        let mut v = words_of(&[
            "had gave to and then bought more . how many does have now ? boxes of each box holds did buy in total shared them equally among friends get picked the morning afternoon lost spent coins on a toy snack left is years old walk school takes minutes watched for shop steps away",
        ]);
        v.extend(MALES.iter().chain(FEMALES).map(|s| s.to_string()));
        v.extend(ITEMS.iter().map(|s| s.to_string()));
        v.extend(["he", "she"].map(String::from));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_items_solve_to_their_answer_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let item = QuantEngine.generate(&mut rng);
            assert_eq!(
                QuantEngine.solve(&item).unwrap(),
                item.answer_index,
                "item: {item:?}"
            );
        }
    }

    #[test]
    fn classic_apple_story_computes_six() {
        let item = DiagnosticItem::new(
            "Priya had 5 apples . she gave 2 apples to Omar and then bought 3 more . Omar is 31 years old .",
            "how many apples does Priya have now ?",
            vec!["6".into(), "5".into(), "8".into(), "10".into()],
            0,
        );
        assert_eq!(QuantEngine.solve(&item).unwrap(), 0);
    }

    #[test]
    fn irrelevant_number_does_not_change_the_answer() {
        let a = DiagnosticItem::new(
            "Rosa picked 7 shells in the morning and 4 more in the afternoon . she then lost 2 of them . the shop is 40 steps away .",
            "how many shells does Rosa have now ?",
            vec!["9".into(), "13".into(), "8".into(), "11".into()],
            0,
        );
        assert_eq!(QuantEngine.solve(&a).unwrap(), 0);
    }
}
