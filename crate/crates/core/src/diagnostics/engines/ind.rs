//! Induction items: five in-context sequence elements, ask for the sixth.
//! Families: arithmetic (+/- constant step), doubling, letter steps, cyclic
//! weekdays/months and perfect squares. The solver re-detects the governing
//! rule; sequences matching two rules with different continuations are
//! rejected as ambiguous.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::verify::FailReason;
use crate::diagnostics::{AbilityId, DiagnosticItem};

use super::{pick, place_gold, words_of, Engine};

pub(crate) struct InductionEngine;

pub(crate) const MAX_NUMBER: i64 = 180;

const TEMPLATES: &[&str] = &["consider the sequence", "look at the pattern", "the sequence so far is"];
const Q_NUMBER: &str = "what is the next number in the sequence ?";
const Q_LETTER: &str = "what is the next letter in the sequence ?";
const Q_GENERIC: &str = "what comes next in the sequence ?";

const WEEKDAYS: [&str; 7] = [
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday",
];
const MONTHS: [&str; 12] = [
    "january", "february", "march", "april", "may", "june", "july", "august", "september",
    "october", "november", "december",
];

#[derive(Clone, Copy, PartialEq)]
enum Element {
    Number(i64),
    Letter(u8),
    Weekday(usize),
    Month(usize),
}

impl Engine for InductionEngine {
    fn ability(&self) -> AbilityId {
        AbilityId::Ind
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        let template = pick(rng, TEMPLATES);
        match rng.gen_range(0..6u8) {
            0 | 1 => {
                // arithmetic, ascending or descending
                let step = rng.gen_range(2..=12i64);
                let (start, signed_step) = if rng.gen_bool(0.5) {
                    (rng.gen_range(1..=90i64), step)
                } else {
                    (rng.gen_range(5 * step + 1..=150i64), -step)
                };
                let seq: Vec<i64> = (0..5).map(|i| start + signed_step * i).collect();
                let gold = start + signed_step * 5;
                let decoy_pool = [gold + 1, gold - 1, gold + step, gold - step, gold + 2];
                self::number_item(rng, template, &seq, gold, &decoy_pool)
            }
            2 => {
                // doubling
                let start = rng.gen_range(1..=5i64);
                let seq: Vec<i64> = (0..5).map(|i| start << i).collect();
                let gold = start << 5;
                let decoy_pool = [gold + 1, gold - 1, gold / 2 + 1, gold + start, gold - start];
                self::number_item(rng, template, &seq, gold, &decoy_pool)
            }
            3 => {
                // perfect squares
                let n0 = rng.gen_range(1..=8i64);
                let seq: Vec<i64> = (0..5).map(|i| (n0 + i) * (n0 + i)).collect();
                let k = n0 + 5;
                let gold = k * k;
                let decoy_pool = [gold + 1, gold - 1, gold + k, gold - k, gold + 2];
                self::number_item(rng, template, &seq, gold, &decoy_pool)
            }
            4 => {
                // letters with a constant alphabet step; keep two letters of
                // headroom so three distinct decoys always exist
                let step = rng.gen_range(1..=2u8);
                let start = rng.gen_range(0..(26 - 5 * step - 2));
                let seq: Vec<u8> = (0..5).map(|i| start + step * i).collect();
                let gold = start + step * 5;
                let letters: Vec<String> = seq.iter().map(|&i| letter(i)).collect();
                let mut decoys = Vec::new();
                for cand in [
                    gold.wrapping_sub(1),
                    gold + 1,
                    gold.wrapping_sub(step),
                    gold + step,
                    gold + 2,
                ] {
                    if cand < 26 && cand != gold && !decoys.contains(&letter(cand)) {
                        decoys.push(letter(cand));
                    }
                    if decoys.len() == 3 {
                        break;
                    }
                }
                let context = format!("{template} {}", letters.join(" , "));
                let (options, ai) = place_gold(rng, letter(gold), decoys);
                DiagnosticItem::new(context, Q_LETTER, options, ai)
            }
            _ => {
                // cyclic weekdays or months
                let (bank, len): (&[&str], usize) = if rng.gen_bool(0.5) {
                    (&WEEKDAYS, 7)
                } else {
                    (&MONTHS, 12)
                };
                let step = rng.gen_range(1..=3usize);
                let start = rng.gen_range(0..len);
                let seq: Vec<usize> = (0..5).map(|i| (start + step * i) % len).collect();
                let gold_idx = (start + step * 5) % len;
                let gold = bank[gold_idx].to_string();
                let mut decoys = Vec::new();
                let mut probe = 1usize;
                while decoys.len() < 3 {
                    let cand = bank[(gold_idx + probe) % len].to_string();
                    if cand != gold && !decoys.contains(&cand) {
                        decoys.push(cand);
                    }
                    probe += 1;
                }
                let words: Vec<&str> = seq.iter().map(|&i| bank[i]).collect();
                let context = format!("{template} {}", words.join(" , "));
                let (options, ai) = place_gold(rng, gold, decoys);
                DiagnosticItem::new(context, Q_GENERIC, options, ai)
            }
        }
    }

    fn solve(&self, item: &DiagnosticItem) -> Result<usize, FailReason> {
        if item.question != Q_NUMBER && item.question != Q_LETTER && item.question != Q_GENERIC {
            return Err(FailReason::UnparseableQuestion);
        }
        let elements = parse_elements(&item.context)?;
        if elements.len() != 5 {
            return Err(FailReason::UnparseableContext);
        }
        let mut nexts: Vec<Element> = Vec::new();

        if let Some(nums) = all_numbers(&elements) {
            // constant difference
            let d = nums[1] - nums[0];
            if nums.windows(2).all(|w| w[1] - w[0] == d) {
                push_unique(&mut nexts, Element::Number(nums[4] + d));
            }
            // constant integer ratio
            if nums.iter().all(|&n| n != 0) && nums[1] % nums[0] == 0 {
                let r = nums[1] / nums[0];
                if r > 1 && nums.windows(2).all(|w| w[0] * r == w[1]) {
                    push_unique(&mut nexts, Element::Number(nums[4] * r));
                }
            }
            // consecutive perfect squares
            let roots: Vec<i64> = nums.iter().map(|&n| (n as f64).sqrt().round() as i64).collect();
            if nums.iter().zip(&roots).all(|(&n, &r)| r * r == n)
                && roots.windows(2).all(|w| w[1] - w[0] == 1)
            {
                let k = roots[4] + 1;
                push_unique(&mut nexts, Element::Number(k * k));
            }
        } else if let Some(letters) = all_letters(&elements) {
            let d = letters[1] as i16 - letters[0] as i16;
            if letters.windows(2).all(|w| w[1] as i16 - w[0] as i16 == d) {
                let next = letters[4] as i16 + d;
                if (0..26).contains(&next) {
                    push_unique(&mut nexts, Element::Letter(next as u8));
                }
            }
        } else if let Some((idx, len)) = all_cyclic(&elements) {
            let d = (idx[1] + len - idx[0]) % len;
            if idx.windows(2).all(|w| (w[1] + len - w[0]) % len == d) {
                let next = (idx[4] + d) % len;
                push_unique(
                    &mut nexts,
                    if len == 7 { Element::Weekday(next) } else { Element::Month(next) },
                );
            }
        }

        let next = match nexts.as_slice() {
            [one] => *one,
            [] => return Err(FailReason::NoSolution),
            _ => return Err(FailReason::AmbiguousDistractor),
        };
        let gold = element_text(next);
        let hits: Vec<usize> = item
            .options
            .iter()
            .enumerate()
            .filter(|(_, o)| **o == gold)
            .map(|(i, _)| i)
            .collect();
        match hits.as_slice() {
            [one] => Ok(*one),
            [] => Err(FailReason::NoSolution),
            _ => Err(FailReason::AmbiguousDistractor),
        }
    }

    fn vocabulary(&self) -> Vec<String> {
        let mut v = words_of(TEMPLATES);
        v.extend(words_of(&[Q_NUMBER, Q_LETTER, Q_GENERIC, ","]));
        v.extend(WEEKDAYS.iter().map(|s| s.to_string()));
        v.extend(MONTHS.iter().map(|s| s.to_string()));
        v.extend((b'a'..=b'z').map(|c| (c as char).to_string()));
        v.extend((0..=MAX_NUMBER).map(|n| n.to_string()));
        v
    }
}

fn number_item(
    rng: &mut ChaCha8Rng,
    template: &str,
    seq: &[i64],
    gold: i64,
    decoy_pool: &[i64],
) -> DiagnosticItem {
    let mut decoys: Vec<String> = Vec::new();
    for &cand in decoy_pool {
        if cand >= 0 && cand <= MAX_NUMBER && cand != gold {
            let s = cand.to_string();
            if !decoys.contains(&s) {
                decoys.push(s);
            }
        }
        if decoys.len() == 3 {
            break;
        }
    }
    let texts: Vec<String> = seq.iter().map(|n| n.to_string()).collect();
    let context = format!("{template} {}", texts.join(" , "));
    let (options, ai) = place_gold(rng, gold.to_string(), decoys);
    DiagnosticItem::new(context, Q_NUMBER, options, ai)
}

fn letter(i: u8) -> String {
    ((b'a' + i) as char).to_string()
}

fn parse_elements(context: &str) -> Result<Vec<Element>, FailReason> {
    let rest = TEMPLATES
        .iter()
        .find_map(|t| context.strip_prefix(t))
        .ok_or(FailReason::UnparseableContext)?;
    rest.split(" , ")
        .map(|raw| {
            let w = raw.trim();
            if let Ok(n) = w.parse::<i64>() {
                return Ok(Element::Number(n));
            }
            if w.len() == 1 {
                let c = w.as_bytes()[0];
                if c.is_ascii_lowercase() {
                    return Ok(Element::Letter(c - b'a'));
                }
            }
            if let Some(i) = WEEKDAYS.iter().position(|d| *d == w) {
                return Ok(Element::Weekday(i));
            }
            if let Some(i) = MONTHS.iter().position(|m| *m == w) {
                return Ok(Element::Month(i));
            }
            Err(FailReason::UnparseableContext)
        })
        .collect()
}

fn all_numbers(e: &[Element]) -> Option<Vec<i64>> {
    e.iter()
        .map(|el| match el {
            Element::Number(n) => Some(*n),
            _ => None,
        })
        .collect()
}

fn all_letters(e: &[Element]) -> Option<Vec<u8>> {
    e.iter()
        .map(|el| match el {
            Element::Letter(l) => Some(*l),
            _ => None,
        })
        .collect()
}

fn all_cyclic(e: &[Element]) -> Option<(Vec<usize>, usize)> {
    let weekdays: Option<Vec<usize>> = e
        .iter()
        .map(|el| match el {
            Element::Weekday(i) => Some(*i),
            _ => None,
        })
        .collect();
    if let Some(idx) = weekdays {
        return Some((idx, 7));
    }
    let months: Option<Vec<usize>> = e
        .iter()
        .map(|el| match el {
            Element::Month(i) => Some(*i),
            _ => None,
        })
        .collect();
    months.map(|idx| (idx, 12))
}

fn push_unique(v: &mut Vec<Element>, e: Element) {
    if !v.contains(&e) {
        v.push(e);
    }
}

fn element_text(e: Element) -> String {
    match e {
        Element::Number(n) => n.to_string(),
        Element::Letter(l) => letter(l),
        Element::Weekday(i) => WEEKDAYS[i].to_string(),
        Element::Month(i) => MONTHS[i].to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_items_solve_to_their_answer_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..400 {
            let item = InductionEngine.generate(&mut rng);
            assert_eq!(
                InductionEngine.solve(&item).unwrap(),
                item.answer_index,
                "item: {item:?}"
            );
        }
    }

    #[test]
    fn letter_skip_sequence_solves() {
        let item = DiagnosticItem::new(
            "consider the sequence a , c , e , g , i",
            Q_LETTER,
            vec!["k".into(), "j".into(), "l".into(), "m".into()],
            0,
        );
        assert_eq!(InductionEngine.solve(&item).unwrap(), 0);
    }

    #[test]
    fn sequence_without_a_rule_is_rejected() {
        let item = DiagnosticItem::new(
            "consider the sequence 1 , 7 , 2 , 9 , 4",
            Q_NUMBER,
            vec!["5".into(), "6".into(), "8".into(), "3".into()],
            0,
        );
        assert!(matches!(
            InductionEngine.solve(&item),
            Err(FailReason::NoSolution)
        ));
    }
}
