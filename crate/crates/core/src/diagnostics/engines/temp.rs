//! Temporal items: clock arithmetic and order words over small event
//! stories. The solver converts times to minutes, applies interval logic
//! (including genuinely undetermined cases) and recomputes the answer.
//!
//! Schemas whose option texts recur across items (names plus "same time" /
//! "not enough info") keep the gold answer uniform over the four option
//! roles, so no fixed option text carries a usable base rate.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::verify::FailReason;
use crate::diagnostics::{AbilityId, DiagnosticItem};

use super::{index_of_gold, pick, pick_distinct, place_gold, words_of, Engine};

pub(crate) struct TemporalEngine;

const MALES: &[&str] = &["John", "Liam", "Ethan", "Mason", "Lucas", "James"];
const FEMALES: &[&str] = &["Mary", "Sarah", "Chloe", "Hannah", "Aria", "Nora"];

const SAME_TIME: &str = "at the same time";
const NOT_ENOUGH: &str = "not enough information";

const ACTIVITIES: &[&str] = &[
    "watered the plants",
    "read a book",
    "washed the car",
    "wrote a letter",
    "walked the dog",
    "baked some bread",
    "swept the porch",
    "fixed the fence",
    "packed a bag",
    "painted the door",
    "sorted the mail",
    "ironed a shirt",
];

const VEHICLES: &[&str] = &["bus", "train", "ferry", "tram", "coach", "shuttle"];

fn clock(minutes: i64) -> String {
    let m = minutes.rem_euclid(24 * 60);
    let (h24, mm) = (m / 60, m % 60);
    let ampm = if h24 < 12 { "am" } else { "pm" };
    let h12 = match h24 % 12 {
        0 => 12,
        h => h,
    };
    format!("{h12}:{mm:02} {ampm}")
}

fn parse_clock(h_mm: &str, ampm: &str) -> Option<i64> {
    let (h, m) = h_mm.split_once(':')?;
    let h: i64 = h.parse().ok()?;
    let m: i64 = m.parse().ok()?;
    if !(1..=12).contains(&h) || !(0..60).contains(&m) {
        return None;
    }
    let h24 = match (ampm, h) {
        ("am", 12) => 0,
        ("am", h) => h,
        ("pm", 12) => 12,
        ("pm", h) => h + 12,
        _ => return None,
    };
    Some(h24 * 60 + m)
}

/// Durations with distinct token spellings; minutes are the value.
const DURATIONS: &[(&str, i64)] = &[
    ("1 hour", 60),
    ("2 hours", 120),
    ("3 hours", 180),
    ("30 minutes", 30),
    ("45 minutes", 45),
    ("90 minutes", 90),
];

fn parse_duration(toks: &[&str]) -> Option<i64> {
    if toks.len() != 2 {
        return None;
    }
    let n: i64 = toks[0].parse().ok()?;
    match toks[1] {
        "hour" | "hours" => Some(n * 60),
        "minute" | "minutes" => Some(n),
        _ => None,
    }
}

fn start_minutes(rng: &mut ChaCha8Rng) -> i64 {
    // business-day starts on the quarter hour
    let h = rng.gen_range(7..=17i64);
    let q = rng.gen_range(0..4i64) * 15;
    h * 60 + q
}

impl Engine for TemporalEngine {
    fn ability(&self) -> AbilityId {
        AbilityId::Temp
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        match rng.gen_range(0..4u8) {
            0 => self.meetings_item(rng),
            1 => self.clock_item(rng),
            2 => self.order_item(rng),
            _ => self.departure_item(rng),
        }
    }

    fn solve(&self, item: &DiagnosticItem) -> Result<usize, FailReason> {
        if item.question == "whose meeting ended later ?" {
            return solve_meetings(item);
        }
        if item.question == "at what time did the lesson end ?" {
            return solve_clock(item);
        }
        if item.question.starts_with("what did") {
            return solve_order(item);
        }
        if item.question == "which left first ?" {
            return solve_departure(item);
        }
        Err(FailReason::UnparseableQuestion)
    }

    fn vocabulary(&self) -> Vec<String> {
        let mut v = words_of(&[
            "'s meeting started at and lasted . whose ended later ? lesson what time did the do first last left which then that morning before noon after lunch evening , practiced for who longer",
        ]);
        v.extend(MALES.iter().chain(FEMALES).map(|s| s.to_string()));
        v.extend(words_of(&[SAME_TIME, NOT_ENOUGH]));
        v.extend(words_of(ACTIVITIES));
        v.extend(VEHICLES.iter().map(|s| s.to_string()));
        v.extend(["am", "pm", "hour", "hours", "minutes"].map(String::from));
        for h in 1..=12 {
            for q in 0..4 {
                v.push(format!("{h}:{:02}", q * 15));
            }
        }
        v
    }
}

impl TemporalEngine {
    fn meetings_item(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        let n1 = pick(rng, MALES).to_string();
        let n2 = pick(rng, FEMALES).to_string();
        // gold uniform over the four roles
        let case = rng.gen_range(0..4u8);
        let t1 = start_minutes(rng);
        let &(d1_text, d1) = pick(rng, DURATIONS);
        let (sentence2, gold): (String, String) = match case {
            0 | 1 => {
                // one of the two ends later
                let &(d2_text, d2) = pick(rng, DURATIONS);
                let mut t2 = start_minutes(rng);
                let mut tries = 0;
                while t1 + d1 == t2 + d2 && tries < 32 {
                    t2 = start_minutes(rng);
                    tries += 1;
                }
                if t1 + d1 == t2 + d2 {
                    t2 += 15;
                }
                let gold = if t1 + d1 > t2 + d2 { n1.clone() } else { n2.clone() };
                (
                    format!("{n2} 's meeting started at {} and lasted {d2_text} .", clock(t2)),
                    gold,
                )
            }
            2 => {
                // both end at the same minute
                let &(d2_text, d2) = pick(rng, DURATIONS);
                let t2 = t1 + d1 - d2;
                (
                    format!("{n2} 's meeting started at {} and lasted {d2_text} .", clock(t2)),
                    SAME_TIME.to_string(),
                )
            }
            _ => {
                // duration of the second meeting unstated and its start
                // is before the first meeting's end: undetermined
                let t2 = t1 + d1 - 15 * rng.gen_range(1..=4i64);
                (
                    format!("{n2} 's meeting started at {} .", clock(t2)),
                    NOT_ENOUGH.to_string(),
                )
            }
        };
        let context = format!(
            "{n1} 's meeting started at {} and lasted {d1_text} . {sentence2}",
            clock(t1)
        );
        let gold_clone = gold.clone();
        let distractors: Vec<String> = [n1, n2, SAME_TIME.to_string(), NOT_ENOUGH.to_string()]
            .into_iter()
            .filter(|o| *o != gold_clone)
            .collect();
        let (options, answer_index) = place_gold(rng, gold, distractors);
        DiagnosticItem::new(context, "whose meeting ended later ?", options, answer_index)
    }

    fn clock_item(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        let n = pick(rng, MALES.iter().chain(FEMALES).copied().collect::<Vec<_>>().as_slice())
            .to_string();
        let t = start_minutes(rng);
        let &(d_text, d) = pick(rng, DURATIONS);
        let end = t + d;
        let gold = clock(end);
        let mut decoys = Vec::new();
        for off in [-60, 60, -30, 30, -15, 15, 120] {
            let cand = clock(end + off);
            if cand != gold && !decoys.contains(&cand) {
                decoys.push(cand);
            }
            if decoys.len() == 3 {
                break;
            }
        }
        let context = format!("{n} 's lesson started at {} and lasted {d_text} .", clock(t));
        let (options, answer_index) = place_gold(rng, gold, decoys);
        DiagnosticItem::new(context, "at what time did the lesson end ?", options, answer_index)
    }

    fn order_item(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        let male = rng.gen_bool(0.5);
        let n = pick(rng, if male { MALES } else { FEMALES }).to_string();
        let pronoun = if male { "he" } else { "she" };
        let acts = pick_distinct(rng, ACTIVITIES, 4);
        let context = format!(
            "before noon , {n} {} . after lunch , {pronoun} {} . later that evening , {pronoun} {} .",
            acts[0], acts[1], acts[2]
        );
        let first = rng.gen_bool(0.5);
        let question = format!("what did {n} do {} ?", if first { "first" } else { "last" });
        let gold = if first { acts[0] } else { acts[2] };
        let distractors: Vec<String> = acts
            .iter()
            .filter(|a| **a != gold)
            .map(|a| a.to_string())
            .collect();
        let (options, answer_index) = place_gold(rng, gold.to_string(), distractors);
        DiagnosticItem::new(context, question, options, answer_index)
    }

    fn departure_item(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        let vs = pick_distinct(rng, VEHICLES, 2);
        let (v1, v2) = (vs[0], vs[1]);
        let case = rng.gen_range(0..4u8);
        let t1 = start_minutes(rng);
        let (s1, s2, gold): (String, String, String) = match case {
            0 | 1 => {
                let mut t2 = start_minutes(rng);
                if t1 == t2 {
                    t2 += 15;
                }
                let gold = if t1 < t2 {
                    format!("the {v1}")
                } else {
                    format!("the {v2}")
                };
                (
                    format!("the {v1} left at {} .", clock(t1)),
                    format!("the {v2} left at {} .", clock(t2)),
                    gold,
                )
            }
            2 => (
                format!("the {v1} left at {} .", clock(t1)),
                format!("the {v2} left at {} .", clock(t1)),
                SAME_TIME.to_string(),
            ),
            _ => (
                format!("the {v1} left at {} .", clock(t1)),
                format!("the {v2} left in the morning .", ),
                NOT_ENOUGH.to_string(),
            ),
        };
        let context = format!("{s1} {s2}");
        let gold_clone = gold.clone();
        let distractors: Vec<String> = [
            format!("the {v1}"),
            format!("the {v2}"),
            SAME_TIME.to_string(),
            NOT_ENOUGH.to_string(),
        ]
        .into_iter()
        .filter(|o| *o != gold_clone)
        .collect();
        let (options, answer_index) = place_gold(rng, gold, distractors);
        DiagnosticItem::new(context, "which left first ?", options, answer_index)
    }
}

fn solve_meetings(item: &DiagnosticItem) -> Result<usize, FailReason> {
    let mut meetings: Vec<(String, i64, Option<i64>)> = Vec::new();
    for sentence in item.context.split(" . ") {
        let s = sentence.trim_end_matches(" .").trim();
        if s.is_empty() {
            continue;
        }
        let t: Vec<&str> = s.split_whitespace().collect();
        match t.as_slice() {
            [name, "'s", "meeting", "started", "at", hmm, ampm, "and", "lasted", d @ ..] => {
                let start = parse_clock(hmm, ampm).ok_or(FailReason::UnparseableContext)?;
                let dur = parse_duration(d).ok_or(FailReason::UnparseableContext)?;
                meetings.push((name.to_string(), start, Some(dur)));
            }
            [name, "'s", "meeting", "started", "at", hmm, ampm] => {
                let start = parse_clock(hmm, ampm).ok_or(FailReason::UnparseableContext)?;
                meetings.push((name.to_string(), start, None));
            }
            _ => return Err(FailReason::UnparseableContext),
        }
    }
    if meetings.len() != 2 {
        return Err(FailReason::UnparseableContext);
    }
    let gold = match (&meetings[0], &meetings[1]) {
        ((n1, t1, Some(d1)), (n2, t2, Some(d2))) => {
            let (e1, e2) = (t1 + d1, t2 + d2);
            if e1 == e2 {
                SAME_TIME.to_string()
            } else if e1 > e2 {
                n1.clone()
            } else {
                n2.clone()
            }
        }
        // an unstated duration still ends strictly after its start
        ((_, t1, None), (n2, t2, Some(d2))) => {
            if *t1 >= t2 + d2 {
                meetings[0].0.clone()
            } else {
                let _ = n2;
                NOT_ENOUGH.to_string()
            }
        }
        ((n1, t1, Some(d1)), (_, t2, None)) => {
            if *t2 >= t1 + d1 {
                meetings[1].0.clone()
            } else {
                let _ = n1;
                NOT_ENOUGH.to_string()
            }
        }
        _ => NOT_ENOUGH.to_string(),
    };
    index_of_gold(&item.options, &gold)
}

fn solve_clock(item: &DiagnosticItem) -> Result<usize, FailReason> {
    let t: Vec<&str> = item.context.trim_end_matches(" .").split_whitespace().collect();
    match t.as_slice() {
        [_, "'s", "lesson", "started", "at", hmm, ampm, "and", "lasted", d @ ..] => {
            let start = parse_clock(hmm, ampm).ok_or(FailReason::UnparseableContext)?;
            let dur = parse_duration(d).ok_or(FailReason::UnparseableContext)?;
            index_of_gold(&item.options, &clock(start + dur))
        }
        _ => Err(FailReason::UnparseableContext),
    }
}

fn solve_order(item: &DiagnosticItem) -> Result<usize, FailReason> {
    let q: Vec<&str> = item.question.split_whitespace().collect();
    let which = match q.as_slice() {
        ["what", "did", _, "do", w, "?"] => *w,
        _ => return Err(FailReason::UnparseableQuestion),
    };
    // Ordered cue phrases partition the context into one activity each.
    let cues = ["before noon ,", "after lunch ,", "later that evening ,"];
    let mut activities: Vec<String> = Vec::new();
    for sentence in item.context.split(" . ") {
        let s = sentence.trim_end_matches(" .").trim();
        if s.is_empty() {
            continue;
        }
        let cue = cues
            .iter()
            .find_map(|c| s.strip_prefix(c))
            .ok_or(FailReason::UnparseableContext)?;
        // drop the subject word (name or pronoun)
        let rest = cue
            .trim()
            .split_once(' ')
            .map(|(_, r)| r.to_string())
            .ok_or(FailReason::UnparseableContext)?;
        activities.push(rest);
    }
    if activities.len() != 3 {
        return Err(FailReason::UnparseableContext);
    }
    let gold = match which {
        "first" => &activities[0],
        "last" => &activities[2],
        _ => return Err(FailReason::UnparseableQuestion),
    };
    index_of_gold(&item.options, gold)
}

fn solve_departure(item: &DiagnosticItem) -> Result<usize, FailReason> {
    let mut departures: Vec<(String, Option<i64>)> = Vec::new();
    for sentence in item.context.split(" . ") {
        let s = sentence.trim_end_matches(" .").trim();
        if s.is_empty() {
            continue;
        }
        let t: Vec<&str> = s.split_whitespace().collect();
        match t.as_slice() {
            ["the", v, "left", "at", hmm, ampm] => {
                let time = parse_clock(hmm, ampm).ok_or(FailReason::UnparseableContext)?;
                departures.push((v.to_string(), Some(time)));
            }
            ["the", v, "left", "in", "the", "morning"] => {
                departures.push((v.to_string(), None));
            }
            _ => return Err(FailReason::UnparseableContext),
        }
    }
    if departures.len() != 2 {
        return Err(FailReason::UnparseableContext);
    }
    let gold = match (&departures[0].1, &departures[1].1) {
        (Some(a), Some(b)) if a == b => SAME_TIME.to_string(),
        (Some(a), Some(b)) if a < b => format!("the {}", departures[0].0),
        (Some(_), Some(_)) => format!("the {}", departures[1].0),
        _ => NOT_ENOUGH.to_string(),
    };
    index_of_gold(&item.options, &gold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_items_solve_to_their_answer_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..400 {
            let item = TemporalEngine.generate(&mut rng);
            assert_eq!(
                TemporalEngine.solve(&item).unwrap(),
                item.answer_index,
                "item: {item:?}"
            );
        }
    }

    #[test]
    fn interval_arithmetic_decides_whose_meeting_ended_later() {
        let item = DiagnosticItem::new(
            "John 's meeting started at 9:00 am and lasted 2 hours . Mary 's meeting started at 10:30 am and lasted 30 minutes .",
            "whose meeting ended later ?",
            vec!["John".into(), "Mary".into(), SAME_TIME.into(), NOT_ENOUGH.into()],
            0,
        );
        assert_eq!(solve_meetings(&item).unwrap(), 0);
    }

    #[test]
    fn missing_duration_with_late_start_is_still_determined() {
        // second meeting starts after the first one ended
        let item = DiagnosticItem::new(
            "John 's meeting started at 9:00 am and lasted 1 hour . Mary 's meeting started at 11:00 am .",
            "whose meeting ended later ?",
            vec!["John".into(), "Mary".into(), SAME_TIME.into(), NOT_ENOUGH.into()],
            1,
        );
        assert_eq!(solve_meetings(&item).unwrap(), 1);
    }

    #[test]
    fn clock_rollover_crosses_noon() {
        assert_eq!(clock(11 * 60 + 30 + 60), "12:30 pm");
        assert_eq!(parse_clock("12:30", "pm"), Some(12 * 60 + 30));
        assert_eq!(parse_clock("12:15", "am"), Some(15));
    }
}
