//! Contextual recall: invented fact-placement passages with extractive
//! queries. World knowledge is useless by construction; the solver parses
//! the passage into facts and answers from them alone.
//!
//! Two families: single-fact retrieval over a three-fact passage, and
//! multi-hop retrieval where the queried detail joins a location fact with
//! an ownership fact stated further apart.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::verify::FailReason;
use crate::diagnostics::{AbilityId, DiagnosticItem};

use super::{pick, pick_distinct, place_gold, words_of, Engine};

pub(crate) struct ContextRecallEngine;

const COLORS: &[&str] = &[
    "red", "blue", "green", "yellow", "black", "white", "purple", "orange", "silver", "brown",
];
const OBJECTS: &[&str] = &[
    "box", "bag", "cup", "key", "book", "lamp", "coin", "hat", "ball", "jar", "scarf", "clock",
];
const ROOMS: &[&str] = &[
    "kitchen", "garden", "attic", "cellar", "garage", "office", "porch", "shed", "hall", "studio",
    "balcony", "pantry",
];
const NAMES: &[&str] = &[
    "Alice", "Bruno", "Clara", "Dieter", "Elsa", "Felix", "Greta", "Hugo", "Ines", "Jonas",
    "Karla", "Lukas", "Marta", "Nils", "Oda", "Pavel",
];

#[derive(Clone, Debug, PartialEq)]
struct LocFact {
    color: String,
    object: String,
    room: String,
}

#[derive(Clone, Debug, PartialEq)]
struct OwnFact {
    name: String,
    color: String,
    object: String,
}

impl Engine for ContextRecallEngine {
    fn ability(&self) -> AbilityId {
        AbilityId::Cxt
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        let colors = pick_distinct(rng, COLORS, 3);
        let objects = pick_distinct(rng, OBJECTS, 3);
        let rooms = pick_distinct(rng, ROOMS, 3);
        let facts: Vec<LocFact> = (0..3)
            .map(|i| LocFact {
                color: colors[i].to_string(),
                object: objects[i].to_string(),
                room: rooms[i].to_string(),
            })
            .collect();

        if rng.gen_bool(0.5) {
            // Single fact: ask about one of the three statements.
            let context = facts
                .iter()
                .map(|f| format!("the {} {} is in the {} .", f.color, f.object, f.room))
                .collect::<Vec<_>>()
                .join(" ");
            let target = &facts[rng.gen_range(0..3)];
            match rng.gen_range(0..3) {
                0 => {
                    let question = format!(
                        "according to the passage , where is the {} {} ?",
                        target.color, target.object
                    );
                    let mut distractors: Vec<String> = facts
                        .iter()
                        .filter(|f| f.room != target.room)
                        .map(|f| f.room.clone())
                        .collect();
                    let extra = ROOMS
                        .iter()
                        .find(|r| !rooms.contains(r))
                        .expect("room pool larger than 3");
                    distractors.push(extra.to_string());
                    let (options, ai) = place_gold(rng, target.room.clone(), distractors);
                    DiagnosticItem::new(context, question, options, ai)
                }
                1 => {
                    let question = format!(
                        "according to the passage , which object is in the {} ?",
                        target.room
                    );
                    let mut distractors: Vec<String> = facts
                        .iter()
                        .filter(|f| f.object != target.object)
                        .map(|f| f.object.clone())
                        .collect();
                    let extra = OBJECTS
                        .iter()
                        .find(|o| !objects.contains(o))
                        .expect("object pool larger than 3");
                    distractors.push(extra.to_string());
                    let (options, ai) = place_gold(rng, target.object.clone(), distractors);
                    DiagnosticItem::new(context, question, options, ai)
                }
                _ => {
                    let question = format!(
                        "according to the passage , what color is the {} ?",
                        target.object
                    );
                    let mut distractors: Vec<String> = facts
                        .iter()
                        .filter(|f| f.color != target.color)
                        .map(|f| f.color.clone())
                        .collect();
                    let extra = COLORS
                        .iter()
                        .find(|c| !colors.contains(c))
                        .expect("color pool larger than 3");
                    distractors.push(extra.to_string());
                    let (options, ai) = place_gold(rng, target.color.clone(), distractors);
                    DiagnosticItem::new(context, question, options, ai)
                }
            }
        } else {
            // Multi-hop: owners stated far from the location facts.
            let owners = pick_distinct(rng, NAMES, 2);
            let own = [
                OwnFact { name: owners[0].to_string(), color: facts[0].color.clone(), object: facts[0].object.clone() },
                OwnFact { name: owners[1].to_string(), color: facts[1].color.clone(), object: facts[1].object.clone() },
            ];
            let context = format!(
                "the {} {} is in the {} . the {} {} is in the {} . the {} {} is in the {} . {} owns the {} {} . {} owns the {} {} .",
                facts[0].color, facts[0].object, facts[0].room,
                facts[1].color, facts[1].object, facts[1].room,
                facts[2].color, facts[2].object, facts[2].room,
                own[0].name, own[0].color, own[0].object,
                own[1].name, own[1].color, own[1].object,
            );
            let hop = rng.gen_range(0..2);
            if rng.gen_bool(0.5) {
                let question = format!(
                    "according to the passage , in which room is {} 's {} ?",
                    own[hop].name, own[hop].object
                );
                let gold = facts[hop].room.clone();
                let mut distractors: Vec<String> = facts
                    .iter()
                    .filter(|f| f.room != gold)
                    .map(|f| f.room.clone())
                    .collect();
                let extra = ROOMS.iter().find(|r| !rooms.contains(r)).unwrap();
                distractors.push(extra.to_string());
                let (options, ai) = place_gold(rng, gold, distractors);
                DiagnosticItem::new(context, question, options, ai)
            } else {
                let question = format!(
                    "according to the passage , who owns the object in the {} ?",
                    facts[hop].room
                );
                let gold = own[hop].name.clone();
                let other = own[1 - hop].name.clone();
                let strangers = pick_distinct(
                    rng,
                    &NAMES
                        .iter()
                        .filter(|n| **n != gold && **n != other)
                        .collect::<Vec<_>>(),
                    2,
                );
                let distractors = vec![
                    other,
                    strangers[0].to_string(),
                    strangers[1].to_string(),
                ];
                let (options, ai) = place_gold(rng, gold, distractors);
                DiagnosticItem::new(context, question, options, ai)
            }
        }
    }

    fn solve(&self, item: &DiagnosticItem) -> Result<usize, FailReason> {
        let mut locs: Vec<LocFact> = Vec::new();
        let mut owns: Vec<OwnFact> = Vec::new();
        for sentence in item.context.split(" . ") {
            let s = sentence.trim_end_matches(" .").trim();
            if s.is_empty() {
                continue;
            }
            let toks: Vec<&str> = s.split_whitespace().collect();
            match toks.as_slice() {
                ["the", color, object, "is", "in", "the", room] => locs.push(LocFact {
                    color: color.to_string(),
                    object: object.to_string(),
                    room: room.to_string(),
                }),
                [name, "owns", "the", color, object] => owns.push(OwnFact {
                    name: name.to_string(),
                    color: color.to_string(),
                    object: object.to_string(),
                }),
                _ => return Err(FailReason::UnparseableContext),
            }
        }
        if locs.is_empty() {
            return Err(FailReason::UnparseableContext);
        }

        let q: Vec<&str> = item.question.split_whitespace().collect();
        let gold: String = match q.as_slice() {
            ["according", "to", "the", "passage", ",", "where", "is", "the", color, object, "?"] => {
                unique(locs.iter().filter(|f| f.color == *color && f.object == *object))?
                    .room
                    .clone()
            }
            ["according", "to", "the", "passage", ",", "which", "object", "is", "in", "the", room, "?"] => {
                unique(locs.iter().filter(|f| f.room == *room))?.object.clone()
            }
            ["according", "to", "the", "passage", ",", "what", "color", "is", "the", object, "?"] => {
                unique(locs.iter().filter(|f| f.object == *object))?.color.clone()
            }
            ["according", "to", "the", "passage", ",", "in", "which", "room", "is", name, "'s", object, "?"] => {
                let own =
                    unique(owns.iter().filter(|o| o.name == *name && o.object == *object))?;
                unique(locs.iter().filter(|f| f.color == own.color && f.object == own.object))?
                    .room
                    .clone()
            }
            ["according", "to", "the", "passage", ",", "who", "owns", "the", "object", "in", "the", room, "?"] => {
                let loc = unique(locs.iter().filter(|f| f.room == *room))?;
                unique(owns.iter().filter(|o| o.color == loc.color && o.object == loc.object))?
                    .name
                    .clone()
            }
            _ => return Err(FailReason::UnparseableQuestion),
        };

        // Exactly one option may satisfy the query.
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
        let mut v = words_of(&[
            "the is in . owns according to passage , where which object what color who 's ? room",
        ]);
        v.extend(COLORS.iter().map(|s| s.to_string()));
        v.extend(OBJECTS.iter().map(|s| s.to_string()));
        v.extend(ROOMS.iter().map(|s| s.to_string()));
        v.extend(NAMES.iter().map(|s| s.to_string()));
        v
    }
}

fn unique<'a, T>(mut iter: impl Iterator<Item = &'a T>) -> Result<&'a T, FailReason> {
    let first = iter.next().ok_or(FailReason::NoSolution)?;
    if iter.next().is_some() {
        return Err(FailReason::AmbiguousDistractor);
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_items_solve_and_are_extractive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let item = ContextRecallEngine.generate(&mut rng);
            assert_eq!(
                ContextRecallEngine.solve(&item).unwrap(),
                item.answer_index,
                "item: {item:?}"
            );
        }
    }

    #[test]
    fn ambiguous_passage_is_rejected() {
        // Two objects in the same room; asking which object is there is
        // ambiguous.
        let item = DiagnosticItem::new(
            "the red box is in the kitchen . the blue cup is in the kitchen .",
            "according to the passage , which object is in the kitchen ?",
            vec!["box".into(), "cup".into(), "key".into(), "hat".into()],
            0,
        );
        assert!(matches!(
            ContextRecallEngine.solve(&item),
            Err(FailReason::AmbiguousDistractor)
        ));
    }
}
