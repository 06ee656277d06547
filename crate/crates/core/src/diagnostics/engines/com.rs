//! Everyday cause/effect vignettes from a curated schema bank. The bank is
//! the oracle: each schema fixes the plausible outcome and its distractor
//! pool, and the solver recognizes the schema by its signature phrase.

use rand_chacha::ChaCha8Rng;

use crate::diagnostics::verify::FailReason;
use crate::diagnostics::{AbilityId, DiagnosticItem};

use super::{index_of_gold, pick, pick_distinct, place_gold, words_of, Engine};

pub(crate) struct CommonsenseEngine;

struct Schema {
    /// Event phrase; also the solver's lookup signature.
    event: &'static str,
    question: &'static str,
    gold: &'static str,
    distractors: &'static [&'static str],
}

const SCHEMAS: &[Schema] = &[
    Schema {
        event: "left the ice cream in the sun",
        question: "what likely happened to the ice cream ?",
        gold: "it melted",
        distractors: &["it froze", "it caught fire", "it grew larger", "it turned blue"],
    },
    Schema {
        event: "dropped a glass bowl on the tile floor",
        question: "what likely happened to the bowl ?",
        gold: "it shattered",
        distractors: &["it bounced away unharmed", "it melted", "it doubled in size", "it started to glow"],
    },
    Schema {
        event: "forgot to water the plant for two weeks",
        question: "what likely happened to the plant ?",
        gold: "it wilted",
        distractors: &["it bloomed brightly", "it walked away", "it grew twice as fast", "it turned to glass"],
    },
    Schema {
        event: "walked home in the heavy rain without an umbrella",
        question: "what likely happened on the way ?",
        gold: "they got soaked",
        distractors: &["they stayed completely dry", "they turned invisible", "they grew taller", "their shoes caught fire"],
    },
    Schema {
        event: "left the phone unplugged all night with the screen on",
        question: "what likely happened to the phone ?",
        gold: "the battery ran out",
        distractors: &["the battery filled up", "the phone got heavier", "the screen grew wider", "the phone turned to stone"],
    },
    Schema {
        event: "left the bread in the toaster far too long",
        question: "what likely happened to the bread ?",
        gold: "it burned",
        distractors: &["it stayed pale", "it became ice", "it jumped out and left", "it turned into dough"],
    },
    Schema {
        event: "put an ice cube into a mug of hot tea",
        question: "what likely happened to the ice cube ?",
        gold: "it melted quickly",
        distractors: &["it grew larger", "it stayed frozen for hours", "it turned green", "it started to hum"],
    },
    Schema {
        event: "left the front door open during the snowstorm",
        question: "what likely happened to the living room ?",
        gold: "it got very cold",
        distractors: &["it got warmer", "it filled with sand", "it shrank", "it filled with warm sunshine"],
    },
    Schema {
        event: "forgot to set the alarm clock",
        question: "what likely happened the next morning ?",
        gold: "they woke up late",
        distractors: &["they woke up extra early", "they did not sleep at all", "they turned into a clock", "the sun forgot to rise"],
    },
    Schema {
        event: "left the milk on the counter for three days",
        question: "what likely happened to the milk ?",
        gold: "it went sour",
        distractors: &["it got fresher", "it evaporated completely", "it turned purple", "it froze solid"],
    },
    Schema {
        event: "lit a candle next to the open window in the wind",
        question: "what likely happened to the flame ?",
        gold: "it blew out",
        distractors: &["it grew into a bonfire", "it turned blue and froze", "it hummed a tune", "it doubled politely"],
    },
    Schema {
        event: "leaned on the wall with wet paint",
        question: "what likely happened to the shirt ?",
        gold: "paint smeared on it",
        distractors: &["the paint vanished", "the shirt ironed itself", "the wall fell over", "the shirt changed owners"],
    },
    Schema {
        event: "placed a heavy box on the ripe tomatoes",
        question: "what likely happened to the tomatoes ?",
        gold: "they got squashed",
        distractors: &["they rolled uphill", "they ripened into apples", "they stayed perfectly round", "they hid under the table"],
    },
    Schema {
        event: "left the fridge door open overnight",
        question: "what likely happened to the food inside ?",
        gold: "it got warm",
        distractors: &["it got much colder", "it cooked itself", "it disappeared", "it rearranged the shelves"],
    },
    Schema {
        event: "forgot to close the garden gate",
        question: "what likely happened next ?",
        gold: "the dog ran out of the yard",
        distractors: &["the dog locked the gate", "the gate grew flowers", "the yard moved away", "the fence painted itself"],
    },
    Schema {
        event: "studied every evening for the big test",
        question: "what likely happened at the test ?",
        gold: "they did well",
        distractors: &["they forgot their own name", "they failed every question", "they slept through a week", "the test answered itself"],
    },
    Schema {
        event: "ate five bowls of candy before dinner",
        question: "what likely happened afterwards ?",
        gold: "their stomach started to ache",
        distractors: &["their stomach felt perfectly fine", "they shrank a little", "the candy asked for more", "dinner became candy too"],
    },
    Schema {
        event: "kicked the ball straight at the window",
        question: "what likely happened to the window ?",
        gold: "it cracked",
        distractors: &["it opened politely", "it became stronger", "it melted", "it caught the ball and waved"],
    },
    Schema {
        event: "found the cookie jar empty and crumbs on the dog 's nose",
        question: "what most likely caused the empty jar ?",
        gold: "the dog ate the cookies",
        distractors: &["the cookies melted away", "the jar washed itself", "a cloud took them", "the crumbs grew into cookies"],
    },
    Schema {
        event: "saw wet footprints leading from the pool to the house",
        question: "what most likely caused the footprints ?",
        gold: "someone walked in after swimming",
        distractors: &["the floor was freshly painted", "the sun drew them", "the pool moved houses", "the footprints were always there"],
    },
];

const NAMES: &[&str] = &[
    "Tom", "Nina", "Leo", "Maya", "Sam", "Ella", "Ben", "Zoe", "Finn", "Lily", "Jack", "Ada",
    "Noah", "Ivy", "Theo", "Mia",
];

const INTROS: &[&str] = &["yesterday ,", "last week ,", "one warm morning ,", "after school ,"];

const FILLERS: &[&str] = &[
    "the sky was clear",
    "it was a quiet afternoon",
    "nobody else was home",
    "the radio was playing softly",
];

impl Engine for CommonsenseEngine {
    fn ability(&self) -> AbilityId {
        AbilityId::Com
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        let schema = pick(rng, SCHEMAS);
        let name = pick(rng, NAMES);
        let intro = pick(rng, INTROS);
        let filler = pick(rng, FILLERS);
        let context = format!("{intro} {name} {} . {filler} .", schema.event);
        let distractors: Vec<String> = pick_distinct(rng, schema.distractors, 3)
            .into_iter()
            .map(|s| s.to_string())
            .collect();
        let (options, answer_index) = place_gold(rng, schema.gold.to_string(), distractors);
        DiagnosticItem::new(context, schema.question, options, answer_index)
    }

    fn solve(&self, item: &DiagnosticItem) -> Result<usize, FailReason> {
        let matched: Vec<&Schema> = SCHEMAS
            .iter()
            .filter(|s| item.context.contains(s.event))
            .collect();
        let schema = match matched.as_slice() {
            [one] => *one,
            [] => return Err(FailReason::UnparseableContext),
            _ => return Err(FailReason::AmbiguousDistractor),
        };
        if item.question != schema.question {
            return Err(FailReason::UnparseableQuestion);
        }
        // All non-gold options must come from the schema's own decoy pool,
        // otherwise we cannot certify that only one outcome is plausible.
        for o in &item.options {
            if o != schema.gold && !schema.distractors.contains(&o.as_str()) {
                return Err(FailReason::AmbiguousDistractor);
            }
        }
        index_of_gold(&item.options, schema.gold)
    }

    fn vocabulary(&self) -> Vec<String> {
        let mut v = Vec::new();
        for s in SCHEMAS {
            v.extend(words_of(&[s.event, s.question, s.gold]));
            v.extend(words_of(s.distractors));
        }
        v.extend(NAMES.iter().map(|s| s.to_string()));
        v.extend(words_of(INTROS));
        v.extend(words_of(FILLERS));
        v.push(".".into());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_items_solve_to_their_answer_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let item = CommonsenseEngine.generate(&mut rng);
            assert_eq!(CommonsenseEngine.solve(&item).unwrap(), item.answer_index);
            assert_eq!(item.options.len(), 4);
        }
    }

    #[test]
    fn foreign_option_is_flagged_ambiguous() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut item = CommonsenseEngine.generate(&mut rng);
        let foreign = "it sailed away".to_string();
        for o in item.options.iter_mut() {
            if *o != item.answer {
                *o = foreign.clone();
                break;
            }
        }
        assert!(matches!(
            CommonsenseEngine.solve(&item),
            Err(FailReason::AmbiguousDistractor)
        ));
    }
}
