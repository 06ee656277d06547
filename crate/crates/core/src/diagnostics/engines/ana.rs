//! Analogy items: `a : b :: c : ?` stems over a fixed relation-pair bank.
//! The solver looks the stem pair up in the bank (either direction),
//! applies the same relation to the third term and demands that exactly one
//! option completes it.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::verify::FailReason;
use crate::diagnostics::{AbilityId, DiagnosticItem};

use super::{index_of_gold, pick, place_gold, words_of, Engine};

pub(crate) struct AnalogyEngine;

const QUESTION: &str = "which option best completes the analogy ?";

struct Relation {
    pairs: &'static [(&'static str, &'static str)],
    lures: &'static [&'static str],
}

const ANTONYM: Relation = Relation {
    pairs: &[
        ("light", "dark"),
        ("hot", "cold"),
        ("truth", "lie"),
        ("fast", "slow"),
        ("big", "small"),
        ("happy", "sad"),
        ("wet", "dry"),
        ("day", "night"),
        ("up", "down"),
        ("soft", "hard"),
        ("open", "closed"),
        ("full", "empty"),
        ("strong", "weak"),
        ("early", "late"),
        ("loud", "quiet"),
        ("clean", "dirty"),
        ("young", "old"),
        ("rich", "poor"),
        ("tall", "short"),
        ("wide", "narrow"),
        ("smooth", "rough"),
        ("sweet", "sour"),
        ("begin", "end"),
        ("win", "lose"),
    ],
    lures: &[
        "fact", "wisdom", "shadow", "warm", "cool", "quick", "large", "tiny", "bright", "gray",
        "damp", "evening", "sideways", "firm", "ajar", "filled", "mighty", "soon", "noisy", "tidy",
    ],
};

const ANIMAL_HOME: Relation = Relation {
    pairs: &[
        ("bird", "nest"),
        ("bee", "hive"),
        ("dog", "kennel"),
        ("horse", "stable"),
        ("pig", "sty"),
        ("lion", "den"),
        ("rabbit", "burrow"),
        ("spider", "web"),
        ("bear", "cave"),
        ("cow", "barn"),
        ("chicken", "coop"),
        ("mouse", "hole"),
        ("wolf", "lair"),
        ("fish", "pond"),
        ("ant", "colony"),
        ("snail", "shell"),
    ],
    lures: &[
        "honey", "sting", "wasp", "bone", "tail", "farm", "forest", "river", "wing", "fur", "paw",
        "feather", "egg", "milk", "grass", "branch",
    ],
};

const WORKER_TOOL: Relation = Relation {
    pairs: &[
        ("carpenter", "hammer"),
        ("painter", "brush"),
        ("farmer", "plow"),
        ("writer", "pen"),
        ("chef", "knife"),
        ("tailor", "needle"),
        ("barber", "scissors"),
        ("fisherman", "net"),
        ("blacksmith", "anvil"),
        ("gardener", "spade"),
        ("hunter", "rifle"),
        ("teacher", "chalk"),
        ("surgeon", "scalpel"),
        ("photographer", "camera"),
        ("sculptor", "chisel"),
        ("plumber", "wrench"),
    ],
    lures: &[
        "wood", "canvas", "field", "paper", "kitchen", "thread", "hair", "boat", "forge", "soil",
        "deer", "lesson", "hospital", "picture", "stone", "pipe",
    ],
};

const PART_WHOLE: Relation = Relation {
    pairs: &[
        ("wheel", "car"),
        ("petal", "flower"),
        ("page", "book"),
        ("twig", "tree"),
        ("feather", "goose"),
        ("brick", "wall"),
        ("sleeve", "shirt"),
        ("roof", "house"),
        ("lens", "telescope"),
        ("blade", "sword"),
        ("button", "jacket"),
        ("drawer", "desk"),
        ("rung", "ladder"),
        ("spoke", "bicycle"),
        ("keel", "ship"),
        ("crust", "bread"),
    ],
    lures: &[
        "road", "garden", "story", "leaf", "sky", "cement", "cloth", "door", "star", "fork",
        "zipper", "chair", "climb", "ride", "sail", "butter",
    ],
};

const RELATIONS: [&Relation; 4] = [&ANTONYM, &ANIMAL_HOME, &WORKER_TOOL, &PART_WHOLE];

impl Engine for AnalogyEngine {
    fn ability(&self) -> AbilityId {
        AbilityId::Ana
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        loop {
            let rel = RELATIONS[rng.gen_range(0..RELATIONS.len())];
            let i = rng.gen_range(0..rel.pairs.len());
            let j = rng.gen_range(0..rel.pairs.len());
            if i == j {
                continue;
            }
            let (a, b) = rel.pairs[i];
            let (c, d) = rel.pairs[j];
            let reversed = rng.gen_bool(0.5);
            let (stem_a, stem_b, stem_c, gold) =
                if reversed { (b, a, d, c) } else { (a, b, c, d) };
            if [stem_a, stem_b, stem_c].contains(&gold) {
                continue;
            }

            // Wrong-instance values from the same relation plus curated lures.
            let mut pool: Vec<&str> = rel
                .pairs
                .iter()
                .map(|&(x, y)| if reversed { x } else { y })
                .filter(|&w| w != gold && w != stem_a && w != stem_b && w != stem_c)
                .collect();
            pool.extend(
                rel.lures
                    .iter()
                    .filter(|&&w| w != gold && w != stem_a && w != stem_b && w != stem_c),
            );
            let mut distractors = Vec::with_capacity(3);
            while distractors.len() < 3 {
                let w = *pick(rng, &pool);
                if !distractors.contains(&w.to_string()) {
                    distractors.push(w.to_string());
                }
            }
            let context = format!("{stem_a} : {stem_b} :: {stem_c} : ?");
            let (options, answer_index) = place_gold(rng, gold.to_string(), distractors);
            return DiagnosticItem::new(context, QUESTION, options, answer_index);
        }
    }

    fn solve(&self, item: &DiagnosticItem) -> Result<usize, FailReason> {
        if item.question != QUESTION {
            return Err(FailReason::UnparseableQuestion);
        }
        let toks: Vec<&str> = item.context.split_whitespace().collect();
        // a : b :: c : ?
        if toks.len() != 7 || toks[1] != ":" || toks[3] != "::" || toks[5] != ":" || toks[6] != "?"
        {
            return Err(FailReason::UnparseableContext);
        }
        let (a, b, c) = (toks[0], toks[2], toks[4]);

        // Find the relation containing the stem pair, in either direction.
        let mut matches: Vec<(&Relation, bool)> = Vec::new();
        for rel in RELATIONS {
            if rel.pairs.iter().any(|&(x, y)| x == a && y == b) {
                matches.push((rel, false));
            }
            if rel.pairs.iter().any(|&(x, y)| y == a && x == b) {
                matches.push((rel, true));
            }
        }
        let (rel, reversed) = match matches.as_slice() {
            [one] => *one,
            [] => return Err(FailReason::NoSolution),
            _ => return Err(FailReason::AmbiguousDistractor),
        };
        let gold = rel
            .pairs
            .iter()
            .find_map(|&(x, y)| {
                if reversed {
                    (y == c).then_some(x)
                } else {
                    (x == c).then_some(y)
                }
            })
            .ok_or(FailReason::NoSolution)?;

        // No other option may also complete the relation for c. With each
        // left term appearing once per relation this reduces to uniqueness
        // of the gold string among the options.
        let idx = index_of_gold(&item.options, gold)?;
        if item.options.iter().filter(|o| o.as_str() == gold).count() > 1 {
            return Err(FailReason::AmbiguousDistractor);
        }
        Ok(idx)
    }

    fn vocabulary(&self) -> Vec<String> {
        let mut v = vec![":".to_string(), "::".to_string(), "?".to_string()];
        for rel in RELATIONS {
            for &(a, b) in rel.pairs {
                v.push(a.to_string());
                v.push(b.to_string());
            }
            v.extend(rel.lures.iter().map(|s| s.to_string()));
        }
        v.extend(words_of(&[QUESTION]));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn emits_the_classic_antonym_form() {
        // The bank contains (light, dark) and (truth, lie); the rendering of
        // that instance is the familiar stem.
        let gold = ANTONYM
            .pairs
            .iter()
            .find(|&&(a, _)| a == "truth")
            .map(|&(_, b)| b)
            .unwrap();
        assert_eq!(gold, "lie");
        let item = DiagnosticItem::new(
            "light : dark :: truth : ?",
            QUESTION,
            vec!["lie".into(), "fact".into(), "shadow".into(), "wisdom".into()],
            0,
        );
        assert_eq!(AnalogyEngine.solve(&item).unwrap(), 0);
    }

    #[test]
    fn reversed_direction_solves() {
        let item = DiagnosticItem::new(
            "nest : bird :: hive : ?",
            QUESTION,
            vec!["wasp".into(), "bee".into(), "honey".into(), "sting".into()],
            1,
        );
        assert_eq!(AnalogyEngine.solve(&item).unwrap(), 1);
    }

    #[test]
    fn generated_items_have_answer_not_in_stem() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..200 {
            let item = AnalogyEngine.generate(&mut rng);
            assert!(!item.context.contains(&item.answer));
            assert_eq!(AnalogyEngine.solve(&item).unwrap(), item.answer_index);
        }
    }
}
