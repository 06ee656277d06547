//! Deduction items: premises instantiated from first-order patterns over a
//! toy domain of animals, categories and properties. The solver parses the
//! premises, forward-chains to a closure of facts about the subject and
//! accepts exactly one entailed option.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::verify::FailReason;
use crate::diagnostics::{AbilityId, DiagnosticItem};

use super::{pick, pick_distinct, place_gold, words_of, Engine};

pub(crate) struct DeductionEngine;

const QUESTION_FMT: &str = "what can we deduce about";

const ENTITIES: &[&str] = &[
    "Whiskers", "Rex", "Bella", "Coco", "Max", "Luna", "Rocky", "Daisy", "Milo", "Ruby",
];
const CATEGORIES: &[&str] = &["cat", "dog", "bird", "rabbit", "fox", "horse", "sheep", "goat"];
const PROPERTIES: &[&str] = &[
    "black", "white", "brown", "gray", "calm", "loud", "quick", "sleepy", "gentle", "clever",
    "shy", "brave",
];

/// Atomic statements about the single subject of an item.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Atom {
    Cat(String),
    NotCat(String),
    Prop(String),
    NotProp(String),
}

#[derive(Clone, Debug)]
enum Rule {
    /// every {A} is {P} / every {A} is a {B}
    CatImplies(String, Atom),
    /// every {P} animal is {Q}
    PropImplies(String, String),
    /// no {P} animal is {Q}
    PropForbids(String, String),
}

impl Engine for DeductionEngine {
    fn ability(&self) -> AbilityId {
        AbilityId::Ded
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        let e = pick(rng, ENTITIES).to_string();
        let pattern = rng.gen_range(0..4u8);
        let (premises, gold, decoys): (Vec<String>, String, Vec<String>) = match pattern {
            0 => {
                // chain: every A is P1; every P1 animal is P2; E is an A |- E is P2
                let a = pick(rng, CATEGORIES);
                let ps = pick_distinct(rng, PROPERTIES, 3);
                let (p1, p2, q) = (ps[0], ps[1], ps[2]);
                (
                    vec![
                        format!("every {a} is {p1} ."),
                        format!("every {p1} animal is {p2} ."),
                        format!("{e} is a {a} ."),
                    ],
                    format!("{e} is {p2}"),
                    vec![
                        format!("{e} is not {p1}"),
                        format!("{e} is {q}"),
                        format!("{e} is not a {a}"),
                    ],
                )
            }
            1 => {
                // negative chain: every A is P; no P animal is Q; E is an A |- E is not Q
                let a = pick(rng, CATEGORIES);
                let ps = pick_distinct(rng, PROPERTIES, 3);
                let (p, q, r) = (ps[0], ps[1], ps[2]);
                (
                    vec![
                        format!("every {a} is {p} ."),
                        format!("no {p} animal is {q} ."),
                        format!("{e} is a {a} ."),
                    ],
                    format!("{e} is not {q}"),
                    vec![
                        format!("{e} is {q}"),
                        format!("{e} is {r}"),
                        format!("{e} is not {p}"),
                    ],
                )
            }
            2 => {
                // disjunctive syllogism: E is either an A or a B; E is not an A |- E is a B
                let cs = pick_distinct(rng, CATEGORIES, 3);
                let (a, b, c) = (cs[0], cs[1], cs[2]);
                (
                    vec![
                        format!("{e} is either a {a} or a {b} ."),
                        format!("{e} is not a {a} ."),
                    ],
                    format!("{e} is a {b}"),
                    vec![
                        format!("{e} is a {a}"),
                        format!("{e} is a {c}"),
                        format!("{e} is not a {b}"),
                    ],
                )
            }
            _ => {
                // category bridge: every A is a B; every B is P; E is an A |- E is P
                let cs = pick_distinct(rng, CATEGORIES, 2);
                let (a, b) = (cs[0], cs[1]);
                let ps = pick_distinct(rng, PROPERTIES, 2);
                let (p, q) = (ps[0], ps[1]);
                (
                    vec![
                        format!("every {a} is a {b} ."),
                        format!("every {b} is {p} ."),
                        format!("{e} is a {a} ."),
                    ],
                    format!("{e} is {p}"),
                    vec![
                        format!("{e} is not {p}"),
                        format!("{e} is {q}"),
                        format!("{e} is not a {b}"),
                    ],
                )
            }
        };
        let context = premises.join(" ");
        let question = format!("{QUESTION_FMT} {e} ?");
        let (options, answer_index) = place_gold(rng, gold, decoys);
        DiagnosticItem::new(context, question, options, answer_index)
    }

    fn solve(&self, item: &DiagnosticItem) -> Result<usize, FailReason> {
        let q: Vec<&str> = item.question.split_whitespace().collect();
        let subject = match q.as_slice() {
            ["what", "can", "we", "deduce", "about", e, "?"] => e.to_string(),
            _ => return Err(FailReason::UnparseableQuestion),
        };

        let mut rules: Vec<Rule> = Vec::new();
        let mut facts: Vec<Atom> = Vec::new();
        let mut disjunctions: Vec<(String, String)> = Vec::new();
        for sentence in item.context.split(" . ") {
            let s = sentence.trim_end_matches(" .").trim();
            if s.is_empty() {
                continue;
            }
            let t: Vec<&str> = s.split_whitespace().collect();
            match t.as_slice() {
                ["every", a, "is", "a", b] => {
                    rules.push(Rule::CatImplies(a.to_string(), Atom::Cat(b.to_string())))
                }
                ["every", a, "is", p] if CATEGORIES.contains(a) => {
                    rules.push(Rule::CatImplies(a.to_string(), Atom::Prop(p.to_string())))
                }
                ["every", p, "animal", "is", q] => {
                    rules.push(Rule::PropImplies(p.to_string(), q.to_string()))
                }
                ["no", p, "animal", "is", q] => {
                    rules.push(Rule::PropForbids(p.to_string(), q.to_string()))
                }
                [e, "is", "a", a] if *e == subject => facts.push(Atom::Cat(a.to_string())),
                [e, "is", "not", "a", a] if *e == subject => {
                    facts.push(Atom::NotCat(a.to_string()))
                }
                [e, "is", "either", "a", a, "or", "a", b] if *e == subject => {
                    disjunctions.push((a.to_string(), b.to_string()))
                }
                _ => return Err(FailReason::UnparseableContext),
            }
        }

        // Forward chaining to a fixed point.
        loop {
            let mut added = false;
            let mut new_facts: Vec<Atom> = Vec::new();
            for (a, b) in &disjunctions {
                if facts.contains(&Atom::NotCat(a.clone())) && !facts.contains(&Atom::Cat(b.clone())) {
                    new_facts.push(Atom::Cat(b.clone()));
                }
                if facts.contains(&Atom::NotCat(b.clone())) && !facts.contains(&Atom::Cat(a.clone())) {
                    new_facts.push(Atom::Cat(a.clone()));
                }
            }
            for rule in &rules {
                match rule {
                    Rule::CatImplies(a, conseq) => {
                        if facts.contains(&Atom::Cat(a.clone())) && !facts.contains(conseq) {
                            new_facts.push(conseq.clone());
                        }
                    }
                    Rule::PropImplies(p, qq) => {
                        if facts.contains(&Atom::Prop(p.clone()))
                            && !facts.contains(&Atom::Prop(qq.clone()))
                        {
                            new_facts.push(Atom::Prop(qq.clone()));
                        }
                    }
                    Rule::PropForbids(p, qq) => {
                        if facts.contains(&Atom::Prop(p.clone()))
                            && !facts.contains(&Atom::NotProp(qq.clone()))
                        {
                            new_facts.push(Atom::NotProp(qq.clone()));
                        }
                    }
                }
            }
            for f in new_facts {
                if !facts.contains(&f) {
                    facts.push(f);
                    added = true;
                }
            }
            if !added {
                break;
            }
        }

        // Parse each option as a statement about the subject and keep the
        // ones the closure entails.
        let mut entailed: Vec<usize> = Vec::new();
        for (i, o) in item.options.iter().enumerate() {
            let t: Vec<&str> = o.split_whitespace().collect();
            let atom = match t.as_slice() {
                [e, "is", "a", a] if *e == subject => Atom::Cat(a.to_string()),
                [e, "is", "not", "a", a] if *e == subject => Atom::NotCat(a.to_string()),
                [e, "is", "not", p] if *e == subject => Atom::NotProp(p.to_string()),
                [e, "is", p] if *e == subject => Atom::Prop(p.to_string()),
                _ => return Err(FailReason::UnparseableContext),
            };
            if facts.contains(&atom) {
                entailed.push(i);
            }
        }
        match entailed.as_slice() {
            [one] => Ok(*one),
            [] => Err(FailReason::NoSolution),
            _ => Err(FailReason::AmbiguousDistractor),
        }
    }

    fn vocabulary(&self) -> Vec<String> {
        let mut v = words_of(&["every is a an animal no not either or . ? what can we deduce about"]);
        v.extend(ENTITIES.iter().map(|s| s.to_string()));
        v.extend(CATEGORIES.iter().map(|s| s.to_string()));
        v.extend(PROPERTIES.iter().map(|s| s.to_string()));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_items_solve_to_their_answer_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let item = DeductionEngine.generate(&mut rng);
            assert_eq!(
                DeductionEngine.solve(&item).unwrap(),
                item.answer_index,
                "item: {item:?}"
            );
        }
    }

    #[test]
    fn chain_pattern_entails_only_the_final_property() {
        let item = DiagnosticItem::new(
            "every cat is black . every black animal is calm . Whiskers is a cat .",
            "what can we deduce about Whiskers ?",
            vec![
                "Whiskers is calm".into(),
                "Whiskers is not black".into(),
                "Whiskers is quick".into(),
                "Whiskers is not a cat".into(),
            ],
            0,
        );
        assert_eq!(DeductionEngine.solve(&item).unwrap(), 0);
    }

    #[test]
    fn two_entailed_options_are_ambiguous() {
        let item = DiagnosticItem::new(
            "every cat is black . every black animal is calm . Whiskers is a cat .",
            "what can we deduce about Whiskers ?",
            vec![
                "Whiskers is calm".into(),
                "Whiskers is black".into(),
                "Whiskers is quick".into(),
                "Whiskers is not a cat".into(),
            ],
            0,
        );
        assert!(matches!(
            DeductionEngine.solve(&item),
            Err(FailReason::AmbiguousDistractor)
        ));
    }
}
