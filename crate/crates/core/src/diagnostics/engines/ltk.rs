//! Long-term knowledge recall over a bundled offline fact table of
//! (entity, relation, value) triples. Questions vary in phrasing so the
//! same fact recurs across many distinct items; the answer never appears
//! in the question or context (checked inline at generation).

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::verify::FailReason;
use crate::diagnostics::{AbilityId, DiagnosticItem};

use super::{pick, place_gold, words_of, Engine};

pub(crate) struct KnowledgeEngine;

const CAPITALS: &[(&str, &str)] = &[
    ("france", "paris"),
    ("japan", "tokyo"),
    ("australia", "canberra"),
    ("canada", "ottawa"),
    ("egypt", "cairo"),
    ("spain", "madrid"),
    ("italy", "rome"),
    ("germany", "berlin"),
    ("russia", "moscow"),
    ("china", "beijing"),
    ("india", "delhi"),
    ("brazil", "brasilia"),
    ("norway", "oslo"),
    ("sweden", "stockholm"),
    ("greece", "athens"),
    ("turkey", "ankara"),
    ("kenya", "nairobi"),
    ("peru", "lima"),
    ("chile", "santiago"),
    ("cuba", "havana"),
    ("austria", "vienna"),
    ("portugal", "lisbon"),
    ("ireland", "dublin"),
    ("poland", "warsaw"),
    ("hungary", "budapest"),
    ("finland", "helsinki"),
    ("denmark", "copenhagen"),
    ("thailand", "bangkok"),
    ("vietnam", "hanoi"),
    ("morocco", "rabat"),
    ("nigeria", "abuja"),
    ("iran", "tehran"),
    ("iraq", "baghdad"),
    ("syria", "damascus"),
    ("lebanon", "beirut"),
    ("jordan", "amman"),
    ("ghana", "accra"),
    ("ethiopia", "addis ababa"),
    ("mongolia", "ulaanbaatar"),
    ("iceland", "reykjavik"),
];

const CONTINENTS: &[(&str, &str)] = &[
    ("france", "europe"),
    ("japan", "asia"),
    ("egypt", "africa"),
    ("brazil", "south america"),
    ("canada", "north america"),
    ("australia", "oceania"),
    ("kenya", "africa"),
    ("china", "asia"),
    ("peru", "south america"),
    ("spain", "europe"),
    ("india", "asia"),
    ("morocco", "africa"),
    ("chile", "south america"),
    ("norway", "europe"),
    ("thailand", "asia"),
    ("nigeria", "africa"),
    ("mexico", "north america"),
    ("germany", "europe"),
    ("vietnam", "asia"),
    ("ghana", "africa"),
];

const CURRENCIES: &[(&str, &str)] = &[
    ("japan", "yen"),
    ("india", "rupee"),
    ("russia", "ruble"),
    ("china", "yuan"),
    ("mexico", "peso"),
    ("britain", "pound"),
    ("sweden", "krona"),
    ("turkey", "lira"),
    ("kenya", "shilling"),
    ("thailand", "baht"),
];

const SYMBOLS: &[(&str, &str)] = &[
    ("gold", "au"),
    ("silver", "ag"),
    ("iron", "fe"),
    ("oxygen", "o"),
    ("hydrogen", "h"),
    ("carbon", "c"),
    ("sodium", "na"),
    ("helium", "he"),
    ("copper", "cu"),
    ("zinc", "zn"),
];

/// Free-form facts: two question phrasings each, a fixed answer and a
/// curated distractor pool.
struct FreeFact {
    questions: [&'static str; 2],
    answer: &'static str,
    pool: &'static [&'static str],
}

const PLANET_POOL: &[&str] = &[
    "mercury", "venus", "mars", "jupiter", "saturn", "neptune", "uranus", "earth",
];

const FREE_FACTS: &[FreeFact] = &[
    FreeFact {
        questions: [
            "which planet is closest to the sun ?",
            "which planet orbits nearest to the sun ?",
        ],
        answer: "mercury",
        pool: PLANET_POOL,
    },
    FreeFact {
        questions: [
            "which planet is the largest in the solar system ?",
            "which planet has the greatest mass ?",
        ],
        answer: "jupiter",
        pool: PLANET_POOL,
    },
    FreeFact {
        questions: [
            "which planet is known as the red planet ?",
            "which planet looks red from earth ?",
        ],
        answer: "mars",
        pool: PLANET_POOL,
    },
    FreeFact {
        questions: [
            "which planet is famous for its rings ?",
            "which planet has the most visible rings ?",
        ],
        answer: "saturn",
        pool: PLANET_POOL,
    },
    FreeFact {
        questions: [
            "which planet is the hottest in the solar system ?",
            "which planet has the hottest surface ?",
        ],
        answer: "venus",
        pool: PLANET_POOL,
    },
    FreeFact {
        questions: [
            "which is the longest river in the world ?",
            "what is the name of the longest river on earth ?",
        ],
        answer: "the nile",
        pool: &["the nile", "the amazon", "the danube", "the volga", "the rhine"],
    },
    FreeFact {
        questions: [
            "which is the largest ocean on earth ?",
            "what is the name of the largest ocean ?",
        ],
        answer: "the pacific",
        pool: &["the pacific", "the atlantic", "the arctic", "the indian ocean"],
    },
    FreeFact {
        questions: [
            "which is the tallest mountain on earth ?",
            "what is the name of the highest mountain ?",
        ],
        answer: "everest",
        pool: &["everest", "kilimanjaro", "mont blanc", "fuji", "denali"],
    },
    FreeFact {
        questions: [
            "which is the largest hot desert on earth ?",
            "what is the name of the largest hot desert ?",
        ],
        answer: "the sahara",
        pool: &["the sahara", "the gobi", "the kalahari", "the mojave"],
    },
    FreeFact {
        questions: [
            "which is the coldest continent ?",
            "which continent has the lowest temperatures ?",
        ],
        answer: "antarctica",
        pool: &["antarctica", "europe", "asia", "oceania", "africa"],
    },
    FreeFact {
        questions: [
            "which is the fastest land animal ?",
            "which animal runs fastest on land ?",
        ],
        answer: "the cheetah",
        pool: &["the cheetah", "the lion", "the horse", "the ostrich", "the wolf"],
    },
    FreeFact {
        questions: [
            "which is the tallest living animal ?",
            "which animal stands tallest ?",
        ],
        answer: "the giraffe",
        pool: &["the giraffe", "the elephant", "the camel", "the moose"],
    },
    FreeFact {
        questions: [
            "which is the largest living animal ?",
            "which animal is the heaviest alive today ?",
        ],
        answer: "the blue whale",
        pool: &["the blue whale", "the elephant", "the hippo", "the orca"],
    },
    FreeFact {
        questions: [
            "how many continents are there on earth ?",
            "how many continents does earth have ?",
        ],
        answer: "seven",
        pool: &["seven", "five", "six", "eight", "nine"],
    },
    FreeFact {
        questions: [
            "how many planets orbit the sun ?",
            "how many planets are in the solar system ?",
        ],
        answer: "eight",
        pool: &["eight", "seven", "nine", "ten", "six"],
    },
    FreeFact {
        questions: [
            "which gas do plants absorb from the air ?",
            "which gas do plants take in for growth ?",
        ],
        answer: "carbon dioxide",
        pool: &["carbon dioxide", "oxygen", "nitrogen", "helium"],
    },
    FreeFact {
        questions: [
            "which organ pumps blood through the body ?",
            "which organ keeps blood moving ?",
        ],
        answer: "the heart",
        pool: &["the heart", "the liver", "the brain", "the lungs"],
    },
    FreeFact {
        questions: [
            "what is frozen water called ?",
            "what do we call water in its solid form ?",
        ],
        answer: "ice",
        pool: &["ice", "steam", "dew", "fog", "mist"],
    },
];

const CONTEXTS: &[&str] = &[
    "this question is about world geography .",
    "this is a general knowledge question .",
    "answer from your knowledge of the world .",
    "this question asks about a well known fact .",
    "no passage is given ; rely on stored knowledge .",
];

const CAPITAL_QS: &[&str] = &[
    "what is the capital city of {} ?",
    "which city is the capital of {} ?",
    "the capital of {} is which city ?",
    "which of these cities is the capital of {} ?",
    "what city serves as the capital of {} ?",
    "name the capital city of {} . which is it ?",
];

const CONTINENT_QS: &[&str] = &[
    "on which continent is {} located ?",
    "which continent is {} part of ?",
    "{} is located on which continent ?",
    "which continent contains {} ?",
    "to which continent does {} belong ?",
];

const CURRENCY_QS: &[&str] = &[
    "what is the currency of {} ?",
    "which currency is used in {} ?",
    "{} uses which currency ?",
    "what money is used in {} ?",
    "which of these is the currency of {} ?",
];

const SYMBOL_QS: &[&str] = &[
    "what is the chemical symbol of {} ?",
    "which symbol stands for {} in chemistry ?",
    "{} has which chemical symbol ?",
    "in the periodic table , which symbol denotes {} ?",
];

impl Engine for KnowledgeEngine {
    fn ability(&self) -> AbilityId {
        AbilityId::LTK
    }

    fn generate(&self, rng: &mut ChaCha8Rng) -> DiagnosticItem {
        let context = pick(rng, CONTEXTS).to_string();
        let (question, gold, pool): (String, String, Vec<String>) = match rng.gen_range(0..5u8) {
            0 => {
                let &(entity, value) = pick(rng, CAPITALS);
                let q = pick(rng, CAPITAL_QS).replace("{}", entity);
                let pool = CAPITALS.iter().map(|&(_, v)| v.to_string()).collect();
                (q, value.to_string(), pool)
            }
            1 => {
                let &(entity, value) = pick(rng, CONTINENTS);
                let q = pick(rng, CONTINENT_QS).replace("{}", entity);
                let pool = vec![
                    "europe".into(),
                    "asia".into(),
                    "africa".into(),
                    "south america".into(),
                    "north america".into(),
                    "oceania".into(),
                    "antarctica".into(),
                ];
                (q, value.to_string(), pool)
            }
            2 => {
                let &(entity, value) = pick(rng, CURRENCIES);
                let q = pick(rng, CURRENCY_QS).replace("{}", entity);
                let pool = CURRENCIES.iter().map(|&(_, v)| v.to_string()).collect();
                (q, value.to_string(), pool)
            }
            3 => {
                let &(entity, value) = pick(rng, SYMBOLS);
                let q = pick(rng, SYMBOL_QS).replace("{}", entity);
                let pool = SYMBOLS.iter().map(|&(_, v)| v.to_string()).collect();
                (q, value.to_string(), pool)
            }
            _ => {
                let fact = pick(rng, FREE_FACTS);
                let q = pick(rng, &fact.questions).to_string();
                let pool = fact.pool.iter().map(|s| s.to_string()).collect();
                (q, fact.answer.to_string(), pool)
            }
        };
        let mut distractors: Vec<String> = Vec::with_capacity(3);
        while distractors.len() < 3 {
            let cand = pick(rng, &pool).clone();
            if cand != gold && !distractors.contains(&cand) {
                distractors.push(cand);
            }
        }
        let (options, answer_index) = place_gold(rng, gold, distractors);
        DiagnosticItem::new(context, question, options, answer_index)
    }

    fn solve(&self, item: &DiagnosticItem) -> Result<usize, FailReason> {
        let q = item.question.as_str();
        let gold: String = if let Some(entity) = match_slot(q, CAPITAL_QS) {
            lookup(CAPITALS, &entity)?
        } else if let Some(entity) = match_slot(q, CONTINENT_QS) {
            lookup(CONTINENTS, &entity)?
        } else if let Some(entity) = match_slot(q, CURRENCY_QS) {
            lookup(CURRENCIES, &entity)?
        } else if let Some(entity) = match_slot(q, SYMBOL_QS) {
            lookup(SYMBOLS, &entity)?
        } else if let Some(fact) = FREE_FACTS.iter().find(|f| f.questions.contains(&q)) {
            fact.answer.to_string()
        } else {
            return Err(FailReason::UnparseableQuestion);
        };
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
        let mut v = words_of(CONTEXTS);
        for qs in [CAPITAL_QS, CONTINENT_QS, CURRENCY_QS, SYMBOL_QS] {
            v.extend(words_of(qs).into_iter().filter(|w| w != "{}"));
        }
        for &(e, val) in CAPITALS.iter().chain(CONTINENTS).chain(CURRENCIES).chain(SYMBOLS) {
            v.extend(e.split_whitespace().map(str::to_string));
            v.extend(val.split_whitespace().map(str::to_string));
        }
        v.extend(words_of(&["europe asia africa america oceania antarctica south north"]));
        for f in FREE_FACTS {
            v.extend(words_of(&f.questions.to_vec()));
            v.extend(f.answer.split_whitespace().map(str::to_string));
            v.extend(words_of(f.pool));
        }
        v
    }
}

/// Match `q` against a phrasing family and extract the entity slot.
fn match_slot(q: &str, family: &[&str]) -> Option<String> {
    for pattern in family {
        let (prefix, suffix) = pattern.split_once("{}")?;
        if let Some(rest) = q.strip_prefix(prefix) {
            if let Some(entity) = rest.strip_suffix(suffix) {
                if !entity.is_empty() && !entity.contains('?') {
                    return Some(entity.to_string());
                }
            }
        }
    }
    None
}

fn lookup(table: &[(&str, &str)], entity: &str) -> Result<String, FailReason> {
    table
        .iter()
        .find(|&&(e, _)| e == entity)
        .map(|&(_, v)| v.to_string())
        .ok_or(FailReason::NoSolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_items_solve_and_never_leak() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..300 {
            let item = KnowledgeEngine.generate(&mut rng);
            assert_eq!(KnowledgeEngine.solve(&item).unwrap(), item.answer_index);
        }
    }

    #[test]
    fn capital_lookup_matches_the_table() {
        let item = DiagnosticItem::new(
            "this question is about world geography .",
            "what is the capital city of australia ?",
            vec!["sydney".into(), "canberra".into(), "melbourne".into(), "perth".into()],
            1,
        );
        assert_eq!(KnowledgeEngine.solve(&item).unwrap(), 1);
    }
}
