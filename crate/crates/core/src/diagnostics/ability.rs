use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The ten operationalized abilities, in canonical (alphabetical
/// abbreviation) order. This order is used everywhere ordering matters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AbilityId {
    /// Analogical reasoning
    Ana,
    /// Commonsense & causal reasoning
    Com,
    /// Contextual recall
    Cxt,
    /// Deductive reasoning
    Ded,
    /// Inductive reasoning
    Ind,
    /// Long-term knowledge recall
    #[allow(clippy::upper_case_acronyms)]
    LTK,
    /// Quantitative reasoning
    Quant,
    /// Semantic relationship comprehension
    Sem,
    /// Spatial & geometrical reasoning
    Spat,
    /// Temporal reasoning
    Temp,
}

impl AbilityId {
    pub const ALL: [AbilityId; 10] = [
        AbilityId::Ana,
        AbilityId::Com,
        AbilityId::Cxt,
        AbilityId::Ded,
        AbilityId::Ind,
        AbilityId::LTK,
        AbilityId::Quant,
        AbilityId::Sem,
        AbilityId::Spat,
        AbilityId::Temp,
    ];

    pub fn abbr(&self) -> &'static str {
        match self {
            AbilityId::Ana => "Ana",
            AbilityId::Com => "Com",
            AbilityId::Cxt => "Cxt",
            AbilityId::Ded => "Ded",
            AbilityId::Ind => "Ind",
            AbilityId::LTK => "LTK",
            AbilityId::Quant => "Quant",
            AbilityId::Sem => "Sem",
            AbilityId::Spat => "Spat",
            AbilityId::Temp => "Temp",
        }
    }

    pub fn full_name(&self) -> &'static str {
        match self {
            AbilityId::Ana => "Analogical Reasoning",
            AbilityId::Com => "Commonsense & Causal Reasoning",
            AbilityId::Cxt => "Contextual Recall",
            AbilityId::Ded => "Deductive Reasoning",
            AbilityId::Ind => "Inductive Reasoning",
            AbilityId::LTK => "Long-Term Knowledge Recall",
            AbilityId::Quant => "Quantitative Reasoning",
            AbilityId::Sem => "Semantic Relationship Comprehension",
            AbilityId::Spat => "Spatial & Geometrical Reasoning",
            AbilityId::Temp => "Temporal Reasoning",
        }
    }
}

impl fmt::Display for AbilityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbr())
    }
}

impl FromStr for AbilityId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AbilityId::ALL
            .iter()
            .find(|a| a.abbr().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| format!("unknown ability {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_ten_in_alphabetical_abbreviation_order() {
        let abbrs: Vec<&str> = AbilityId::ALL.iter().map(|a| a.abbr()).collect();
        let mut sorted = abbrs.clone();
        sorted.sort_by_key(|s| s.to_ascii_lowercase());
        assert_eq!(abbrs.len(), 10);
        assert_eq!(abbrs, sorted);
    }

    #[test]
    fn parses_abbreviations() {
        assert_eq!("spat".parse::<AbilityId>().unwrap(), AbilityId::Spat);
        assert!("xyz".parse::<AbilityId>().is_err());
    }
}
