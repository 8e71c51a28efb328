use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Guard, Prop, TimedAutomaton, Transition};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionJson {
    pub from: String,
    pub symbols: Vec<String>,
    #[serde(default)]
    pub guard: Guard,
    #[serde(default)]
    pub resets: Vec<String>,
    pub to: String,
}

/// The shared automaton file format. Platform files may add `fluents`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonJson {
    pub locations: Vec<String>,
    pub initial: String,
    pub finals: Vec<String>,
    #[serde(default)]
    pub clocks: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fluents: Vec<String>,
    #[serde(default)]
    pub actions: Vec<String>,
    pub transitions: Vec<TransitionJson>,
}

impl From<&TimedAutomaton> for AutomatonJson {
    fn from(t: &TimedAutomaton) -> Self {
        AutomatonJson {
            locations: t.locations.clone(),
            initial: t.initial.clone(),
            finals: t.finals.iter().cloned().collect(),
            clocks: t.clocks.iter().cloned().collect(),
            fluents: Vec::new(),
            actions: t.actions.iter().map(|p| p.0.clone()).collect(),
            transitions: t
                .transitions
                .iter()
                .map(|tr| TransitionJson {
                    from: tr.from.clone(),
                    symbols: tr.symbol.iter().map(|p| p.0.clone()).collect(),
                    guard: tr.guard.clone(),
                    resets: tr.resets.iter().cloned().collect(),
                    to: tr.to.clone(),
                })
                .collect(),
        }
    }
}

impl AutomatonJson {
    pub fn to_automaton(&self) -> Result<TimedAutomaton> {
        let t = TimedAutomaton {
            locations: self.locations.clone(),
            initial: self.initial.clone(),
            finals: self.finals.iter().cloned().collect(),
            clocks: self.clocks.iter().cloned().collect(),
            actions: self.actions.iter().map(|s| Prop::new(s.clone())).collect(),
            transitions: self
                .transitions
                .iter()
                .map(|tr| Transition {
                    from: tr.from.clone(),
                    symbol: tr.symbols.iter().map(|s| Prop::new(s.clone())).collect(),
                    guard: tr.guard.clone(),
                    resets: tr.resets.iter().cloned().collect::<BTreeSet<_>>(),
                    to: tr.to.clone(),
                })
                .collect(),
        };
        t.validate()?;
        Ok(t)
    }
}

impl TimedAutomaton {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&AutomatonJson::from(self)).expect("automaton serializes")
            + "\n"
    }

    pub fn from_json(text: &str) -> Result<TimedAutomaton> {
        serde_json::from_str::<AutomatonJson>(text)?.to_automaton()
    }
}
