use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ta::{format_symbol, Symbol, TimedAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlphabetPartition {
    pub controllable: BTreeSet<Symbol>,
    pub environment: BTreeSet<Symbol>,
}

impl AlphabetPartition {
    pub fn is_controllable(&self, s: &Symbol) -> bool {
        self.controllable.contains(s)
    }
}

/// Classifies a symbol by the action it carries: start actions belong to
/// the controller, everything else to the environment.
pub fn classify(symbol: &Symbol, actions: &BTreeSet<crate::ta::Prop>) -> Result<bool> {
    let acts: Vec<&str> = symbol
        .iter()
        .filter(|p| actions.contains(*p))
        .map(|p| p.as_str())
        .collect();
    match acts.as_slice() {
        [] => Ok(false),
        [a] => Ok(a.starts_with("s_")),
        _ => Err(Error::input(format!(
            "symbol {} carries {} actions",
            format_symbol(symbol),
            acts.len()
        ))),
    }
}

pub fn partition_alphabet(plant: &TimedAutomaton) -> Result<AlphabetPartition> {
    let mut out = AlphabetPartition::default();
    for t in &plant.transitions {
        if classify(&t.symbol, &plant.actions)? {
            out.controllable.insert(t.symbol.clone());
        } else {
            out.environment.insert(t.symbol.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ta::{symbol, Guard, Transition};

    fn plant(symbols: &[Symbol]) -> TimedAutomaton {
        TimedAutomaton {
            locations: vec!["l".into()],
            initial: "l".into(),
            finals: BTreeSet::new(),
            clocks: BTreeSet::new(),
            actions: symbol(["s_goto(m1,m2)", "e_pick(o1)", "s_pick(o1)"]),
            transitions: symbols
                .iter()
                .map(|s| Transition {
                    from: "l".into(),
                    symbol: s.clone(),
                    guard: Guard::top(),
                    resets: BTreeSet::new(),
                    to: "l".into(),
                })
                .collect(),
        }
    }

    #[test]
    fn start_actions_are_controllable() {
        let go = symbol(["RAt(m1)", "s_goto(m1,m2)"]);
        let end = symbol(["Holding(o1)", "e_pick(o1)"]);
        let idle = symbol(["RAt(m1)", "Ready"]);
        let p = partition_alphabet(&plant(&[go.clone(), end.clone(), idle.clone()])).unwrap();
        assert!(p.is_controllable(&go));
        assert!(p.environment.contains(&end));
        assert!(p.environment.contains(&idle));
    }

    #[test]
    fn mixed_symbols_are_rejected() {
        let both = symbol(["s_pick(o1)", "e_pick(o1)"]);
        assert!(partition_alphabet(&plant(&[both])).is_err());
    }
}
