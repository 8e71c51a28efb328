use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::bat::BasicActionTheory;
use crate::error::{Error, Result};
use crate::ta::{
    format_symbol, product, AutomatonJson, Granularity, Prop, TimedAutomaton, Transition,
};

/// A platform component with its declared fluent and action alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatformModel {
    pub automaton: TimedAutomaton,
    pub fluents: BTreeSet<Prop>,
    pub actions: BTreeSet<Prop>,
}

impl PlatformModel {
    /// Without a `fluents` declaration every non-action proposition counts as a fluent.
    pub fn new(automaton: TimedAutomaton, fluents: BTreeSet<Prop>) -> PlatformModel {
        let actions = automaton.actions.clone();
        let fluents = if fluents.is_empty() {
            automaton.alphabet().difference(&actions).cloned().collect()
        } else {
            fluents
        };
        PlatformModel {
            automaton,
            fluents,
            actions,
        }
    }

    pub fn from_json(text: &str) -> Result<PlatformModel> {
        let raw: AutomatonJson = serde_json::from_str(text)?;
        let fluents = raw.fluents.iter().map(|s| Prop::new(s.clone())).collect();
        Ok(PlatformModel::new(raw.to_automaton()?, fluents))
    }

    pub fn to_json(&self) -> String {
        let mut raw = AutomatonJson::from(&self.automaton);
        raw.fluents = self.fluents.iter().map(|p| p.0.clone()).collect();
        serde_json::to_string_pretty(&raw).expect("automaton serializes") + "\n"
    }

    pub fn alphabet(&self) -> BTreeSet<Prop> {
        self.fluents.union(&self.actions).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlatformReport {
    pub violations: Vec<String>,
}

impl PlatformReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for PlatformReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "platform: ok");
        }
        for v in &self.violations {
            writeln!(f, "platform: {v}")?;
        }
        Ok(())
    }
}

pub fn validate_platform(
    r: &PlatformModel,
    bat: &BasicActionTheory,
    mu: Option<&Granularity>,
) -> PlatformReport {
    let t = &r.automaton;
    let mut violations = Vec::new();
    let mut theory: BTreeSet<Prop> = bat.domain().all_atoms().iter().map(Prop::from).collect();
    theory.extend(bat.domain().actions().iter().map(Prop::from));
    for p in t.alphabet().union(&r.fluents) {
        if theory.contains(p) {
            violations.push(format!("proposition {p} is also used by the action theory"));
        }
    }
    let declared = r.alphabet();
    for tr in &t.transitions {
        for p in tr.symbol.difference(&declared) {
            violations.push(format!(
                "transition {} -> {} uses undeclared proposition {p}",
                tr.from, tr.to
            ));
        }
    }
    for loc in &t.locations {
        let loops: Vec<_> = t
            .transitions
            .iter()
            .filter(|tr| &tr.from == loc && &tr.to == loc && tr.symbol.is_subset(&r.fluents))
            .collect();
        match loops.len() {
            0 => violations.push(format!("location {loc} has no fluent self-loop")),
            1 => {}
            n => violations.push(format!("location {loc} has {n} fluent self-loops")),
        }
    }
    if let Some(w) = t.nondeterminism() {
        violations.push(format!(
            "nondeterministic at {} on {}: targets {} and {}",
            w.first.from,
            format_symbol(&w.first.symbol),
            w.first.to,
            w.second.to
        ));
    }
    if let Some(mu) = mu {
        for tr in &t.transitions {
            if let Err(e) = mu.check_guard(&tr.guard) {
                violations.push(format!("transition {} -> {}: {e}", tr.from, tr.to));
            }
        }
    }
    PlatformReport { violations }
}

/// The plant: product of the determinized program automaton and the platform.
/// Keeps the given transitions and the locations reachable through them.
fn restrict(t: TimedAutomaton, transitions: Vec<Transition>) -> TimedAutomaton {
    let mut seen = BTreeSet::from([t.initial.clone()]);
    let mut queue = VecDeque::from([t.initial.clone()]);
    while let Some(l) = queue.pop_front() {
        for tr in transitions.iter().filter(|tr| tr.from == l) {
            if seen.insert(tr.to.clone()) {
                queue.push_back(tr.to.clone());
            }
        }
    }
    TimedAutomaton {
        locations: t
            .locations
            .into_iter()
            .filter(|l| seen.contains(l))
            .collect(),
        finals: t.finals.into_iter().filter(|l| seen.contains(l)).collect(),
        transitions: transitions
            .into_iter()
            .filter(|tr| seen.contains(&tr.from))
            .collect(),
        ..t
    }
}

/// Product of the program automaton with the platform; joint moves in which
/// both components perform an action are dropped.
pub fn build_plant(pta: &TimedAutomaton, r: &PlatformModel) -> Result<TimedAutomaton> {
    let joint = product(pta, &r.automaton)?;
    let single: Vec<Transition> = joint
        .transitions
        .iter()
        .filter(|t| {
            t.symbol
                .iter()
                .filter(|p| joint.actions.contains(*p))
                .count()
                <= 1
        })
        .cloned()
        .collect();
    let plant = restrict(joint, single);
    if let Some(w) = plant.nondeterminism() {
        return Err(Error::Internal(format!(
            "plant is nondeterministic at {} on {}",
            w.first.from,
            format_symbol(&w.first.symbol)
        )));
    }
    Ok(plant)
}
