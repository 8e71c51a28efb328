//! Timed automata over set-valued symbols, timed words, composition and regions.

mod compose;
mod dot;
mod guard;
mod json;
mod region;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{GroundAtom, Name};
use crate::time::{format_rational, serde_rational, Rational};

pub use compose::{parallel_compose, product};
pub use dot::to_dot;
pub use guard::{Comparison, Granularity, Guard, Rel, Valuation};
pub use json::{AutomatonJson, TransitionJson};
pub use region::{ClockInt, Region};

/// A proposition of a symbol: a ground atom, an action name or a platform proposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Prop(pub String);

impl Prop {
    pub fn new(s: impl Into<String>) -> Prop {
        Prop(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&GroundAtom> for Prop {
    fn from(a: &GroundAtom) -> Prop {
        Prop(a.to_string())
    }
}

impl From<&Name> for Prop {
    fn from(n: &Name) -> Prop {
        Prop(n.to_string())
    }
}

impl From<&str> for Prop {
    fn from(s: &str) -> Prop {
        Prop(s.to_string())
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub type Symbol = BTreeSet<Prop>;

pub fn symbol<'a>(props: impl IntoIterator<Item = &'a str>) -> Symbol {
    props.into_iter().map(Prop::from).collect()
}

pub fn format_symbol(s: &Symbol) -> String {
    let parts: Vec<&str> = s.iter().map(Prop::as_str).collect();
    format!("{{{}}}", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TimedLetter {
    #[serde(with = "serde_rational")]
    pub time: Rational,
    pub symbol: Symbol,
}

pub type TimedWord = Vec<TimedLetter>;

pub fn format_word(w: &[TimedLetter]) -> String {
    let parts: Vec<String> = w
        .iter()
        .map(|l| {
            format!(
                "({},{})",
                format_symbol(&l.symbol),
                format_rational(&l.time)
            )
        })
        .collect();
    if parts.is_empty() {
        "<>".to_string()
    } else {
        parts.join("")
    }
}

pub fn check_word(w: &[TimedLetter]) -> Result<()> {
    let mut prev = Rational::default();
    for l in w {
        if l.time < prev {
            return Err(Error::input(format!(
                "timed word is not monotone at time {}",
                format_rational(&l.time)
            )));
        }
        prev = l.time;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub from: String,
    pub symbol: Symbol,
    pub guard: Guard,
    pub resets: BTreeSet<String>,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedAutomaton {
    pub locations: Vec<String>,
    pub initial: String,
    pub finals: BTreeSet<String>,
    /// Clocks owned (reset) by this automaton. Guards may also read foreign clocks.
    pub clocks: BTreeSet<String>,
    /// Propositions of the alphabet that are action names.
    pub actions: BTreeSet<Prop>,
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondeterminismWitness {
    pub first: Transition,
    pub second: Transition,
    pub valuation: Valuation,
}

impl TimedAutomaton {
    pub fn validate(&self) -> Result<()> {
        let locs: BTreeSet<&String> = self.locations.iter().collect();
        if locs.len() != self.locations.len() {
            return Err(Error::input("duplicate location name"));
        }
        if !locs.contains(&self.initial) {
            return Err(Error::input(format!(
                "initial location {} is not declared",
                self.initial
            )));
        }
        if let Some(f) = self.finals.iter().find(|f| !locs.contains(f)) {
            return Err(Error::input(format!("final location {f} is not declared")));
        }
        for t in &self.transitions {
            for l in [&t.from, &t.to] {
                if !locs.contains(l) {
                    return Err(Error::input(format!(
                        "transition mentions undeclared location {l}"
                    )));
                }
            }
            if let Some(c) = t.resets.iter().find(|c| !self.clocks.contains(*c)) {
                return Err(Error::input(format!(
                    "transition from {} resets undeclared clock {c}",
                    t.from
                )));
            }
        }
        Ok(())
    }

    /// All propositions occurring in transition symbols plus declared actions.
    pub fn alphabet(&self) -> BTreeSet<Prop> {
        let mut out = self.actions.clone();
        for t in &self.transitions {
            out.extend(t.symbol.iter().cloned());
        }
        out
    }

    /// Clocks read by guards or owned.
    pub fn all_clocks(&self) -> BTreeSet<String> {
        let mut out = self.clocks.clone();
        for t in &self.transitions {
            out.extend(t.guard.clocks());
        }
        out
    }

    pub fn outgoing(&self) -> HashMap<&str, Vec<&Transition>> {
        let mut map: HashMap<&str, Vec<&Transition>> = HashMap::new();
        for t in &self.transitions {
            map.entry(t.from.as_str()).or_default().push(t);
        }
        map
    }

    pub fn is_final(&self, loc: &str) -> bool {
        self.finals.contains(loc)
    }

    /// Runs from the initial location with every clock at zero at time zero.
    pub fn accepts(&self, word: &[TimedLetter]) -> bool {
        self.run_configs(word)
            .iter()
            .any(|(l, _)| self.finals.contains(l))
    }

    /// Configurations reachable after consuming the whole word.
    pub fn run_configs(&self, word: &[TimedLetter]) -> BTreeSet<(String, Valuation)> {
        let clocks = self.all_clocks();
        let out = self.outgoing();
        let start: Valuation = clocks
            .iter()
            .map(|c| (c.clone(), Rational::default()))
            .collect();
        let mut configs: BTreeSet<(String, Valuation)> = BTreeSet::new();
        configs.insert((self.initial.clone(), start));
        let mut now = Rational::default();
        for letter in word {
            if letter.time < now {
                return BTreeSet::new();
            }
            let delay = letter.time - now;
            now = letter.time;
            let mut next = BTreeSet::new();
            for (loc, v) in &configs {
                let v: Valuation = v.iter().map(|(c, x)| (c.clone(), *x + delay)).collect();
                for t in out.get(loc.as_str()).into_iter().flatten() {
                    if t.symbol == letter.symbol && t.guard.satisfied(&v) {
                        let mut v2 = v.clone();
                        for c in &t.resets {
                            v2.insert(c.clone(), Rational::default());
                        }
                        next.insert((t.to.clone(), v2));
                    }
                }
            }
            configs = next;
            if configs.is_empty() {
                break;
            }
        }
        configs
    }

    pub fn nondeterminism(&self) -> Option<NondeterminismWitness> {
        let mut by_key: BTreeMap<(&str, &Symbol), Vec<&Transition>> = BTreeMap::new();
        for t in &self.transitions {
            by_key
                .entry((t.from.as_str(), &t.symbol))
                .or_default()
                .push(t);
        }
        for ts in by_key.values() {
            for (i, a) in ts.iter().enumerate() {
                for b in &ts[i + 1..] {
                    if let Some(v) = a.guard.and(&b.guard).witness() {
                        return Some(NondeterminismWitness {
                            first: (*a).clone(),
                            second: (*b).clone(),
                            valuation: v,
                        });
                    }
                }
            }
        }
        None
    }

    pub fn is_deterministic(&self) -> bool {
        self.nondeterminism().is_none()
    }

    pub fn check_granularity(&self, mu: &Granularity) -> Result<()> {
        for t in &self.transitions {
            mu.check_guard(&t.guard)?;
        }
        Ok(())
    }
}
