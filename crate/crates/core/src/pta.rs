use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::rc::Rc;

use crate::bat::BasicActionTheory;
use crate::error::{Error, Result};
use crate::golog::{canonicalize, is_final_prog, observation, trans, Prog};
use crate::logic::{Name, WorldState};
use crate::ta::{Guard, Prop, Symbol, TimedAutomaton, TimedLetter, Transition};
use crate::time::Rational;

pub const START: &str = "q0";

/// A non-start location of the program automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtaLocation {
    pub name: String,
    pub state: WorldState,
    pub remaining: Rc<Prog>,
    pub is_final: bool,
}

#[derive(Debug, Clone)]
pub struct Pta {
    pub automaton: TimedAutomaton,
    pub locations: Vec<PtaLocation>,
}

fn edge(from: &str, symbol: Symbol, to: &str) -> Transition {
    Transition {
        from: from.to_string(),
        symbol,
        guard: Guard::top(),
        resets: BTreeSet::new(),
        to: to.to_string(),
    }
}

/// Builds the program automaton with locations quotiented by
/// (state, canonical remaining program).
pub fn compile_pta_locations(
    bat: &BasicActionTheory,
    program: &Rc<Prog>,
    max_expansions: usize,
) -> Result<Pta> {
    let s0 = bat.initial_state()?;
    let start = (s0.clone(), canonicalize(program));
    let mut index: HashMap<(WorldState, Rc<Prog>), usize> = HashMap::new();
    let mut keys = vec![start.clone()];
    index.insert(start, 0);
    let mut transitions = vec![edge(START, observation(&s0, None), "S0")];
    let mut seen_edges = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    let mut expansions = 0;
    while let Some(i) = queue.pop_front() {
        let (state, prog) = keys[i].clone();
        if expansions == max_expansions {
            return Err(Error::BoundExceeded {
                limit: max_expansions,
                frontier: format!("state {state}, remaining {prog}"),
            });
        }
        expansions += 1;
        let from = format!("S{i}");
        transitions.push(edge(&from, observation(&state, None), &from));
        for (_, action, rest) in trans(&prog, &state, bat)? {
            let next = bat.progress(&state, &action)?;
            let key = (next.clone(), canonicalize(&rest));
            let j = match index.get(&key) {
                Some(&j) => j,
                None => {
                    let j = keys.len();
                    index.insert(key.clone(), j);
                    keys.push(key);
                    queue.push_back(j);
                    j
                }
            };
            let t = edge(&from, observation(&next, Some(&action)), &format!("S{j}"));
            if seen_edges.insert((t.from.clone(), t.symbol.clone(), t.to.clone())) {
                transitions.push(t);
            }
        }
    }
    let mut locations = Vec::new();
    for (i, (state, remaining)) in keys.into_iter().enumerate() {
        let is_final = is_final_prog(&remaining, &state)?;
        locations.push(PtaLocation {
            name: format!("S{i}"),
            state,
            remaining,
            is_final,
        });
    }
    let mut names = vec![START.to_string()];
    names.extend(locations.iter().map(|l| l.name.clone()));
    let automaton = TimedAutomaton {
        locations: names,
        initial: START.to_string(),
        finals: locations
            .iter()
            .filter(|l| l.is_final)
            .map(|l| l.name.clone())
            .collect(),
        clocks: BTreeSet::new(),
        actions: bat.domain().actions().iter().map(Prop::from).collect(),
        transitions,
    };
    Ok(Pta {
        automaton,
        locations,
    })
}

pub fn compile_pta(
    bat: &BasicActionTheory,
    program: &Rc<Prog>,
    max_expansions: usize,
) -> Result<TimedAutomaton> {
    Ok(compile_pta_locations(bat, program, max_expansions)?.automaton)
}

fn subset_name(set: &BTreeSet<String>) -> String {
    if set.len() == 1 {
        set.iter().next().expect("one").clone()
    } else {
        format!("{{{}}}", set.iter().cloned().collect::<Vec<_>>().join(","))
    }
}

/// Subset construction for guard-free automata.
pub fn determinize(t: &TimedAutomaton) -> Result<TimedAutomaton> {
    if let Some(bad) = t
        .transitions
        .iter()
        .find(|t| !t.guard.is_true() || !t.resets.is_empty())
    {
        return Err(Error::Precondition(format!(
            "determinize needs a guard-free automaton; transition {} -> {} has guard `{}`",
            bad.from, bad.to, bad.guard
        )));
    }
    let out = t.outgoing();
    let start = BTreeSet::from([t.initial.clone()]);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    let mut transitions = Vec::new();
    while let Some(set) = queue.pop_front() {
        let mut moves: BTreeMap<&Symbol, BTreeSet<String>> = BTreeMap::new();
        for loc in &set {
            for tr in out.get(loc.as_str()).into_iter().flatten() {
                moves.entry(&tr.symbol).or_default().insert(tr.to.clone());
            }
        }
        let from = subset_name(&set);
        for (symbol, target) in moves {
            transitions.push(edge(&from, symbol.clone(), &subset_name(&target)));
            if seen.insert(target.clone()) {
                order.push(target.clone());
                queue.push_back(target);
            }
        }
    }
    Ok(TimedAutomaton {
        locations: order.iter().map(subset_name).collect(),
        initial: t.initial.clone(),
        finals: order
            .iter()
            .filter(|s| s.iter().any(|l| t.is_final(l)))
            .map(subset_name)
            .collect(),
        clocks: t.clocks.clone(),
        actions: t.actions.clone(),
        transitions,
    })
}

/// The timed action trace of a word: letters carrying a theory action are
/// kept with their timestamps, all others dropped.
pub fn induced_trace(
    word: &[TimedLetter],
    bat: &BasicActionTheory,
) -> Result<Vec<(Name, Rational)>> {
    let names: HashMap<Prop, &Name> = bat
        .domain()
        .actions()
        .iter()
        .map(|a| (Prop::from(a), a))
        .collect();
    let mut out = Vec::new();
    for (i, letter) in word.iter().enumerate() {
        let hits: Vec<&&Name> = letter.symbol.iter().filter_map(|p| names.get(p)).collect();
        match hits.as_slice() {
            [] => {}
            [a] => out.push(((**a).clone(), letter.time)),
            _ => {
                return Err(Error::input(format!(
                    "letter {i} carries {} program actions",
                    hits.len()
                )))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golog::ground_program;
    use crate::parse::{parse_bat, parse_program};
    use crate::ta::format_symbol;

    const BAT: &str = include_str!("../fixtures/carrier/carrier.bat");
    const FETCH: &str = include_str!("../fixtures/carrier/fetch.golog");

    fn carrier() -> (BasicActionTheory, Rc<Prog>) {
        let bat = parse_bat("carrier.bat", BAT).unwrap();
        let prog =
            ground_program(&parse_program("fetch.golog", FETCH).unwrap(), bat.domain()).unwrap();
        (bat, prog)
    }

    #[test]
    fn carrier_automaton_shape() {
        let (bat, prog) = carrier();
        let t = compile_pta(&bat, &prog, 1000).unwrap();
        assert_eq!(t.locations, ["q0", "S0", "S1", "S2", "S3", "S4"]);
        assert_eq!(t.finals, BTreeSet::from(["S4".to_string()]));
        let s1 = t
            .transitions
            .iter()
            .find(|tr| tr.from == "S0" && tr.to == "S1")
            .unwrap();
        assert_eq!(
            format_symbol(&s1.symbol),
            "{At(o1,m2), Perf(goto(m1,m2)), Spacious(m1), s_goto(m1,m2)}"
        );
        assert!(t.is_deterministic());
        let d = determinize(&t).unwrap();
        assert_eq!(d.locations, t.locations);
        let sorted = |t: &TimedAutomaton| t.transitions.iter().cloned().collect::<BTreeSet<_>>();
        assert_eq!(sorted(&d), sorted(&t));
    }

    #[test]
    fn subset_construction_merges_successors() {
        let t = TimedAutomaton {
            locations: vec!["p".into(), "q".into(), "r".into(), "u".into(), "v".into()],
            initial: "p".into(),
            finals: BTreeSet::from(["u".to_string()]),
            clocks: BTreeSet::new(),
            actions: BTreeSet::new(),
            transitions: vec![
                edge("p", crate::ta::symbol(["a"]), "q"),
                edge("p", crate::ta::symbol(["a"]), "r"),
                edge("q", crate::ta::symbol(["b"]), "u"),
                edge("r", crate::ta::symbol(["c"]), "v"),
            ],
        };
        let d = determinize(&t).unwrap();
        assert_eq!(d.locations, ["p", "{q,r}", "u", "v"]);
        assert!(d.is_deterministic());
        assert_eq!(d.finals, BTreeSet::from(["u".to_string()]));
    }

    #[test]
    fn guarded_input_is_rejected() {
        let mut t = compile_pta(&carrier().0, &carrier().1, 100).unwrap();
        t.transitions[0].guard = Guard::parse("x < 1").unwrap();
        assert!(matches!(determinize(&t), Err(Error::Precondition(_))));
    }

    #[test]
    fn induced_trace_keeps_program_actions() {
        let (bat, prog) = carrier();
        let t = compile_pta(&bat, &prog, 100).unwrap();
        let mut word = Vec::new();
        let mut loc = t.initial.clone();
        for i in 0..5 {
            let tr = t
                .transitions
                .iter()
                .find(|tr| tr.from == loc && tr.to != loc)
                .unwrap();
            let mut symbol = tr.symbol.clone();
            symbol.insert(Prop::new("Ready"));
            word.push(TimedLetter {
                time: Rational::from_integer(i),
                symbol,
            });
            loc = tr.to.clone();
        }
        assert!(t.accepts(
            &word
                .iter()
                .map(|l| {
                    let mut l = l.clone();
                    l.symbol.remove(&Prop::new("Ready"));
                    l
                })
                .collect::<Vec<_>>()
        ));
        let mu: Vec<String> = induced_trace(&word, &bat)
            .unwrap()
            .iter()
            .map(|(a, t)| format!("{a}@{t}"))
            .collect();
        assert_eq!(
            mu,
            [
                "s_goto(m1,m2)@1",
                "e_goto(m1,m2)@2",
                "s_pick(o1)@3",
                "e_pick(o1)@4"
            ]
        );
        assert!(induced_trace(&word[..1], &bat).unwrap().is_empty());
    }

    #[test]
    fn expansion_bound_names_frontier() {
        let (bat, prog) = carrier();
        let err = compile_pta(&bat, &prog, 2).unwrap_err();
        assert!(
            matches!(err, Error::BoundExceeded { limit: 2, .. }),
            "{err}"
        );
    }
}
