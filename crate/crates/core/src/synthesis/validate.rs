use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::rc::Rc;

use super::clocks::{canonical_map, delay_points, RegionGraph};
use super::partition::classify;
use super::spec::{Dnf, Obl, SpecAutomaton};
use crate::bat::BasicActionTheory;
use crate::error::Result;
use crate::golog::{enumerate_traces, observation, replay, Prog, TraceSet};
use crate::mtl::Mtl;
use crate::pta::induced_trace;
use crate::ta::{
    format_word, Granularity, Prop, Symbol, TimedAutomaton, TimedLetter, TimedWord, Transition,
    Valuation,
};
use crate::time::Rational;

/// Program and theory against which closed-loop words are replayed.
pub struct TraceContext<'a> {
    pub bat: &'a BasicActionTheory,
    pub program: &'a Rc<Prog>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: &'static str,
    pub word: TimedWord,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VIOLATION {} {}",
            self.condition,
            format_word(&self.word)
        )?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// One witness word per accepting closed-loop region state.
    pub final_words: Vec<TimedWord>,
    pub states: usize,
    /// Some state at the depth bound still had moves.
    pub truncated: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        write!(
            f,
            "{} closed-loop states, {} accepting words{}: {}",
            self.states,
            self.final_words.len(),
            if self.truncated {
                ", truncated at the bound"
            } else {
                ""
            },
            if self.passed() { "ok" } else { "FAILED" }
        )
    }
}

#[derive(Clone)]
struct State {
    ploc: String,
    cloc: String,
    values: Valuation,
    dnf: Dnf,
    word: TimedWord,
}

type Key = (String, String, Vec<Rational>, Dnf);

struct ClosedLoop<'a> {
    plant: &'a TimedAutomaton,
    controller: &'a TimedAutomaton,
    spec: &'a SpecAutomaton,
    mu: &'a Granularity,
    pout: HashMap<&'a str, Vec<&'a Transition>>,
    cout: HashMap<&'a str, Vec<&'a Transition>>,
}

impl<'a> ClosedLoop<'a> {
    fn key(&self, s: &State) -> Key {
        let obls = s.dnf.iter().flatten().filter_map(|o| o.clock);
        let map = canonical_map(s.values.values().copied().chain(obls), self.mu);
        let dnf = s
            .dnf
            .iter()
            .map(|c| {
                c.iter()
                    .map(|o| Obl {
                        loc: o.loc,
                        clock: o.clock.map(|x| map[&x]),
                    })
                    .collect()
            })
            .collect();
        (
            s.ploc.clone(),
            s.cloc.clone(),
            s.values.values().map(|v| map[v]).collect(),
            dnf,
        )
    }

    /// Closed-loop successors plus the environment symbols the plant enables
    /// but the controller refuses.
    fn successors(&self, s: &State) -> Result<(Vec<State>, Vec<(Symbol, Rational)>)> {
        let mut out = Vec::new();
        let mut blocked = Vec::new();
        let now = s.word.last().map(|l| l.time).unwrap_or_default();
        let obls = s.dnf.iter().flatten().filter_map(|o| o.clock);
        for d in delay_points(s.values.values().copied().chain(obls), self.mu) {
            let v: Valuation = s.values.iter().map(|(c, x)| (c.clone(), *x + d)).collect();
            for p in self.pout.get(s.ploc.as_str()).into_iter().flatten() {
                if !p.guard.satisfied(&v) {
                    continue;
                }
                let mut matched = false;
                for c in self.cout.get(s.cloc.as_str()).into_iter().flatten() {
                    if c.symbol != p.symbol || !c.guard.satisfied(&v) {
                        continue;
                    }
                    matched = true;
                    let mut values = v.clone();
                    for r in p.resets.iter().chain(&c.resets) {
                        values.insert(r.clone(), Rational::default());
                    }
                    let mut word = s.word.clone();
                    word.push(TimedLetter {
                        time: now + d,
                        symbol: p.symbol.clone(),
                    });
                    out.push(State {
                        ploc: p.to.clone(),
                        cloc: c.to.clone(),
                        values,
                        dnf: self.spec.step(&s.dnf, d, &p.symbol),
                        word,
                    });
                }
                if !matched && !classify(&p.symbol, &self.plant.actions)? {
                    blocked.push((p.symbol.clone(), now + d));
                }
            }
        }
        Ok((out, blocked))
    }

    fn is_final(&self, s: &State) -> bool {
        self.plant.is_final(&s.ploc) && self.controller.is_final(&s.cloc)
    }

    fn plant_values(&self, s: &State, names: &[String]) -> Vec<Option<Rational>> {
        names.iter().map(|n| s.values.get(n).copied()).collect()
    }
}

fn violation(
    condition: &'static str,
    word: &[TimedLetter],
    detail: impl Into<String>,
) -> Violation {
    Violation {
        condition,
        word: word.to_vec(),
        detail: detail.into(),
    }
}

/// Checks a controller against a plant on the closed loop up to `bound`
/// letters: clock ownership, non-blocking of the environment, relative
/// co-reachability of final locations, accepting controller locations, the
/// constraints on accepted words and, given a program, trace agreement.
pub fn validate_controller(
    plant: &TimedAutomaton,
    controller: &TimedAutomaton,
    constraints: &[Mtl<Prop>],
    mu: &Granularity,
    bound: usize,
    trace: Option<&TraceContext<'_>>,
) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    let plant_clocks = plant.all_clocks();
    for c in controller.clocks.intersection(&plant_clocks) {
        report.violations.push(violation(
            "condition-1",
            &[],
            format!("controller owns plant clock {c}"),
        ));
    }
    for t in &controller.transitions {
        for r in t.resets.difference(&controller.clocks) {
            report.violations.push(violation(
                "condition-1",
                &[],
                format!("{} resets foreign clock {r}", t.from),
            ));
        }
    }
    for l in controller
        .locations
        .iter()
        .filter(|l| !controller.is_final(l))
    {
        report.violations.push(violation(
            "condition-4",
            &[],
            format!("location {l} is not accepting"),
        ));
    }

    let spec = SpecAutomaton::new(constraints, None)?;
    let phi = Mtl::and_all(constraints.iter().cloned());
    let lp = ClosedLoop {
        plant,
        controller,
        spec: &spec,
        mu,
        pout: plant.outgoing(),
        cout: controller.outgoing(),
    };
    let start = State {
        ploc: plant.initial.clone(),
        cloc: controller.initial.clone(),
        values: plant_clocks
            .iter()
            .chain(&controller.clocks)
            .map(|c| (c.clone(), Rational::default()))
            .collect(),
        dnf: spec.initial(),
        word: Vec::new(),
    };
    let mut index: HashMap<Key, usize> = HashMap::from([(lp.key(&start), 0)]);
    let mut states = vec![start];
    let mut depth = vec![0usize];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![false];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let s = states[i].clone();
        let (succ, blocked) = lp.successors(&s)?;
        for (sym, at) in blocked {
            let mut w = s.word.clone();
            w.push(TimedLetter {
                time: at,
                symbol: sym,
            });
            report.violations.push(violation(
                "condition-2",
                &w,
                "environment move refused by the controller",
            ));
        }
        if depth[i] == bound {
            frontier[i] = !succ.is_empty();
            report.truncated |= frontier[i];
            continue;
        }
        for n in succ {
            let k = lp.key(&n);
            let j = match index.get(&k) {
                Some(&j) => j,
                None => {
                    index.insert(k, states.len());
                    states.push(n);
                    depth.push(depth[i] + 1);
                    preds.push(Vec::new());
                    frontier.push(false);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            preds[j].push(i);
        }
    }
    report.states = states.len();

    let mut good: Vec<bool> = states
        .iter()
        .zip(&frontier)
        .map(|(s, f)| *f || lp.is_final(s))
        .collect();
    let mut queue: VecDeque<usize> = (0..states.len()).filter(|&i| good[i]).collect();
    while let Some(j) = queue.pop_front() {
        for &i in &preds[j] {
            if !good[i] {
                good[i] = true;
                queue.push_back(i);
            }
        }
    }
    let graph = RegionGraph::new(plant, mu);
    let plant_live = graph.coreachable();
    let names = graph.names().to_vec();
    for (s, g) in states.iter().zip(&good) {
        if !g && plant_live.contains(&graph.key(&s.ploc, &lp.plant_values(s, &names))) {
            report.violations.push(violation(
                "condition-3",
                &s.word,
                "plant can finish but the closed loop cannot",
            ));
        }
    }

    let traces = match trace {
        Some(ctx) => Some(enumerate_traces(ctx.bat, ctx.program, bound)?),
        None => None,
    };
    for s in states.iter().filter(|s| lp.is_final(s)) {
        if !phi.holds(&s.word) {
            report.violations.push(violation(
                "constraints",
                &s.word,
                "accepted word violates the constraints",
            ));
        }
        if let (Some(ctx), Some(traces)) = (trace, &traces) {
            report
                .violations
                .extend(trace_violations(ctx, traces, &s.word)?);
        }
        report.final_words.push(s.word.clone());
    }
    Ok(report)
}

/// The action trace of an accepted word must be a terminating program trace
/// and every letter must agree with the replayed fluent state.
pub fn trace_violations(
    ctx: &TraceContext<'_>,
    traces: &TraceSet,
    word: &[TimedLetter],
) -> Result<Vec<Violation>> {
    let actions: Vec<_> = induced_trace(word, ctx.bat)?
        .into_iter()
        .map(|(a, _)| a)
        .collect();
    if !traces.traces.contains(&actions) {
        return Ok(vec![violation(
            "trace",
            word,
            "action trace is not a terminating program trace",
        )]);
    }
    let states = replay(ctx.bat, &actions)?;
    let theory: HashSet<Prop> = ctx
        .bat
        .domain()
        .all_atoms()
        .iter()
        .map(Prop::from)
        .collect();
    let action_props: HashSet<Prop> = ctx.bat.domain().actions().iter().map(Prop::from).collect();
    let mut done = 0;
    for (i, letter) in word.iter().enumerate() {
        done += letter
            .symbol
            .iter()
            .filter(|p| action_props.contains(*p))
            .count();
        let expected = observation(&states[done], None);
        let seen: Symbol = letter
            .symbol
            .iter()
            .filter(|p| theory.contains(*p))
            .cloned()
            .collect();
        if seen != expected {
            return Ok(vec![violation(
                "fluent-state",
                &word[..=i],
                format!(
                    "letter {i} disagrees with the replayed state {}",
                    states[done]
                ),
            )]);
        }
    }
    Ok(Vec::new())
}
