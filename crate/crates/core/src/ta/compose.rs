use std::collections::{BTreeSet, VecDeque};

use super::{Symbol, TimedAutomaton, Transition};
use crate::error::{Error, Result};

fn pair_name(a: &str, b: &str) -> String {
    format!("({a}, {b})")
}

/// Explores reachable location pairs; `combine` yields the joint moves of a pair.
fn explore<F>(t1: &TimedAutomaton, t2: &TimedAutomaton, mut combine: F) -> TimedAutomaton
where
    F: FnMut(&Transition, &Transition) -> Option<Symbol>,
{
    let out1 = t1.outgoing();
    let out2 = t2.outgoing();
    let start = (t1.initial.clone(), t2.initial.clone());
    let mut seen = BTreeSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    let mut transitions = Vec::new();
    while let Some((l1, l2)) = queue.pop_front() {
        for a in out1.get(l1.as_str()).into_iter().flatten() {
            for b in out2.get(l2.as_str()).into_iter().flatten() {
                let Some(symbol) = combine(a, b) else {
                    continue;
                };
                let target = (a.to.clone(), b.to.clone());
                transitions.push(Transition {
                    from: pair_name(&l1, &l2),
                    symbol,
                    guard: a.guard.and(&b.guard),
                    resets: a.resets.union(&b.resets).cloned().collect(),
                    to: pair_name(&target.0, &target.1),
                });
                if seen.insert(target.clone()) {
                    order.push(target.clone());
                    queue.push_back(target);
                }
            }
        }
    }
    let finals = order
        .iter()
        .filter(|(a, b)| t1.finals.contains(a) && t2.finals.contains(b))
        .map(|(a, b)| pair_name(a, b))
        .collect();
    TimedAutomaton {
        locations: order.iter().map(|(a, b)| pair_name(a, b)).collect(),
        initial: pair_name(&t1.initial, &t2.initial),
        finals,
        clocks: t1.clocks.union(&t2.clocks).cloned().collect(),
        actions: t1.actions.union(&t2.actions).cloned().collect(),
        transitions,
    }
}

/// Synchronous composition: both components move on the same symbol.
pub fn parallel_compose(t1: &TimedAutomaton, t2: &TimedAutomaton) -> Result<TimedAutomaton> {
    if let Some(c) = t1.clocks.intersection(&t2.clocks).next() {
        return Err(Error::input(format!(
            "clock {c} is owned by both components"
        )));
    }
    Ok(explore(t1, t2, |a, b| {
        (a.symbol == b.symbol).then(|| a.symbol.clone())
    }))
}

/// Product over disjoint alphabets: the joint symbol is the union of both.
pub fn product(t1: &TimedAutomaton, t2: &TimedAutomaton) -> Result<TimedAutomaton> {
    let (a1, a2) = (t1.alphabet(), t2.alphabet());
    let overlap: Vec<String> = a1.intersection(&a2).map(|p| p.0.clone()).collect();
    if !overlap.is_empty() {
        return Err(Error::Precondition(format!(
            "alphabets overlap on {}",
            overlap.join(", ")
        )));
    }
    if let Some(c) = t1.clocks.intersection(&t2.clocks).next() {
        return Err(Error::input(format!(
            "clock {c} is owned by both components"
        )));
    }
    Ok(explore(t1, t2, |a, b| {
        Some(a.symbol.union(&b.symbol).cloned().collect())
    }))
}
