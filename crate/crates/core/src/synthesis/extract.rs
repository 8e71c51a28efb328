use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::clocks::Comp;
use super::game::{strategy_nodes, Game, Node};
use crate::error::{Error, Result};
use crate::ta::{Guard, Rel, Symbol, TimedAutomaton, Transition};
use crate::time::Rational;

/// Per-clock interval in units of 1/m: (lower, lower closed, upper, upper closed).
type Span = (i64, bool, Option<i64>, bool);

type Decision = Option<(usize, BTreeSet<String>)>;

fn span(c: Comp, k: i64) -> Option<Span> {
    match c {
        Comp::Absent => None,
        Comp::Point(n) => Some((n, true, Some(n), true)),
        Comp::Open(n) => Some((n, false, Some(n + 1), false)),
        Comp::Above => Some((k, false, None, false)),
    }
}

/// Union of two spans when it is again a span.
fn join(a: Span, b: Span) -> Option<Span> {
    let (a, b) = if (a.0, !a.1) <= (b.0, !b.1) {
        (a, b)
    } else {
        (b, a)
    };
    let touch = match a.2 {
        None => true,
        Some(h) => h > b.0 || (h == b.0 && (a.3 || b.1)),
    };
    if !touch {
        return None;
    }
    let upper = match (a.2, b.2) {
        (None, _) | (_, None) => (None, false),
        (Some(x), Some(y)) if x > y => (Some(x), a.3),
        (Some(x), Some(y)) if y > x => (Some(y), b.3),
        (Some(x), Some(_)) => (Some(x), a.3 || b.3),
    };
    Some((a.0, a.1, upper.0, upper.1))
}

fn span_guard(name: &str, s: Span, m: i64) -> Guard {
    let r = |n: i64| Rational::new(n, m);
    if s.1 && s.3 && s.2 == Some(s.0) {
        return Guard::cmp(name, Rel::Eq, r(s.0));
    }
    let mut g = Guard::top();
    if !(s.0 == 0 && s.1) {
        g = g.and(&Guard::cmp(
            name,
            if s.1 { Rel::Ge } else { Rel::Gt },
            r(s.0),
        ));
    }
    if let Some(h) = s.2 {
        g = g.and(&Guard::cmp(name, if s.3 { Rel::Le } else { Rel::Lt }, r(h)));
    }
    g
}

/// Controller location key: plant location plus obligation shape over slots.
fn shape(n: &Node) -> String {
    let slot_of = |v: &Option<Rational>| {
        v.map(|v| {
            n.slots
                .iter()
                .position(|s| *s == Some(v))
                .expect("slot for clock")
        })
    };
    let configs: Vec<String> = n
        .dnf
        .iter()
        .map(|c| {
            let obls: Vec<String> = c
                .iter()
                .map(|o| format!("{:?}@{:?}", o.loc, slot_of(&o.clock)))
                .collect();
            obls.join(",")
        })
        .collect();
    format!("{}|{}", n.ploc, configs.join(";"))
}

struct Table {
    keys: Vec<String>,
    rows: BTreeMap<(usize, Symbol), BTreeMap<Vec<Comp>, Decision>>,
}

fn build_table(game: &Game<'_>, order: &[usize], key: &dyn Fn(usize) -> String) -> Option<Table> {
    let mut key_index: HashMap<String, usize> = HashMap::new();
    let mut keys = Vec::new();
    let mut id = |k: String| -> usize {
        *key_index.entry(k.clone()).or_insert_with(|| {
            keys.push(k);
            keys.len() - 1
        })
    };
    let ids: HashMap<usize, usize> = order.iter().map(|&i| (i, id(key(i)))).collect();
    let names: Vec<String> = game
        .pnames
        .iter()
        .cloned()
        .chain(slot_names(game))
        .collect();
    let mut rows: BTreeMap<(usize, Symbol), BTreeMap<Vec<Comp>, Decision>> = BTreeMap::new();
    for &i in order {
        for e in &game.edges[i] {
            let symbol = game.plant.transitions[e.transition].symbol.clone();
            let decision = game.allowed(e).then(|| {
                let resets = e
                    .resets
                    .iter()
                    .map(|s| names[game.pnames.len() + s].clone())
                    .collect();
                (ids[&e.target], resets)
            });
            let row = rows.entry((ids[&i], symbol)).or_default();
            match row.get(&e.comps) {
                Some(d) if *d != decision => return None,
                _ => {
                    row.insert(e.comps.clone(), decision);
                }
            }
        }
    }
    Some(Table { keys, rows })
}

pub fn slot_names(game: &Game<'_>) -> Vec<String> {
    game.controller_clocks[..game.slots].to_vec()
}

/// Removes clock columns the decision does not depend on.
fn project(row: &BTreeMap<Vec<Comp>, Decision>, width: usize) -> Vec<bool> {
    let mut keep = vec![true; width];
    for c in 0..width {
        keep[c] = false;
        let mut seen: HashMap<Vec<Comp>, &Decision> = HashMap::new();
        let consistent = row.iter().all(|(comps, d)| {
            let p: Vec<Comp> = comps
                .iter()
                .enumerate()
                .filter(|(i, _)| keep[*i])
                .map(|(_, x)| *x)
                .collect();
            *seen.entry(p).or_insert(d) == d
        });
        if !consistent {
            keep[c] = true;
        }
    }
    keep
}

fn merge_spans(mut rows: Vec<Vec<Option<Span>>>) -> Vec<Vec<Option<Span>>> {
    loop {
        let mut merged = None;
        'search: for a in 0..rows.len() {
            for b in a + 1..rows.len() {
                let diff: Vec<usize> = (0..rows[a].len())
                    .filter(|&c| rows[a][c] != rows[b][c])
                    .collect();
                if let [c] = diff[..] {
                    if let (Some(x), Some(y)) = (rows[a][c], rows[b][c]) {
                        if let Some(j) = join(x, y) {
                            merged = Some((a, b, c, j));
                            break 'search;
                        }
                    }
                }
            }
        }
        match merged {
            Some((a, b, c, j)) => {
                rows[a][c] = Some(j);
                rows.remove(b);
            }
            None => return rows,
        }
    }
}

/// Builds the controller automaton from the winning strategy.
pub fn extract(game: &Game<'_>) -> Result<TimedAutomaton> {
    let order = strategy_nodes(game);
    let table = build_table(game, &order, &|i| shape(&game.nodes[i]))
        .or_else(|| build_table(game, &order, &|i| i.to_string()))
        .ok_or_else(|| Error::Internal("strategy is not a function of the region".into()))?;
    let names: Vec<String> = game
        .pnames
        .iter()
        .cloned()
        .chain(slot_names(game))
        .collect();
    let k = game.mu.k as i64;
    let m = game.mu.m as i64;
    let loc_name = |i: usize| format!("C{i}");
    let mut transitions = Vec::new();
    for ((from, symbol), row) in &table.rows {
        let keep = project(row, names.len());
        let mut groups: BTreeMap<&(usize, BTreeSet<String>), BTreeSet<Vec<Option<Span>>>> =
            BTreeMap::new();
        for (comps, d) in row {
            if let Some(d) = d {
                let spans = comps
                    .iter()
                    .zip(&keep)
                    .filter(|(_, k)| **k)
                    .map(|(c, _)| span(*c, k))
                    .collect();
                groups.entry(d).or_default().insert(spans);
            }
        }
        let kept_names: Vec<&String> = names
            .iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(n, _)| n)
            .collect();
        for ((to, resets), spans) in groups {
            for row in merge_spans(spans.into_iter().collect()) {
                let mut guard = Guard::top();
                for (name, s) in kept_names.iter().zip(row) {
                    if let Some(s) = s {
                        guard = guard.and(&span_guard(name, s, m));
                    }
                }
                transitions.push(Transition {
                    from: loc_name(*from),
                    symbol: symbol.clone(),
                    guard,
                    resets: resets.clone(),
                    to: loc_name(*to),
                });
            }
        }
    }
    transitions.sort();
    let locations: Vec<String> = (0..table.keys.len()).map(loc_name).collect();
    let controller = TimedAutomaton {
        initial: loc_name(0),
        finals: locations.iter().cloned().collect(),
        locations,
        clocks: slot_names(game).into_iter().collect(),
        actions: game.plant.actions.clone(),
        transitions,
    };
    if let Some(w) = controller.nondeterminism() {
        return Err(Error::Internal(format!(
            "extracted controller is nondeterministic at {}",
            w.first.from
        )));
    }
    Ok(controller)
}
