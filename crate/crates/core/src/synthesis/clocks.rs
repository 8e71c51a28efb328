use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::ta::{Granularity, Guard, Rel, TimedAutomaton, Transition, Valuation};
use crate::time::Rational;

/// Position of a clock value relative to the granular constants, in units of 1/m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Comp {
    Absent,
    Point(i64),
    Open(i64),
    Above,
}

pub fn comp(v: Option<&Rational>, mu: &Granularity) -> Comp {
    let Some(v) = v else { return Comp::Absent };
    let x = v * Rational::from_integer(mu.m as i64);
    if x > Rational::from_integer(mu.k as i64) {
        Comp::Above
    } else if x.is_integer() {
        Comp::Point(x.to_integer())
    } else {
        Comp::Open(x.floor().to_integer())
    }
}

/// Maps every value to the canonical representative of its region, jointly:
/// integer parts and the order of fractional parts are kept.
pub fn canonical_map(
    values: impl IntoIterator<Item = Rational>,
    mu: &Granularity,
) -> BTreeMap<Rational, Rational> {
    let m = Rational::from_integer(mu.m as i64);
    let k = Rational::from_integer(mu.k as i64);
    let values: BTreeSet<Rational> = values.into_iter().collect();
    let fracs: BTreeSet<Rational> = values
        .iter()
        .map(|v| v * m)
        .filter(|x| *x <= k && !x.is_integer())
        .map(|x| x.fract())
        .collect();
    let denom = fracs.len() as i64 + 1;
    let rank: HashMap<Rational, i64> = fracs
        .iter()
        .enumerate()
        .map(|(i, f)| (*f, i as i64 + 1))
        .collect();
    values
        .into_iter()
        .map(|v| {
            let x = v * m;
            let c = if x > k {
                k + Rational::from_integer(1)
            } else if x.is_integer() {
                x
            } else {
                x.floor() + Rational::new(rank[&x.fract()], denom)
            };
            (v, c / m)
        })
        .collect()
}

/// One delay into each region reachable by letting time pass, in order.
pub fn delay_points(values: impl IntoIterator<Item = Rational>, mu: &Granularity) -> Vec<Rational> {
    let m = Rational::from_integer(mu.m as i64);
    let top = Rational::from_integer(mu.k as i64 + 1);
    let mut critical = BTreeSet::from([Rational::default()]);
    for v in values {
        let x = v * m;
        if x >= top {
            continue;
        }
        let mut n = x.floor() + Rational::from_integer(1);
        while n <= top {
            critical.insert(n - x);
            n += Rational::from_integer(1);
        }
    }
    let critical: Vec<Rational> = critical.into_iter().collect();
    let mut out = Vec::new();
    for w in critical.windows(2) {
        out.push(w[0] / m);
        out.push((w[0] + w[1]) / (m * Rational::from_integer(2)));
    }
    out.push(*critical.last().expect("zero is critical") / m);
    out
}

/// Per-clock box constraints of a component vector.
pub fn box_guard(names: &[String], comps: &[Comp], mu: &Granularity) -> Guard {
    let m = mu.m as i64;
    let mut g = Guard::top();
    for (name, c) in names.iter().zip(comps) {
        let part = match c {
            Comp::Absent => continue,
            Comp::Point(n) => Guard::cmp(name, Rel::Eq, Rational::new(*n, m)),
            Comp::Open(n) => Guard::cmp(name, Rel::Gt, Rational::new(*n, m)).and(&Guard::cmp(
                name,
                Rel::Lt,
                Rational::new(n + 1, m),
            )),
            Comp::Above => Guard::cmp(name, Rel::Gt, Rational::new(mu.k as i64, m)),
        };
        g = g.and(&part);
    }
    g
}

/// Clocks that may be read before being reset, per location.
pub fn live_clocks(t: &TimedAutomaton) -> HashMap<String, BTreeSet<String>> {
    let mut live: HashMap<String, BTreeSet<String>> = t
        .locations
        .iter()
        .map(|l| (l.clone(), BTreeSet::new()))
        .collect();
    loop {
        let mut changed = false;
        for tr in &t.transitions {
            let mut add = tr.guard.clocks();
            add.extend(live[&tr.to].difference(&tr.resets).cloned());
            let entry = live.get_mut(&tr.from).expect("declared location");
            for c in add {
                changed |= entry.insert(c);
            }
        }
        if !changed {
            return live;
        }
    }
}

/// Region graph of a single automaton; used for plant co-reachability.
pub struct RegionGraph<'a> {
    t: &'a TimedAutomaton,
    mu: &'a Granularity,
    names: Vec<String>,
    live: HashMap<String, BTreeSet<String>>,
}

pub type RegionKey = (String, Vec<Option<Rational>>);

impl<'a> RegionGraph<'a> {
    pub fn new(t: &'a TimedAutomaton, mu: &'a Granularity) -> RegionGraph<'a> {
        RegionGraph {
            t,
            mu,
            names: t.all_clocks().into_iter().collect(),
            live: live_clocks(t),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Drops dead clocks and canonicalizes the rest.
    pub fn key(&self, loc: &str, values: &[Option<Rational>]) -> RegionKey {
        let live = &self.live[loc];
        let kept: Vec<Option<Rational>> = self
            .names
            .iter()
            .zip(values)
            .map(|(n, v)| if live.contains(n) { *v } else { None })
            .collect();
        let map = canonical_map(kept.iter().flatten().copied(), self.mu);
        (
            loc.to_string(),
            kept.iter().map(|v| v.map(|v| map[&v])).collect(),
        )
    }

    pub fn valuation(&self, values: &[Option<Rational>]) -> Valuation {
        self.names
            .iter()
            .zip(values)
            .filter_map(|(n, v)| v.map(|v| (n.clone(), v)))
            .collect()
    }

    /// Successors of a region state: (delay, transition, target values).
    pub fn successors(
        &self,
        key: &RegionKey,
    ) -> Vec<(Rational, &'a Transition, Vec<Option<Rational>>)> {
        let (loc, values) = key;
        let mut out = Vec::new();
        let outgoing: Vec<&Transition> = self
            .t
            .transitions
            .iter()
            .filter(|t| &t.from == loc)
            .collect();
        for d in delay_points(values.iter().flatten().copied(), self.mu) {
            let shifted: Vec<Option<Rational>> = values.iter().map(|v| v.map(|v| v + d)).collect();
            let val = self.valuation(&shifted);
            for tr in &outgoing {
                if tr.guard.satisfied(&val) {
                    let next = self
                        .names
                        .iter()
                        .zip(&shifted)
                        .map(|(n, v)| {
                            if tr.resets.contains(n) {
                                Some(Rational::default())
                            } else {
                                *v
                            }
                        })
                        .collect();
                    out.push((d, *tr, next));
                }
            }
        }
        out
    }

    pub fn initial(&self) -> RegionKey {
        self.key(
            &self.t.initial,
            &vec![Some(Rational::default()); self.names.len()],
        )
    }

    /// Region states from which a final location is reachable.
    pub fn coreachable(&self) -> HashSet<RegionKey> {
        let start = self.initial();
        let mut index: HashMap<RegionKey, usize> = HashMap::from([(start.clone(), 0)]);
        let mut keys = vec![start];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new()];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let key = keys[i].clone();
            for (_, tr, next) in self.successors(&key) {
                let k = self.key(&tr.to, &next);
                let j = *index.entry(k.clone()).or_insert_with(|| {
                    keys.push(k);
                    preds.push(Vec::new());
                    queue.push_back(keys.len() - 1);
                    keys.len() - 1
                });
                preds[j].push(i);
            }
        }
        let mut good: Vec<bool> = keys.iter().map(|(l, _)| self.t.is_final(l)).collect();
        let mut queue: VecDeque<usize> = (0..keys.len()).filter(|&i| good[i]).collect();
        while let Some(j) = queue.pop_front() {
            for &i in &preds[j] {
                if !good[i] {
                    good[i] = true;
                    queue.push_back(i);
                }
            }
        }
        keys.into_iter()
            .zip(good)
            .filter(|(_, g)| *g)
            .map(|(k, _)| k)
            .collect()
    }
}
