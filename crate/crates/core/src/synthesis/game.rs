use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::clocks::{canonical_map, comp, delay_points, live_clocks, Comp, RegionGraph, RegionKey};
use super::partition::classify;
use super::spec::{Dnf, Obl, SpecAutomaton};
use crate::error::{Error, Result};
use crate::ta::{Granularity, TimedAutomaton, Valuation};
use crate::time::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    pub ploc: usize,
    pub pclocks: Vec<Option<Rational>>,
    pub slots: Vec<Option<Rational>>,
    pub dnf: Dnf,
    /// More controller clocks were needed than available.
    pub overflow: bool,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub comps: Vec<Comp>,
    pub transition: usize,
    pub controllable: bool,
    pub target: usize,
    pub resets: BTreeSet<usize>,
}

/// The explored game graph with its winning region.
pub struct Game<'a> {
    pub plant: &'a TimedAutomaton,
    pub spec: &'a SpecAutomaton,
    pub mu: &'a Granularity,
    pub pnames: Vec<String>,
    pub controller_clocks: Vec<String>,
    pub slots: usize,
    pub nodes: Vec<Node>,
    pub edges: Vec<Vec<Edge>>,
    pub bad: Vec<bool>,
    pub winning: Vec<bool>,
}

struct Explorer<'a> {
    plant: &'a TimedAutomaton,
    spec: &'a SpecAutomaton,
    mu: &'a Granularity,
    pnames: Vec<String>,
    slots: usize,
    live: Vec<BTreeSet<String>>,
    loc_index: HashMap<&'a str, usize>,
    outgoing: Vec<Vec<usize>>,
    owner: Vec<bool>,
}

impl<'a> Explorer<'a> {
    fn new(
        plant: &'a TimedAutomaton,
        spec: &'a SpecAutomaton,
        mu: &'a Granularity,
        slots: usize,
    ) -> Result<Explorer<'a>> {
        let loc_index: HashMap<&str, usize> = plant
            .locations
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let live_map = live_clocks(plant);
        let mut outgoing = vec![Vec::new(); plant.locations.len()];
        let mut owner = Vec::new();
        for (i, t) in plant.transitions.iter().enumerate() {
            outgoing[loc_index[t.from.as_str()]].push(i);
            owner.push(classify(&t.symbol, &plant.actions)?);
        }
        Ok(Explorer {
            plant,
            spec,
            mu,
            pnames: plant.all_clocks().into_iter().collect(),
            slots,
            live: plant
                .locations
                .iter()
                .map(|l| live_map[l].clone())
                .collect(),
            loc_index,
            outgoing,
            owner,
        })
    }

    fn canonicalize(&self, mut n: Node) -> Node {
        let values = n.pclocks.iter().chain(&n.slots).flatten().copied();
        let map = canonical_map(values, self.mu);
        let f = |v: &mut Option<Rational>| {
            if let Some(x) = v {
                *x = map[x];
            }
        };
        n.pclocks.iter_mut().for_each(f);
        n.slots.iter_mut().for_each(f);
        n.dnf = n
            .dnf
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|o| Obl {
                        loc: o.loc,
                        clock: o.clock.map(|x| map[&x]),
                    })
                    .collect()
            })
            .collect();
        n
    }

    fn initial(&self) -> Node {
        let ploc = self.loc_index[self.plant.initial.as_str()];
        let pclocks = self
            .pnames
            .iter()
            .map(|c| self.live[ploc].contains(c).then(Rational::default))
            .collect();
        self.canonicalize(Node {
            ploc,
            pclocks,
            slots: vec![None; self.slots],
            dnf: self.spec.initial(),
            overflow: false,
        })
    }

    fn overflow_node() -> Node {
        Node {
            ploc: 0,
            pclocks: Vec::new(),
            slots: Vec::new(),
            dnf: Dnf::new(),
            overflow: true,
        }
    }

    fn valuation(&self, pclocks: &[Option<Rational>]) -> Valuation {
        self.pnames
            .iter()
            .zip(pclocks)
            .filter_map(|(n, v)| v.map(|v| (n.clone(), v)))
            .collect()
    }

    /// All moves of a node: (box, transition index, target, slot resets).
    fn moves(&self, n: &Node) -> Vec<(Vec<Comp>, usize, Node, BTreeSet<usize>)> {
        let mut out = Vec::new();
        let values: Vec<Rational> = n
            .pclocks
            .iter()
            .chain(&n.slots)
            .flatten()
            .copied()
            .collect();
        for d in delay_points(values, self.mu) {
            let pclocks: Vec<Option<Rational>> =
                n.pclocks.iter().map(|v| v.map(|v| v + d)).collect();
            let slots: Vec<Option<Rational>> = n.slots.iter().map(|v| v.map(|v| v + d)).collect();
            let comps: Vec<Comp> = pclocks
                .iter()
                .chain(&slots)
                .map(|v| comp(v.as_ref(), self.mu))
                .collect();
            let val = self.valuation(&pclocks);
            for &ti in &self.outgoing[n.ploc] {
                let tr = &self.plant.transitions[ti];
                if !tr.guard.satisfied(&val) {
                    continue;
                }
                let ploc = self.loc_index[tr.to.as_str()];
                let next_p = self
                    .pnames
                    .iter()
                    .zip(&pclocks)
                    .map(|(c, v)| {
                        if !self.live[ploc].contains(c) {
                            None
                        } else if tr.resets.contains(c) {
                            Some(Rational::default())
                        } else {
                            *v
                        }
                    })
                    .collect();
                let dnf = self.spec.step(&n.dnf, d, &tr.symbol);
                let used: BTreeSet<Rational> =
                    dnf.iter().flatten().filter_map(|o| o.clock).collect();
                let mut next_s: Vec<Option<Rational>> = slots
                    .iter()
                    .map(|v| v.filter(|v| used.contains(v)))
                    .collect();
                let mut resets = BTreeSet::new();
                let mut overflow = false;
                for v in &used {
                    if next_s.contains(&Some(*v)) {
                        continue;
                    }
                    match next_s.iter().position(|s| s.is_none()) {
                        Some(i) => {
                            next_s[i] = Some(*v);
                            resets.insert(i);
                        }
                        None => overflow = true,
                    }
                }
                let target = if overflow {
                    Self::overflow_node()
                } else {
                    self.canonicalize(Node {
                        ploc,
                        pclocks: next_p,
                        slots: next_s,
                        dnf,
                        overflow: false,
                    })
                };
                out.push((comps.clone(), ti, target, resets));
            }
        }
        out
    }
}

impl<'a> Game<'a> {
    /// Explores every node reachable from the initial one and computes the
    /// winning region.
    pub fn solve(
        plant: &'a TimedAutomaton,
        spec: &'a SpecAutomaton,
        mu: &'a Granularity,
        controller_clocks: &[String],
        budget: usize,
    ) -> Result<Game<'a>> {
        let slots = controller_clocks.len();
        let ex = Explorer::new(plant, spec, mu, slots)?;
        let start = ex.initial();
        let mut index: HashMap<Node, usize> = HashMap::from([(start.clone(), 0)]);
        let mut nodes = vec![start];
        let mut edges: Vec<Vec<Edge>> = Vec::new();
        let mut bad = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            let n = nodes[i].clone();
            let is_bad =
                n.overflow || (plant.is_final(&plant.locations[n.ploc]) && !spec.satisfied(&n.dnf));
            bad.push(is_bad);
            let mut out = Vec::new();
            if !is_bad {
                for (comps, ti, target, resets) in ex.moves(&n) {
                    let j = match index.get(&target) {
                        Some(&j) => j,
                        None => {
                            if nodes.len() >= budget {
                                return Err(Error::Resource(format!(
                                    "game exceeded the budget of {budget} nodes"
                                )));
                            }
                            index.insert(target.clone(), nodes.len());
                            nodes.push(target);
                            nodes.len() - 1
                        }
                    };
                    out.push(Edge {
                        comps,
                        transition: ti,
                        controllable: ex.owner[ti],
                        target: j,
                        resets,
                    });
                }
            }
            edges.push(out);
            i += 1;
        }
        let graph = RegionGraph::new(plant, mu);
        let plant_live = graph.coreachable();
        let plant_ok: Vec<bool> = nodes
            .iter()
            .map(|n| !n.overflow && plant_live.contains(&plant_key(&graph, plant, n)))
            .collect();
        let winning = fixpoint(plant, &nodes, &edges, &bad, &plant_ok);
        Ok(Game {
            plant,
            spec,
            mu,
            pnames: ex.pnames,
            controller_clocks: controller_clocks.to_vec(),
            slots,
            nodes,
            edges,
            bad,
            winning,
        })
    }

    pub fn realizable(&self) -> bool {
        self.winning[0]
    }

    /// A controllable move is taken iff it stays in the winning region and
    /// does not irrevocably violate the constraints.
    pub fn allowed(&self, e: &Edge) -> bool {
        self.winning[e.target] && (!e.controllable || !self.nodes[e.target].dnf.is_empty())
    }
}

fn plant_key(graph: &RegionGraph<'_>, plant: &TimedAutomaton, n: &Node) -> RegionKey {
    graph.key(&plant.locations[n.ploc], &n.pclocks)
}

/// Greatest set of safe nodes closed under environment moves from which the
/// closed loop can still finish whenever the plant alone could.
fn fixpoint(
    plant: &TimedAutomaton,
    nodes: &[Node],
    edges: &[Vec<Edge>],
    bad: &[bool],
    plant_ok: &[bool],
) -> Vec<bool> {
    let n = nodes.len();
    let mut win: Vec<bool> = bad.iter().map(|b| !b).collect();
    let is_final: Vec<bool> = nodes
        .iter()
        .map(|x| !x.overflow && plant.is_final(&plant.locations[x.ploc]))
        .collect();
    loop {
        let mut changed = false;
        loop {
            let mut inner = false;
            for i in 0..n {
                if win[i] && edges[i].iter().any(|e| !e.controllable && !win[e.target]) {
                    win[i] = false;
                    inner = true;
                }
            }
            if !inner {
                break;
            }
            changed = true;
        }
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            if win[i] {
                for e in &edges[i] {
                    if win[e.target] {
                        preds[e.target].push(i);
                    }
                }
            }
        }
        let mut reach: Vec<bool> = (0..n).map(|i| win[i] && is_final[i]).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| reach[i]).collect();
        while let Some(j) = queue.pop_front() {
            for &i in &preds[j] {
                if !reach[i] {
                    reach[i] = true;
                    queue.push_back(i);
                }
            }
        }
        for i in 0..n {
            if win[i] && plant_ok[i] && !reach[i] {
                win[i] = false;
                changed = true;
            }
        }
        if !changed {
            return win;
        }
    }
}

/// Nodes visited by the closed loop of the extracted strategy, in order.
pub fn strategy_nodes(game: &Game<'_>) -> Vec<usize> {
    let mut seen = HashSet::from([0usize]);
    let mut order = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for e in &game.edges[i] {
            if game.allowed(e) && seen.insert(e.target) {
                order.push(e.target);
                queue.push_back(e.target);
            }
        }
    }
    order
}
