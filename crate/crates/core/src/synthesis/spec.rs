use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::Result;
use crate::mtl::Mtl;
use crate::ta::{Granularity, Prop, Symbol, TimedLetter};
use crate::time::{Interval, Rational};

/// Negation normal form over literals and automaton locations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Nnf {
    True,
    False,
    Lit(Prop, bool),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Loc(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Until,
    Release,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub kind: Kind,
    pub lhs: Nnf,
    pub interval: Interval,
    pub rhs: Nnf,
}

/// A pending obligation: `loc == None` is the root formula, still to be
/// evaluated at the next position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obl {
    pub loc: Option<usize>,
    pub clock: Option<Rational>,
}

pub type Config = BTreeSet<Obl>;
pub type Dnf = BTreeSet<Config>;

/// Tracks the obligations of a constraint conjunction along a finite timed
/// word. A word is accepted (violates the constraints) iff no configuration
/// is free of pending until-obligations at its end.
#[derive(Debug, Clone)]
pub struct SpecAutomaton {
    pub root: Nnf,
    pub locations: Vec<Location>,
    empty_ok: bool,
}

fn mk_and(parts: Vec<Nnf>) -> Nnf {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Nnf::True => {}
            Nnf::False => return Nnf::False,
            Nnf::And(qs) => out.extend(qs),
            q => out.push(q),
        }
    }
    match out.len() {
        0 => Nnf::True,
        1 => out.pop().expect("one"),
        _ => Nnf::And(out),
    }
}

fn mk_or(parts: Vec<Nnf>) -> Nnf {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Nnf::False => {}
            Nnf::True => return Nnf::True,
            Nnf::Or(qs) => out.extend(qs),
            q => out.push(q),
        }
    }
    match out.len() {
        0 => Nnf::False,
        1 => out.pop().expect("one"),
        _ => Nnf::Or(out),
    }
}

struct Builder {
    locations: Vec<Location>,
    index: HashMap<(Kind, Nnf, String, Nnf), usize>,
}

impl Builder {
    fn nnf(&mut self, f: &Mtl<Prop>, positive: bool) -> Nnf {
        match f {
            Mtl::True => {
                if positive {
                    Nnf::True
                } else {
                    Nnf::False
                }
            }
            Mtl::False => {
                if positive {
                    Nnf::False
                } else {
                    Nnf::True
                }
            }
            Mtl::Atom(p) => Nnf::Lit(p.clone(), positive),
            Mtl::Not(g) => self.nnf(g, !positive),
            Mtl::And(a, b) => {
                let parts = vec![self.nnf(a, positive), self.nnf(b, positive)];
                if positive {
                    mk_and(parts)
                } else {
                    mk_or(parts)
                }
            }
            Mtl::Or(a, b) => {
                let parts = vec![self.nnf(a, positive), self.nnf(b, positive)];
                if positive {
                    mk_or(parts)
                } else {
                    mk_and(parts)
                }
            }
            Mtl::Until(a, i, b) => {
                let kind = if positive { Kind::Until } else { Kind::Release };
                let lhs = self.nnf(a, positive);
                let rhs = self.nnf(b, positive);
                let key = (kind, lhs.clone(), i.to_string(), rhs.clone());
                if let Some(&k) = self.index.get(&key) {
                    return Nnf::Loc(k);
                }
                let k = self.locations.len();
                self.locations.push(Location {
                    kind,
                    lhs,
                    interval: i.clone(),
                    rhs,
                });
                self.index.insert(key, k);
                Nnf::Loc(k)
            }
        }
    }
}

/// Product of two DNFs.
fn dnf_and(a: &Dnf, b: &Dnf) -> Dnf {
    let mut out = Dnf::new();
    for x in a {
        for y in b {
            out.insert(x.union(y).cloned().collect());
        }
    }
    out
}

fn unit() -> Dnf {
    Dnf::from([Config::new()])
}

fn may_continue(i: &Interval, d: &Option<Rational>) -> bool {
    match (d, &i.upper) {
        (None, _) | (_, None) => true,
        (Some(d), Some(u)) => d < u || (d == u && !i.upper_open),
    }
}

fn past_lower(i: &Interval, d: &Rational) -> bool {
    *d > i.lower || (*d == i.lower && !i.lower_open)
}

impl SpecAutomaton {
    /// The automaton for the violations of `constraints`; every interval
    /// endpoint must be granular when `mu` is given.
    pub fn new(constraints: &[Mtl<Prop>], mu: Option<&Granularity>) -> Result<SpecAutomaton> {
        if let Some(mu) = mu {
            for c in constraints {
                for i in c.intervals() {
                    mu.check_interval(i)?;
                }
            }
        }
        let conj = Mtl::and_all(constraints.iter().cloned());
        let mut b = Builder {
            locations: Vec::new(),
            index: HashMap::new(),
        };
        let root = b.nnf(&conj, true);
        Ok(SpecAutomaton {
            root,
            locations: b.locations,
            empty_ok: conj.eval_empty(),
        })
    }

    pub fn initial(&self) -> Dnf {
        Dnf::from([Config::from([Obl {
            loc: None,
            clock: None,
        }])])
    }

    /// A fresh obligation for location `k` spawned at the current position.
    fn spawn(&self, k: usize) -> Obl {
        self.normalize(k, Some(Rational::default()))
    }

    /// Drops the clock once its value can no longer matter.
    fn normalize(&self, k: usize, clock: Option<Rational>) -> Obl {
        let i = &self.locations[k].interval;
        let clock = match clock {
            Some(d) if i.upper.is_none() && past_lower(i, &d) => None,
            c => c,
        };
        Obl {
            loc: Some(k),
            clock,
        }
    }

    fn expand(&self, f: &Nnf, sym: &Symbol) -> Dnf {
        match f {
            Nnf::True => unit(),
            Nnf::False => Dnf::new(),
            Nnf::Lit(p, pos) => {
                if sym.contains(p) == *pos {
                    unit()
                } else {
                    Dnf::new()
                }
            }
            Nnf::And(parts) => {
                let mut acc = unit();
                for p in parts {
                    if acc.is_empty() {
                        break;
                    }
                    acc = dnf_and(&acc, &self.expand(p, sym));
                }
                acc
            }
            Nnf::Or(parts) => parts.iter().flat_map(|p| self.expand(p, sym)).collect(),
            Nnf::Loc(k) => Dnf::from([Config::from([self.spawn(*k)])]),
        }
    }

    fn step_obl(&self, o: &Obl, sym: &Symbol) -> Dnf {
        let Some(k) = o.loc else {
            return self.expand(&self.root, sym);
        };
        let loc = &self.locations[k];
        let i = &loc.interval;
        let inside = o.clock.as_ref().is_none_or(|d| i.contains(d));
        let keep = may_continue(i, &o.clock)
            .then(|| Dnf::from([Config::from([self.normalize(k, o.clock)])]));
        match loc.kind {
            Kind::Until => {
                let mut out = if inside {
                    self.expand(&loc.rhs, sym)
                } else {
                    Dnf::new()
                };
                if let Some(keep) = keep {
                    out.extend(dnf_and(&self.expand(&loc.lhs, sym), &keep));
                }
                out
            }
            Kind::Release => {
                let now = if inside {
                    self.expand(&loc.rhs, sym)
                } else {
                    unit()
                };
                let later = match keep {
                    Some(keep) => self.expand(&loc.lhs, sym).union(&keep).cloned().collect(),
                    None => unit(),
                };
                dnf_and(&now, &later)
            }
        }
    }

    /// Advances every configuration by `delay` and reads `sym`.
    pub fn step(&self, dnf: &Dnf, delay: Rational, sym: &Symbol) -> Dnf {
        let mut out = Dnf::new();
        for config in dnf {
            let mut acc = unit();
            for o in config {
                let shifted = Obl {
                    loc: o.loc,
                    clock: o.clock.map(|c| c + delay),
                };
                acc = dnf_and(&acc, &self.step_obl(&shifted, sym));
                if acc.is_empty() {
                    break;
                }
            }
            out.extend(acc);
        }
        self.minimize(out)
    }

    /// Keeps the strongest copy of each simple bounded obligation and drops
    /// configurations subsumed by smaller ones.
    fn minimize(&self, dnf: Dnf) -> Dnf {
        let configs: Vec<Config> = dnf
            .into_iter()
            .map(|c| self.dominate(c))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut out = Dnf::new();
        for (n, c) in configs.iter().enumerate() {
            let subsumed = configs
                .iter()
                .enumerate()
                .any(|(m, d)| m != n && self.covers(c, d) && (m < n || !self.covers(d, c)));
            if !subsumed {
                out.insert(c.clone());
            }
        }
        out
    }

    /// Whether copies of location `k` are ordered by age: (younger is
    /// stronger, older is stronger).
    fn ordered(&self, k: usize) -> (bool, bool) {
        let loc = &self.locations[k];
        let from_zero = loc.interval.lower == Rational::default() && !loc.interval.lower_open;
        (
            loc.kind == Kind::Release && loc.lhs == Nnf::False && from_zero,
            loc.kind == Kind::Until && loc.lhs == Nnf::True && from_zero,
        )
    }

    fn implies(&self, b: &Obl, a: &Obl) -> bool {
        if b == a {
            return true;
        }
        match (b.loc, b.clock, a.loc, a.clock) {
            (Some(k), Some(x), Some(l), Some(y)) if k == l => match self.ordered(k) {
                (true, _) => x <= y,
                (_, true) => x >= y,
                _ => false,
            },
            _ => false,
        }
    }

    /// Every obligation of `weak` is implied by one of `strong`.
    fn covers(&self, strong: &Config, weak: &Config) -> bool {
        weak.iter()
            .all(|a| strong.iter().any(|b| self.implies(b, a)))
    }

    fn dominate(&self, c: Config) -> Config {
        let mut best: HashMap<usize, Rational> = HashMap::new();
        let mut rest = Config::new();
        for o in c {
            let (Some(k), Some(d)) = (o.loc, o.clock) else {
                rest.insert(o);
                continue;
            };
            let (youngest, oldest) = self.ordered(k);
            if youngest || oldest {
                let e = best.entry(k).or_insert(d);
                if (youngest && d < *e) || (oldest && d > *e) {
                    *e = d;
                }
            } else {
                rest.insert(o);
            }
        }
        rest.extend(best.into_iter().map(|(k, d)| Obl {
            loc: Some(k),
            clock: Some(d),
        }));
        rest
    }

    /// True iff the word read so far satisfies the constraints.
    pub fn satisfied(&self, dnf: &Dnf) -> bool {
        dnf.iter().any(|c| {
            c.iter().all(|o| match o.loc {
                None => self.empty_ok,
                Some(k) => self.locations[k].kind == Kind::Release,
            })
        })
    }

    pub fn run(&self, word: &[TimedLetter]) -> Dnf {
        let mut dnf = self.initial();
        let mut now = Rational::default();
        for (n, l) in word.iter().enumerate() {
            let delay = if n == 0 {
                Rational::default()
            } else {
                l.time - now
            };
            now = l.time;
            dnf = self.step(&dnf, delay, &l.symbol);
        }
        dnf
    }

    /// Membership in the automaton's language: the word violates the constraints.
    pub fn accepts(&self, word: &[TimedLetter]) -> bool {
        !self.satisfied(&self.run(word))
    }
}

impl fmt::Display for Nnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nnf::True => f.write_str("true"),
            Nnf::False => f.write_str("false"),
            Nnf::Lit(p, true) => write!(f, "{p}"),
            Nnf::Lit(p, false) => write!(f, "!{p}"),
            Nnf::And(ps) | Nnf::Or(ps) => {
                let sep = if matches!(self, Nnf::And(_)) {
                    " & "
                } else {
                    " | "
                };
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", parts.join(sep))
            }
            Nnf::Loc(k) => write!(f, "L{k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ta::symbol;
    use crate::time::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn atom(s: &str) -> Mtl<Prop> {
        Mtl::atom(Prop::new(s))
    }

    fn random_interval(rng: &mut ChaCha8Rng) -> Interval {
        let a = int(rng.gen_range(0..3));
        let b = a + int(rng.gen_range(0..3));
        match rng.gen_range(0..5) {
            0 => Interval::unbounded(),
            1 => Interval::at_most(b),
            2 => Interval::less_than(b + int(1)),
            3 => Interval::greater_than(a),
            _ => Interval::closed(a, b),
        }
    }

    fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> Mtl<Prop> {
        if depth == 0 || rng.gen_bool(0.2) {
            return match rng.gen_range(0..4) {
                0 => atom("p"),
                1 => atom("q"),
                2 => Mtl::not(atom("p")),
                _ => Mtl::True,
            };
        }
        let a = random_formula(rng, depth - 1);
        let b = random_formula(rng, depth - 1);
        match rng.gen_range(0..6) {
            0 => Mtl::and(a, b),
            1 => Mtl::or(a, b),
            2 => Mtl::not(a),
            3 => Mtl::eventually(random_interval(rng), a),
            4 => Mtl::always(random_interval(rng), a),
            _ => Mtl::until(a, random_interval(rng), b),
        }
    }

    fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Vec<TimedLetter> {
        let mut t = int(0);
        (0..len)
            .map(|_| {
                t += Rational::new(rng.gen_range(0..5), 2);
                let symbol = match rng.gen_range(0..4) {
                    0 => symbol([]),
                    1 => symbol(["p"]),
                    2 => symbol(["q"]),
                    _ => symbol(["p", "q"]),
                };
                TimedLetter { time: t, symbol }
            })
            .collect()
    }

    #[test]
    fn agrees_with_direct_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let phis: Vec<Mtl<Prop>> = (0..rng.gen_range(1..3))
                .map(|_| random_formula(&mut rng, 3))
                .collect();
            let spec = SpecAutomaton::new(&phis, None).unwrap();
            for len in 0..7 {
                let w = random_word(&mut rng, len);
                let direct = phis.iter().all(|f| f.holds(&w));
                assert_eq!(
                    spec.accepts(&w),
                    !direct,
                    "{:?} on {}",
                    phis,
                    crate::ta::format_word(&w)
                );
            }
        }
    }

    #[test]
    fn empty_constraint_set_accepts_nothing() {
        let spec = SpecAutomaton::new(&[], None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for len in 0..5 {
            assert!(!spec.accepts(&random_word(&mut rng, len)));
        }
        assert!(spec.locations.is_empty());
    }

    #[test]
    fn globally_is_violated_by_one_bad_position() {
        let spec =
            SpecAutomaton::new(&[Mtl::always(Interval::unbounded(), atom("p"))], None).unwrap();
        let good = vec![
            TimedLetter {
                time: int(0),
                symbol: symbol([]),
            },
            TimedLetter {
                time: int(1),
                symbol: symbol(["p"]),
            },
        ];
        let mut bad = good.clone();
        bad.push(TimedLetter {
            time: int(2),
            symbol: symbol(["q"]),
        });
        assert!(!spec.accepts(&good));
        assert!(spec.accepts(&bad));
        assert_eq!(spec.locations.len(), 1);
    }

    #[test]
    fn bounded_obligations_keep_one_copy() {
        let f = Mtl::always(
            Interval::unbounded(),
            Mtl::always(Interval::at_most(int(10)), Mtl::not(atom("p"))),
        );
        let spec = SpecAutomaton::new(&[f], None).unwrap();
        let w: Vec<TimedLetter> = (0..6)
            .map(|t| TimedLetter {
                time: int(t),
                symbol: symbol(["q"]),
            })
            .collect();
        let dnf = spec.run(&w);
        assert_eq!(dnf.len(), 1);
        assert!(dnf.iter().next().unwrap().len() <= 2);
    }
}
