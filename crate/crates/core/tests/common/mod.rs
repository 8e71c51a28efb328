#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use golog_synth::bat::BasicActionTheory;
use golog_synth::bundle::Bundle;
use golog_synth::golog::Program;
use golog_synth::logic::{eval_static, ground_with, resolve_term, Domain, Env, Formula, Name};

pub fn fixture_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn carrier() -> Bundle {
    Bundle::load_dir(&fixture_dir("carrier")).expect("carrier fixture loads")
}

/// Programs over the carrier theory covering every construct.
pub const PROGRAMS: &[&str] = &[
    "s_goto(m1,m2)",
    "s_goto(m1,m2); e_goto(m1,m2)",
    "do goto(m1,m2); do pick(o1)",
    "s_goto(m1,m2) | s_goto(m1,o1)",
    "?RAt(m1); do goto(m1,m2)",
    "?RAt(m2); do goto(m2,m1)",
    "pi x:o { do goto(m1,x) }",
    "pi x:o { ?At(o1,x); do goto(m1,x) }",
    "(do goto(m1,m2))*",
    "(s_goto(m1,m2); e_goto(m1,m2) | s_goto(m2,m1); e_goto(m2,m1))*",
    "do goto(m1,m2) || do pick(o1)",
    "s_goto(m1,m2) || e_goto(m1,m2)",
    "(do goto(m1,m2); ?RAt(m2)) || ?Holding(o1)",
    "do goto(m1,m2); (do pick(o1) | nil)",
    "pi lr:o { ?RAt(lr); pi o:o { pi lo:o { ?At(o,lo); do goto(lr,lo); do pick(o) } } }",
    "pi l:o { ?RAt(l); pi g:o { do goto(l,g) } }; do pick(o1)",
    "(?RAt(m1); do goto(m1,m2) | ?RAt(m2); do goto(m2,m1))*",
    "do goto(m1,m2); (?RAt(m2) || do pick(o1))",
    "(s_pick(o1))*; do goto(m1,m2)",
    "pi o:o { pi l:o { ?At(o,l); do goto(m1,l); do pick(o) } } || ?Holding(o1)",
    "do goto(m1,m2) || do goto(m2,m1)",
    "nil",
    "?(RAt(m1) & !RAt(m2)); (do goto(m1,m2))*; ?RAt(m2); do pick(o1)",
    "(pi x:o { s_goto(m1,x) })*",
];

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Item {
    Test(Formula),
    Act(Name),
}

type GuardedWord = Vec<Item>;

fn acts(w: &GuardedWord) -> usize {
    w.iter().filter(|i| matches!(i, Item::Act(_))).count()
}

/// Splits a word into blocks ending in an action, plus the trailing tests.
fn blocks(w: &GuardedWord) -> (Vec<GuardedWord>, GuardedWord) {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for i in w {
        cur.push(i.clone());
        if matches!(i, Item::Act(_)) {
            out.push(std::mem::take(&mut cur));
        }
    }
    (out, cur)
}

fn shuffle(
    a: &[GuardedWord],
    b: &[GuardedWord],
    prefix: &mut GuardedWord,
    out: &mut BTreeSet<GuardedWord>,
    tail: &GuardedWord,
) {
    if a.is_empty() && b.is_empty() {
        let mut w = prefix.clone();
        w.extend(tail.iter().cloned());
        out.insert(w);
        return;
    }
    let n = prefix.len();
    if let Some((x, rest)) = a.split_first() {
        prefix.extend(x.iter().cloned());
        shuffle(rest, b, prefix, out, tail);
        prefix.truncate(n);
    }
    if let Some((y, rest)) = b.split_first() {
        prefix.extend(y.iter().cloned());
        shuffle(a, rest, prefix, out, tail);
        prefix.truncate(n);
    }
}

/// Guarded words of a program with at most `n` actions: tests are checked in
/// the state reached when they are met, an interleaved component's tests
/// travel with its next action.
fn words(p: &Program, d: &Domain, env: &Env, n: usize) -> BTreeSet<GuardedWord> {
    let mut out = BTreeSet::new();
    match p {
        Program::Action(t) => {
            if n >= 1 {
                out.insert(vec![Item::Act(resolve_term(t, d, env).unwrap())]);
            }
        }
        Program::Test(phi) => {
            out.insert(vec![Item::Test(ground_with(phi, d, env).unwrap())]);
        }
        Program::Seq(a, b) => {
            for w1 in words(a, d, env, n) {
                for w2 in words(b, d, env, n - acts(&w1)) {
                    out.insert(w1.iter().chain(&w2).cloned().collect());
                }
            }
        }
        Program::Choice(a, b) => {
            out.extend(words(a, d, env, n));
            out.extend(words(b, d, env, n));
        }
        Program::Pick { var, sort, body } => {
            for name in d.extension(*sort) {
                let mut inner = env.clone();
                inner.insert(var.clone(), name.clone());
                out.extend(words(body, d, &inner, n));
            }
        }
        Program::Interleave(a, b) => {
            for w1 in words(a, d, env, n) {
                for w2 in words(b, d, env, n - acts(&w1)) {
                    let (b1, t1) = blocks(&w1);
                    let (b2, t2) = blocks(&w2);
                    let tail: GuardedWord = t1.into_iter().chain(t2).collect();
                    shuffle(&b1, &b2, &mut Vec::new(), &mut out, &tail);
                }
            }
        }
        Program::Star(a) => {
            out.insert(Vec::new());
            let mut frontier = vec![Vec::new()];
            while let Some(w) = frontier.pop() {
                for v in words(a, d, env, n - acts(&w)) {
                    if acts(&v) == 0 {
                        continue;
                    }
                    let next: GuardedWord = w.iter().chain(&v).cloned().collect();
                    if out.insert(next.clone()) {
                        frontier.push(next);
                    }
                }
            }
        }
    }
    out
}

/// Action traces of complete executions with at most `n` actions, computed
/// from guarded words independently of the transition rules.
pub fn oracle_traces(bat: &BasicActionTheory, p: &Program, n: usize) -> BTreeSet<Vec<Name>> {
    let mut out = BTreeSet::new();
    'word: for w in words(p, bat.domain(), &Env::new(), n) {
        let mut s = bat.initial_state().unwrap();
        let mut trace = Vec::new();
        for item in &w {
            match item {
                Item::Test(phi) => {
                    if !eval_static(phi, &s).unwrap() {
                        continue 'word;
                    }
                }
                Item::Act(a) => {
                    if !bat.poss(a, &s).unwrap() {
                        continue 'word;
                    }
                    s = bat.progress(&s, a).unwrap();
                    trace.push(a.clone());
                }
            }
        }
        out.insert(trace);
    }
    out
}

use golog_synth::mtl::Mtl;
use golog_synth::ta::{Guard, Rel, Symbol, TimedAutomaton, TimedLetter, TimedWord, Transition};
use golog_synth::time::{Interval, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn test_intervals() -> Vec<Interval> {
    vec![
        Interval::unbounded(),
        Interval::at_most(r(1, 1)),
        Interval {
            lower_open: true,
            ..Interval::closed(r(1, 1), r(2, 1))
        },
    ]
}

/// Every formula of nesting depth at most `depth` over the given leaves.
pub fn formulas<A: Clone>(leaves: &[Mtl<A>], depth: usize) -> Vec<Mtl<A>> {
    let mut all: Vec<Mtl<A>> = [Mtl::True, Mtl::False]
        .into_iter()
        .chain(leaves.iter().cloned())
        .collect();
    for _ in 0..depth {
        let prev = all.clone();
        let mut next = prev.clone();
        for f in &prev {
            next.push(Mtl::not(f.clone()));
        }
        for f in &prev {
            for g in &prev {
                next.push(Mtl::and(f.clone(), g.clone()));
                next.push(Mtl::or(f.clone(), g.clone()));
                for i in test_intervals() {
                    next.push(Mtl::until(f.clone(), i, g.clone()));
                }
            }
        }
        all = next;
    }
    all
}

/// Non-empty words of at most `len` letters over `symbols` with times from `times`.
pub fn words_over(symbols: &[Symbol], times: &[Rational], len: usize) -> Vec<TimedWord> {
    let mut out = Vec::new();
    let mut layer: Vec<TimedWord> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            let last = w.last().map(|l| l.time).unwrap_or_default();
            for t in times.iter().filter(|t| **t >= last) {
                for s in symbols {
                    let mut v = w.clone();
                    v.push(TimedLetter {
                        time: *t,
                        symbol: s.clone(),
                    });
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Words whose delays between letters come from `delays`, including the empty word.
pub fn words_with_delays(symbols: &[Symbol], delays: &[Rational], len: usize) -> Vec<TimedWord> {
    let mut out: Vec<TimedWord> = vec![Vec::new()];
    let mut layer: Vec<TimedWord> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            let last = w.last().map(|l| l.time).unwrap_or_default();
            for d in delays {
                for s in symbols {
                    let mut v = w.clone();
                    v.push(TimedLetter {
                        time: last + *d,
                        symbol: s.clone(),
                    });
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A random automaton with up to three locations over `symbols`, owning `clock`.
pub fn random_automaton(rng: &mut impl Rng, symbols: &[Symbol], clock: &str) -> TimedAutomaton {
    let n = rng.gen_range(1..=3);
    let locations: Vec<String> = (0..n).map(|i| format!("{clock}{i}")).collect();
    let constants = [r(1, 2), r(1, 1), r(3, 2)];
    let rels = [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ge, Rel::Gt];
    let mut transitions = Vec::new();
    for _ in 0..rng.gen_range(1..=5) {
        let guard = if rng.gen_bool(0.5) {
            Guard::cmp(
                clock,
                *rels.choose(rng).unwrap(),
                *constants.choose(rng).unwrap(),
            )
        } else {
            Guard::top()
        };
        let resets = if rng.gen_bool(0.4) {
            BTreeSet::from([clock.to_string()])
        } else {
            BTreeSet::new()
        };
        transitions.push(Transition {
            from: locations.choose(rng).unwrap().clone(),
            symbol: symbols.choose(rng).unwrap().clone(),
            guard,
            resets,
            to: locations.choose(rng).unwrap().clone(),
        });
    }
    transitions.sort();
    transitions.dedup();
    TimedAutomaton {
        initial: locations[0].clone(),
        finals: locations
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .cloned()
            .collect(),
        locations,
        clocks: BTreeSet::from([clock.to_string()]),
        actions: BTreeSet::new(),
        transitions,
    }
}
