//! Golog programs: transition semantics over configurations, finality, traces
//! and bounded verification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::rc::Rc;

use crate::bat::{BasicActionTheory, WorldState};
use crate::error::{Error, Result};
use crate::logic::{
    eval_static, fold_constants, ground_with, resolve_term, Domain, Env, Formula, Name, Sort, Term,
};
use crate::mtl::Mtl;
use crate::ta::{Prop, Symbol, TimedLetter, TimedWord};
use crate::time::zero;

/// Program syntax as written, with variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Program {
    Action(Term),
    Test(Formula),
    Seq(Box<Program>, Box<Program>),
    Choice(Box<Program>, Box<Program>),
    Pick {
        var: String,
        sort: Sort,
        body: Box<Program>,
    },
    Interleave(Box<Program>, Box<Program>),
    Star(Box<Program>),
}

impl Program {
    pub fn nil() -> Program {
        Program::Test(Formula::True)
    }

    pub fn seq(a: Program, b: Program) -> Program {
        Program::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: Program, b: Program) -> Program {
        Program::Choice(Box::new(a), Box::new(b))
    }

    pub fn interleave(a: Program, b: Program) -> Program {
        Program::Interleave(Box::new(a), Box::new(b))
    }

    pub fn star(a: Program) -> Program {
        Program::Star(Box::new(a))
    }

    pub fn action(symbol: &str, args: &[&str]) -> Program {
        Program::Action(Term::App(
            symbol.to_string(),
            args.iter().map(|a| Term::Sym(a.to_string())).collect(),
        ))
    }
}

/// A ground program: picks are expanded into choices, tests are ground.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prog {
    Act(Name),
    Test(Formula),
    Seq(Rc<Prog>, Rc<Prog>),
    Choice(Vec<Rc<Prog>>),
    Par(Rc<Prog>, Rc<Prog>),
    Star(Rc<Prog>),
}

impl Prog {
    pub fn nil() -> Rc<Prog> {
        Rc::new(Prog::Test(Formula::True))
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Prog::Test(Formula::True))
    }
}

impl fmt::Display for Prog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prog::Act(a) => write!(f, "{a}"),
            Prog::Test(Formula::True) => f.write_str("nil"),
            Prog::Test(phi) => write!(f, "?({phi})"),
            Prog::Seq(a, b) => write!(f, "{a}; {b}"),
            Prog::Choice(alts) => {
                f.write_str("(")?;
                for (i, a) in alts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Prog::Par(a, b) => write!(f, "({a} || {b})"),
            Prog::Star(a) => write!(f, "({a})*"),
        }
    }
}

/// Grounds a program, expanding every pick over its sort's extension.
pub fn ground_program(p: &Program, d: &Domain) -> Result<Rc<Prog>> {
    ground_prog_with(p, d, &Env::new())
}

fn ground_prog_with(p: &Program, d: &Domain, env: &Env) -> Result<Rc<Prog>> {
    Ok(Rc::new(match p {
        Program::Action(t) => {
            let a = resolve_term(t, d, env)?;
            if !d.is_action(&a) {
                return Err(Error::Declaration(format!(
                    "program uses undeclared action {a}"
                )));
            }
            Prog::Act(a)
        }
        Program::Test(phi) => Prog::Test(fold_constants(&ground_with(phi, d, env)?)),
        Program::Seq(a, b) => Prog::Seq(ground_prog_with(a, d, env)?, ground_prog_with(b, d, env)?),
        Program::Choice(a, b) => Prog::Choice(vec![
            ground_prog_with(a, d, env)?,
            ground_prog_with(b, d, env)?,
        ]),
        Program::Pick { var, sort, body } => {
            let mut alts = Vec::new();
            for n in d.extension(*sort) {
                let mut inner = env.clone();
                inner.insert(var.clone(), n.clone());
                alts.push(ground_prog_with(body, d, &inner)?);
            }
            Prog::Choice(alts)
        }
        Program::Interleave(a, b) => {
            Prog::Par(ground_prog_with(a, d, env)?, ground_prog_with(b, d, env)?)
        }
        Program::Star(a) => Prog::Star(ground_prog_with(a, d, env)?),
    }))
}

/// Normal form used for quotienting: nil removed from sequences and
/// interleavings, sequences right-nested, choices flattened, sorted and
/// deduplicated.
pub fn canonicalize(p: &Rc<Prog>) -> Rc<Prog> {
    match p.as_ref() {
        Prog::Act(_) | Prog::Test(_) => p.clone(),
        Prog::Seq(..) => {
            let mut parts = Vec::new();
            flatten_seq(p, &mut parts);
            let parts: Vec<Rc<Prog>> = parts
                .iter()
                .map(canonicalize)
                .filter(|q| !q.is_nil())
                .collect();
            parts
                .into_iter()
                .rev()
                .reduce(|acc, q| Rc::new(Prog::Seq(q, acc)))
                .unwrap_or_else(Prog::nil)
        }
        Prog::Choice(alts) => {
            let mut set = BTreeSet::new();
            for a in alts {
                match canonicalize(a).as_ref() {
                    Prog::Choice(inner) => set.extend(inner.iter().cloned()),
                    _ => {
                        set.insert(canonicalize(a));
                    }
                }
            }
            if set.len() == 1 {
                set.into_iter().next().expect("one alternative")
            } else {
                Rc::new(Prog::Choice(set.into_iter().collect()))
            }
        }
        Prog::Par(a, b) => {
            let (a, b) = (canonicalize(a), canonicalize(b));
            if a.is_nil() {
                b
            } else if b.is_nil() {
                a
            } else {
                Rc::new(Prog::Par(a, b))
            }
        }
        Prog::Star(a) => {
            let a = canonicalize(a);
            if a.is_nil() {
                a
            } else {
                Rc::new(Prog::Star(a))
            }
        }
    }
}

fn flatten_seq(p: &Rc<Prog>, out: &mut Vec<Rc<Prog>>) {
    match p.as_ref() {
        Prog::Seq(a, b) => {
            flatten_seq(a, out);
            flatten_seq(b, out);
        }
        _ => out.push(p.clone()),
    }
}

/// The transition rule applied at the top of the program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Primitive,
    SeqLeft,
    SeqRight,
    Choice,
    Star,
    InterleaveLeft,
    InterleaveRight,
}

/// One-step successors of a ground program in a world state.
pub fn trans(
    p: &Rc<Prog>,
    s: &WorldState,
    bat: &BasicActionTheory,
) -> Result<Vec<(Rule, Name, Rc<Prog>)>> {
    let mut out = Vec::new();
    match p.as_ref() {
        Prog::Act(a) => {
            if bat.poss(a, s)? {
                out.push((Rule::Primitive, a.clone(), Prog::nil()));
            }
        }
        Prog::Test(_) => {}
        Prog::Seq(d1, d2) => {
            for (_, a, g) in trans(d1, s, bat)? {
                out.push((Rule::SeqLeft, a, Rc::new(Prog::Seq(g, d2.clone()))));
            }
            if is_final_prog(d1, s)? {
                for (_, a, g) in trans(d2, s, bat)? {
                    out.push((Rule::SeqRight, a, g));
                }
            }
        }
        Prog::Choice(alts) => {
            for d in alts {
                for (_, a, g) in trans(d, s, bat)? {
                    out.push((Rule::Choice, a, g));
                }
            }
        }
        Prog::Star(d) => {
            for (_, a, g) in trans(d, s, bat)? {
                out.push((Rule::Star, a, Rc::new(Prog::Seq(g, p.clone()))));
            }
        }
        Prog::Par(d1, d2) => {
            for (_, a, g) in trans(d1, s, bat)? {
                out.push((Rule::InterleaveLeft, a, Rc::new(Prog::Par(g, d2.clone()))));
            }
            for (_, a, g) in trans(d2, s, bat)? {
                out.push((Rule::InterleaveRight, a, Rc::new(Prog::Par(d1.clone(), g))));
            }
        }
    }
    Ok(out)
}

pub fn is_final_prog(p: &Prog, s: &WorldState) -> Result<bool> {
    Ok(match p {
        Prog::Act(_) => false,
        Prog::Test(phi) => eval_static(phi, s)?,
        Prog::Seq(a, b) => is_final_prog(a, s)? && is_final_prog(b, s)?,
        Prog::Choice(alts) => {
            for a in alts {
                if is_final_prog(a, s)? {
                    return Ok(true);
                }
            }
            false
        }
        Prog::Star(_) => true,
        Prog::Par(a, b) => is_final_prog(a, s)? && is_final_prog(b, s)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: WorldState,
    pub trace: Vec<Name>,
    pub remaining: Rc<Prog>,
}

impl Configuration {
    pub fn initial(bat: &BasicActionTheory, program: Rc<Prog>) -> Result<Configuration> {
        Ok(Configuration {
            state: bat.initial_state()?,
            trace: Vec::new(),
            remaining: program,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub action: Name,
    pub next: Configuration,
}

/// Successors per the transition rules; remainders are left as the rules build them.
pub fn steps(c: &Configuration, bat: &BasicActionTheory) -> Result<Vec<Step>> {
    let mut out = Vec::new();
    for (rule, action, remaining) in trans(&c.remaining, &c.state, bat)? {
        let state = bat.progress(&c.state, &action)?;
        let mut trace = c.trace.clone();
        trace.push(action.clone());
        out.push(Step {
            rule,
            action,
            next: Configuration {
                state,
                trace,
                remaining,
            },
        });
    }
    Ok(out)
}

pub fn is_final(c: &Configuration, _bat: &BasicActionTheory) -> Result<bool> {
    is_final_prog(&c.remaining, &c.state)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSet {
    pub traces: BTreeSet<Vec<Name>>,
    /// Some configuration at the bound could still move.
    pub truncated: bool,
}

pub fn enumerate_traces(
    bat: &BasicActionTheory,
    program: &Rc<Prog>,
    max_len: usize,
) -> Result<TraceSet> {
    let start = canonicalize(program);
    let mut layer: BTreeMap<(Vec<Name>, Rc<Prog>), WorldState> = BTreeMap::new();
    layer.insert((Vec::new(), start), bat.initial_state()?);
    let mut traces = BTreeSet::new();
    let mut truncated = false;
    for depth in 0..=max_len {
        let mut next = BTreeMap::new();
        for ((trace, prog), state) in &layer {
            if is_final_prog(prog, state)? {
                traces.insert(trace.clone());
            }
            let succ = trans(prog, state, bat)?;
            if depth == max_len {
                truncated |= !succ.is_empty();
                continue;
            }
            for (_, a, g) in succ {
                let s2 = bat.progress(state, &a)?;
                let mut t2 = trace.clone();
                t2.push(a);
                next.insert((t2, canonicalize(&g)), s2);
            }
        }
        layer = next;
    }
    Ok(TraceSet { traces, truncated })
}

/// The symbol observed after an action: every true atom plus the action name.
pub fn observation(state: &WorldState, action: Option<&Name>) -> Symbol {
    let mut sym: Symbol = state.atoms().iter().map(Prop::from).collect();
    if let Some(a) = action {
        sym.insert(Prop::from(a));
    }
    sym
}

/// States visited by replaying a trace from the initial state, initial state first.
pub fn replay(bat: &BasicActionTheory, trace: &[Name]) -> Result<Vec<WorldState>> {
    let mut s = bat.initial_state()?;
    let mut out = vec![s.clone()];
    for a in trace {
        if !bat.poss(a, &s)? {
            return Err(Error::input(format!("action {a} is not executable in {s}")));
        }
        s = bat.progress(&s, a)?;
        out.push(s.clone());
    }
    Ok(out)
}

/// The zero-timed word of a trace: the initial observation followed by one
/// letter per action.
pub fn zero_timed_word(bat: &BasicActionTheory, trace: &[Name]) -> Result<TimedWord> {
    let states = replay(bat, trace)?;
    let mut word = vec![TimedLetter {
        symbol: observation(&states[0], None),
        time: zero(),
    }];
    for (a, s) in trace.iter().zip(&states[1..]) {
        word.push(TimedLetter {
            symbol: observation(s, Some(a)),
            time: zero(),
        });
    }
    Ok(word)
}

pub enum Property<'a> {
    /// A situation formula that must hold at every final configuration.
    After(&'a Formula),
    /// A trace formula evaluated on the zero-timed word of every trace.
    During(&'a Mtl<Prop>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<Vec<Name>>,
    /// The trace enumeration hit the bound with moves left.
    pub bounded: bool,
}

pub fn verify_program(
    bat: &BasicActionTheory,
    program: &Rc<Prog>,
    property: Property<'_>,
    max_len: usize,
) -> Result<Verdict> {
    let set = enumerate_traces(bat, program, max_len)?;
    let after = match &property {
        Property::After(phi) => Some(fold_constants(&ground_with(
            phi,
            bat.domain(),
            &Env::new(),
        )?)),
        Property::During(_) => None,
    };
    for trace in &set.traces {
        let ok = match &property {
            Property::After(_) => {
                let states = replay(bat, trace)?;
                eval_static(
                    after.as_ref().expect("grounded"),
                    states.last().expect("initial state"),
                )?
            }
            Property::During(phi) => phi.holds(&zero_timed_word(bat, trace)?),
        };
        if !ok {
            return Ok(Verdict {
                holds: false,
                counterexample: Some(trace.clone()),
                bounded: set.truncated,
            });
        }
    }
    Ok(Verdict {
        holds: true,
        counterexample: None,
        bounded: set.truncated,
    })
}
