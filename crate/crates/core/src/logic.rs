//! Standard names, ground atoms, situation formulas and grounding over finite domains.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sort {
    Object,
    Action,
    PerfToken,
}

impl Sort {
    /// The one-letter tag used by quantifiers (`exists x:o.`).
    pub fn tag(self) -> &'static str {
        match self {
            Sort::Object => "o",
            Sort::Action => "a",
            Sort::PerfToken => "p",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Sort> {
        match tag {
            "o" => Some(Sort::Object),
            "a" => Some(Sort::Action),
            "p" => Some(Sort::PerfToken),
            _ => None,
        }
    }
}

/// A standard name. Object names carry no arguments; action and perf-token
/// names take object names as arguments. Equality is syntactic identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    pub sort: Sort,
    pub symbol: String,
    pub args: Vec<Name>,
}

impl Name {
    pub fn object(symbol: impl Into<String>) -> Name {
        Name {
            sort: Sort::Object,
            symbol: symbol.into(),
            args: Vec::new(),
        }
    }

    pub fn action(symbol: impl Into<String>, args: &[&str]) -> Name {
        Name::compound(Sort::Action, symbol, args)
    }

    pub fn perf_token(symbol: impl Into<String>, args: &[&str]) -> Name {
        Name::compound(Sort::PerfToken, symbol, args)
    }

    fn compound(sort: Sort, symbol: impl Into<String>, args: &[&str]) -> Name {
        Name {
            sort,
            symbol: symbol.into(),
            args: args.iter().map(|a| Name::object(*a)).collect(),
        }
    }
}

fn write_application<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    symbol: &str,
    args: &[T],
) -> fmt::Result {
    f.write_str(symbol)?;
    if !args.is_empty() {
        f.write_str("(")?;
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_application(f, &self.symbol, &self.args)
    }
}

/// A primitive formula: predicate applied to standard names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<Name>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Name>) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            args,
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_application(f, &self.predicate, &self.args)
    }
}

/// Finite set of true ground atoms; every absent atom is false.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldState {
    atoms: BTreeSet<GroundAtom>,
}

impl WorldState {
    pub fn new(atoms: impl IntoIterator<Item = GroundAtom>) -> Self {
        WorldState {
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn holds(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn atoms(&self) -> &BTreeSet<GroundAtom> {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

impl fmt::Display for WorldState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// A bare identifier: a bound variable or an object constant.
    Sym(String),
    /// An action or perf-token constructor applied to terms.
    App(String, Vec<Term>),
    Ground(Name),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Sym(s) => f.write_str(s),
            Term::App(s, args) => write_application(f, s, args),
            Term::Ground(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom {
        predicate: String,
        args: Vec<Term>,
    },
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists {
        var: String,
        sort: Option<Sort>,
        body: Box<Formula>,
    },
    Forall {
        var: String,
        sort: Option<Sort>,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn ground_atom(atom: &GroundAtom) -> Formula {
        Formula::Atom {
            predicate: atom.predicate.clone(),
            args: atom.args.iter().cloned().map(Term::Ground).collect(),
        }
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(vec![Formula::not(lhs), rhs])
    }

    pub fn iff(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(vec![
            Formula::implies(lhs.clone(), rhs.clone()),
            Formula::implies(rhs, lhs),
        ])
    }

    /// Whether the formula mentions any quantifier or unresolved term.
    pub fn is_ground(&self) -> bool {
        match self {
            Formula::True | Formula::False => true,
            Formula::Atom { args, .. } => args.iter().all(|t| matches!(t, Term::Ground(_))),
            Formula::Eq(a, b) => matches!(a, Term::Ground(_)) && matches!(b, Term::Ground(_)),
            Formula::Not(f) => f.is_ground(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_ground),
            Formula::Exists { .. } | Formula::Forall { .. } => false,
        }
    }

    /// Predicates occurring in the formula.
    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom { predicate, .. } = f {
                out.insert(predicate.clone());
            }
        });
        out
    }

    /// Constructor symbols (action or perf-token) occurring in terms.
    pub fn constructors(&self) -> BTreeSet<String> {
        fn term(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Sym(_) => {}
                Term::App(s, args) => {
                    out.insert(s.clone());
                    args.iter().for_each(|a| term(a, out));
                }
                Term::Ground(n) => {
                    if n.sort != Sort::Object {
                        out.insert(n.symbol.clone());
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom { args, .. } => args.iter().for_each(|t| term(t, &mut out)),
            Formula::Eq(a, b) => {
                term(a, &mut out);
                term(b, &mut out);
            }
            _ => {}
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Exists { body, .. } | Formula::Forall { body, .. } => body.visit(f),
            _ => {}
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom { predicate, args } => write_application(f, predicate, args),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(g) => write!(f, "!({g})"),
            Formula::And(gs) | Formula::Or(gs) => {
                let op = if matches!(self, Formula::And(_)) {
                    " & "
                } else {
                    " | "
                };
                if gs.is_empty() {
                    return f.write_str(if matches!(self, Formula::And(_)) {
                        "true"
                    } else {
                        "false"
                    });
                }
                f.write_str("(")?;
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str(")")
            }
            Formula::Exists { var, sort, body } | Formula::Forall { var, sort, body } => {
                let q = if matches!(self, Formula::Exists { .. }) {
                    "exists"
                } else {
                    "forall"
                };
                match sort {
                    Some(s) => write!(f, "({q} {var}:{}. {body})", s.tag()),
                    None => write!(f, "({q} {var}. {body})"),
                }
            }
        }
    }
}

/// The finite vocabulary of a basic action theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    objects: Vec<Name>,
    actions: Vec<Name>,
    perf_tokens: Vec<Name>,
    fluents: BTreeMap<String, Vec<Sort>>,
    rigids: BTreeMap<String, Vec<Sort>>,
    constructor_sorts: HashMap<String, Sort>,
}

impl Domain {
    pub fn new(
        objects: Vec<Name>,
        actions: Vec<Name>,
        perf_tokens: Vec<Name>,
        fluents: BTreeMap<String, Vec<Sort>>,
        rigids: BTreeMap<String, Vec<Sort>>,
    ) -> Result<Domain> {
        if objects.is_empty() {
            return Err(Error::Declaration(
                "the object domain must not be empty".into(),
            ));
        }
        let object_set: BTreeSet<&Name> = objects.iter().collect();
        if object_set.len() != objects.len() {
            return Err(Error::Declaration("duplicate object name".into()));
        }
        let mut constructor_sorts = HashMap::new();
        for (names, sort) in [(&actions, Sort::Action), (&perf_tokens, Sort::PerfToken)] {
            for n in names {
                if n.sort != sort {
                    return Err(Error::Declaration(format!(
                        "{n} declared with the wrong sort"
                    )));
                }
                if let Some(arg) = n.args.iter().find(|a| !object_set.contains(a)) {
                    return Err(Error::Declaration(format!(
                        "{n} mentions undeclared object {arg}"
                    )));
                }
                if let Some(prev) = constructor_sorts.insert(n.symbol.clone(), sort) {
                    if prev != sort {
                        return Err(Error::Declaration(format!(
                            "symbol {} used both as action and perf-token",
                            n.symbol
                        )));
                    }
                }
            }
        }
        for o in &objects {
            if constructor_sorts.contains_key(&o.symbol) {
                return Err(Error::Declaration(format!(
                    "{o} is both an object and a constructor"
                )));
            }
        }
        if let Some(p) = fluents.keys().find(|p| rigids.contains_key(*p)) {
            return Err(Error::Declaration(format!(
                "{p} declared both fluent and rigid"
            )));
        }
        Ok(Domain {
            objects,
            actions,
            perf_tokens,
            fluents,
            rigids,
            constructor_sorts,
        })
    }

    pub fn objects(&self) -> &[Name] {
        &self.objects
    }

    pub fn actions(&self) -> &[Name] {
        &self.actions
    }

    pub fn perf_tokens(&self) -> &[Name] {
        &self.perf_tokens
    }

    pub fn fluents(&self) -> &BTreeMap<String, Vec<Sort>> {
        &self.fluents
    }

    pub fn rigids(&self) -> &BTreeMap<String, Vec<Sort>> {
        &self.rigids
    }

    pub fn extension(&self, sort: Sort) -> &[Name] {
        match sort {
            Sort::Object => &self.objects,
            Sort::Action => &self.actions,
            Sort::PerfToken => &self.perf_tokens,
        }
    }

    pub fn is_action(&self, name: &Name) -> bool {
        self.actions.contains(name)
    }

    pub fn constructor_sort(&self, symbol: &str) -> Option<Sort> {
        self.constructor_sorts.get(symbol).copied()
    }

    pub fn predicate(&self, predicate: &str) -> Option<&[Sort]> {
        self.fluents
            .get(predicate)
            .or_else(|| self.rigids.get(predicate))
            .map(Vec::as_slice)
    }

    pub fn is_rigid(&self, predicate: &str) -> bool {
        self.rigids.contains_key(predicate)
    }

    /// Every ground atom over the declared predicates, in canonical order.
    pub fn all_atoms(&self) -> Vec<GroundAtom> {
        self.fluents
            .iter()
            .chain(self.rigids.iter())
            .flat_map(|(p, sorts)| self.atoms_of(p, sorts))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn atoms_of_predicate(&self, predicate: &str) -> Vec<GroundAtom> {
        match self.predicate(predicate) {
            Some(sorts) => self.atoms_of(predicate, sorts),
            None => Vec::new(),
        }
    }

    fn atoms_of(&self, predicate: &str, sorts: &[Sort]) -> Vec<GroundAtom> {
        let mut tuples: Vec<Vec<Name>> = vec![Vec::new()];
        for s in sorts {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    self.extension(*s).iter().map(move |n| {
                        let mut t = t.clone();
                        t.push(n.clone());
                        t
                    })
                })
                .collect();
        }
        tuples
            .into_iter()
            .map(|args| GroundAtom::new(predicate, args))
            .collect()
    }

    /// Resolves a ground atom from predicate text like `At(o1,m2)`, checking the declaration.
    pub fn check_atom(&self, atom: &GroundAtom) -> Result<()> {
        let sorts = self
            .predicate(&atom.predicate)
            .ok_or_else(|| Error::Declaration(format!("unknown predicate {}", atom.predicate)))?;
        if sorts.len() != atom.args.len() {
            return Err(Error::Declaration(format!(
                "{} expects {} arguments, got {}",
                atom.predicate,
                sorts.len(),
                atom.args.len()
            )));
        }
        for (s, a) in sorts.iter().zip(&atom.args) {
            if a.sort != *s {
                return Err(Error::Declaration(format!(
                    "argument {a} of {} has sort {:?}, expected {:?}",
                    atom.predicate, a.sort, s
                )));
            }
        }
        Ok(())
    }
}

/// Variable bindings used while grounding.
pub type Env = BTreeMap<String, Name>;

/// Resolves a term to a standard name under the given bindings.
pub fn resolve_term(t: &Term, d: &Domain, env: &Env) -> Result<Name> {
    match t {
        Term::Ground(n) => Ok(n.clone()),
        Term::Sym(s) => {
            if let Some(n) = env.get(s) {
                return Ok(n.clone());
            }
            if let Some(o) = d.objects.iter().find(|o| &o.symbol == s) {
                return Ok(o.clone());
            }
            match d.constructor_sort(s) {
                Some(sort) => Ok(Name {
                    sort,
                    symbol: s.clone(),
                    args: Vec::new(),
                }),
                None => Err(Error::Declaration(format!(
                    "unknown name or unbound variable `{s}`"
                ))),
            }
        }
        Term::App(s, args) => {
            let sort = d
                .constructor_sort(s)
                .ok_or_else(|| Error::Declaration(format!("unknown constructor `{s}`")))?;
            let args = args
                .iter()
                .map(|a| {
                    let n = resolve_term(a, d, env)?;
                    if n.sort != Sort::Object {
                        return Err(Error::Declaration(format!(
                            "argument {n} of {s} is not an object"
                        )));
                    }
                    Ok(n)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Name {
                sort,
                symbol: s.clone(),
                args,
            })
        }
    }
}

/// Expands sort-tagged quantifiers over the finite domain, yielding a
/// quantifier-free formula whose terms are all ground.
pub fn ground_formula(phi: &Formula, d: &Domain) -> Result<Formula> {
    ground_with(phi, d, &Env::new())
}

pub fn ground_with(phi: &Formula, d: &Domain, env: &Env) -> Result<Formula> {
    Ok(match phi {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Atom { predicate, args } => {
            let names = args
                .iter()
                .map(|t| resolve_term(t, d, env))
                .collect::<Result<Vec<_>>>()?;
            let atom = GroundAtom::new(predicate.clone(), names);
            d.check_atom(&atom)?;
            Formula::ground_atom(&atom)
        }
        Formula::Eq(a, b) => Formula::Eq(
            Term::Ground(resolve_term(a, d, env)?),
            Term::Ground(resolve_term(b, d, env)?),
        ),
        Formula::Not(g) => Formula::not(ground_with(g, d, env)?),
        Formula::And(gs) => Formula::And(
            gs.iter()
                .map(|g| ground_with(g, d, env))
                .collect::<Result<_>>()?,
        ),
        Formula::Or(gs) => Formula::Or(
            gs.iter()
                .map(|g| ground_with(g, d, env))
                .collect::<Result<_>>()?,
        ),
        Formula::Exists { var, sort, body } | Formula::Forall { var, sort, body } => {
            let sort = sort
                .ok_or_else(|| Error::input(format!("quantifier over `{var}` lacks a sort tag")))?;
            let is_exists = matches!(phi, Formula::Exists { .. });
            let mut parts = Vec::new();
            for n in d.extension(sort) {
                let mut inner = env.clone();
                inner.insert(var.clone(), n.clone());
                let g = ground_with(body, d, &inner)?;
                match (is_exists, &g) {
                    (true, Formula::False) | (false, Formula::True) => {}
                    _ => parts.push(g),
                }
            }
            match (parts.len(), is_exists) {
                (0, true) => Formula::False,
                (0, false) => Formula::True,
                (1, _) => parts.pop().expect("one part"),
                (_, true) => Formula::Or(parts),
                (_, false) => Formula::And(parts),
            }
        }
    })
}

/// Evaluates a ground, quantifier-free formula against a world state.
pub fn eval_static(phi: &Formula, s: &WorldState) -> Result<bool> {
    Ok(match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom { predicate, args } => {
            let names = args
                .iter()
                .map(|t| match t {
                    Term::Ground(n) => Ok(n.clone()),
                    other => Err(Error::input(format!(
                        "non-ground term `{other}` in evaluation"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            s.holds(&GroundAtom::new(predicate.clone(), names))
        }
        Formula::Eq(a, b) => match (a, b) {
            (Term::Ground(x), Term::Ground(y)) => x == y,
            _ => return Err(Error::input(format!("non-ground equality `{a} = {b}`"))),
        },
        Formula::Not(g) => !eval_static(g, s)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval_static(g, s)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_static(g, s)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Exists { .. } | Formula::Forall { .. } => {
            return Err(Error::input(
                "quantified formula passed to static evaluation; ground it first",
            ))
        }
    })
}

/// Folds ground equalities and constant subformulas. Used on cached axiom
/// instances; not part of grounding itself.
pub fn fold_constants(phi: &Formula) -> Formula {
    match phi {
        Formula::Eq(Term::Ground(a), Term::Ground(b)) => {
            if a == b {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Not(g) => match fold_constants(g) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            other => Formula::not(other),
        },
        Formula::And(gs) => {
            let mut out = Vec::new();
            for g in gs {
                match fold_constants(g) {
                    Formula::True => {}
                    Formula::False => return Formula::False,
                    Formula::And(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            match out.len() {
                0 => Formula::True,
                1 => out.pop().expect("one conjunct"),
                _ => Formula::And(out),
            }
        }
        Formula::Or(gs) => {
            let mut out = Vec::new();
            for g in gs {
                match fold_constants(g) {
                    Formula::False => {}
                    Formula::True => return Formula::True,
                    Formula::Or(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            match out.len() {
                0 => Formula::False,
                1 => out.pop().expect("one disjunct"),
                _ => Formula::Or(out),
            }
        }
        other => other.clone(),
    }
}

/// Ground atoms occurring in a ground formula.
pub fn atoms_in(phi: &Formula) -> BTreeSet<GroundAtom> {
    let mut out = BTreeSet::new();
    phi.visit(&mut |f| {
        if let Formula::Atom { predicate, args } = f {
            let names: Option<Vec<Name>> = args
                .iter()
                .map(|t| match t {
                    Term::Ground(n) => Some(n.clone()),
                    _ => None,
                })
                .collect();
            if let Some(names) = names {
                out.insert(GroundAtom::new(predicate.clone(), names));
            }
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_domain() -> Domain {
        let mut fluents = BTreeMap::new();
        fluents.insert("RAt".to_string(), vec![Sort::Object]);
        fluents.insert("At".to_string(), vec![Sort::Object, Sort::Object]);
        let mut rigids = BTreeMap::new();
        rigids.insert("Spacious".to_string(), vec![Sort::Object]);
        Domain::new(
            vec![Name::object("m1"), Name::object("m2"), Name::object("o1")],
            vec![Name::action("s_pick", &["o1"])],
            vec![Name::perf_token("pick", &["o1"])],
            fluents,
            rigids,
        )
        .unwrap()
    }

    fn atom(p: &str, args: &[&str]) -> Formula {
        Formula::atom(p, args.iter().map(|a| Term::Sym(a.to_string())).collect())
    }

    fn ga(p: &str, args: &[&str]) -> GroundAtom {
        GroundAtom::new(p, args.iter().map(|a| Name::object(*a)).collect())
    }

    fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists {
            var: v.into(),
            sort: Some(Sort::Object),
            body: Box::new(body),
        }
    }

    fn example_state() -> WorldState {
        WorldState::new([
            ga("RAt", &["m1"]),
            ga("At", &["o1", "m2"]),
            ga("Spacious", &["m1"]),
        ])
    }

    #[test]
    fn existential_expands_to_disjunction() {
        let g = ground_formula(&exists("x", atom("RAt", &["x"])), &small_domain()).unwrap();
        let expected = Formula::Or(vec![
            Formula::ground_atom(&ga("RAt", &["m1"])),
            Formula::ground_atom(&ga("RAt", &["m2"])),
            Formula::ground_atom(&ga("RAt", &["o1"])),
        ]);
        assert_eq!(g, expected);
    }

    #[test]
    fn universal_over_true_collapses() {
        let f = Formula::Forall {
            var: "x".into(),
            sort: Some(Sort::Object),
            body: Box::new(Formula::True),
        };
        assert_eq!(ground_formula(&f, &small_domain()).unwrap(), Formula::True);
    }

    #[test]
    fn nested_existential_has_nine_disjuncts() {
        let f = exists("o", exists("l", atom("At", &["o", "l"])));
        let g = ground_formula(&f, &small_domain()).unwrap();
        let Formula::Or(outer) = g else {
            panic!("expected disjunction")
        };
        let mut atoms = Vec::new();
        for inner in outer {
            let Formula::Or(inner) = inner else {
                panic!("expected inner disjunction")
            };
            atoms.extend(inner);
        }
        assert_eq!(atoms.len(), 9);
        let distinct: BTreeSet<_> = atoms.iter().map(|a| a.to_string()).collect();
        assert_eq!(distinct.len(), 9);
    }

    #[test]
    fn grounding_errors() {
        let d = small_domain();
        assert!(matches!(
            ground_formula(&atom("Nope", &["m1"]), &d),
            Err(Error::Declaration(_))
        ));
        assert!(matches!(
            ground_formula(&atom("RAt", &["m1", "m2"]), &d),
            Err(Error::Declaration(_))
        ));
        let untagged = Formula::Exists {
            var: "x".into(),
            sort: None,
            body: Box::new(atom("RAt", &["x"])),
        };
        assert!(matches!(
            ground_formula(&untagged, &d),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn static_evaluation_examples() {
        let d = small_domain();
        let s = example_state();
        let rat = ground_formula(&atom("RAt", &["m1"]), &d).unwrap();
        assert!(eval_static(&rat, &s).unwrap());
        let not_holding = ground_formula(&Formula::not(atom("RAt", &["o1"])), &d).unwrap();
        assert!(eval_static(&not_holding, &s).unwrap());
        let witness = exists(
            "l",
            Formula::And(vec![atom("RAt", &["l"]), atom("Spacious", &["l"])]),
        );
        assert!(eval_static(&ground_formula(&witness, &d).unwrap(), &s).unwrap());
        assert!(eval_static(&atom("RAt", &["m1"]), &s).is_err());
    }

    #[test]
    fn equality_is_name_identity() {
        let d = small_domain();
        let f = Formula::Eq(
            Term::App("s_pick".into(), vec![Term::Sym("o1".into())]),
            Term::Ground(Name::action("s_pick", &["o1"])),
        );
        assert!(eval_static(&ground_formula(&f, &d).unwrap(), &WorldState::default()).unwrap());
    }

    /// Substitutional semantics evaluated directly, without building the expansion.
    fn brute(phi: &Formula, d: &Domain, env: &Env, s: &WorldState) -> bool {
        match phi {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom { predicate, args } => {
                let names: Vec<Name> = args
                    .iter()
                    .map(|t| resolve_term(t, d, env).unwrap())
                    .collect();
                s.holds(&GroundAtom::new(predicate.clone(), names))
            }
            Formula::Eq(a, b) => {
                resolve_term(a, d, env).unwrap() == resolve_term(b, d, env).unwrap()
            }
            Formula::Not(g) => !brute(g, d, env, s),
            Formula::And(gs) => gs.iter().all(|g| brute(g, d, env, s)),
            Formula::Or(gs) => gs.iter().any(|g| brute(g, d, env, s)),
            Formula::Exists { var, sort, body } => d.extension(sort.unwrap()).iter().any(|n| {
                let mut e = env.clone();
                e.insert(var.clone(), n.clone());
                brute(body, d, &e, s)
            }),
            Formula::Forall { var, sort, body } => d.extension(sort.unwrap()).iter().all(|n| {
                let mut e = env.clone();
                e.insert(var.clone(), n.clone());
                brute(body, d, &e, s)
            }),
        }
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let vars = prop::sample::select(vec!["x", "y", "m1", "m2", "o1"]);
        let leaf = prop_oneof![
            Just(Formula::True),
            Just(Formula::False),
            vars.clone().prop_map(|v| atom("RAt", &[v])),
            (vars.clone(), vars.clone()).prop_map(|(a, b)| atom("At", &[a, b])),
            vars.clone().prop_map(|v| atom("Spacious", &[v])),
            (vars.clone(), vars)
                .prop_map(|(a, b)| Formula::Eq(Term::Sym(a.into()), Term::Sym(b.into()))),
        ];
        let body = leaf.prop_recursive(3, 24, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                prop::collection::vec(inner.clone(), 1..3).prop_map(Formula::And),
                prop::collection::vec(inner.clone(), 1..3).prop_map(Formula::Or),
                (prop::bool::ANY, prop::sample::select(vec!["x", "y"]), inner).prop_map(
                    |(e, v, b)| {
                        if e {
                            Formula::Exists {
                                var: v.into(),
                                sort: Some(Sort::Object),
                                body: Box::new(b),
                            }
                        } else {
                            Formula::Forall {
                                var: v.into(),
                                sort: Some(Sort::Object),
                                body: Box::new(b),
                            }
                        }
                    }
                ),
            ]
        });
        // close over x and y so the formula is a sentence
        body.prop_map(|b| Formula::Forall {
            var: "x".into(),
            sort: Some(Sort::Object),
            body: Box::new(Formula::Exists {
                var: "y".into(),
                sort: Some(Sort::Object),
                body: Box::new(b),
            }),
        })
    }

    fn arb_state() -> impl Strategy<Value = WorldState> {
        let atoms = small_domain().all_atoms();
        prop::collection::vec(prop::bool::ANY, atoms.len()).prop_map(move |bits| {
            WorldState::new(
                atoms
                    .iter()
                    .zip(bits)
                    .filter(|(_, b)| *b)
                    .map(|(a, _)| a.clone()),
            )
        })
    }

    proptest! {
        #[test]
        fn grounding_is_sound(phi in arb_formula(), s in arb_state()) {
            let d = small_domain();
            let g = ground_formula(&phi, &d).unwrap();
            prop_assert!(g.is_ground());
            prop_assert_eq!(eval_static(&g, &s).unwrap(), brute(&phi, &d, &Env::new(), &s));
        }

        #[test]
        fn grounding_is_idempotent(phi in arb_formula()) {
            let d = small_domain();
            let g = ground_formula(&phi, &d).unwrap();
            prop_assert_eq!(ground_formula(&g, &d).unwrap(), g);
        }

        #[test]
        fn evaluation_ignores_atom_order(phi in arb_formula(), s in arb_state()) {
            let d = small_domain();
            let g = ground_formula(&phi, &d).unwrap();
            let reversed = WorldState::new(s.atoms().iter().rev().cloned());
            prop_assert_eq!(eval_static(&g, &s).unwrap(), eval_static(&g, &reversed).unwrap());
        }
    }
}
