//! Basic action theories over finite domains: determinacy, preconditions and progression.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::logic::{
    atoms_in, eval_static, fold_constants, ground_with, Domain, Env, Formula, GroundAtom, Name,
    Sort, Term,
};

pub use crate::logic::WorldState;

/// The free variable standing for the executed action in successor-state axioms.
pub const ACTION_VAR: &str = "a";

/// `poss A(x1,...,xn) <- body` for every action named `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct PossAxiom {
    pub action: String,
    pub params: Vec<String>,
    pub body: Formula,
}

/// `ssa F(x1,...,xn) <- gamma`, with the action variable free in `gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessorStateAxiom {
    pub fluent: String,
    pub params: Vec<String>,
    pub body: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminacyReport {
    pub determinate: bool,
    pub witnesses: Vec<GroundAtom>,
}

#[derive(Debug, Clone)]
pub struct BasicActionTheory {
    domain: Domain,
    init: Vec<Formula>,
    poss_axioms: Vec<PossAxiom>,
    ssa: BTreeMap<String, SuccessorStateAxiom>,
    report: DeterminacyReport,
    initial: Option<WorldState>,
    preconditions: HashMap<Name, Formula>,
    effects: HashMap<Name, Vec<(GroundAtom, Formula)>>,
}

impl BasicActionTheory {
    pub fn new(
        domain: Domain,
        init: Vec<Formula>,
        poss_axioms: Vec<PossAxiom>,
        ssa_axioms: Vec<SuccessorStateAxiom>,
    ) -> Result<Self> {
        let mut ssa = BTreeMap::new();
        for ax in ssa_axioms {
            let sorts = domain.fluents().get(&ax.fluent).ok_or_else(|| {
                Error::Declaration(format!(
                    "successor-state axiom for non-fluent {}",
                    ax.fluent
                ))
            })?;
            if sorts.len() != ax.params.len() {
                return Err(Error::Declaration(format!(
                    "arity mismatch in successor-state axiom for {}",
                    ax.fluent
                )));
            }
            if ssa.insert(ax.fluent.clone(), ax).is_some() {
                return Err(Error::Declaration("duplicate successor-state axiom".into()));
            }
        }
        if let Some(f) = domain.fluents().keys().find(|f| !ssa.contains_key(*f)) {
            return Err(Error::Declaration(format!(
                "fluent {f} has no successor-state axiom"
            )));
        }
        for ax in &poss_axioms {
            if domain.constructor_sort(&ax.action) != Some(Sort::Action) {
                return Err(Error::Declaration(format!(
                    "precondition for undeclared action {}",
                    ax.action
                )));
            }
        }

        let mut grounded_init = Vec::new();
        for phi in &init {
            grounded_init.push(fold_constants(&ground_with(phi, &domain, &Env::new())?));
        }

        let mut preconditions = HashMap::new();
        let mut effects = HashMap::new();
        for a in domain.actions() {
            let pre = match poss_axioms
                .iter()
                .find(|ax| ax.action == a.symbol && ax.params.len() == a.args.len())
            {
                Some(ax) => {
                    let env: Env = ax
                        .params
                        .iter()
                        .cloned()
                        .zip(a.args.iter().cloned())
                        .collect();
                    fold_constants(&ground_with(&ax.body, &domain, &env)?)
                }
                None => Formula::False,
            };
            preconditions.insert(a.clone(), pre);

            let mut eff = Vec::new();
            for (fluent, ax) in &ssa {
                for atom in domain.atoms_of_predicate(fluent) {
                    let mut env: Env = ax
                        .params
                        .iter()
                        .cloned()
                        .zip(atom.args.iter().cloned())
                        .collect();
                    env.insert(ACTION_VAR.to_string(), a.clone());
                    let gamma = fold_constants(&ground_with(&ax.body, &domain, &env)?);
                    eff.push((atom, gamma));
                }
            }
            effects.insert(a.clone(), eff);
        }

        let (report, initial) = determinacy(&domain, &grounded_init);
        Ok(BasicActionTheory {
            domain,
            init,
            poss_axioms,
            ssa,
            report,
            initial,
            preconditions,
            effects,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn init_axioms(&self) -> &[Formula] {
        &self.init
    }

    pub fn poss_axioms(&self) -> &[PossAxiom] {
        &self.poss_axioms
    }

    pub fn ssa(&self, fluent: &str) -> Option<&SuccessorStateAxiom> {
        self.ssa.get(fluent)
    }

    pub fn check_determinate(&self) -> DeterminacyReport {
        self.report.clone()
    }

    pub fn initial_state(&self) -> Result<WorldState> {
        match &self.initial {
            Some(s) => Ok(s.clone()),
            None if self.report.determinate => {
                Err(Error::input("the initial axioms are inconsistent"))
            }
            None => Err(Error::NotDeterminate(
                self.report
                    .witnesses
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
            )),
        }
    }

    /// The grounded precondition of a declared action.
    pub fn precondition(&self, a: &Name) -> Result<&Formula> {
        self.preconditions
            .get(a)
            .ok_or_else(|| Error::input(format!("undeclared action {a}")))
    }

    pub fn poss(&self, a: &Name, s: &WorldState) -> Result<bool> {
        eval_static(self.precondition(a)?, s)
    }

    /// Simultaneous successor-state update; rigid atoms are copied.
    pub fn progress(&self, s: &WorldState, a: &Name) -> Result<WorldState> {
        let eff = self
            .effects
            .get(a)
            .ok_or_else(|| Error::input(format!("undeclared action {a}")))?;
        let mut next: Vec<GroundAtom> = s
            .atoms()
            .iter()
            .filter(|atom| self.domain.is_rigid(&atom.predicate))
            .cloned()
            .collect();
        for (atom, gamma) in eff {
            if eval_static(gamma, s)? {
                next.push(atom.clone());
            }
        }
        Ok(WorldState::new(next))
    }

    /// Whether the instantiated successor-state axiom of `atom` under `a` is
    /// syntactically the frame `atom` itself.
    pub fn is_frame(&self, a: &Name, atom: &GroundAtom) -> bool {
        if self.domain.is_rigid(&atom.predicate) {
            return true;
        }
        self.effects
            .get(a)
            .and_then(|eff| eff.iter().find(|(x, _)| x == atom))
            .is_some_and(|(_, gamma)| *gamma == Formula::ground_atom(atom))
    }
}

/// Closed-world completion of the predicates the axioms leave unmentioned,
/// then an entailment check for every atom of the mentioned ones.
fn determinacy(d: &Domain, axioms: &[Formula]) -> (DeterminacyReport, Option<WorldState>) {
    let mentioned: BTreeSet<String> = axioms.iter().flat_map(Formula::predicates).collect();
    let vars: Vec<GroundAtom> = d
        .all_atoms()
        .into_iter()
        .filter(|a| mentioned.contains(&a.predicate))
        .collect();
    let index: HashMap<&GroundAtom, usize> = vars.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let exprs: Vec<Bx> = axioms.iter().map(|f| Bx::from_formula(f, &index)).collect();

    let mut assign = vec![None; vars.len()];
    let Some(model) = solve(&exprs, &mut assign, 0) else {
        return (
            DeterminacyReport {
                determinate: true,
                witnesses: Vec::new(),
            },
            None,
        );
    };
    let mut witnesses = Vec::new();
    let occurring: BTreeSet<GroundAtom> = axioms.iter().flat_map(atoms_in).collect();
    for (i, atom) in vars.iter().enumerate() {
        if !occurring.contains(atom) {
            witnesses.push(atom.clone());
            continue;
        }
        let mut assign = vec![None; vars.len()];
        assign[i] = Some(!model[i]);
        if solve(&exprs, &mut assign, 0).is_some() {
            witnesses.push(atom.clone());
        }
    }
    let determinate = witnesses.is_empty();
    let state = determinate.then(|| {
        WorldState::new(
            vars.iter()
                .zip(&model)
                .filter(|(_, v)| **v)
                .map(|(a, _)| a.clone()),
        )
    });
    (
        DeterminacyReport {
            determinate,
            witnesses,
        },
        state,
    )
}

enum Bx {
    Const(bool),
    Var(usize),
    Not(Box<Bx>),
    And(Vec<Bx>),
    Or(Vec<Bx>),
}

impl Bx {
    fn from_formula(f: &Formula, index: &HashMap<&GroundAtom, usize>) -> Bx {
        match f {
            Formula::True => Bx::Const(true),
            Formula::False => Bx::Const(false),
            Formula::Atom { predicate, args } => {
                let names: Vec<Name> = args
                    .iter()
                    .map(|t| match t {
                        Term::Ground(n) => n.clone(),
                        _ => unreachable!("axioms are grounded before solving"),
                    })
                    .collect();
                let atom = GroundAtom::new(predicate.clone(), names);
                Bx::Var(index[&atom])
            }
            Formula::Eq(a, b) => Bx::Const(a == b),
            Formula::Not(g) => Bx::Not(Box::new(Bx::from_formula(g, index))),
            Formula::And(gs) => Bx::And(gs.iter().map(|g| Bx::from_formula(g, index)).collect()),
            Formula::Or(gs) => Bx::Or(gs.iter().map(|g| Bx::from_formula(g, index)).collect()),
            Formula::Exists { .. } | Formula::Forall { .. } => {
                unreachable!("axioms are grounded before solving")
            }
        }
    }

    fn eval(&self, assign: &[Option<bool>]) -> Option<bool> {
        match self {
            Bx::Const(b) => Some(*b),
            Bx::Var(i) => assign[*i],
            Bx::Not(g) => g.eval(assign).map(|b| !b),
            Bx::And(gs) => {
                let mut unknown = false;
                for g in gs {
                    match g.eval(assign) {
                        Some(false) => return Some(false),
                        None => unknown = true,
                        Some(true) => {}
                    }
                }
                (!unknown).then_some(true)
            }
            Bx::Or(gs) => {
                let mut unknown = false;
                for g in gs {
                    match g.eval(assign) {
                        Some(true) => return Some(true),
                        None => unknown = true,
                        Some(false) => {}
                    }
                }
                (!unknown).then_some(false)
            }
        }
    }
}

fn solve(exprs: &[Bx], assign: &mut [Option<bool>], next: usize) -> Option<Vec<bool>> {
    if exprs.iter().any(|e| e.eval(assign) == Some(false)) {
        return None;
    }
    let Some(i) = (next..assign.len()).find(|i| assign[*i].is_none()) else {
        return Some(assign.iter().map(|v| v.unwrap_or(false)).collect());
    };
    for value in [false, true] {
        assign[i] = Some(value);
        if let Some(m) = solve(exprs, assign, i + 1) {
            return Some(m);
        }
    }
    assign[i] = None;
    None
}
