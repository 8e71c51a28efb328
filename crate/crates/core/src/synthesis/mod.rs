pub mod clocks;
pub mod extract;
pub mod game;
pub mod partition;
pub mod spec;
pub mod validate;

use crate::error::{Error, Result};
use crate::mtl::Mtl;
use crate::ta::{Granularity, Prop, TimedAutomaton};

pub use game::Game;
pub use partition::{partition_alphabet, AlphabetPartition};
pub use spec::SpecAutomaton;
pub use validate::{
    trace_violations, validate_controller, TraceContext, ValidationReport, Violation,
};

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct SynthesisOptions {
    pub mu: Granularity,
    /// Names of the clocks the controller may own; their number bounds the
    /// obligations it can time at once. Empty means the clocks of `mu` that
    /// the plant does not use, or a single `t_c`.
    pub controller_clocks: Vec<String>,
    pub node_budget: usize,
    /// Closed-loop depth of the post-synthesis validation; 0 skips it.
    pub check_bound: usize,
}

impl SynthesisOptions {
    pub fn new(mu: Granularity) -> SynthesisOptions {
        SynthesisOptions {
            mu,
            controller_clocks: Vec::new(),
            node_budget: DEFAULT_NODE_BUDGET,
            check_bound: 6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Controller {
    pub automaton: TimedAutomaton,
    pub nodes_explored: usize,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Controller(Controller),
    Unrealizable { nodes_explored: usize },
}

/// Translates the negated constraints, solves the game on the plant and
/// extracts a controller from the winning region.
pub fn synthesize(
    plant: &TimedAutomaton,
    constraints: &[Mtl<Prop>],
    opts: &SynthesisOptions,
) -> Result<Outcome> {
    if let Some(w) = plant.nondeterminism() {
        return Err(Error::Precondition(format!(
            "plant is nondeterministic at {}",
            w.first.from
        )));
    }
    let plant_clocks = plant.all_clocks();
    let mut clocks = opts.controller_clocks.clone();
    if clocks.is_empty() {
        clocks = opts
            .mu
            .clocks
            .iter()
            .filter(|c| !plant_clocks.contains(*c))
            .cloned()
            .collect();
    }
    if clocks.is_empty() {
        clocks.push("t_c".into());
    }
    if let Some(c) = clocks.iter().find(|c| plant_clocks.contains(*c)) {
        return Err(Error::input(format!(
            "controller clock {c} is also a plant clock"
        )));
    }
    partition_alphabet(plant)?;
    plant.check_granularity(&opts.mu)?;
    let spec = SpecAutomaton::new(constraints, Some(&opts.mu))?;
    let game = Game::solve(plant, &spec, &opts.mu, &clocks, opts.node_budget)?;
    if !game.realizable() {
        return Ok(Outcome::Unrealizable {
            nodes_explored: game.nodes.len(),
        });
    }
    let automaton = extract::extract(&game)?;
    if opts.check_bound > 0 {
        let report = validate_controller(
            plant,
            &automaton,
            constraints,
            &opts.mu,
            opts.check_bound,
            None,
        )?;
        if !report.passed() {
            return Err(Error::Internal(format!(
                "synthesized controller failed validation:\n{report}"
            )));
        }
    }
    Ok(Outcome::Controller(Controller {
        automaton,
        nodes_explored: game.nodes.len(),
    }))
}
