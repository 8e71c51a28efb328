use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::golog::enumerate_traces;
use crate::mtl::Mtl;
use crate::synthesis::clocks::delay_points;
use crate::synthesis::{trace_violations, TraceContext, Violation};
use crate::ta::{
    format_word, Granularity, Prop, TimedAutomaton, TimedLetter, TimedWord, Transition, Valuation,
};
use crate::time::Rational;

#[derive(Debug, Clone)]
pub struct SimulationOptions {
    pub seed: u64,
    pub episodes: usize,
    /// Maximal number of letters per episode.
    pub bound: usize,
}

#[derive(Debug, Clone)]
pub struct Episode {
    pub word: TimedWord,
    /// The closed loop stopped in an accepting location.
    pub finished: bool,
    pub violations: Vec<Violation>,
}

impl Episode {
    pub fn satisfied(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Transcript {
    pub episodes: Vec<Episode>,
}

impl Transcript {
    pub fn satisfied(&self) -> usize {
        self.episodes.iter().filter(|e| e.satisfied()).count()
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.episodes.iter().enumerate() {
            let status = if !e.satisfied() {
                "violation"
            } else if e.finished {
                "ok"
            } else {
                "unfinished"
            };
            writeln!(f, "episode {i}: {status} {}", format_word(&e.word))?;
            for v in &e.violations {
                writeln!(f, "  {v}")?;
            }
        }
        write!(
            f,
            "{}/{} episodes satisfy the constraints",
            self.satisfied(),
            self.episodes.len()
        )
    }
}

struct Move<'a> {
    delay: Rational,
    plant: &'a Transition,
    controller: &'a Transition,
}

/// Runs seeded random episodes of the closed loop. Moves carrying an action
/// are preferred so that episodes make progress; an episode may stop in any
/// accepting configuration.
pub fn simulate(
    plant: &TimedAutomaton,
    controller: &TimedAutomaton,
    constraints: &[Mtl<Prop>],
    mu: &Granularity,
    trace: Option<&TraceContext<'_>>,
    opts: &SimulationOptions,
) -> Result<Transcript> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let phi = Mtl::and_all(constraints.iter().cloned());
    let traces = match trace {
        Some(ctx) => Some(enumerate_traces(ctx.bat, ctx.program, opts.bound)?),
        None => None,
    };
    let pout = plant.outgoing();
    let cout = controller.outgoing();
    let mut transcript = Transcript::default();
    for _ in 0..opts.episodes {
        let (mut ploc, mut cloc) = (plant.initial.as_str(), controller.initial.as_str());
        let mut values: Valuation = plant
            .all_clocks()
            .into_iter()
            .chain(controller.clocks.iter().cloned())
            .map(|c| (c, Rational::default()))
            .collect();
        let mut word: TimedWord = Vec::new();
        let mut now = Rational::default();
        let mut finished = false;
        while word.len() < opts.bound {
            let done = plant.is_final(ploc) && controller.is_final(cloc);
            if done && !word.is_empty() && rng.gen_bool(0.3) {
                finished = true;
                break;
            }
            let mut moves = Vec::new();
            for delay in delay_points(values.values().copied(), mu) {
                let v: Valuation = values
                    .iter()
                    .map(|(c, x)| (c.clone(), *x + delay))
                    .collect();
                for p in pout
                    .get(ploc)
                    .into_iter()
                    .flatten()
                    .filter(|p| p.guard.satisfied(&v))
                {
                    for c in cout.get(cloc).into_iter().flatten() {
                        if c.symbol == p.symbol && c.guard.satisfied(&v) {
                            moves.push(Move {
                                delay,
                                plant: p,
                                controller: c,
                            });
                        }
                    }
                }
            }
            let acting: Vec<&Move> = moves
                .iter()
                .filter(|m| m.plant.symbol.iter().any(|q| plant.actions.contains(q)))
                .collect();
            let pick = if !acting.is_empty() && rng.gen_bool(0.7) {
                acting.choose(&mut rng).copied()
            } else {
                moves.choose(&mut rng)
            };
            let Some(m) = pick else {
                finished = done;
                break;
            };
            now += m.delay;
            for x in values.values_mut() {
                *x += m.delay;
            }
            for r in m.plant.resets.iter().chain(&m.controller.resets) {
                values.insert(r.clone(), Rational::default());
            }
            word.push(TimedLetter {
                time: now,
                symbol: m.plant.symbol.clone(),
            });
            ploc = &m.plant.to;
            cloc = &m.controller.to;
        }
        finished |= plant.is_final(ploc) && controller.is_final(cloc);
        let mut violations = Vec::new();
        if finished && !phi.holds(&word) {
            violations.push(Violation {
                condition: "constraints",
                word: word.clone(),
                detail: "episode violates the constraints".into(),
            });
        }
        if let (true, Some(ctx), Some(traces)) = (finished, trace, &traces) {
            violations.extend(trace_violations(ctx, traces, &word)?);
        }
        transcript.episodes.push(Episode {
            word,
            finished,
            violations,
        });
    }
    Ok(transcript)
}
