//! Command line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bundle::{Bundle, BundlePaths};
use crate::error::{Error, Result};
use crate::parse::parse_word;
use crate::platform::validate_platform;
use crate::simulate::{simulate, SimulationOptions};
use crate::synthesis::{synthesize, validate_controller, Outcome, SynthesisOptions, TraceContext};
use crate::ta::{to_dot, Granularity, TimedAutomaton};

#[derive(Parser, Debug)]
#[command(
    name = "golog-synth",
    version,
    about = "Golog programs to timed automata, MTL controller synthesis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Clock granularity: denominator m and largest constant K (in units of 1/m).
    #[arg(long, num_args = 2, value_names = ["M", "K"], global = true)]
    pub granularity: Option<Vec<u32>>,
    /// Word-length bound for verification and simulation.
    #[arg(long, global = true)]
    pub bound: Option<usize>,
    #[arg(long, default_value_t = crate::synthesis::DEFAULT_NODE_BUDGET, global = true)]
    pub node_budget: usize,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Limit on program configurations expanded during compilation.
    #[arg(long, default_value_t = 100_000, global = true)]
    pub max_expansions: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BundleArgs {
    /// Project directory holding one .bat, one .golog, .mtl and platform .json files.
    pub dir: Option<PathBuf>,
    #[arg(long)]
    pub bat: Option<PathBuf>,
    #[arg(long)]
    pub program: Option<PathBuf>,
    #[arg(long)]
    pub constraints: Vec<PathBuf>,
    #[arg(long)]
    pub platform: Vec<PathBuf>,
}

impl BundleArgs {
    fn paths(&self) -> Result<BundlePaths> {
        let mut p = match &self.dir {
            Some(d) => BundlePaths::scan(d)?,
            None => BundlePaths::default(),
        };
        if self.bat.is_some() {
            p.bat = self.bat.clone();
        }
        if self.program.is_some() {
            p.program = self.program.clone();
        }
        if !self.constraints.is_empty() {
            p.constraints = self.constraints.clone();
        }
        if !self.platform.is_empty() {
            p.platforms = self.platform.clone();
        }
        Ok(p)
    }

    fn load(&self) -> Result<Bundle> {
        Bundle::load(&self.paths()?)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Determinacy of the theory and validity of the platform model.
    Check(BundleArgs),
    /// Program automaton of the program.
    Compile(BundleArgs),
    /// Plant: program automaton times platform.
    Compose(BundleArgs),
    /// Controller for the plant against the constraints.
    Synthesize(BundleArgs),
    /// Closed-loop check of a controller.
    Verify {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long)]
        controller: PathBuf,
    },
    /// Random closed-loop episodes against a controller.
    Simulate {
        #[command(flatten)]
        bundle: BundleArgs,
        /// Controller JSON; synthesized when absent.
        #[arg(long)]
        controller: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        episodes: usize,
    },
    /// Evaluates the constraints on a timed word given as JSON.
    TraceCheck {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long)]
        word: PathBuf,
    },
}

fn granularity(global: &Global, plant: &TimedAutomaton, bundle: &Bundle) -> Result<Granularity> {
    bundle.granularity(plant, global.granularity.as_ref().map(|v| (v[0], v[1])))
}

fn emit(out: &mut dyn Write, t: &TimedAutomaton, name: &str, format: Format) -> Result<()> {
    match format {
        Format::Json => write!(out, "{}", t.to_json())?,
        Format::Dot => write!(out, "{}", to_dot(t, name))?,
    }
    Ok(())
}

fn read_automaton(p: &PathBuf) -> Result<TimedAutomaton> {
    let text =
        std::fs::read_to_string(p).map_err(|e| Error::input(format!("{}: {e}", p.display())))?;
    TimedAutomaton::from_json(&text)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    match &cli.command {
        Command::Check(args) => {
            let b = args.load()?;
            let det = b.bat.check_determinate();
            let mut code = 0;
            if det.determinate {
                writeln!(out, "theory: determinate")?;
            } else {
                let atoms: Vec<String> = det.witnesses.iter().map(|a| a.to_string()).collect();
                writeln!(
                    out,
                    "theory: not determinate, undecided atoms {}",
                    atoms.join(", ")
                )?;
                code = 1;
            }
            if let Some(r) = &b.platform {
                let mu = match &g.granularity {
                    Some(v) => Some(Granularity::new(r.automaton.all_clocks(), v[0], v[1])?),
                    None => None,
                };
                let report = validate_platform(r, &b.bat, mu.as_ref());
                writeln!(out, "{report}")?;
                if !report.is_valid() {
                    code = 1;
                }
            }
            Ok(code)
        }
        Command::Compile(args) => {
            let b = args.load()?;
            emit(out, &b.pta(g.max_expansions)?, "pta", g.format)?;
            Ok(0)
        }
        Command::Compose(args) => {
            let b = args.load()?;
            emit(out, &b.plant(g.max_expansions)?, "plant", g.format)?;
            Ok(0)
        }
        Command::Synthesize(args) => {
            let b = args.load()?;
            let plant = b.plant(g.max_expansions)?;
            let mut opts = SynthesisOptions::new(granularity(g, &plant, &b)?);
            opts.node_budget = g.node_budget;
            if let Some(n) = g.bound {
                opts.check_bound = n;
            }
            match synthesize(&plant, &b.constraints, &opts)? {
                Outcome::Controller(c) => {
                    emit(out, &c.automaton, "controller", g.format)?;
                    Ok(0)
                }
                Outcome::Unrealizable { nodes_explored } => {
                    writeln!(out, "UNREALIZABLE ({nodes_explored} game nodes explored)")?;
                    Ok(1)
                }
            }
        }
        Command::Verify { bundle, controller } => {
            let b = bundle.load()?;
            let plant = b.plant(g.max_expansions)?;
            let c = read_automaton(controller)?;
            let mu = granularity(g, &plant, &b)?;
            let ctx = b.program.as_ref().map(|program| TraceContext {
                bat: &b.bat,
                program,
            });
            let report = validate_controller(
                &plant,
                &c,
                &b.constraints,
                &mu,
                g.bound.unwrap_or(10),
                ctx.as_ref(),
            )?;
            writeln!(out, "{report}")?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Simulate {
            bundle,
            controller,
            episodes,
        } => {
            let b = bundle.load()?;
            let plant = b.plant(g.max_expansions)?;
            let mu = granularity(g, &plant, &b)?;
            let c = match controller {
                Some(p) => read_automaton(p)?,
                None => {
                    let mut opts = SynthesisOptions::new(mu.clone());
                    opts.node_budget = g.node_budget;
                    match synthesize(&plant, &b.constraints, &opts)? {
                        Outcome::Controller(c) => c.automaton,
                        Outcome::Unrealizable { .. } => {
                            writeln!(out, "UNREALIZABLE")?;
                            return Ok(1);
                        }
                    }
                }
            };
            let ctx = b.program.as_ref().map(|program| TraceContext {
                bat: &b.bat,
                program,
            });
            let opts = SimulationOptions {
                seed: g.seed,
                episodes: *episodes,
                bound: g.bound.unwrap_or(12),
            };
            let transcript = simulate(&plant, &c, &b.constraints, &mu, ctx.as_ref(), &opts)?;
            writeln!(out, "{transcript}")?;
            Ok(if transcript.satisfied() == transcript.episodes.len() {
                0
            } else {
                1
            })
        }
        Command::TraceCheck { bundle, word } => {
            let b = bundle.load()?;
            let text = std::fs::read_to_string(word)
                .map_err(|e| Error::input(format!("{}: {e}", word.display())))?;
            let w = parse_word(&text)?;
            let mut code = 0;
            for (i, f) in b.constraints.iter().enumerate() {
                let holds = f.holds(&w);
                writeln!(
                    out,
                    "constraint {i}: {}",
                    if holds { "holds" } else { "violated" }
                )?;
                if !holds {
                    code = 1;
                }
            }
            Ok(code)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
