use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::rc::Rc;

use crate::bat::BasicActionTheory;
use crate::error::{Error, Result};
use crate::golog::{ground_program, Prog};
use crate::mtl::Mtl;
use crate::parse::{ground_constraint, parse_bat, parse_constraints, parse_program};
use crate::platform::{build_plant, PlatformModel};
use crate::pta::{compile_pta, determinize};
use crate::ta::{product, Granularity, Prop, TimedAutomaton};

/// Input files of a project, by role.
#[derive(Debug, Clone, Default)]
pub struct BundlePaths {
    pub bat: Option<PathBuf>,
    pub program: Option<PathBuf>,
    pub constraints: Vec<PathBuf>,
    pub platforms: Vec<PathBuf>,
}

impl BundlePaths {
    /// Classifies the files of a directory by extension.
    pub fn scan(dir: &Path) -> Result<BundlePaths> {
        let mut files: Vec<PathBuf> = fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        files.sort();
        let mut out = BundlePaths::default();
        for f in files {
            match f.extension().and_then(|e| e.to_str()) {
                Some("bat") => set_once(&mut out.bat, f, "theory")?,
                Some("golog") => set_once(&mut out.program, f, "program")?,
                Some("mtl") => out.constraints.push(f),
                Some("json") => out.platforms.push(f),
                _ => {}
            }
        }
        Ok(out)
    }
}

fn set_once(slot: &mut Option<PathBuf>, f: PathBuf, what: &str) -> Result<()> {
    if let Some(prev) = slot {
        return Err(Error::input(format!(
            "two {what} files: {} and {}",
            prev.display(),
            f.display()
        )));
    }
    *slot = Some(f);
    Ok(())
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| Error::input(format!("{}: {e}", p.display())))
}

fn label(p: &Path) -> String {
    p.display().to_string()
}

pub struct Bundle {
    pub bat: BasicActionTheory,
    pub program: Option<Rc<Prog>>,
    pub constraints: Vec<Mtl<Prop>>,
    /// Product of all platform models, if any.
    pub platform: Option<PlatformModel>,
}

impl Bundle {
    pub fn load(paths: &BundlePaths) -> Result<Bundle> {
        let bat_path = paths
            .bat
            .as_ref()
            .ok_or_else(|| Error::input("no action theory (.bat) given"))?;
        let bat = parse_bat(&label(bat_path), &read(bat_path)?)?;
        let program = match &paths.program {
            Some(p) => Some(ground_program(
                &parse_program(&label(p), &read(p)?)?,
                bat.domain(),
            )?),
            None => None,
        };
        let mut platform: Option<PlatformModel> = None;
        for p in &paths.platforms {
            let model = PlatformModel::from_json(&read(p)?)
                .map_err(|e| Error::input(format!("{}: {e}", p.display())))?;
            platform = Some(match platform {
                None => model,
                Some(prev) => {
                    let fluents = prev.fluents.union(&model.fluents).cloned().collect();
                    PlatformModel::new(product(&prev.automaton, &model.automaton)?, fluents)
                }
            });
        }
        let props: BTreeSet<Prop> = platform.as_ref().map(|p| p.alphabet()).unwrap_or_default();
        let mut constraints = Vec::new();
        for p in &paths.constraints {
            for c in parse_constraints(&label(p), &read(p)?)? {
                constraints.push(ground_constraint(&c, bat.domain(), &props)?);
            }
        }
        Ok(Bundle {
            bat,
            program,
            constraints,
            platform,
        })
    }

    pub fn load_dir(dir: &Path) -> Result<Bundle> {
        Bundle::load(&BundlePaths::scan(dir)?)
    }

    pub fn program(&self) -> Result<&Rc<Prog>> {
        self.program
            .as_ref()
            .ok_or_else(|| Error::input("no program (.golog) given"))
    }

    /// Deterministic program automaton.
    pub fn pta(&self, max_expansions: usize) -> Result<TimedAutomaton> {
        determinize(&compile_pta(&self.bat, self.program()?, max_expansions)?)
    }

    /// The program automaton composed with the platform, if there is one.
    pub fn plant(&self, max_expansions: usize) -> Result<TimedAutomaton> {
        let pta = self.pta(max_expansions)?;
        match &self.platform {
            Some(r) => build_plant(&pta, r),
            None => Ok(pta),
        }
    }

    /// Granularity over the plant clocks plus `t_c`. Without an explicit
    /// `(m, K)`, m is the common denominator of all guard and interval
    /// constants and K exceeds the largest of them.
    pub fn granularity(
        &self,
        plant: &TimedAutomaton,
        explicit: Option<(u32, u32)>,
    ) -> Result<Granularity> {
        let mut clocks: Vec<String> = plant.all_clocks().into_iter().collect();
        clocks.push("t_c".into());
        if let Some((m, k)) = explicit {
            return Granularity::new(clocks, m, k);
        }
        let mut constants = Vec::new();
        for t in &plant.transitions {
            constants.extend(t.guard.comparisons.iter().map(|c| c.constant));
        }
        for f in &self.constraints {
            for i in f.intervals() {
                constants.push(i.lower);
                constants.extend(i.upper);
            }
        }
        let m = constants
            .iter()
            .fold(1i64, |m, c| num_integer::lcm(m, *c.denom()));
        let k = constants
            .iter()
            .map(|c| (c * m).to_integer())
            .max()
            .unwrap_or(0)
            + 1;
        let m = u32::try_from(m)
            .map_err(|_| Error::Granularity("constants need too fine a granularity".into()))?;
        let k =
            u32::try_from(k).map_err(|_| Error::Granularity("constants are too large".into()))?;
        Granularity::new(clocks, m, k)
    }
}
