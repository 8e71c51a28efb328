use std::collections::BTreeMap;
use std::fmt::Write;

use super::formula::{parse_formula, parse_sort};
use super::lexer::{describe, Cursor, Tok};
use crate::bat::{BasicActionTheory, PossAxiom, SuccessorStateAxiom};
use crate::error::Result;
use crate::logic::{Domain, Formula, Name, Sort};

/// The declarations of a theory file before resolution.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BatSource {
    pub objects: Vec<String>,
    pub actions: Vec<(String, Vec<String>)>,
    pub perf_tokens: Vec<(String, Vec<String>)>,
    pub fluents: Vec<(String, Vec<Sort>)>,
    pub rigids: Vec<(String, Vec<Sort>)>,
    pub init: Vec<Formula>,
    pub poss: Vec<PossAxiom>,
    pub ssa: Vec<SuccessorStateAxiom>,
}

fn parse_shape(c: &mut Cursor) -> Result<(String, Vec<String>)> {
    let name = c.expect_ident()?;
    let mut args = Vec::new();
    if c.eat_punct("(") {
        if !c.is_punct(")") {
            loop {
                args.push(c.expect_ident()?);
                if !c.eat_punct(",") {
                    break;
                }
            }
        }
        c.expect_punct(")")?;
    }
    Ok((name, args))
}

fn parse_signature(c: &mut Cursor) -> Result<(String, Vec<Sort>)> {
    let name = c.expect_ident()?;
    let mut sorts = Vec::new();
    if c.eat_punct("(") {
        if !c.is_punct(")") {
            loop {
                sorts.push(parse_sort(c)?);
                if !c.eat_punct(",") {
                    break;
                }
            }
        }
        c.expect_punct(")")?;
    }
    Ok((name, sorts))
}

/// Items separated by `;` or `,` up to the closing brace.
fn parse_block<T>(
    c: &mut Cursor,
    mut item: impl FnMut(&mut Cursor) -> Result<T>,
) -> Result<Vec<T>> {
    c.expect_punct("{")?;
    let mut out = Vec::new();
    while !c.eat_punct("}") {
        out.push(item(c)?);
        if !c.eat_punct(";") && !c.eat_punct(",") && !c.is_punct("}") {
            return Err(c.error(format!(
                "expected `;` or `}}`, found {}",
                describe(c.peek())
            )));
        }
    }
    Ok(out)
}

pub fn parse_bat_source(file: &str, text: &str) -> Result<BatSource> {
    let mut c = Cursor::new(file, text)?;
    let mut src = BatSource::default();
    while !c.at_eof() {
        let Tok::Ident(kw) = c.peek().clone() else {
            return Err(c.error(format!(
                "expected a block keyword, found {}",
                describe(c.peek())
            )));
        };
        c.bump();
        match kw.as_str() {
            "types" => {
                c.expect_punct("{")?;
                while !c.eat_punct("}") {
                    c.expect_keyword("objects")?;
                    c.expect_punct(":")?;
                    loop {
                        src.objects.push(c.expect_ident()?);
                        if !c.eat_punct(",") {
                            break;
                        }
                    }
                    c.eat_punct(";");
                }
            }
            "actions" => src.actions.extend(parse_block(&mut c, parse_shape)?),
            "perf-tokens" => src.perf_tokens.extend(parse_block(&mut c, parse_shape)?),
            "fluents" => src.fluents.extend(parse_block(&mut c, parse_signature)?),
            "rigid" => src.rigids.extend(parse_block(&mut c, parse_signature)?),
            "init" => {
                c.expect_punct("{")?;
                while !c.eat_punct("}") {
                    src.init.push(parse_formula(&mut c)?);
                    if !c.eat_punct(";") && !c.is_punct("}") {
                        return Err(c.error(format!(
                            "expected `;` or `}}`, found {}",
                            describe(c.peek())
                        )));
                    }
                }
            }
            "poss" | "ssa" => {
                let (name, params) = parse_shape(&mut c)?;
                c.expect_punct("<-")?;
                let body = parse_formula(&mut c)?;
                c.expect_punct(";")?;
                if kw == "poss" {
                    src.poss.push(PossAxiom {
                        action: name,
                        params,
                        body,
                    });
                } else {
                    src.ssa.push(SuccessorStateAxiom {
                        fluent: name,
                        params,
                        body,
                    });
                }
            }
            other => return Err(c.error(format!("unknown block `{other}`"))),
        }
    }
    Ok(src)
}

impl BatSource {
    /// Resolves names and builds the theory. Fluents without a successor-state
    /// axiom are treated as rigid.
    pub fn resolve(&self) -> Result<BasicActionTheory> {
        let objects: Vec<Name> = self.objects.iter().map(Name::object).collect();
        let mk = |sort: Sort, items: &[(String, Vec<String>)]| -> Vec<Name> {
            items
                .iter()
                .map(|(s, args)| Name {
                    sort,
                    symbol: s.clone(),
                    args: args.iter().map(Name::object).collect(),
                })
                .collect()
        };
        let with_ssa: Vec<&String> = self.ssa.iter().map(|a| &a.fluent).collect();
        let mut fluents = BTreeMap::new();
        let mut rigids: BTreeMap<String, Vec<Sort>> = self.rigids.iter().cloned().collect();
        for (f, sorts) in &self.fluents {
            if with_ssa.contains(&f) {
                fluents.insert(f.clone(), sorts.clone());
            } else {
                rigids.insert(f.clone(), sorts.clone());
            }
        }
        let domain = Domain::new(
            objects,
            mk(Sort::Action, &self.actions),
            mk(Sort::PerfToken, &self.perf_tokens),
            fluents,
            rigids,
        )?;
        BasicActionTheory::new(
            domain,
            self.init.clone(),
            self.poss.clone(),
            self.ssa.clone(),
        )
    }

    pub fn to_text(&self) -> String {
        let shape = |(s, args): &(String, Vec<String>)| {
            if args.is_empty() {
                s.clone()
            } else {
                format!("{s}({})", args.join(","))
            }
        };
        let sig = |(s, sorts): &(String, Vec<Sort>)| {
            if sorts.is_empty() {
                s.clone()
            } else {
                let tags: Vec<&str> = sorts.iter().map(|t| t.tag()).collect();
                format!("{s}({})", tags.join(","))
            }
        };
        let mut out = String::new();
        writeln!(out, "types {{ objects: {}; }}", self.objects.join(", ")).unwrap();
        for (kw, items) in [
            ("actions", &self.actions),
            ("perf-tokens", &self.perf_tokens),
        ] {
            let items: Vec<String> = items.iter().map(shape).collect();
            writeln!(
                out,
                "{kw} {{ {} }}",
                items
                    .iter()
                    .map(|s| format!("{s};"))
                    .collect::<Vec<_>>()
                    .join(" ")
            )
            .unwrap();
        }
        for (kw, items) in [("fluents", &self.fluents), ("rigid", &self.rigids)] {
            let items: Vec<String> = items.iter().map(sig).collect();
            writeln!(
                out,
                "{kw} {{ {} }}",
                items
                    .iter()
                    .map(|s| format!("{s};"))
                    .collect::<Vec<_>>()
                    .join(" ")
            )
            .unwrap();
        }
        out.push_str("init {\n");
        for f in &self.init {
            writeln!(out, "  {f};").unwrap();
        }
        out.push_str("}\n");
        for p in &self.poss {
            writeln!(
                out,
                "poss {} <- {};",
                shape(&(p.action.clone(), p.params.clone())),
                p.body
            )
            .unwrap();
        }
        for s in &self.ssa {
            writeln!(
                out,
                "ssa {} <- {};",
                shape(&(s.fluent.clone(), s.params.clone())),
                s.body
            )
            .unwrap();
        }
        out
    }
}

pub fn parse_bat(file: &str, text: &str) -> Result<BasicActionTheory> {
    parse_bat_source(file, text)?.resolve()
}
