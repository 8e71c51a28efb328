use std::collections::BTreeSet;
use std::fmt;

use super::formula::{parse_binder, parse_term};
use super::lexer::{describe, Cursor, Tok};
use crate::error::{Error, Result};
use crate::logic::{resolve_term, Domain, Env, GroundAtom, Sort, Term};
use crate::mtl::Mtl;
use crate::ta::Prop;
use crate::time::{parse_rational, Interval, Rational};

/// A platform constraint as written: MTL with first-order atoms and typed quantifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    True,
    False,
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Constraint>),
    And(Box<Constraint>, Box<Constraint>),
    Or(Box<Constraint>, Box<Constraint>),
    Until(Box<Constraint>, Interval, Box<Constraint>),
    Exists(String, Option<Sort>, Box<Constraint>),
    Forall(String, Option<Sort>, Box<Constraint>),
}

fn bx(c: Constraint) -> Box<Constraint> {
    Box::new(c)
}

fn implies(a: Constraint, b: Constraint) -> Constraint {
    Constraint::Or(bx(Constraint::Not(bx(a))), bx(b))
}

fn parse_iff(c: &mut Cursor) -> Result<Constraint> {
    let lhs = parse_imp(c)?;
    if c.eat_punct("<->") {
        let rhs = parse_iff(c)?;
        return Ok(Constraint::And(
            bx(implies(lhs.clone(), rhs.clone())),
            bx(implies(rhs, lhs)),
        ));
    }
    Ok(lhs)
}

fn parse_imp(c: &mut Cursor) -> Result<Constraint> {
    let lhs = parse_or(c)?;
    if c.eat_punct("->") {
        return Ok(implies(lhs, parse_imp(c)?));
    }
    Ok(lhs)
}

fn parse_or(c: &mut Cursor) -> Result<Constraint> {
    let mut f = parse_and(c)?;
    while c.eat_punct("|") {
        f = Constraint::Or(bx(f), bx(parse_and(c)?));
    }
    Ok(f)
}

fn parse_and(c: &mut Cursor) -> Result<Constraint> {
    let mut f = parse_until(c)?;
    while c.eat_punct("&") {
        f = Constraint::And(bx(f), bx(parse_until(c)?));
    }
    Ok(f)
}

fn parse_until(c: &mut Cursor) -> Result<Constraint> {
    let lhs = parse_unary(c)?;
    if c.eat_ident("U") {
        let i = parse_interval_opt(c)?;
        let rhs = parse_until(c)?;
        return Ok(Constraint::Until(bx(lhs), i, bx(rhs)));
    }
    Ok(lhs)
}

fn parse_number(c: &mut Cursor) -> Result<Rational> {
    match c.peek().clone() {
        Tok::Num(n) => {
            c.bump();
            parse_rational(&n).map_err(|e| c.error(e.to_string()))
        }
        other => Err(c.error(format!("expected a number, found {}", describe(&other)))),
    }
}

/// `[<=c]`, `[<c]`, `[=c]`, `[>=c]`, `[>c]`, or `[a,b]`, `(a,b)`, `[a,inf)` and mixes.
fn parse_interval_opt(c: &mut Cursor) -> Result<Interval> {
    let opens_interval =
        c.is_punct("[") || (c.is_punct("(") && matches!(c.peek_at(1), Tok::Num(_)));
    if !opens_interval {
        return Ok(Interval::unbounded());
    }
    let lower_open = c.is_punct("(");
    c.bump();
    for (op, mk) in [
        ("<=", Interval::at_most as fn(Rational) -> Interval),
        ("<", Interval::less_than),
        (">=", Interval::at_least),
        (">", Interval::greater_than),
        ("==", Interval::exactly),
        ("=", Interval::exactly),
    ] {
        if c.eat_punct(op) {
            let v = parse_number(c)?;
            c.expect_punct("]")?;
            return Ok(mk(v));
        }
    }
    let lower = parse_number(c)?;
    c.expect_punct(",")?;
    let upper = if c.eat_ident("inf") {
        None
    } else {
        Some(parse_number(c)?)
    };
    let upper_open = if c.eat_punct(")") {
        true
    } else {
        c.expect_punct("]")?;
        false
    };
    Interval::new(lower, lower_open, upper, upper_open).map_err(|e| c.error(e.to_string()))
}

fn parse_unary(c: &mut Cursor) -> Result<Constraint> {
    if c.eat_punct("!") {
        return Ok(Constraint::Not(bx(parse_unary(c)?)));
    }
    if c.eat_ident("F") {
        let i = parse_interval_opt(c)?;
        return Ok(Constraint::Until(
            bx(Constraint::True),
            i,
            bx(parse_unary(c)?),
        ));
    }
    if c.eat_ident("G") {
        let i = parse_interval_opt(c)?;
        let body = parse_unary(c)?;
        return Ok(Constraint::Not(bx(Constraint::Until(
            bx(Constraint::True),
            i,
            bx(Constraint::Not(bx(body))),
        ))));
    }
    for (kw, exists) in [("exists", true), ("forall", false)] {
        if c.eat_ident(kw) {
            let (var, sort) = parse_binder(c)?;
            c.expect_punct(".")?;
            let body = bx(parse_iff(c)?);
            return Ok(if exists {
                Constraint::Exists(var, sort, body)
            } else {
                Constraint::Forall(var, sort, body)
            });
        }
    }
    if c.eat_punct("(") {
        let f = parse_iff(c)?;
        c.expect_punct(")")?;
        return Ok(f);
    }
    if c.eat_ident("true") {
        return Ok(Constraint::True);
    }
    if c.eat_ident("false") {
        return Ok(Constraint::False);
    }
    if !matches!(c.peek(), Tok::Ident(_)) {
        return Err(c.error(format!(
            "expected a constraint, found {}",
            describe(c.peek())
        )));
    }
    let t = parse_term(c)?;
    if c.eat_punct("=") || c.eat_punct("==") {
        return Ok(Constraint::Eq(t, parse_term(c)?));
    }
    if c.eat_punct("!=") {
        return Ok(Constraint::Not(bx(Constraint::Eq(t, parse_term(c)?))));
    }
    Ok(match t {
        Term::Sym(s) => Constraint::Atom(s, Vec::new()),
        Term::App(s, args) => Constraint::Atom(s, args),
        Term::Ground(_) => unreachable!("parser yields no ground terms"),
    })
}

/// One constraint per `;`-terminated item.
pub fn parse_constraints(file: &str, text: &str) -> Result<Vec<Constraint>> {
    let mut c = Cursor::new(file, text)?;
    let mut out = Vec::new();
    while !c.at_eof() {
        out.push(parse_iff(&mut c)?);
        if !c.eat_punct(";") && !c.at_eof() {
            return Err(c.error(format!("expected `;`, found {}", describe(c.peek()))));
        }
    }
    Ok(out)
}

pub fn parse_constraint(file: &str, text: &str) -> Result<Constraint> {
    let mut c = Cursor::new(file, text)?;
    let f = parse_iff(&mut c)?;
    c.expect_eof()?;
    Ok(f)
}

/// Grounds quantifiers over the domain and turns atoms into propositions.
/// Atoms must be theory atoms, declared actions, or members of `platform`.
pub fn ground_constraint(
    c: &Constraint,
    d: &Domain,
    platform: &BTreeSet<Prop>,
) -> Result<Mtl<Prop>> {
    ground_c(c, d, platform, &Env::new())
}

fn ground_c(c: &Constraint, d: &Domain, platform: &BTreeSet<Prop>, env: &Env) -> Result<Mtl<Prop>> {
    let rec = |x: &Constraint| ground_c(x, d, platform, env);
    Ok(match c {
        Constraint::True => Mtl::True,
        Constraint::False => Mtl::False,
        Constraint::Atom(name, args) => {
            if d.predicate(name).is_some() {
                let names = args
                    .iter()
                    .map(|t| resolve_term(t, d, env))
                    .collect::<Result<Vec<_>>>()?;
                let atom = GroundAtom::new(name.clone(), names);
                d.check_atom(&atom)?;
                Mtl::Atom(Prop::from(&atom))
            } else if d.constructor_sort(name) == Some(Sort::Action) {
                let a = resolve_term(&Term::App(name.clone(), args.clone()), d, env)?;
                if !d.is_action(&a) {
                    return Err(Error::Declaration(format!(
                        "constraint mentions undeclared action {a}"
                    )));
                }
                Mtl::Atom(Prop::from(&a))
            } else if args.is_empty() && platform.contains(&Prop::new(name.clone())) {
                Mtl::Atom(Prop::new(name.clone()))
            } else {
                return Err(Error::Declaration(format!(
                    "constraint mentions unknown proposition `{name}`"
                )));
            }
        }
        Constraint::Eq(a, b) => {
            if resolve_term(a, d, env)? == resolve_term(b, d, env)? {
                Mtl::True
            } else {
                Mtl::False
            }
        }
        Constraint::Not(g) => Mtl::not(rec(g)?),
        Constraint::And(a, b) => Mtl::and(rec(a)?, rec(b)?),
        Constraint::Or(a, b) => Mtl::or(rec(a)?, rec(b)?),
        Constraint::Until(a, i, b) => Mtl::until(rec(a)?, i.clone(), rec(b)?),
        Constraint::Exists(var, sort, body) | Constraint::Forall(var, sort, body) => {
            let sort = sort
                .ok_or_else(|| Error::input(format!("quantifier over `{var}` lacks a sort tag")))?;
            let mut parts = Vec::new();
            for n in d.extension(sort) {
                let mut inner = env.clone();
                inner.insert(var.clone(), n.clone());
                parts.push(ground_c(body, d, platform, &inner)?);
            }
            if matches!(c, Constraint::Exists(..)) {
                Mtl::or_all(parts)
            } else {
                Mtl::and_all(parts)
            }
        }
    })
}

fn fmt_interval(i: &Interval) -> String {
    if *i == Interval::unbounded() {
        String::new()
    } else {
        i.to_string()
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::True => f.write_str("true"),
            Constraint::False => f.write_str("false"),
            Constraint::Atom(name, args) => write!(f, "{}", Term::App(name.clone(), args.clone())),
            Constraint::Eq(a, b) => write!(f, "({a} = {b})"),
            Constraint::Not(g) => match g.as_ref() {
                Constraint::Until(t, i, body) if **t == Constraint::True => match body.as_ref() {
                    Constraint::Not(inner) => write!(f, "G{} ({inner})", fmt_interval(i)),
                    _ => write!(f, "!({g})"),
                },
                _ => write!(f, "!({g})"),
            },
            Constraint::And(a, b) => write!(f, "({a} & {b})"),
            Constraint::Or(a, b) => write!(f, "({a} | {b})"),
            Constraint::Until(a, i, b) if **a == Constraint::True => {
                write!(f, "F{} ({b})", fmt_interval(i))
            }
            Constraint::Until(a, i, b) => write!(f, "({a} U{} {b})", fmt_interval(i)),
            Constraint::Exists(v, s, body) | Constraint::Forall(v, s, body) => {
                let q = if matches!(self, Constraint::Exists(..)) {
                    "exists"
                } else {
                    "forall"
                };
                match s {
                    Some(s) => write!(f, "({q} {v}:{}. {body})", s.tag()),
                    None => write!(f, "({q} {v}. {body})"),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::int;

    #[test]
    fn interval_forms() {
        let cases = [
            ("F[<=10] a", Interval::at_most(int(10))),
            (
                "F[2,5) a",
                Interval::new(int(2), false, Some(int(5)), true).unwrap(),
            ),
            (
                "F(0,2) a",
                Interval::new(int(0), true, Some(int(2)), true).unwrap(),
            ),
            ("F[1,inf) a", Interval::at_least(int(1))),
            ("F[=1] a", Interval::exactly(int(1))),
        ];
        for (src, expected) in cases {
            let Constraint::Until(_, i, _) = parse_constraint("t", src).unwrap() else {
                panic!("{src}")
            };
            assert_eq!(i, expected, "{src}");
        }
    }

    #[test]
    fn printed_constraints_reparse() {
        for src in [
            "G (!Calibrated -> !F[<=10] exists p:o. Perf(pick(p)))",
            "G (Calibrating -> exists l:o. RAt(l) & Spacious(l))",
            "a U[2,5) b & F(0,2) c",
            "G[1,inf) (x = y)",
        ] {
            let f = parse_constraint("t", src).unwrap();
            let g = parse_constraint("t", &f.to_string()).unwrap();
            assert_eq!(f, g, "{src} printed as {f}");
        }
    }
}
