use super::lexer::{describe, Cursor, Tok};
use crate::error::Result;
use crate::logic::{Formula, Sort, Term};

pub fn parse_term(c: &mut Cursor) -> Result<Term> {
    let name = c.expect_ident()?;
    if c.eat_punct("(") {
        let mut args = Vec::new();
        if !c.is_punct(")") {
            loop {
                args.push(parse_term(c)?);
                if !c.eat_punct(",") {
                    break;
                }
            }
        }
        c.expect_punct(")")?;
        Ok(Term::App(name, args))
    } else {
        Ok(Term::Sym(name))
    }
}

pub fn parse_sort(c: &mut Cursor) -> Result<Sort> {
    let tag = c.expect_ident()?;
    Sort::from_tag(&tag)
        .ok_or_else(|| c.error(format!("unknown sort `{tag}` (expected o, a or p)")))
}

/// `name:sort` after a quantifier keyword; the sort tag is optional here so
/// that grounding can report untagged quantifiers.
pub fn parse_binder(c: &mut Cursor) -> Result<(String, Option<Sort>)> {
    let var = c.expect_ident()?;
    let sort = if c.eat_punct(":") {
        Some(parse_sort(c)?)
    } else {
        None
    };
    Ok((var, sort))
}

pub fn term_to_atom(t: Term) -> Formula {
    match t {
        Term::Sym(s) => Formula::atom(s, Vec::new()),
        Term::App(s, args) => Formula::atom(s, args),
        Term::Ground(n) => Formula::atom(n.symbol, n.args.into_iter().map(Term::Ground).collect()),
    }
}

/// Full situation formula: `<->` < `->` < `|` < `&` < unary.
pub fn parse_formula(c: &mut Cursor) -> Result<Formula> {
    let lhs = parse_implication(c)?;
    if c.eat_punct("<->") {
        let rhs = parse_formula(c)?;
        return Ok(Formula::iff(lhs, rhs));
    }
    Ok(lhs)
}

fn parse_implication(c: &mut Cursor) -> Result<Formula> {
    let lhs = parse_disjunction(c)?;
    if c.eat_punct("->") {
        let rhs = parse_implication(c)?;
        return Ok(Formula::implies(lhs, rhs));
    }
    Ok(lhs)
}

fn parse_disjunction(c: &mut Cursor) -> Result<Formula> {
    let mut parts = vec![parse_conjunction(c)?];
    while c.eat_punct("|") {
        parts.push(parse_conjunction(c)?);
    }
    Ok(if parts.len() == 1 {
        parts.pop().expect("one")
    } else {
        Formula::Or(parts)
    })
}

fn parse_conjunction(c: &mut Cursor) -> Result<Formula> {
    let mut parts = vec![parse_unary(c, false)?];
    while c.eat_punct("&") {
        parts.push(parse_unary(c, false)?);
    }
    Ok(if parts.len() == 1 {
        parts.pop().expect("one")
    } else {
        Formula::And(parts)
    })
}

/// Negation, quantifiers and primaries. With `restricted`, quantifier
/// bodies are unary too (used inside programs where `|` and `;` are taken).
pub fn parse_unary(c: &mut Cursor, restricted: bool) -> Result<Formula> {
    if c.eat_punct("!") {
        return Ok(Formula::not(parse_unary(c, restricted)?));
    }
    for (kw, exists) in [("exists", true), ("forall", false)] {
        if c.eat_ident(kw) {
            let (var, sort) = parse_binder(c)?;
            c.expect_punct(".")?;
            let body = Box::new(if restricted {
                parse_unary(c, true)?
            } else {
                parse_formula(c)?
            });
            return Ok(if exists {
                Formula::Exists { var, sort, body }
            } else {
                Formula::Forall { var, sort, body }
            });
        }
    }
    parse_primary(c)
}

fn parse_primary(c: &mut Cursor) -> Result<Formula> {
    if c.eat_punct("(") {
        let f = parse_formula(c)?;
        c.expect_punct(")")?;
        return Ok(f);
    }
    if c.eat_ident("true") {
        return Ok(Formula::True);
    }
    if c.eat_ident("false") {
        return Ok(Formula::False);
    }
    if !matches!(c.peek(), Tok::Ident(_)) {
        return Err(c.error(format!("expected a formula, found {}", describe(c.peek()))));
    }
    let t = parse_term(c)?;
    if c.eat_punct("=") || c.eat_punct("==") {
        return Ok(Formula::Eq(t, parse_term(c)?));
    }
    if c.eat_punct("!=") {
        return Ok(Formula::not(Formula::Eq(t, parse_term(c)?)));
    }
    Ok(term_to_atom(t))
}

pub fn formula_from_str(file: &str, text: &str) -> Result<Formula> {
    let mut c = Cursor::new(file, text)?;
    let f = parse_formula(&mut c)?;
    c.expect_eof()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_desugaring() {
        let f = formula_from_str("t", "a & b | c -> d").unwrap();
        let expected = Formula::implies(
            Formula::Or(vec![
                Formula::And(vec![Formula::atom("a", vec![]), Formula::atom("b", vec![])]),
                Formula::atom("c", vec![]),
            ]),
            Formula::atom("d", vec![]),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn printed_formulas_reparse() {
        for src in [
            "forall x:o. RAt(x) <-> x = m1",
            "exists l:o. RAt(l) & At(o1, l) & !Holding(o1)",
            "a = s_goto(s, g) | Perf(b) & !(exists p:o. a = e_pick(p))",
            "x != y",
        ] {
            let f = formula_from_str("t", src).unwrap();
            let g = formula_from_str("t", &f.to_string()).unwrap();
            assert_eq!(f, g, "{src}");
        }
    }

    #[test]
    fn quantifier_body_extends_right() {
        let f = formula_from_str("t", "exists x:o. P(x) & Q(x)").unwrap();
        assert!(matches!(f, Formula::Exists { body, .. } if matches!(*body, Formula::And(_))));
    }
}
