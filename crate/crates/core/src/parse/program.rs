use std::fmt;

use super::formula::{parse_sort, parse_term, parse_unary};
use super::lexer::{describe, Cursor, Tok};
use crate::error::Result;
use crate::golog::Program;
use crate::logic::{Formula, Term};

/// `par (||) < choice (|) < seq (;) < postfix star`
pub fn parse_program_at(c: &mut Cursor) -> Result<Program> {
    let mut p = parse_choice(c)?;
    while c.eat_punct("||") {
        p = Program::interleave(p, parse_choice(c)?);
    }
    Ok(p)
}

fn parse_choice(c: &mut Cursor) -> Result<Program> {
    let mut p = parse_seq(c)?;
    while c.eat_punct("|") {
        p = Program::choice(p, parse_seq(c)?);
    }
    Ok(p)
}

fn parse_seq(c: &mut Cursor) -> Result<Program> {
    let mut p = parse_postfix(c)?;
    while c.eat_punct(";") {
        if c.is_punct("}") || c.is_punct(")") || c.at_eof() {
            break;
        }
        p = Program::seq(p, parse_postfix(c)?);
    }
    Ok(p)
}

fn parse_postfix(c: &mut Cursor) -> Result<Program> {
    let mut p = parse_atomic(c)?;
    while c.eat_punct("*") {
        p = Program::star(p);
    }
    Ok(p)
}

fn parse_atomic(c: &mut Cursor) -> Result<Program> {
    if c.eat_punct("{") {
        let p = parse_program_at(c)?;
        c.expect_punct("}")?;
        return Ok(p);
    }
    if c.eat_punct("(") {
        let p = parse_program_at(c)?;
        c.expect_punct(")")?;
        return Ok(p);
    }
    if c.eat_punct("?") {
        return Ok(Program::Test(parse_unary(c, true)?));
    }
    if c.eat_ident("nil") {
        return Ok(Program::nil());
    }
    if c.eat_ident("pi") {
        let var = c.expect_ident()?;
        c.expect_punct(":")?;
        let sort = parse_sort(c)?;
        c.expect_punct("{")?;
        let body = parse_program_at(c)?;
        c.expect_punct("}")?;
        return Ok(Program::Pick {
            var,
            sort,
            body: Box::new(body),
        });
    }
    if c.eat_ident("do") {
        let t = parse_term(c)?;
        let (name, args) = match t {
            Term::App(n, a) => (n, a),
            Term::Sym(n) => (n, Vec::new()),
            Term::Ground(_) => unreachable!("parser yields no ground terms"),
        };
        return Ok(Program::seq(
            Program::Action(Term::App(format!("s_{name}"), args.clone())),
            Program::Action(Term::App(format!("e_{name}"), args)),
        ));
    }
    if matches!(c.peek(), Tok::Ident(_)) {
        return Ok(Program::Action(parse_term(c)?));
    }
    Err(c.error(format!("expected a program, found {}", describe(c.peek()))))
}

pub fn parse_program(file: &str, text: &str) -> Result<Program> {
    let mut c = Cursor::new(file, text)?;
    let p = parse_program_at(&mut c)?;
    c.expect_eof()?;
    Ok(p)
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Program::Action(t) => write!(f, "{t}"),
            Program::Test(Formula::True) => f.write_str("nil"),
            Program::Test(phi) => write!(f, "?({phi})"),
            Program::Seq(a, b) => write!(f, "({a}; {b})"),
            Program::Choice(a, b) => write!(f, "({a} | {b})"),
            Program::Interleave(a, b) => write!(f, "({a} || {b})"),
            Program::Star(a) => write!(f, "({a})*"),
            Program::Pick { var, sort, body } => write!(f, "pi {var}:{} {{ {body} }}", sort.tag()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_shape() {
        let p = parse_program(
            "t",
            "pi lr:o { ?RAt(lr); pi o:o { pi lo:o { ?At(o,lo); do goto(lr,lo); do pick(o) } } }",
        )
        .unwrap();
        let Program::Pick { var, body, .. } = &p else {
            panic!("expected pick")
        };
        assert_eq!(var, "lr");
        assert!(matches!(body.as_ref(), Program::Seq(..)));
        assert_eq!(parse_program("t", &p.to_string()).unwrap(), p);
    }

    #[test]
    fn operator_precedence() {
        let p = parse_program("t", "a; b | c || d*").unwrap();
        let expected = Program::interleave(
            Program::choice(
                Program::seq(
                    Program::Action(Term::Sym("a".into())),
                    Program::Action(Term::Sym("b".into())),
                ),
                Program::Action(Term::Sym("c".into())),
            ),
            Program::star(Program::Action(Term::Sym("d".into()))),
        );
        assert_eq!(p, expected);
        assert_eq!(parse_program("t", &p.to_string()).unwrap(), p);
    }

    #[test]
    fn errors_are_positioned() {
        let err = parse_program("prog.golog", "a;\n | b").unwrap_err();
        assert!(err.to_string().starts_with("prog.golog:2:2:"), "{err}");
    }
}
