//! Metric temporal logic with strict until, evaluated pointwise on finite timed words.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ta::{format_symbol, Prop, Symbol, TimedLetter};
use crate::time::{Interval, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mtl<A> {
    True,
    False,
    Atom(A),
    Not(Box<Mtl<A>>),
    And(Box<Mtl<A>>, Box<Mtl<A>>),
    Or(Box<Mtl<A>>, Box<Mtl<A>>),
    Until(Box<Mtl<A>>, Interval, Box<Mtl<A>>),
}

impl<A: Clone> Mtl<A> {
    pub fn atom(a: A) -> Self {
        Mtl::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        Mtl::Not(Box::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Mtl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Mtl::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        Mtl::or(Mtl::not(a), b)
    }

    pub fn until(a: Self, i: Interval, b: Self) -> Self {
        Mtl::Until(Box::new(a), i, Box::new(b))
    }

    /// `F_I f`, stored as `true U_I f`.
    pub fn eventually(i: Interval, f: Self) -> Self {
        Mtl::until(Mtl::True, i, f)
    }

    /// `G_I f`, stored as `!F_I !f`.
    pub fn always(i: Interval, f: Self) -> Self {
        Mtl::not(Mtl::eventually(i, Mtl::not(f)))
    }

    pub fn and_all(fs: impl IntoIterator<Item = Self>) -> Self {
        fs.into_iter().reduce(Mtl::and).unwrap_or(Mtl::True)
    }

    pub fn or_all(fs: impl IntoIterator<Item = Self>) -> Self {
        fs.into_iter().reduce(Mtl::or).unwrap_or(Mtl::False)
    }

    pub fn map_atoms<B: Clone>(&self, f: &impl Fn(&A) -> Mtl<B>) -> Mtl<B> {
        match self {
            Mtl::True => Mtl::True,
            Mtl::False => Mtl::False,
            Mtl::Atom(a) => f(a),
            Mtl::Not(g) => Mtl::not(g.map_atoms(f)),
            Mtl::And(a, b) => Mtl::and(a.map_atoms(f), b.map_atoms(f)),
            Mtl::Or(a, b) => Mtl::or(a.map_atoms(f), b.map_atoms(f)),
            Mtl::Until(a, i, b) => Mtl::until(a.map_atoms(f), i.clone(), b.map_atoms(f)),
        }
    }

    pub fn atoms(&self) -> Vec<&A> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a A>) {
        match self {
            Mtl::True | Mtl::False => {}
            Mtl::Atom(a) => out.push(a),
            Mtl::Not(g) => g.collect_atoms(out),
            Mtl::And(a, b) | Mtl::Or(a, b) | Mtl::Until(a, _, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn intervals(&self) -> Vec<&Interval> {
        match self {
            Mtl::True | Mtl::False | Mtl::Atom(_) => Vec::new(),
            Mtl::Not(g) => g.intervals(),
            Mtl::And(a, b) | Mtl::Or(a, b) => {
                let mut v = a.intervals();
                v.extend(b.intervals());
                v
            }
            Mtl::Until(a, i, b) => {
                let mut v = a.intervals();
                v.push(i);
                v.extend(b.intervals());
                v
            }
        }
    }

    /// Pointwise evaluation at position `i` of a word with the given
    /// timestamps; `atom(a, k)` decides atoms at position `k`.
    pub fn eval_with(
        &self,
        times: &[Rational],
        i: usize,
        atom: &impl Fn(&A, usize) -> bool,
    ) -> bool {
        match self {
            Mtl::True => true,
            Mtl::False => false,
            Mtl::Atom(a) => atom(a, i),
            Mtl::Not(g) => !g.eval_with(times, i, atom),
            Mtl::And(a, b) => a.eval_with(times, i, atom) && b.eval_with(times, i, atom),
            Mtl::Or(a, b) => a.eval_with(times, i, atom) || b.eval_with(times, i, atom),
            Mtl::Until(a, iv, b) => {
                for j in i + 1..times.len() {
                    let d = times[j] - times[i];
                    if iv.upper.is_some_and(|u| d > u) {
                        return false;
                    }
                    if iv.contains(&d) && b.eval_with(times, j, atom) {
                        return true;
                    }
                    if !a.eval_with(times, j, atom) {
                        return false;
                    }
                }
                false
            }
        }
    }

    /// Truth on the empty word: atoms and untils are false.
    pub fn eval_empty(&self) -> bool {
        match self {
            Mtl::True => true,
            Mtl::False | Mtl::Atom(_) | Mtl::Until(..) => false,
            Mtl::Not(g) => !g.eval_empty(),
            Mtl::And(a, b) => a.eval_empty() && b.eval_empty(),
            Mtl::Or(a, b) => a.eval_empty() || b.eval_empty(),
        }
    }

    /// `rho |= f` under a custom atom semantics, including the empty word.
    pub fn holds_with(&self, word: &[TimedLetter], atom: &impl Fn(&A, &Symbol) -> bool) -> bool {
        if word.is_empty() {
            return self.eval_empty();
        }
        let times: Vec<Rational> = word.iter().map(|l| l.time).collect();
        self.eval_with(&times, 0, &|a, k| atom(a, &word[k].symbol))
    }

    pub fn depth(&self) -> usize {
        match self {
            Mtl::True | Mtl::False | Mtl::Atom(_) => 0,
            Mtl::Not(g) => 1 + g.depth(),
            Mtl::And(a, b) | Mtl::Or(a, b) | Mtl::Until(a, _, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl Mtl<Prop> {
    /// Membership semantics: an atom holds iff it is in the symbol.
    pub fn eval(&self, word: &[TimedLetter], i: usize) -> Result<bool> {
        if i >= word.len() {
            return Err(Error::input(format!(
                "position {i} out of range for a word of length {}",
                word.len()
            )));
        }
        let times: Vec<Rational> = word.iter().map(|l| l.time).collect();
        Ok(self.eval_with(&times, i, &|p, k| word[k].symbol.contains(p)))
    }

    pub fn holds(&self, word: &[TimedLetter]) -> bool {
        self.holds_with(word, &|p, s| s.contains(p))
    }
}

/// Evaluation with single-symbol semantics: an atom `q` holds iff the
/// position's symbol equals `q`.
pub fn holds_in<A: Clone + PartialEq>(
    f: &Mtl<A>,
    word: &[TimedLetter],
    as_symbol: &impl Fn(&A) -> Symbol,
) -> bool {
    f.holds_with(word, &|a, s| *s == as_symbol(a))
}

/// All subsets of `p` in canonical order.
pub fn subsets(p: &BTreeSet<Prop>) -> Vec<Symbol> {
    let items: Vec<&Prop> = p.iter().collect();
    let mut out: Vec<Symbol> = (0u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, q)| (*q).clone())
                .collect()
        })
        .collect();
    out.sort();
    out
}

/// `p*` is the disjunction of every subset of `P` containing `p`.
pub fn star_map(f: &Mtl<Prop>, p: &BTreeSet<Prop>) -> Mtl<Symbol> {
    let all = subsets(p);
    f.map_atoms(&|a| Mtl::or_all(all.iter().filter(|s| s.contains(a)).cloned().map(Mtl::Atom)))
}

/// `exactly one proposition of P holds`
pub fn exactly_one(p: &BTreeSet<Prop>) -> Mtl<Prop> {
    Mtl::or_all(p.iter().map(|q| {
        Mtl::and_all(
            std::iter::once(Mtl::Atom(q.clone())).chain(
                p.iter()
                    .filter(|r| *r != q)
                    .map(|r| Mtl::not(Mtl::Atom(r.clone()))),
            ),
        )
    }))
}

/// `psi+ = psi & E & G E` with `E` the exactly-one constraint. The strict `G`
/// skips position 0, so `E` is also required there.
pub fn plus_map(psi: &Mtl<Prop>, p: &BTreeSet<Prop>) -> Mtl<Prop> {
    let e = exactly_one(p);
    Mtl::and(
        psi.clone(),
        Mtl::and(e.clone(), Mtl::always(Interval::unbounded(), e)),
    )
}

fn fmt_interval(i: &Interval) -> String {
    if *i == Interval::unbounded() {
        String::new()
    } else {
        i.to_string()
    }
}

fn fmt_mtl<A: PartialEq>(
    f: &Mtl<A>,
    out: &mut fmt::Formatter<'_>,
    atom: &impl Fn(&A) -> String,
) -> fmt::Result {
    match f {
        Mtl::True => out.write_str("true"),
        Mtl::False => out.write_str("false"),
        Mtl::Atom(a) => out.write_str(&atom(a)),
        Mtl::Not(g) => match g.as_ref() {
            Mtl::Until(t, i, inner) if **t == Mtl::True => {
                if let Mtl::Not(body) = inner.as_ref() {
                    write!(out, "G{} (", fmt_interval(i))?;
                    fmt_mtl(body, out, atom)?;
                    out.write_str(")")
                } else {
                    out.write_str("!(")?;
                    fmt_mtl(g, out, atom)?;
                    out.write_str(")")
                }
            }
            _ => {
                out.write_str("!(")?;
                fmt_mtl(g, out, atom)?;
                out.write_str(")")
            }
        },
        Mtl::And(a, b) | Mtl::Or(a, b) => {
            out.write_str("(")?;
            fmt_mtl(a, out, atom)?;
            out.write_str(if matches!(f, Mtl::And(..)) {
                " & "
            } else {
                " | "
            })?;
            fmt_mtl(b, out, atom)?;
            out.write_str(")")
        }
        Mtl::Until(a, i, b) => {
            if **a == Mtl::True {
                write!(out, "F{} (", fmt_interval(i))?;
                fmt_mtl(b, out, atom)?;
                return out.write_str(")");
            }
            out.write_str("(")?;
            fmt_mtl(a, out, atom)?;
            write!(out, " U{} ", fmt_interval(i))?;
            fmt_mtl(b, out, atom)?;
            out.write_str(")")
        }
    }
}

impl fmt::Display for Mtl<Prop> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_mtl(self, f, &|p: &Prop| p.0.clone())
    }
}

impl fmt::Display for Mtl<Symbol> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_mtl(self, f, &format_symbol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ta::symbol;
    use crate::time::int;

    fn letter(sym: &[&str], t: i64) -> TimedLetter {
        TimedLetter {
            symbol: symbol(sym.iter().copied()),
            time: int(t),
        }
    }

    fn at(p: &str) -> Mtl<Prop> {
        Mtl::Atom(Prop::from(p))
    }

    #[test]
    fn bounded_eventually() {
        let w = [letter(&["Calibrating"], 0), letter(&["Calibrated"], 5)];
        let f = Mtl::eventually(Interval::at_most(int(10)), at("Calibrated"));
        assert!(f.eval(&w, 0).unwrap());
        let g = Mtl::eventually(Interval::at_most(int(4)), at("Calibrated"));
        assert!(!g.eval(&w, 0).unwrap());
    }

    #[test]
    fn until_is_strict() {
        let w = [letter(&["q"], 0)];
        assert!(!Mtl::eventually(Interval::unbounded(), at("q"))
            .eval(&w, 0)
            .unwrap());
        assert!(Mtl::<Prop>::True.eval(&w, 1).is_err());
    }

    #[test]
    fn calibration_constraint_violation() {
        // G (!Calibrated -> !F[<=10] Perf(pick(o1)))
        let body = Mtl::implies(
            Mtl::not(at("Calibrated")),
            Mtl::not(Mtl::eventually(
                Interval::at_most(int(10)),
                at("Perf(pick(o1))"),
            )),
        );
        let w = [letter(&[], 0), letter(&["Perf(pick(o1))"], 5)];
        assert!(!body.eval(&w, 0).unwrap());
        assert!(!Mtl::and(body.clone(), Mtl::always(Interval::unbounded(), body)).holds(&w));
    }

    #[test]
    fn empty_word_convention() {
        assert!(!Mtl::eventually(Interval::unbounded(), at("a")).holds(&[]));
        assert!(Mtl::always(Interval::unbounded(), at("a")).holds(&[]));
    }

    #[test]
    fn star_of_conjunction_matches_worked_example() {
        let p: BTreeSet<Prop> = ["a", "b", "c"].into_iter().map(Prop::from).collect();
        let f = star_map(&Mtl::and(at("a"), at("b")), &p);
        let set = |xs: &[&str]| Mtl::Atom(symbol(xs.iter().copied()));
        let expected = Mtl::and(
            Mtl::or_all([
                set(&["a"]),
                set(&["a", "b"]),
                set(&["a", "b", "c"]),
                set(&["a", "c"]),
            ]),
            Mtl::or_all([
                set(&["a", "b"]),
                set(&["a", "b", "c"]),
                set(&["b"]),
                set(&["b", "c"]),
            ]),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn plus_over_single_proposition() {
        let p: BTreeSet<Prop> = [Prop::from("a")].into();
        let psi = Mtl::True;
        let f = plus_map(&psi, &p);
        assert!(f.holds(&[letter(&["a"], 0), letter(&["a"], 1)]));
        assert!(!f.holds(&[letter(&["a"], 0), letter(&[], 1)]));
        assert!(!f.holds(&[letter(&[], 0)]));
    }

    #[test]
    fn display_uses_derived_forms() {
        let f = Mtl::always(
            Interval::unbounded(),
            Mtl::implies(at("a"), Mtl::eventually(Interval::at_most(int(3)), at("b"))),
        );
        assert_eq!(f.to_string(), "G ((!(a) | F[0,3] (b)))");
    }
}
