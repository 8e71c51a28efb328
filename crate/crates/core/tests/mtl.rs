mod common;

use std::collections::BTreeSet;

use golog_synth::mtl::{holds_in, star_map, Mtl};
use golog_synth::ta::{symbol, Prop, Symbol, TimedLetter, TimedWord};
use golog_synth::time::Interval;
use proptest::prelude::*;

use common::{r, test_intervals};

fn p() -> Mtl<Prop> {
    Mtl::Atom(Prop::new("p"))
}

fn q() -> Mtl<Prop> {
    Mtl::Atom(Prop::new("q"))
}

fn word(letters: &[(&[&str], i64)]) -> TimedWord {
    letters
        .iter()
        .map(|(s, t)| TimedLetter {
            time: r(*t, 1),
            symbol: symbol(s.iter().copied()),
        })
        .collect()
}

#[test]
fn until_is_strict() {
    let w = word(&[(&["q"], 0)]);
    assert!(!Mtl::until(Mtl::True, Interval::unbounded(), q()).holds(&w));
    let w = word(&[(&[], 0), (&["q"], 1)]);
    assert!(Mtl::until(Mtl::False, Interval::unbounded(), q()).holds(&w));
}

#[test]
fn always_skips_the_first_position() {
    let w = word(&[(&[], 0), (&["p"], 1), (&["p"], 2)]);
    assert!(Mtl::always(Interval::unbounded(), p()).holds(&w));
    assert!(!Mtl::and(p(), Mtl::always(Interval::unbounded(), p())).holds(&w));
}

#[test]
fn bounds_are_measured_from_the_current_position() {
    let w = word(&[(&[], 0), (&[], 1), (&["p"], 3)]);
    assert!(!Mtl::eventually(Interval::at_most(r(2, 1)), p()).holds(&w));
    assert!(Mtl::eventually(Interval::at_most(r(3, 1)), p()).holds(&w));
    let open = Interval {
        lower_open: true,
        ..Interval::closed(r(3, 1), r(4, 1))
    };
    assert!(!Mtl::eventually(open, p()).holds(&w));
}

fn arb_formula() -> impl Strategy<Value = Mtl<Prop>> {
    let leaf = prop_oneof![Just(Mtl::True), Just(Mtl::False), Just(p()), Just(q())];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Mtl::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Mtl::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Mtl::or(a, b)),
            (inner.clone(), 0..3usize, inner).prop_map(|(a, i, b)| Mtl::until(
                a,
                test_intervals()[i].clone(),
                b
            )),
        ]
    })
}

fn arb_word() -> impl Strategy<Value = TimedWord> {
    prop::collection::vec((0..4u8, 0..3i64, 1..3i64), 1..5).prop_map(|letters| {
        let mut now = r(0, 1);
        letters
            .into_iter()
            .map(|(mask, n, d)| {
                now += r(n, d);
                let mut s = Symbol::new();
                if mask & 1 != 0 {
                    s.insert(Prop::new("p"));
                }
                if mask & 2 != 0 {
                    s.insert(Prop::new("q"));
                }
                TimedLetter {
                    time: now,
                    symbol: s,
                }
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn star_translation_agrees_pointwise(f in arb_formula(), w in arb_word()) {
        let props: BTreeSet<Prop> = [Prop::new("p"), Prop::new("q")].into();
        let star = star_map(&f, &props);
        prop_assert_eq!(f.holds(&w), holds_in(&star, &w, &|s: &Symbol| s.clone()));
    }

    #[test]
    fn eventually_and_always_are_dual(f in arb_formula(), w in arb_word(), i in 0..3usize) {
        let iv = test_intervals()[i].clone();
        let g = Mtl::always(iv.clone(), f.clone());
        let dual = Mtl::not(Mtl::eventually(iv, Mtl::not(f)));
        prop_assert_eq!(g.holds(&w), dual.holds(&w));
    }
}
