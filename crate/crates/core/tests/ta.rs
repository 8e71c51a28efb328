mod common;

use golog_synth::error::Error;
use golog_synth::pta::determinize;
use golog_synth::ta::{parallel_compose, product, symbol, Granularity, Guard, TimedAutomaton};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{r, random_automaton, words_with_delays};

fn untimed(mut t: TimedAutomaton) -> TimedAutomaton {
    t.clocks.clear();
    for tr in &mut t.transitions {
        tr.guard = Guard::top();
        tr.resets.clear();
    }
    t.transitions.sort();
    t.transitions.dedup();
    t
}

#[test]
fn shared_clocks_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_automaton(&mut rng, &[symbol(["a"])], "x");
    let b = random_automaton(&mut rng, &[symbol(["b"])], "x");
    assert!(parallel_compose(&a, &b).is_err());
    assert!(product(&a, &b).is_err());
}

#[test]
fn overlapping_alphabets_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = random_automaton(&mut rng, &[symbol(["a"])], "x");
    let b = random_automaton(&mut rng, &[symbol(["a", "b"])], "y");
    assert!(matches!(product(&a, &b), Err(Error::Precondition(_))));
}

#[test]
fn determinization_preserves_the_language() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let symbols = [symbol(["a"]), symbol(["b"])];
    let words = words_with_delays(&symbols, &[r(0, 1)], 4);
    for _ in 0..200 {
        let t = untimed(random_automaton(&mut rng, &symbols, "x"));
        let d = determinize(&t).unwrap();
        assert!(d.is_deterministic());
        for w in &words {
            assert_eq!(t.accepts(w), d.accepts(w));
        }
    }
}

#[test]
fn granularity_rejects_finer_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mu = Granularity::new(["x".to_string()], 1, 2).unwrap();
    let fine = Granularity::new(["x".to_string()], 2, 4).unwrap();
    for _ in 0..50 {
        let t = random_automaton(&mut rng, &[symbol(["a"])], "x");
        let halves = t
            .transitions
            .iter()
            .any(|tr| tr.guard.to_string().contains('/'));
        assert_eq!(t.check_granularity(&mu).is_ok(), !halves, "{}", t.to_json());
        assert!(t.check_granularity(&fine).is_ok());
    }
}
