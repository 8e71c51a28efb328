mod common;

use golog_synth::parse::{parse_bat_source, parse_constraints, parse_program};
use golog_synth::ta::{symbol, TimedAutomaton};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{fixture_dir, random_automaton, PROGRAMS};

fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_dir("carrier").join(name)).unwrap()
}

#[test]
fn theory_survives_printing() {
    let src = parse_bat_source("carrier.bat", &fixture("carrier.bat")).unwrap();
    let again = parse_bat_source("printed.bat", &src.to_text()).unwrap();
    assert_eq!(src, again);
    assert_eq!(again.to_text(), src.to_text());
}

#[test]
fn programs_survive_printing() {
    for text in PROGRAMS
        .iter()
        .copied()
        .chain([fixture("fetch.golog").as_str()])
    {
        let p = parse_program("a.golog", text).unwrap();
        let printed = p.to_string();
        let q = parse_program("b.golog", &printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
        assert_eq!(p, q, "{text}");
    }
}

#[test]
fn constraints_survive_printing() {
    let extra = "F[1,2] (p & !q); (p U(1,2] q) | G[0,3] r; !(true -> false)";
    for text in [fixture("constraints.mtl"), extra.to_string()] {
        let cs = parse_constraints("a.mtl", &text).unwrap();
        let printed: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
        let again = parse_constraints("b.mtl", &printed.join(";\n")).unwrap();
        assert_eq!(cs, again, "{printed:?}");
    }
}

#[test]
fn automata_survive_json() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let symbols = [symbol(["a"]), symbol(["b", "c"]), symbol([])];
    for _ in 0..100 {
        let t = random_automaton(&mut rng, &symbols, "x");
        let json = t.to_json();
        let back = TimedAutomaton::from_json(&json).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json(), json);
    }
}
