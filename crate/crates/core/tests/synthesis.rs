use std::collections::BTreeSet;
use std::path::PathBuf;

use golog_synth::bundle::Bundle;
use golog_synth::mtl::Mtl;
use golog_synth::synthesis::{
    synthesize, validate_controller, Outcome, SynthesisOptions, TraceContext,
};
use golog_synth::ta::{
    format_word, parallel_compose, Granularity, Guard, Prop, Symbol, TimedAutomaton, Transition,
};

fn carrier() -> Bundle {
    Bundle::load_dir(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/carrier")).unwrap()
}

fn mu() -> Granularity {
    Granularity::new(["t_p".to_string(), "t_c".to_string()], 1, 11).unwrap()
}

#[test]
fn carrier_controller_passes_validation() {
    let b = carrier();
    let plant = b.plant(10_000).unwrap();
    let c = controller(&plant, &b.constraints).expect("realizable");
    assert!(c.is_deterministic());
    assert!(c.locations.iter().all(|l| c.is_final(l)));
    let ctx = TraceContext {
        bat: &b.bat,
        program: b.program().unwrap(),
    };
    let report = validate_controller(&plant, &c, &b.constraints, &mu(), 10, Some(&ctx)).unwrap();
    assert!(report.passed(), "{report}");
    assert!(!report.final_words.is_empty());
}

fn constraint(b: &Bundle, text: &str) -> golog_synth::mtl::Mtl<golog_synth::ta::Prop> {
    let c = golog_synth::parse::parse_constraint("test.mtl", text).unwrap();
    let props = b.platform.as_ref().unwrap().alphabet();
    golog_synth::parse::ground_constraint(&c, b.bat.domain(), &props).unwrap()
}

fn controller(plant: &TimedAutomaton, phi: &[Mtl<Prop>]) -> Option<TimedAutomaton> {
    match synthesize(plant, phi, &SynthesisOptions::new(mu())).unwrap() {
        Outcome::Controller(c) => Some(c.automaton),
        Outcome::Unrealizable { .. } => None,
    }
}

/// Accepts every plant symbol everywhere.
fn universal(plant: &TimedAutomaton) -> TimedAutomaton {
    let symbols: BTreeSet<Symbol> = plant.transitions.iter().map(|t| t.symbol.clone()).collect();
    TimedAutomaton {
        locations: vec!["U".into()],
        initial: "U".into(),
        finals: BTreeSet::from(["U".to_string()]),
        clocks: BTreeSet::new(),
        actions: plant.actions.clone(),
        transitions: symbols
            .into_iter()
            .map(|symbol| Transition {
                from: "U".into(),
                symbol,
                guard: Guard::top(),
                resets: BTreeSet::new(),
                to: "U".into(),
            })
            .collect(),
    }
}

#[test]
fn forbidding_goto_is_unrealizable() {
    let b = carrier();
    let plant = b.plant(10_000).unwrap();
    let phi = vec![constraint(&b, "G !(exists x:o. exists y:o. s_goto(x,y))")];
    assert!(controller(&plant, &phi).is_none());
    assert!(controller(&plant, &[constraint(&b, "false")]).is_none());
}

#[test]
fn empty_specification_is_permissive() {
    let b = carrier();
    let plant = b.plant(10_000).unwrap();
    let c = controller(&plant, &[]).unwrap();
    let free = validate_controller(&plant, &universal(&plant), &[], &mu(), 8, None).unwrap();
    let closed = parallel_compose(&plant, &c).unwrap();
    assert!(!free.final_words.is_empty());
    for w in &free.final_words {
        assert!(closed.accepts(w), "{}", format_word(w));
    }
}

#[test]
fn synthesis_is_deterministic() {
    let b = carrier();
    let plant = b.plant(10_000).unwrap();
    let a = controller(&plant, &b.constraints).unwrap().to_json();
    assert_eq!(controller(&plant, &b.constraints).unwrap().to_json(), a);
}

#[test]
fn adding_constraints_shrinks_the_closed_loop() {
    let b = carrier();
    let plant = b.plant(10_000).unwrap();
    let weak = controller(&plant, &b.constraints[..1]).unwrap();
    let strong = controller(&plant, &b.constraints).unwrap();
    let report = validate_controller(&plant, &strong, &b.constraints, &mu(), 8, None).unwrap();
    let loose = parallel_compose(&plant, &weak).unwrap();
    for w in &report.final_words {
        assert!(loose.accepts(w), "{}", format_word(w));
    }
}

#[test]
fn resetting_a_plant_clock_violates_condition_one() {
    let b = carrier();
    let plant = b.plant(10_000).unwrap();
    let mut c = universal(&plant);
    c.transitions[0].resets.insert("t_p".into());
    let report = validate_controller(&plant, &c, &[], &mu(), 2, None).unwrap();
    assert!(
        report
            .violations
            .iter()
            .any(|v| v.condition == "condition-1"),
        "{report}"
    );
}

#[test]
fn missing_environment_edge_violates_condition_two() {
    let b = carrier();
    let plant = b.plant(10_000).unwrap();
    let mut c = controller(&plant, &b.constraints).unwrap();
    c.transitions
        .retain(|t| !t.symbol.contains(&Prop::new("e_goto(m1,m2)")));
    let report = validate_controller(&plant, &c, &b.constraints, &mu(), 10, None).unwrap();
    let v = report
        .violations
        .iter()
        .find(|v| v.condition == "condition-2")
        .expect("condition-2 violation");
    assert!(v
        .word
        .last()
        .unwrap()
        .symbol
        .contains(&Prop::new("e_goto(m1,m2)")));
    assert!(v.to_string().starts_with("VIOLATION condition-2 "));
}
