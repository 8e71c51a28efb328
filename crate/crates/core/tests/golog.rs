mod common;

use golog_synth::golog::{enumerate_traces, ground_program};
use golog_synth::parse::parse_program;

#[test]
fn traces_agree_with_guarded_word_oracle() {
    let b = common::carrier();
    for text in common::PROGRAMS {
        let p = parse_program("test.golog", text).unwrap();
        let g = ground_program(&p, b.bat.domain()).unwrap();
        let got = enumerate_traces(&b.bat, &g, 6).unwrap().traces;
        let want = common::oracle_traces(&b.bat, &p, 6);
        assert_eq!(got, want, "{text}");
    }
}

#[test]
fn undeclared_action_is_rejected() {
    let b = common::carrier();
    let p = parse_program("test.golog", "do fly(m1,m2)").unwrap();
    assert!(ground_program(&p, b.bat.domain()).is_err());
}
