//! Text formats: action theories, programs, constraints and timed words.

mod bat;
mod constraint;
mod formula;
mod lexer;
mod program;

pub use bat::{parse_bat, parse_bat_source, BatSource};
pub use constraint::{ground_constraint, parse_constraint, parse_constraints, Constraint};
pub use formula::formula_from_str as parse_formula;
pub use program::parse_program;

use crate::error::Result;
use crate::ta::{check_word, TimedWord};

/// `[{"time": "0", "symbol": ["Ready"]}, ...]`
pub fn parse_word(text: &str) -> Result<TimedWord> {
    let w: TimedWord = serde_json::from_str(text)?;
    for l in &w {
        crate::time::check_non_negative(&l.time)?;
    }
    check_word(&w)?;
    Ok(w)
}

pub fn word_to_json(w: &TimedWord) -> String {
    serde_json::to_string(w).expect("word serializes")
}
