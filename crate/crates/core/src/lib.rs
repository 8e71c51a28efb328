//! Compiling Golog programs over determinate finite-domain action theories
//! into timed automata, and synthesizing controllers against MTL platform
//! constraints.

pub mod bat;
pub mod bundle;
pub mod cli;
pub mod error;
pub mod golog;
pub mod logic;
pub mod mtl;
pub mod parse;
pub mod platform;
pub mod pta;
pub mod simulate;
pub mod synthesis;
pub mod ta;
pub mod time;

pub use error::{Error, Result};
