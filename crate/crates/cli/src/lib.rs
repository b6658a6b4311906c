//! Front end for the dependence-logic engine: subcommand
//! implementations, the shipped fixture corpus, and the fuzzing
//! pipelines tying game semantics to the proof system.

pub mod commands;
pub mod fixtures;
