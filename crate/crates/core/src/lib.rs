pub mod canonical;
pub mod derivation;
pub mod error;
pub mod formula;
pub mod game;
pub mod graph;
pub mod io;

pub use error::{Error, Result};
