pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod exact_arith;
pub mod finite_field;
pub mod formspaces;
pub mod invariants;
pub mod limits;
pub mod oracles;
pub mod verify;

pub use error::{Error, Result};
