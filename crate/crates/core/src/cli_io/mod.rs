//! Text format for rings, matrices, complexes and ideals, and the
//! command-line driver.

mod command;
mod document;

pub use command::{
    exit_code, run_command, run_command_with, EXIT_CERTIFICATION, EXIT_EXHAUSTED, EXIT_OK,
    EXIT_USAGE, SEED_ENV,
};
pub use document::{grade_chain, SessionDocument};
