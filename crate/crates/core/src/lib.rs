//! Exact computations with finite free resolutions over `F_p[x_1, ..., x_d]`:
//! Gröbner bases and syzygies, Buchsbaum–Eisenbud ideals and exactness
//! certificates, m-torsionless certification, and the rewriting of a
//! resolution so that its tail resolves an ideal with at most three
//! generators.

pub mod cli_io;
pub mod construct;
pub mod error;
pub mod groebner;
pub mod invariants;
pub mod koszul;
pub mod matrix;
pub mod poly;
pub mod presented;

pub use error::{Error, Result};
