//! Prime fields, monomials and sparse multivariate polynomials.

mod field;
mod monomial;
mod parse;
mod polynomial;
mod ring;

pub use field::{PrimeField, DEFAULT_CHARACTERISTIC};
pub use monomial::{monomials_of_degree, Monomial, MonomialOrder};
pub use parse::PolyParseError;
pub use polynomial::{random_form, random_form_with, Polynomial, Term};
pub use ring::{Ring, RingSpec};
