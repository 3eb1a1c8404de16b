//! Exact Laurent-polynomial and rational-function arithmetic over the integers.

mod gcd;
mod monomial;
mod parse;
mod poly;
mod ratfn;

pub use gcd::gcd;
pub use monomial::{is_valid_name, Monomial};
pub use parse::parse_ratfn;
pub use poly::LaurentPoly;
pub use ratfn::RatFn;

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SymError {
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("SingularSpecialization: denominator vanishes when substituting for {var}")]
    SingularSpecialization { var: String },
    #[error("ZeroDenominator at offset {offset}")]
    ZeroDenominator { offset: usize },
    #[error("SyntaxError at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
}
