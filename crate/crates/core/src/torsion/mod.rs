//! Torsion of based chain complexes over exact fields and the signed
//! multiplicativity identity for short exact sequences.

mod complex;
mod field;
mod format;
mod matrix;
pub mod random;
mod ses;

pub use complex::{BasedComplex, Counts};
pub use field::Field;
pub use format::parse_complex;
pub use matrix::Matrix;
pub use ses::{MultiplicativityReport, SesWitness};

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TorsionError {
    #[error("InvalidComplex: degree {degree}: {reason}")]
    InvalidComplex { degree: usize, reason: String },
    #[error("DegenerateBasis: degree {degree}")]
    DegenerateBasis { degree: usize },
    #[error("InvalidWitness: {reason}")]
    InvalidWitness { reason: String },
    #[error("SyntaxError: line {line}: {message}")]
    Syntax { line: usize, message: String },
}
