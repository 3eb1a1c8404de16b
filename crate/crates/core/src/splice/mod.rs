//! Evaluation of splice expressions: Conway functions and linking matrices of
//! spliced links, plus cabling, connected sums, satellites and Torres removal.

mod closed_form;
mod dsl;
mod engine;
mod expr;
mod naming;
pub mod random;

pub use dsl::parse_expr;
pub use engine::{omega, splice_linking, torres_remove, verify_symmetry, Engine};
pub use expr::SpliceExpr;

use thiserror::Error;

use crate::link::LinkError;
use crate::symalg::SymError;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SpliceError {
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error("DegenerateSplice: {left} and {right} are both knots")]
    DegenerateSplice { left: String, right: String },
    #[error("MissingSublinkData: {link} has no registered sublink for the removal of {comp}")]
    MissingSublinkData { link: String, comp: String },
    #[error("TorresDegenerate: {comp} has zero linking with the rest of {link}")]
    TorresDegenerate { link: String, comp: String },
    #[error("NotPolynomial: reduced Conway function of {link} is {value}")]
    NotPolynomial { link: String, value: String },
    #[error("NotAKnot: {link} has {components} components")]
    NotAKnot { link: String, components: usize },
    #[error("VerificationFailed: {check}: {detail}")]
    VerificationFailed { check: String, detail: String },
    #[error("InvalidLinkSpec: {name}: {}", violations.join("; "))]
    InvalidLeaf {
        name: String,
        violations: Vec<String>,
    },
    #[error("SyntaxError at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("UnknownName at offset {offset}: {name}")]
    UnknownName { offset: usize, name: String },
    #[error("UnknownComponent at offset {offset}: {link} has no component {label}")]
    UnknownComponentAt {
        offset: usize,
        link: String,
        label: String,
    },
}

impl SpliceError {
    /// True for malformed input text, as opposed to well-formed input that
    /// fails mathematically.
    pub fn is_syntax(&self) -> bool {
        matches!(
            self,
            SpliceError::Syntax { .. }
                | SpliceError::Sym(SymError::Syntax { .. })
                | SpliceError::Sym(SymError::ZeroDenominator { .. })
                | SpliceError::Link(LinkError::CatalogParse { .. })
                | SpliceError::Link(LinkError::Expression { .. })
        )
    }
}
