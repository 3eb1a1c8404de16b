//! Link data model and the catalog of base links.

mod catalog;
mod spec;

pub use catalog::{builtin_catalog, emit_catalog, format_linking, torus_link, Catalog};
pub use spec::{satisfies_symmetry, var_name, LinkSpec, LinkingMatrix, Violation};

use thiserror::Error;

use crate::symalg::SymError;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LinkError {
    #[error("CollisionError: label {label} would be used twice")]
    Collision { label: String },
    #[error("UnknownComponent: {link} has no component {label}")]
    UnknownComponent { link: String, label: String },
    #[error("ComponentCount: {link} has {expected} components, got {found} labels")]
    ComponentCount {
        link: String,
        expected: usize,
        found: usize,
    },
    #[error("UnknownName: no catalog entry named {name}")]
    UnknownLink { name: String },
    #[error("NonCoprime: gcd({p}, {q}) != 1")]
    NonCoprime { p: i64, q: i64 },
    #[error("InvalidMultiplicity: number of parallel copies must be >= 1, got {d}")]
    InvalidMultiplicity { d: i64 },
    #[error("ShadowedName: {name} is already defined")]
    Shadowed { name: String },
    #[error("InvalidLinkSpec: {name}: {}", violations.join("; "))]
    Invalid {
        name: String,
        violations: Vec<String>,
    },
    #[error("CatalogSyntax: line {line}: {message}")]
    CatalogParse { line: usize, message: String },
    #[error("{source} (catalog line {line})")]
    AtLine { line: usize, source: Box<LinkError> },
    #[error("CatalogSyntax: line {line}, column {column}: {source}")]
    Expression {
        line: usize,
        column: usize,
        source: SymError,
    },
}
