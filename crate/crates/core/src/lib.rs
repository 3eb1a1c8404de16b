//! Exact multivariable Conway functions of links assembled by splicing,
//! cabling, satellite and connected-sum operations, together with a small
//! laboratory for the torsion of based chain complexes.

pub mod link;
pub mod selftest;
pub mod splice;
pub mod symalg;
pub mod torsion;
