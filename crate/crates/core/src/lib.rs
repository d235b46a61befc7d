//! Verification and enumeration engine for the combinatorial restrictions on
//! degree-9 M-curves with three nests.
//!
//! The crate covers the scheme model and its Viro notation, the orientation
//! ledger, the complex orientation calculus, a catalog of cited restriction
//! rules, and an exhaustive elimination engine that closes every candidate
//! complex type of the all-even family.

pub mod ledger;
pub mod orevkov;
pub mod rules;
pub mod cli;
pub mod engine;
pub mod scheme;
pub mod tables;
pub mod viro;
