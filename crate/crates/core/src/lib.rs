//! Finite monoids, regular languages and expressions built from prefix codes
//! of bounded synchronization delay with group-labelled stars.
//!
//! The crate covers syntactic monoids of DFAs, membership of a monoid in the
//! class of monoids whose subgroups lie in a group variety, decomposition of
//! finite monoids into local Rees products with group leaves, and synthesis
//! and checking of group-star expressions for finite and ultimately periodic
//! infinite words.

pub mod automata;
pub mod codes;
pub mod config;
pub mod constructions;
pub mod decompose;
pub mod error;
pub mod example14;
pub mod groups;
pub mod monoid;
pub mod sdexpr;
pub mod varieties;

pub use error::{Error, Result};
pub use monoid::{DivisionWitness, ElementSet, Elem, Group, Limits, Monoid, MonoidHom};
