//! L(p,q)-labelings of oriented cycles and their Cartesian and strong products.
//!
//! The crate builds the graphs ([`graph`]), checks labelings against the
//! separation rules ([`labeling`]), searches for labelings exhaustively
//! ([`solver`]), constructs periodic labelings from cyclic patterns
//! ([`patterns`]), and answers λ queries for large tori with certificates
//! ([`theorems`]). [`document`] holds the JSON formats.

pub mod document;
pub mod error;
pub mod graph;
pub mod labeling;
pub mod patterns;
pub mod solver;
pub mod theorems;

pub use error::{Error, Result};
pub use graph::{Digraph, ProductKind};
pub use labeling::{Color, ConstraintParams, Labeling, Validator, Violation};
pub use solver::{SolveBudget, Solver};
