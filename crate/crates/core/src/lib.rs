//! Exact commutative algebra over prime fields: Groebner bases, ideal
//! arithmetic, graded quotient rings, good filtrations, Hilbert-Samuel
//! numerics, Buchsbaum-type invariants, and a certification pipeline for
//! the associated graded ring, driven by a small session language.

pub mod certify;
pub mod error;
pub mod field;
pub mod filtration;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod invariant;
pub mod monomial;
pub mod poly;
pub mod quotient;
pub mod runner;
pub mod session;

pub use error::{Error, Result};
