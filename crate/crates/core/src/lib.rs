//! Exact computations for quotients `S/I` of a polynomial ring by a monomial
//! ideal: associated primes, depth, Stanley depth, Stanley decompositions and
//! pretty clean filtrations, together with the constructions that carry
//! decompositions and filtrations between `S/I` and `S/(I, u)` for a regular
//! monomial `u`.

pub mod cli;
pub mod error;
pub mod filtrations;
pub mod format;
mod linalg;
pub mod monomial;
pub mod scan;
pub mod spectrum;
pub mod stanley;
pub mod transforms;

pub use error::{Error, Result};
pub use monomial::{AmbientSplit, Monomial, MonomialIdeal, MonomialPrime};
pub use spectrum::CoefficientField;
