//! Resurgence numbers, asymptotic resurgence and skew Waldschmidt constants
//! for pairs of graded families of monomial ideals, in exact arithmetic.

pub mod closures;
pub mod error;
pub mod families;
pub mod monomial;
pub mod polyhedra;
pub mod report;
pub mod resurgence;
pub mod valuations;

pub use error::{Error, Result};
