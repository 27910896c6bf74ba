//! Numerical toolkit for quantum coherence and entanglement resource
//! computations.
//!
//! The crate provides a dense complex linear-algebra core, state and
//! channel constructions for dephasing-covariant operations, the usual
//! scalar resource monotones, and finite-blocklength simulations of
//! classical-quantum channel coding protocols for coherence distillation
//! and formation.

pub mod asymptotic;
pub mod channels;
pub mod error;
pub mod io;
pub mod matrix;
pub mod monotones;
pub mod states;

pub use error::{Error, Result};
