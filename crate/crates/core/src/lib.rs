//! Continuum eigenstates by single-shot factorization of the Hamiltonian
//! with confluent hypergeometric functions.

pub mod ansatz;
pub mod cli;
pub mod chf;
pub mod classify;
pub mod error;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};
