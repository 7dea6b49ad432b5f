//! Confluent supersymmetric transformations and Jordan-chain solutions of
//! one-dimensional Schrödinger equations with possibly energy-dependent potentials.

pub mod cli;
pub mod config;
pub mod error;
pub mod grid;
pub mod jordan;
pub mod models;
pub mod numdiff;
pub mod quad;
pub mod rng;
pub mod specfun;
pub mod susy;
pub mod verify;
pub mod wronskid;

pub use error::{Error, Result};
