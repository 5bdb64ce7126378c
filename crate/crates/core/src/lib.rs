//! Finite lattices, lattice-sentence model checking, Wallman spaces, the
//! constant-registry theory generator, and exact-rational PL continuum
//! surgery with an inverse-sequence driver.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod folang;
pub mod graph;
pub mod lattice;
pub mod rational;
pub mod sigma;
pub mod surgery;
pub mod tower;
pub mod wallman;

pub use error::{Error, Result};
