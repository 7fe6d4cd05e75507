//! Core of the choice-completion laboratory.
//!
//! Everything here is `no_std` with `alloc`: eventually periodic name
//! streams, represented spaces and their completions, the problem catalog,
//! stream transducers with the library of realizer constructions, and the
//! reducibility knowledge base.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod lattice;
pub mod problems;
pub mod realizers;
pub mod spaces;
pub mod streams;
