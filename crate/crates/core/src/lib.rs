//! Exact combinatorics of the 3-uniform cube hypergraph `Q(d)`.
//!
//! The crate models vertices and edges of `Q(d)` over the vertex set
//! `{0,1,2}^d`, the symmetry group generated by coordinate permutations and
//! per-coordinate value permutations, configuration normalisation and type
//! classification, loose-path certificates with an independent verifier, an
//! exhaustive backtracking engine for the dimension-4 base case, and the
//! inductive constructor that emits a verified loose Hamilton path between
//! any two vertices for every `d >= 4`.
//!
//! The crate is `no_std` (with `alloc`); file formats are plain-text codecs
//! on `str`/`String` so that all IO can live in a companion binary crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod builder;
pub mod config;
pub mod cube;
pub mod paths;
pub mod search;
pub mod store;
pub mod symmetry;

pub use cube::{Hyperedge, TritVector, MAX_DIM};
pub use config::Configuration;
pub use paths::{CertificateData, LoosePath};
pub use symmetry::Symmetry;
