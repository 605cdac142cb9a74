//! Host-side plumbing for the cube-hypergraph engine: file IO around the
//! core text codecs and the parallel base-case orchestrator.

pub mod files;
pub mod orchestrate;
