//! Weighted graph sparsification by linear sketching.
//!
//! The crate has three layers:
//!
//! * numeric base — dense symmetric linear algebra ([`linalg`]) and
//!   scalar-weighted graph primitives ([`graph`], [`mincut`]);
//! * sketching — linear sketch building blocks ([`sketch`]), turnstile cut
//!   sparsification ([`cutsketch`]) and spectral sparsification
//!   ([`spectral`]);
//! * analysis tools — matrix-weighted graphs with almost-regular and
//!   expander decompositions ([`mw`]) and the block-cycle experiment
//!   harness ([`lowerbound`]).

pub mod cutsketch;
pub mod io;
pub mod mw;
pub mod graph;
pub mod linalg;
pub mod mincut;
pub mod sketch;

pub use graph::WeightedGraph;
pub use linalg::SymMatrix;
pub use sketch::SketchSeed;
