//! Matrix-weighted graphs: each edge carries a vector `phi` in `R^k` and is
//! weighted by the rank-one matrix `phi phiᵀ`. This module builds the block
//! degree/Laplacian/normalized-Laplacian matrices, Schur complements and
//! partial Cholesky factorizations, spectral embeddings, the almost-regular
//! and expander decompositions driven by edge rescaling, and the
//! vertex-sampling preservation checks.

mod argd;
mod graph;
mod hed;
mod sampling;
mod schur;
mod spectrum;

pub use argd::{almost_regular_scaling, rescale_until_regular, ArgdReport};
pub use graph::{BlockDiag, MatrixWeightedGraph, MwError, Scaling};
pub use hed::{
    expander_scaling, rescale_until_expander, DecompositionTrace, HedError, WtmOutcome,
    WtmTraceStep,
};
pub use sampling::{ordinary_sampling_check, preservation_check, OrdinaryCheckConfig};
pub use schur::{partial_cholesky, schur_complement, schur_complement_padded, PartialCholesky};
pub use spectrum::{
    expander_h_values, expander_report, leverage_r, nontrivial_spectrum, spectral_embedding,
    upsilon_log, EmbeddingNorms, ExpanderReport, NontrivialSpectrum,
};
