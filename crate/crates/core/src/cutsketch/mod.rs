//! Weighted cut sparsification: the model-oblivious reference algorithm and
//! its linear-sketch implementation over turnstile streams.

mod bundle;
mod wgm;

pub use bundle::{
    recover_cut_sparsifier, recover_spanning_forest, ContractionMap, CutSketchBundle,
    CutSketchConfig, ForestOutcome, RecoverError,
};
pub use wgm::{cut_sparsify_reference, strong_components, CutConstants};
