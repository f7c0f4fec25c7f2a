//! Linear-sketch building blocks over length-`n` vectors. Every kind is a
//! linear map of the input vector kept as a flat measurement array, so
//! turnstile updates, adding two sketches, scalar multiplication and
//! singleton subtraction all operate directly on measurements.

pub mod hh;
pub mod l0;
pub mod l1;
pub mod norm;
pub mod seed;
pub mod state;
pub mod wes;

pub use seed::SketchSeed;
pub use state::{
    sketch_add, sketch_add_assign, sketch_scale, sketch_scale_assign, sketch_sub_singleton,
    sketch_update, LinearSketchState, SampleResult, SketchError, SketchKind,
};
