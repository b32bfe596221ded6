//! Confidence sets for the total causal effect of `X₁` on `X₂` in linear
//! structural equation models with equal error variances, when the causal
//! direction is not known in advance.

pub mod bootstrap;
pub mod confidence;
pub mod dist;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod lrt_inequality;
pub mod lrt_polynomial;
pub mod method;
pub mod model;
pub mod pairs;
pub mod split_lrt;

pub use confidence::ConfidenceSet;
pub use error::{Error, Result};
