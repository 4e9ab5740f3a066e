//! Imbalanced binary classification with a Hellinger distance decision tree
//! feeding a one-hidden-layer sigmoid network.
//!
//! The pipeline lives in [`ensemble`]: a tree is grown with the skew-insensitive
//! Hellinger split criterion ([`hddt`]), the features it splits on are kept,
//! and its own prediction is appended as an extra input column for a small
//! network ([`ann`]). [`metrics`] and [`benchmark`] provide the confusion-matrix
//! evaluation and the repeated stratified split harness.

pub mod ann;
pub mod baseline;
pub mod benchmark;
pub mod dataset;
pub mod ensemble;
mod error;
pub mod hddt;
pub mod matrix;
pub mod metrics;

pub use error::{Error, Result};

pub use ann::{MlpModel, TrainConfig};
pub use dataset::{Dataset, FeatureKind, FeatureSpec, ScalingParams};
pub use ensemble::IecModel;
pub use hddt::{HddtModel, TreeConfig};
pub use matrix::Matrix;
pub use metrics::{ConfusionMatrix, MetricsReport};
