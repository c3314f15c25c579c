//! Non-adaptive threshold algorithms for matroid prophet inequalities.
//!
//! - [`matroid`]: graphic, uniform and partition matroids, greedy bases, polytope checks.
//! - [`distribution`] and [`model`]: discrete value distributions, the prophet
//!   benchmark, and the ex-ante reduction to a Bernoulli instance.
//! - [`graphic`]: orientation + random-cut thresholds for graphic matroids.
//! - [`baselines`]: single-threshold rules for uniform and partition matroids.
//! - [`sim`]: online execution, exact expectations and Monte Carlo ratios.

pub mod baselines;
pub mod distribution;
pub mod error;
pub mod generate;
pub mod graphic;
pub mod instance_file;
pub mod matroid;
pub mod model;
pub mod sim;
pub mod threshold;

pub use distribution::{DiscreteDistribution, QuantileThreshold};
pub use error::{Error, Result};
pub use matroid::{AnyMatroid, GraphicMatroid, GroundSet, Matroid, PartitionMatroid, UniformMatroid, WeightVector};
pub use model::{BernoulliInstance, ExAnteReduction, ProphetInstance, ReductionMode};
pub use threshold::{Threshold, ThresholdRule};
