//! Synthetic dataset generator.
//!
//! Every generated image carries an exact multiplicative decomposition
//! (beam envelope x sample attenuation x signal map x artifact layer x
//! noise), so downstream corrections can be scored against ground truth.
//! All randomness flows from explicit seeds; regeneration is bit-exact.

pub mod artifact;
pub mod dataset;
pub mod rng;
pub mod scene;
pub mod signal;

pub use artifact::{drift_artifact, gen_master_pattern, ArtifactModel, DriftConfig, DriftParams};
pub use dataset::{gen_dataset, DatasetConfig, Manifest};
pub use scene::{gen_bundle, gen_cold_shot, inject, BundleSeeds, GroundTruthBundle, SceneConfig};
pub use signal::{gen_filament_map, gen_shock_map, FilamentGeometry, FilamentTruth, ShockGeometry};

/// Fraction of image height (top rows) reserved for registration; signal
/// supports never overlap it.
pub const REGISTRATION_BAND_FRAC: f64 = 0.2;
