//! Fundamental image container, file I/O, normalization and transmission-map
//! reconstruction shared by every other crate in the workspace.
//!
//! All pixel arithmetic is `f64`; images are immutable value types and every
//! operation returns a new image, so concurrent use is safe.

pub mod error;
pub mod image2d;
pub mod mask;
pub mod npy;
pub mod png;
pub mod roi;
pub mod stats;
pub mod transmission;

pub use error::{Error, Result};
pub use image2d::Image2D;
pub use mask::Mask2D;
pub use npy::{load_npy, save_npy};
pub use png::{export_png, PngScale};
pub use roi::Roi;
pub use stats::{percentile, percentile_normalize, stat_outside_roi};
pub use transmission::{from_log, reconstruct_transmission, to_log};

/// Default floor used when dividing by a flat field.
pub const DEFAULT_DIVISION_FLOOR: f64 = 1e-6;

/// Default epsilon for log-domain conversion.
pub const DEFAULT_LOG_EPSILON: f64 = 1e-6;
