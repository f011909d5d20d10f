//! 8-bit grayscale PNG export for visual inspection.
//!
//! PNGs are write-only heatmaps; nothing in the pipeline reads them back.

use std::path::Path;

use crate::{Image2D, Result};

/// Display scaling for [`export_png`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PngScale {
    /// Linear min-max mapping to [0, 255].
    Linear,
    /// Logarithmic mapping `log10(1 + 9 t)` of the min-max normalized value;
    /// compresses bright outliers, used for entropy maps.
    Log,
}

/// Writes the image as an 8-bit grayscale PNG with min-max scaling.
pub fn export_png(img: &Image2D, path: impl AsRef<Path>, scale: PngScale) -> Result<()> {
    let (min, max) = img.min_max();
    let range = max - min;
    let mut buf = image::GrayImage::new(img.width() as u32, img.height() as u32);
    for y in 0..img.height() {
        for x in 0..img.width() {
            let t = if range > 0.0 {
                (img.get(y, x) - min) / range
            } else {
                0.0
            };
            let t = match scale {
                PngScale::Linear => t,
                PngScale::Log => (1.0 + 9.0 * t).log10(),
            };
            buf.put_pixel(x as u32, y as u32, image::Luma([(t * 255.0).round() as u8]));
        }
    }
    buf.save(path.as_ref())
        .map_err(|e| crate::Error::Format(format!("png encode failed: {e}")))?;
    Ok(())
}
