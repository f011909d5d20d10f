//! Low-frequency masking plus percentile magnitude thresholding.

use serde::{Deserialize, Serialize};
use transmap_core::{percentile, reconstruct_transmission, Error, Image2D, Result};

use crate::fft::{fft2, ifft2, ComplexSpectrum};

/// Parameters of the Fourier filter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FourierFilterConfig {
    /// Radius (in frequency bins) of the DC-centered disk that is zeroed.
    pub lowfreq_radius: usize,
    /// Percentile of the surviving coefficient magnitudes above which
    /// coefficients are zeroed.
    pub magnitude_percentile: f64,
    /// Exclude the zeroed DC disk when computing the percentile; including
    /// it would drag the percentile down with zeros.
    pub exclude_dc_region_from_threshold: bool,
    /// Compute the percentile from the unmasked spectrum instead of after
    /// the low-frequency mask.
    pub threshold_before_mask: bool,
}

impl Default for FourierFilterConfig {
    fn default() -> Self {
        Self {
            lowfreq_radius: 20,
            magnitude_percentile: 99.5,
            exclude_dc_region_from_threshold: true,
            threshold_before_mask: false,
        }
    }
}

impl FourierFilterConfig {
    /// Validates the config against an image shape.
    pub fn validate_for(&self, height: usize, width: usize) -> Result<()> {
        let limit = height.min(width) / 2;
        if self.lowfreq_radius == 0 || self.lowfreq_radius >= limit {
            return Err(Error::Parameter(format!(
                "lowfreq_radius {} must be in (0, {}) for a {}x{} image",
                self.lowfreq_radius, limit, height, width
            )));
        }
        if !(0.0 < self.magnitude_percentile && self.magnitude_percentile < 100.0) {
            return Err(Error::Parameter(format!(
                "magnitude_percentile {} outside (0, 100)",
                self.magnitude_percentile
            )));
        }
        Ok(())
    }
}

/// Zeroes every coefficient whose DC-centered radius is `<= radius`.
pub fn apply_lowfreq_mask(spec: &mut ComplexSpectrum, radius: usize) {
    let (h, w) = (spec.height(), spec.width());
    let r = radius as f64;
    for fy in 0..h {
        for fx in 0..w {
            if spec.radius(fy, fx) <= r {
                spec.data_mut()[fy * w + fx] = Default::default();
            }
        }
    }
}

/// Filters one image: low-frequency mask, percentile magnitude threshold,
/// inverse transform, then mean restoration.
pub fn filter_image(img: &Image2D, cfg: &FourierFilterConfig) -> Result<Image2D> {
    cfg.validate_for(img.height(), img.width())?;
    let mean_in = img.mean();
    let mut spec = fft2(img);
    let (h, w) = (spec.height(), spec.width());
    let radius = cfg.lowfreq_radius as f64;

    let threshold_source: Vec<f64> = {
        let collect = |s: &ComplexSpectrum| {
            let mut mags = Vec::with_capacity(h * w);
            for fy in 0..h {
                for fx in 0..w {
                    if cfg.exclude_dc_region_from_threshold && s.radius(fy, fx) <= radius {
                        continue;
                    }
                    mags.push(s.get(fy, fx).norm());
                }
            }
            mags
        };
        if cfg.threshold_before_mask {
            collect(&spec)
        } else {
            apply_lowfreq_mask(&mut spec, cfg.lowfreq_radius);
            collect(&spec)
        }
    };
    if cfg.threshold_before_mask {
        apply_lowfreq_mask(&mut spec, cfg.lowfreq_radius);
    }

    let threshold = percentile(&threshold_source, cfg.magnitude_percentile)?;
    for c in spec.data_mut() {
        if c.norm() > threshold {
            *c = Default::default();
        }
    }

    let filtered = ifft2(&spec);
    let offset = mean_in - filtered.mean();
    Ok(filtered.map(|v| v + offset))
}

/// Filters shot and flat independently, then reconstructs the transmission.
pub fn filter_and_reconstruct(
    shot: &Image2D,
    flat: &Image2D,
    cfg: &FourierFilterConfig,
    floor: f64,
) -> Result<Image2D> {
    shot.check_same_shape(flat, "filter_and_reconstruct")?;
    let shot_f = filter_image(shot, cfg)?;
    let flat_f = filter_image(flat, cfg)?;
    reconstruct_transmission(&shot_f, &flat_f, floor)
}
