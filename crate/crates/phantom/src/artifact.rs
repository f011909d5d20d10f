//! Structured multiplicative artifact layer and its shot-to-shot drift.
//!
//! The imaging-optics defects are modeled phenomenologically as band-limited
//! log-domain speckle; drift is a translation plus a small central
//! magnification and intensity rescale of the same master pattern.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use transmap_core::{Error, Image2D, Result};
use transmap_fourier::fft2;

use crate::rng::rng_from_seed;

/// Master artifact texture plus the band and amplitude it was built with.
#[derive(Debug, Clone)]
pub struct ArtifactModel {
    master_pattern: Image2D,
    band: (f64, f64),
    amplitude: f64,
}

impl ArtifactModel {
    /// Log-domain zero-mean master texture.
    pub fn master_pattern(&self) -> &Image2D {
        &self.master_pattern
    }

    /// (low, high) spatial-frequency radii in cycles/image.
    pub fn band(&self) -> (f64, f64) {
        self.band
    }

    /// Log-domain RMS of the master pattern.
    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
}

/// Per-shot geometric/intensity perturbation of the master pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftParams {
    /// Translation (dx, dy) in pixels.
    pub shift: (f64, f64),
    /// Central magnification, near 1.
    pub magnification: f64,
    /// Log-domain intensity rescale, near 1.
    pub intensity_scale: f64,
}

impl DriftParams {
    pub fn identity() -> Self {
        Self {
            shift: (0.0, 0.0),
            magnification: 1.0,
            intensity_scale: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let (dx, dy) = self.shift;
        if dx.abs() > 10.0 || dy.abs() > 10.0 {
            return Err(Error::Parameter(format!(
                "drift shift ({dx}, {dy}) outside +-10 px bound"
            )));
        }
        if !(0.9..=1.1).contains(&self.magnification) {
            return Err(Error::Parameter(format!(
                "magnification {} outside [0.9, 1.1]",
                self.magnification
            )));
        }
        if !self.intensity_scale.is_finite() || self.intensity_scale <= 0.0 {
            return Err(Error::Parameter("intensity_scale must be positive".into()));
        }
        Ok(())
    }
}

/// Bounds from which per-shot drifts are sampled.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DriftConfig {
    /// Max |dx|, |dy| in pixels.
    pub max_shift: f64,
    /// Magnification sampled in [1 - mag_jitter, 1 + mag_jitter].
    pub mag_jitter: f64,
    /// Intensity scale sampled in [1 - intensity_jitter, 1 + intensity_jitter].
    pub intensity_jitter: f64,
}

impl Default for DriftConfig {
    fn default() -> Self {
        Self {
            max_shift: 3.0,
            mag_jitter: 0.02,
            intensity_jitter: 0.05,
        }
    }
}

impl DriftConfig {
    /// Samples one drift realization.
    pub fn sample(&self, seed: u64) -> DriftParams {
        let mut rng = rng_from_seed(seed);
        let dx = rng.random_range(-self.max_shift..=self.max_shift);
        let dy = rng.random_range(-self.max_shift..=self.max_shift);
        let mag = rng.random_range(1.0 - self.mag_jitter..=1.0 + self.mag_jitter);
        let scale =
            rng.random_range(1.0 - self.intensity_jitter..=1.0 + self.intensity_jitter);
        DriftParams {
            shift: (dx, dy),
            magnification: mag,
            intensity_scale: scale,
        }
    }
}

/// Band-limited filtered white noise in the log domain: zero mean, RMS equal
/// to `amplitude`, spectral energy confined to the `[low, high]` annulus.
pub fn gen_master_pattern(
    seed: u64,
    shape: (usize, usize),
    band: (f64, f64),
    amplitude: f64,
) -> Result<ArtifactModel> {
    let (h, w) = shape;
    let (low, high) = band;
    let limit = (h.min(w) as f64) / 2.0;
    if !(0.0 < low && low < high && high < limit) {
        return Err(Error::Parameter(format!(
            "band ({low}, {high}) must satisfy 0 < low < high < {limit}"
        )));
    }
    if amplitude < 0.0 {
        return Err(Error::Parameter("amplitude must be >= 0".into()));
    }

    if amplitude == 0.0 {
        return Ok(ArtifactModel {
            master_pattern: Image2D::zeros(h, w),
            band,
            amplitude,
        });
    }

    let mut rng = rng_from_seed(seed);
    let noise = Image2D::from_fn(h, w, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut spec = fft2(&noise);
    for fy in 0..h {
        for fx in 0..w {
            let r = spec.radius(fy, fx);
            if r < low || r > high {
                spec.data_mut()[fy * w + fx] = Default::default();
            }
        }
    }
    let filtered = transmap_fourier::ifft2(&spec);
    let mean = filtered.mean();
    let centered = filtered.map(|v| v - mean);
    let rms = centered.rms();
    let pattern = if rms > 0.0 {
        centered.map(|v| v * amplitude / rms)
    } else {
        centered
    };
    Ok(ArtifactModel {
        master_pattern: pattern,
        band,
        amplitude,
    })
}

/// Periodic bilinear sample of `img` at real coordinates `(sy, sx)`.
fn sample_wrapped(img: &Image2D, sy: f64, sx: f64) -> f64 {
    let (h, w) = img.shape();
    let y0 = sy.floor();
    let x0 = sx.floor();
    let fy = sy - y0;
    let fx = sx - x0;
    let wrap = |v: i64, n: usize| -> usize { (v.rem_euclid(n as i64)) as usize };
    let y0i = wrap(y0 as i64, h);
    let y1i = wrap(y0 as i64 + 1, h);
    let x0i = wrap(x0 as i64, w);
    let x1i = wrap(x0 as i64 + 1, w);
    img.get(y0i, x0i) * (1.0 - fy) * (1.0 - fx)
        + img.get(y0i, x1i) * (1.0 - fy) * fx
        + img.get(y1i, x0i) * fy * (1.0 - fx)
        + img.get(y1i, x1i) * fy * fx
}

/// Resamples the master pattern under the drift and exponentiates it into a
/// multiplicative intensity layer.
pub fn drift_artifact(model: &ArtifactModel, drift: &DriftParams) -> Result<Image2D> {
    drift.validate()?;
    let master = &model.master_pattern;
    let (h, w) = master.shape();
    let cy = (h as f64 - 1.0) / 2.0;
    let cx = (w as f64 - 1.0) / 2.0;
    let (dx, dy) = drift.shift;
    let inv_mag = 1.0 / drift.magnification;
    let layer = Image2D::from_fn(h, w, |y, x| {
        let sy = cy + (y as f64 - cy - dy) * inv_mag;
        let sx = cx + (x as f64 - cx - dx) * inv_mag;
        (drift.intensity_scale * sample_wrapped(master, sy, sx)).exp()
    });
    Ok(layer)
}
