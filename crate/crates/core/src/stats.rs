//! Percentiles, percentile normalization and ROI-complement statistics.

use crate::{Error, Image2D, Result, Roi};

/// Percentile with linear interpolation between order statistics.
///
/// `p` is in percent; `p = 50` is the median. Matches the common
/// "linear" convention: rank `(n - 1) * p / 100` interpolated between
/// neighbouring sorted values.
pub fn percentile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyRegion("percentile of empty slice".into()));
    }
    if !(0.0..=100.0).contains(&p) {
        return Err(Error::Parameter(format!("percentile {p} outside [0, 100]")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (sorted.len() - 1) as f64 * p / 100.0;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    Ok(sorted[lo] * (1.0 - frac) + sorted[hi] * frac)
}

/// Divides the image by its `p`-th percentile value.
///
/// With `p = 90` this is the hot-pixel-robust normalization used throughout
/// the pipeline to place images on a common intensity scale.
pub fn percentile_normalize(img: &Image2D, p: f64) -> Result<Image2D> {
    if !(0.0 < p && p <= 100.0) {
        return Err(Error::Parameter(format!("percentile {p} outside (0, 100]")));
    }
    let divisor = percentile(img.data(), p)?;
    if divisor == 0.0 {
        return Err(Error::DegenerateScale(format!(
            "{p}-th percentile is zero; cannot normalize"
        )));
    }
    Ok(img.map(|v| v / divisor))
}

/// Population mean and standard deviation over all pixels outside the ROI.
pub fn stat_outside_roi(img: &Image2D, roi: &Roi) -> Result<(f64, f64)> {
    roi.validate_for(img.height(), img.width())?;
    if roi.area() >= img.len() {
        return Err(Error::EmptyRegion(
            "roi covers the whole image; complement is empty".into(),
        ));
    }
    let mut n = 0usize;
    let mut sum = 0.0;
    for y in 0..img.height() {
        for x in 0..img.width() {
            if !roi.contains(y, x) {
                sum += img.get(y, x);
                n += 1;
            }
        }
    }
    let mean = sum / n as f64;
    let mut ss = 0.0;
    for y in 0..img.height() {
        for x in 0..img.width() {
            if !roi.contains(y, x) {
                let d = img.get(y, x) - mean;
                ss += d * d;
            }
        }
    }
    Ok((mean, (ss / n as f64).sqrt()))
}

/// Population mean and standard deviation over pixels where the mask is 0.
///
/// Companion of [`stat_outside_roi`] for irregular signal supports.
pub fn stat_outside_mask(img: &Image2D, mask: &crate::Mask2D) -> Result<(f64, f64)> {
    if img.shape() != mask.shape() {
        return Err(Error::Shape("image/mask shape mismatch".into()));
    }
    let values: Vec<f64> = img
        .data()
        .iter()
        .zip(mask.data().iter())
        .filter(|(_, &m)| m == 0)
        .map(|(&v, _)| v)
        .collect();
    if values.is_empty() {
        return Err(Error::EmptyRegion("mask covers the whole image".into()));
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
    Ok((mean, var.sqrt()))
}
