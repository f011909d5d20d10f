//! Dense 2-D grid of `f64` intensities, the universal currency of the pipeline.

use crate::{Error, Result};

/// Row-major 2-D image of 64-bit reals.
///
/// Invariants: `data.len() == height * width` and every value is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Image2D {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl Image2D {
    /// All-zero image.
    pub fn zeros(height: usize, width: usize) -> Self {
        Self::constant(height, width, 0.0)
    }

    /// Constant-valued image.
    pub fn constant(height: usize, width: usize, value: f64) -> Self {
        assert!(height > 0 && width > 0, "image dimensions must be positive");
        Self {
            height,
            width,
            data: vec![value; height * width],
        }
    }

    /// Builds an image from a row-major buffer, validating shape and finiteness.
    pub fn from_vec(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::Shape("image dimensions must be positive".into()));
        }
        if data.len() != height * width {
            return Err(Error::Shape(format!(
                "buffer length {} does not match {}x{}",
                data.len(),
                height,
                width
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::Numerical("image contains non-finite values".into()));
        }
        Ok(Self { height, width, data })
    }

    /// Builds an image by evaluating `f(y, x)` at every pixel.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(height * width);
        for y in 0..height {
            for x in 0..width {
                data.push(f(y, x));
            }
        }
        Self { height, width, data }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// (height, width)
    pub fn shape(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, y: usize, x: usize, value: f64) {
        self.data[y * self.width + x] = value;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    /// True when the other image has the same height and width.
    pub fn same_shape(&self, other: &Image2D) -> bool {
        self.height == other.height && self.width == other.width
    }

    /// Errors unless both images share a shape.
    pub fn check_same_shape(&self, other: &Image2D, what: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "{what}: {}x{} vs {}x{}",
                self.height, self.width, other.height, other.width
            )))
        }
    }

    /// New image with `f` applied per pixel.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Image2D {
        Image2D {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// New image combining two same-shaped images per pixel.
    pub fn zip_map(&self, other: &Image2D, f: impl Fn(f64, f64) -> f64) -> Result<Image2D> {
        self.check_same_shape(other, "zip_map")?;
        Ok(Image2D {
            height: self.height,
            width: self.width,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Root mean square of the pixel values.
    pub fn rms(&self) -> f64 {
        (self.data.iter().map(|v| v * v).sum::<f64>() / self.data.len() as f64).sqrt()
    }

    pub fn min_max(&self) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in &self.data {
            min = min.min(v);
            max = max.max(v);
        }
        (min, max)
    }

    /// Sum of squared differences against another image (shape-checked).
    pub fn l2_distance(&self, other: &Image2D) -> Result<f64> {
        self.check_same_shape(other, "l2_distance")?;
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }

    /// Copies a rectangular window into a new image.
    pub fn crop(&self, roi: &crate::Roi) -> Result<Image2D> {
        roi.validate_for(self.height, self.width)?;
        let mut data = Vec::with_capacity(roi.height * roi.width);
        for y in roi.y0..roi.y0 + roi.height {
            data.extend_from_slice(&self.row(y)[roi.x0..roi.x0 + roi.width]);
        }
        Ok(Image2D {
            height: roi.height,
            width: roi.width,
            data,
        })
    }

    /// True when all values are finite.
    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for Image2D {
    type Output = f64;

    /// Index by `(y, x)`.
    fn index(&self, (y, x): (usize, usize)) -> &f64 {
        &self.data[y * self.width + x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Roi;

    #[test]
    fn from_vec_checks_shape() {
        assert!(matches!(
            Image2D::from_vec(2, 2, vec![1.0; 3]),
            Err(Error::Shape(_))
        ));
        assert!(Image2D::from_vec(2, 2, vec![1.0; 4]).is_ok());
    }

    #[test]
    fn from_vec_rejects_non_finite() {
        assert!(matches!(
            Image2D::from_vec(1, 2, vec![1.0, f64::NAN]),
            Err(Error::Numerical(_))
        ));
    }

    #[test]
    fn crop_extracts_window() {
        let img = Image2D::from_fn(4, 5, |y, x| (y * 5 + x) as f64);
        let crop = img.crop(&Roi::new(1, 2, 3, 2)).unwrap();
        assert_eq!(crop.shape(), (2, 3));
        assert_eq!(crop.get(0, 0), img.get(2, 1));
        assert_eq!(crop.get(1, 2), img.get(3, 3));
    }

    #[test]
    fn zip_map_requires_same_shape() {
        let a = Image2D::zeros(2, 3);
        let b = Image2D::zeros(3, 2);
        assert!(matches!(a.zip_map(&b, |x, y| x + y), Err(Error::Shape(_))));
    }
}
