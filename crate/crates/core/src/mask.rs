//! Binary pixel mask with the same geometry as the image it annotates.

use crate::{Error, Result, Roi};

/// Row-major binary grid; values are strictly 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask2D {
    height: usize,
    width: usize,
    data: Vec<u8>,
}

impl Mask2D {
    pub fn zeros(height: usize, width: usize) -> Self {
        assert!(height > 0 && width > 0, "mask dimensions must be positive");
        Self {
            height,
            width,
            data: vec![0; height * width],
        }
    }

    /// Builds a mask from raw bytes, validating shape and the {0,1} invariant.
    pub fn from_vec(height: usize, width: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != height * width {
            return Err(Error::Shape(format!(
                "mask buffer length {} does not match {}x{}",
                data.len(),
                height,
                width
            )));
        }
        if !data.iter().all(|&v| v <= 1) {
            return Err(Error::Domain("mask values must be 0 or 1".into()));
        }
        Ok(Self { height, width, data })
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(height * width);
        for y in 0..height {
            for x in 0..width {
                data.push(f(y, x) as u8);
            }
        }
        Self { height, width, data }
    }

    /// Mask that is 1 exactly inside the rectangle.
    pub fn from_roi(height: usize, width: usize, roi: &Roi) -> Result<Self> {
        roi.validate_for(height, width)?;
        Ok(Self::from_fn(height, width, |y, x| roi.contains(y, x)))
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn get(&self, y: usize, x: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn is_set(&self, y: usize, x: usize) -> bool {
        self.get(y, x) == 1
    }

    pub fn set(&mut self, y: usize, x: usize, value: bool) {
        self.data[y * self.width + x] = value as u8;
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    /// Number of pixels set to 1.
    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&v| v == 1).count()
    }

    /// Fraction of pixels set to 1.
    pub fn fill_fraction(&self) -> f64 {
        self.count_ones() as f64 / self.data.len() as f64
    }

    /// Union of two same-shaped masks.
    pub fn union(&self, other: &Mask2D) -> Result<Mask2D> {
        if self.shape() != other.shape() {
            return Err(Error::Shape("mask union shape mismatch".into()));
        }
        Ok(Mask2D {
            height: self.height,
            width: self.width,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(&a, &b)| a | b)
                .collect(),
        })
    }

    /// Tight bounding rectangle of the support; `None` when the mask is empty.
    pub fn bounding_roi(&self) -> Option<Roi> {
        let (mut x_min, mut x_max, mut y_min, mut y_max) =
            (usize::MAX, 0usize, usize::MAX, 0usize);
        for y in 0..self.height {
            for x in 0..self.width {
                if self.is_set(y, x) {
                    x_min = x_min.min(x);
                    x_max = x_max.max(x);
                    y_min = y_min.min(y);
                    y_max = y_max.max(y);
                }
            }
        }
        if x_min == usize::MAX {
            None
        } else {
            Some(Roi::new(x_min, y_min, x_max - x_min + 1, y_max - y_min + 1))
        }
    }

    /// Stores the mask as a float image (0.0 / 1.0) for NPY interchange.
    pub fn to_image(&self) -> crate::Image2D {
        crate::Image2D::from_fn(self.height, self.width, |y, x| self.get(y, x) as f64)
    }

    /// Reads a mask from a float image; anything above 0.5 counts as set.
    pub fn from_image(img: &crate::Image2D) -> Self {
        Self::from_fn(img.height(), img.width(), |y, x| img.get(y, x) > 0.5)
    }
}
