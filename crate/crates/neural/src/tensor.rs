//! Dense (batch, channels, height, width) tensor.

use transmap_core::{Error, Image2D, Result};

/// Row-major 4-D tensor; the innermost axis is width.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    dims: (usize, usize, usize, usize),
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(dims: (usize, usize, usize, usize)) -> Self {
        let len = dims.0 * dims.1 * dims.2 * dims.3;
        Self {
            dims,
            data: vec![0.0; len],
        }
    }

    pub fn from_vec(dims: (usize, usize, usize, usize), data: Vec<f64>) -> Result<Self> {
        if data.len() != dims.0 * dims.1 * dims.2 * dims.3 {
            return Err(Error::Shape(format!(
                "buffer length {} does not match dims {:?}",
                data.len(),
                dims
            )));
        }
        Ok(Self { dims, data })
    }

    /// (batch, channels, height, width)
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        self.dims
    }

    pub fn batch(&self) -> usize {
        self.dims.0
    }

    pub fn channels(&self) -> usize {
        self.dims.1
    }

    pub fn height(&self) -> usize {
        self.dims.2
    }

    pub fn width(&self) -> usize {
        self.dims.3
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn idx(&self, n: usize, c: usize, y: usize, x: usize) -> usize {
        ((n * self.dims.1 + c) * self.dims.2 + y) * self.dims.3 + x
    }

    #[inline]
    pub fn get(&self, n: usize, c: usize, y: usize, x: usize) -> f64 {
        self.data[self.idx(n, c, y, x)]
    }

    #[inline]
    pub fn set(&mut self, n: usize, c: usize, y: usize, x: usize, v: f64) {
        let i = self.idx(n, c, y, x);
        self.data[i] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Contiguous (height x width) plane of one (batch, channel).
    pub fn plane(&self, n: usize, c: usize) -> &[f64] {
        let start = self.idx(n, c, 0, 0);
        &self.data[start..start + self.dims.2 * self.dims.3]
    }

    /// All channel planes of one batch element as a contiguous slice.
    pub fn batch_slice(&self, n: usize) -> &[f64] {
        let per = self.dims.1 * self.dims.2 * self.dims.3;
        &self.data[n * per..(n + 1) * per]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor4 {
        Tensor4 {
            dims: self.dims,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Wraps a 2-D image as a (1, 1, h, w) tensor.
    pub fn from_image(img: &Image2D) -> Tensor4 {
        Tensor4 {
            dims: (1, 1, img.height(), img.width()),
            data: img.data().to_vec(),
        }
    }

    /// Extracts a (1, 1, h, w) tensor back into an image.
    pub fn to_image(&self) -> Result<Image2D> {
        if self.dims.0 != 1 || self.dims.1 != 1 {
            return Err(Error::Shape(format!(
                "tensor {:?} is not a single-channel image",
                self.dims
            )));
        }
        Image2D::from_vec(self.dims.2, self.dims.3, self.data.clone())
    }
}
