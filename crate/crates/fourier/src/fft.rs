//! 2-D FFT on top of rustfft, with the unnormalized-forward / 1-N-inverse
//! convention.

use num_complex::Complex64;
use rustfft::FftPlanner;
use transmap_core::Image2D;

/// Full complex spectrum of a 2-D image, DC at index (0, 0).
#[derive(Debug, Clone)]
pub struct ComplexSpectrum {
    height: usize,
    width: usize,
    data: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn get(&self, fy: usize, fx: usize) -> Complex64 {
        self.data[fy * self.width + fx]
    }

    /// DC-centered radius of the frequency bin, accounting for wrap-around.
    pub fn radius(&self, fy: usize, fx: usize) -> f64 {
        let ry = fy.min(self.height - fy) as f64;
        let rx = fx.min(self.width - fx) as f64;
        (ry * ry + rx * rx).sqrt()
    }

    /// Total spectral power (sum of squared magnitudes).
    pub fn total_power(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Spectral power restricted to bins with DC-centered radius in
    /// `[low, high]`.
    pub fn annulus_power(&self, low: f64, high: f64) -> f64 {
        let mut sum = 0.0;
        for fy in 0..self.height {
            for fx in 0..self.width {
                let r = self.radius(fy, fx);
                if r >= low && r <= high {
                    sum += self.get(fy, fx).norm_sqr();
                }
            }
        }
        sum
    }
}

/// Forward 2-D FFT (unnormalized).
pub fn fft2(img: &Image2D) -> ComplexSpectrum {
    let (h, w) = img.shape();
    let mut data: Vec<Complex64> = img.data().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(&mut data, h, w, false);
    ComplexSpectrum { height: h, width: w, data }
}

/// Inverse 2-D FFT scaled by `1/(h*w)`, returning the full complex field.
pub fn ifft2_complex(spec: &ComplexSpectrum) -> Vec<Complex64> {
    let mut data = spec.data.clone();
    transform(&mut data, spec.height, spec.width, true);
    let scale = 1.0 / (spec.height * spec.width) as f64;
    for c in &mut data {
        *c *= scale;
    }
    data
}

/// Inverse 2-D FFT, real part only.
pub fn ifft2(spec: &ComplexSpectrum) -> Image2D {
    let data = ifft2_complex(spec);
    Image2D::from_vec(
        spec.height,
        spec.width,
        data.iter().map(|c| c.re).collect(),
    )
    .expect("ifft2 preserves shape and finiteness")
}

fn transform(data: &mut [Complex64], h: usize, w: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let row_fft = if inverse {
        planner.plan_fft_inverse(w)
    } else {
        planner.plan_fft_forward(w)
    };
    let col_fft = if inverse {
        planner.plan_fft_inverse(h)
    } else {
        planner.plan_fft_forward(h)
    };

    for row in data.chunks_exact_mut(w) {
        row_fft.process(row);
    }
    let mut column = vec![Complex64::default(); h];
    for x in 0..w {
        for y in 0..h {
            column[y] = data[y * w + x];
        }
        col_fft.process(&mut column);
        for y in 0..h {
            data[y * w + x] = column[y];
        }
    }
}
