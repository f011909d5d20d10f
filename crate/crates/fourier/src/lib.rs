//! Fourier-domain baseline artifact suppression.
//!
//! Shot and flat are filtered independently: a central low-frequency disk is
//! zeroed, the strongest remaining coefficients are removed by percentile
//! magnitude thresholding, and the global mean is restored before
//! transmission reconstruction.

mod fft;
mod filter;

pub use fft::{fft2, ifft2, ifft2_complex, ComplexSpectrum};
pub use filter::{filter_and_reconstruct, filter_image, FourierFilterConfig};
