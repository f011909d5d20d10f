//! Transmission-map reconstruction and log-domain conversion.

use crate::{Error, Image2D, Result};

/// Per-pixel `shot / max(flat, floor)`.
///
/// The floor keeps the division finite where the flat field has dead pixels.
pub fn reconstruct_transmission(shot: &Image2D, flat: &Image2D, floor: f64) -> Result<Image2D> {
    if !(floor > 0.0) {
        return Err(Error::Parameter(format!("division floor must be > 0, got {floor}")));
    }
    shot.check_same_shape(flat, "reconstruct_transmission")?;
    shot.zip_map(flat, |s, f| s / f.max(floor))
}

/// Natural log of `img + epsilon`; errors on negative pixels.
pub fn to_log(img: &Image2D, epsilon: f64) -> Result<Image2D> {
    if !(epsilon > 0.0) {
        return Err(Error::Parameter(format!("epsilon must be > 0, got {epsilon}")));
    }
    if img.data().iter().any(|&v| v < 0.0) {
        return Err(Error::Domain("to_log requires non-negative pixels".into()));
    }
    Ok(img.map(|v| (v + epsilon).ln()))
}

/// Exact inverse of [`to_log`] up to the epsilon subtraction.
pub fn from_log(img: &Image2D, epsilon: f64) -> Image2D {
    img.map(|v| v.exp() - epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_inputs_give_unit_transmission() {
        let img = Image2D::from_fn(4, 4, |y, x| 1.0 + (y + x) as f64);
        let t = reconstruct_transmission(&img, &img, 1e-6).unwrap();
        assert!(t.data().iter().all(|&v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn uniform_attenuation_is_recovered() {
        let flat = Image2D::from_fn(4, 4, |y, x| 2.0 + (y * 4 + x) as f64);
        let shot = flat.map(|v| 0.42 * v);
        let t = reconstruct_transmission(&shot, &flat, 1e-6).unwrap();
        assert!(t.data().iter().all(|&v| (v - 0.42).abs() < 1e-12));
    }

    #[test]
    fn floor_keeps_output_finite() {
        let mut flat = Image2D::constant(2, 2, 1.0);
        flat.set(0, 0, 0.0);
        let shot = Image2D::constant(2, 2, 1.0);
        let t = reconstruct_transmission(&shot, &flat, 1e-6).unwrap();
        assert!(t.all_finite());
        assert_eq!(t.get(0, 0), 1e6);
    }

    #[test]
    fn shape_mismatch_is_error() {
        let a = Image2D::zeros(2, 3);
        let b = Image2D::zeros(3, 2);
        assert!(matches!(
            reconstruct_transmission(&a, &b, 1e-6),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn transmission_is_scale_invariant() {
        let flat = Image2D::from_fn(5, 5, |y, x| 1.0 + ((y * 5 + x) as f64).sin().abs());
        let shot = Image2D::from_fn(5, 5, |y, x| 0.5 + ((y + 2 * x) as f64).cos().abs());
        let t1 = reconstruct_transmission(&shot, &flat, 1e-9).unwrap();
        let a = 7.5;
        let t2 =
            reconstruct_transmission(&shot.map(|v| a * v), &flat.map(|v| a * v), 1e-9).unwrap();
        for (u, v) in t1.data().iter().zip(t2.data()) {
            assert!((u - v).abs() <= 1e-12 * u.abs());
        }
    }

    #[test]
    fn log_round_trip() {
        let eps = 1e-6;
        let zero = Image2D::zeros(3, 3);
        let lg = to_log(&zero, eps).unwrap();
        assert!(lg.data().iter().all(|&v| (v - eps.ln()).abs() < 1e-15));

        let img = Image2D::from_fn(4, 4, |y, x| (y * 4 + x) as f64 * 0.6);
        let back = from_log(&to_log(&img, eps).unwrap(), eps);
        for (a, b) in img.data().iter().zip(back.data()) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        let e_minus_eps = Image2D::constant(1, 1, std::f64::consts::E - eps);
        assert!((to_log(&e_minus_eps, eps).unwrap().get(0, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn negative_pixels_rejected_by_to_log() {
        let img = Image2D::from_vec(1, 2, vec![0.5, -0.1]).unwrap();
        assert!(matches!(to_log(&img, 1e-6), Err(Error::Domain(_))));
    }
}
