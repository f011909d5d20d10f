//! Multiplicative signal maps: quasi-parallel filaments and large-scale
//! shock fronts, with analytic ground truth for length measurement.

use rand::Rng;
use serde::{Deserialize, Serialize};
use transmap_core::{Error, Image2D, Mask2D, Result};

use crate::rng::rng_from_seed;
use crate::REGISTRATION_BAND_FRAC;

/// Ground truth of one generated filament.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilamentTruth {
    pub id: usize,
    /// Base point (x, y) in pixels.
    pub base: (f64, f64),
    /// Unit direction from base toward tip.
    pub axis: (f64, f64),
    /// Base-to-endpoint distance in pixels; the along-axis amplitude decays
    /// through one half exactly at this distance.
    pub length: f64,
    /// Gaussian cross-section sigma in pixels.
    pub sigma: f64,
    /// Peak |log contrast|.
    pub contrast: f64,
    /// +1 for transmission enhancement, -1 for deficit.
    pub polarity: i8,
}

/// Geometry ranges for the filament generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilamentGeometry {
    pub length_range: (f64, f64),
    pub sigma_range: (f64, f64),
    /// Peak |log contrast| range; 0 produces an all-ones map.
    pub contrast_range: (f64, f64),
    /// Mean growth direction in degrees; 90 points up the image.
    pub axis_angle_deg: f64,
    pub angle_jitter_deg: f64,
    /// Logistic scale of the tip taper in pixels.
    pub tip_softness: f64,
    /// Keep-away margin from image borders in pixels.
    pub margin: f64,
    /// Generate both polarities; otherwise deficits only.
    pub mixed_polarity: bool,
    /// Horizontal placement band as fractions of image width.
    pub x_band: (f64, f64),
    /// Base row as a fraction of image height.
    pub base_row_frac: f64,
}

impl Default for FilamentGeometry {
    fn default() -> Self {
        Self {
            length_range: (30.0, 55.0),
            sigma_range: (1.4, 2.6),
            contrast_range: (0.25, 0.45),
            axis_angle_deg: 90.0,
            angle_jitter_deg: 6.0,
            tip_softness: 2.5,
            margin: 2.0,
            mixed_polarity: true,
            x_band: (0.15, 0.85),
            base_row_frac: 0.86,
        }
    }
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Generates `n_filaments` quasi-parallel elongated perturbations.
///
/// The map is multiplicative (1 where no signal); the mask marks the
/// support; the returned table records exact endpoints for length oracles.
pub fn gen_filament_map(
    seed: u64,
    shape: (usize, usize),
    n_filaments: usize,
    geometry: &FilamentGeometry,
) -> Result<(Image2D, Mask2D, Vec<FilamentTruth>)> {
    let (h, w) = shape;
    if n_filaments == 0 {
        return Err(Error::Parameter("n_filaments must be >= 1".into()));
    }
    let band_rows = (h as f64 * REGISTRATION_BAND_FRAC).ceil();
    let mut rng = rng_from_seed(seed);

    let (x_lo, x_hi) = geometry.x_band;
    if !(0.0 <= x_lo && x_lo < x_hi && x_hi <= 1.0) {
        return Err(Error::Parameter("x_band must satisfy 0 <= lo < hi <= 1".into()));
    }

    let mut truths = Vec::with_capacity(n_filaments);
    let slot = (x_hi - x_lo) / n_filaments as f64;
    for id in 0..n_filaments {
        let x_frac = x_lo + slot * (id as f64 + 0.5) + rng.random_range(-0.25..0.25) * slot;
        let base_x = x_frac * w as f64;
        let base_y = geometry.base_row_frac * h as f64 + rng.random_range(-2.0..2.0);
        let angle_deg = geometry.axis_angle_deg
            + rng.random_range(-geometry.angle_jitter_deg..=geometry.angle_jitter_deg);
        let angle = angle_deg.to_radians();
        // screen coordinates: y grows downward, 90 degrees points up
        let axis = (angle.cos(), -angle.sin());
        let length = rng.random_range(geometry.length_range.0..=geometry.length_range.1);
        let sigma = rng.random_range(geometry.sigma_range.0..=geometry.sigma_range.1);
        let contrast = if geometry.contrast_range.1 <= geometry.contrast_range.0 {
            geometry.contrast_range.0
        } else {
            rng.random_range(geometry.contrast_range.0..=geometry.contrast_range.1)
        };
        let polarity: i8 = if geometry.mixed_polarity && rng.random_bool(0.5) {
            1
        } else {
            -1
        };

        // support extends ~5 tip-softness scales past the endpoint and 3
        // sigma sideways; all of it must stay inside the allowed region
        let reach = length + 5.0 * geometry.tip_softness;
        let side = 3.0 * sigma;
        let tip = (base_x + axis.0 * reach, base_y + axis.1 * reach);
        let y_top = tip.1.min(base_y) - side;
        let y_bot = tip.1.max(base_y) + side;
        let x_min = tip.0.min(base_x) - side;
        let x_max = tip.0.max(base_x) + side;
        if y_top < band_rows + geometry.margin
            || y_bot > h as f64 - geometry.margin
            || x_min < geometry.margin
            || x_max > w as f64 - geometry.margin
        {
            return Err(Error::Geometry(format!(
                "filament {id} does not fit: support y [{y_top:.1}, {y_bot:.1}], \
                 x [{x_min:.1}, {x_max:.1}] in {h}x{w} with a {band_rows}-row \
                 registration band"
            )));
        }

        truths.push(FilamentTruth {
            id,
            base: (base_x, base_y),
            axis,
            length,
            sigma,
            contrast,
            polarity,
        });
    }

    let mut log_map = Image2D::zeros(h, w);
    let mut mask = Mask2D::zeros(h, w);
    let soft = geometry.tip_softness;
    for t in &truths {
        if t.contrast == 0.0 {
            continue;
        }
        for y in 0..h {
            for x in 0..w {
                let rel = (x as f64 - t.base.0, y as f64 - t.base.1);
                let along = rel.0 * t.axis.0 + rel.1 * t.axis.1;
                let perp = rel.0 * t.axis.1 - rel.1 * t.axis.0;
                if along < -3.0 * t.sigma || along > t.length + 8.0 * soft {
                    continue;
                }
                let cross = (-perp * perp / (2.0 * t.sigma * t.sigma)).exp();
                let head = logistic(along - 2.0);
                let tip = logistic((t.length - along) / soft);
                let profile = cross * head * tip;
                if profile > 0.02 {
                    mask.set(y, x, true);
                }
                let v = log_map.get(y, x) + t.polarity as f64 * t.contrast * profile;
                log_map.set(y, x, v);
            }
        }
    }

    Ok((log_map.map(f64::exp), mask, truths))
}

/// Geometry of the synthetic shock front.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShockGeometry {
    /// Requested mask fill fraction of the whole image.
    pub area_fraction: f64,
    /// Peak |log contrast| of the transmission deficit.
    pub contrast: f64,
    /// Logistic softness of the front edge in pixels.
    pub edge_softness: f64,
    /// Relative amplitude of the angular waviness of the front.
    pub waviness: f64,
}

impl Default for ShockGeometry {
    fn default() -> Self {
        Self {
            area_fraction: 0.3,
            contrast: 0.5,
            edge_softness: 3.0,
            waviness: 0.03,
        }
    }
}

/// Smooth curved transmission deficit behind an arc-shaped front.
///
/// The front radius is solved by bisection so the mask covers the requested
/// area fraction.
pub fn gen_shock_map(
    seed: u64,
    shape: (usize, usize),
    geometry: &ShockGeometry,
) -> Result<(Image2D, Mask2D)> {
    let (h, w) = shape;
    if !(0.0..=0.6).contains(&geometry.area_fraction) {
        return Err(Error::Parameter(format!(
            "area_fraction {} outside [0, 0.6]",
            geometry.area_fraction
        )));
    }
    let mut rng = rng_from_seed(seed);
    let cx = w as f64 * (0.5 + rng.random_range(-0.05..0.05));
    let cy = h as f64 * 1.35;
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let band_rows = h as f64 * REGISTRATION_BAND_FRAC;

    // signed distance behind the wavy front for radius R
    let behind = |y: usize, x: usize, radius: f64| -> f64 {
        let dx = x as f64 - cx;
        let dy = y as f64 - cy;
        let r = (dx * dx + dy * dy).sqrt();
        let theta = dy.atan2(dx);
        let r_eff = radius * (1.0 + geometry.waviness * (3.0 * theta + phase).sin());
        r_eff - r
    };

    let fraction_at = |radius: f64| -> f64 {
        let mut count = 0usize;
        for y in 0..h {
            for x in 0..w {
                if behind(y, x, radius) > 0.0 {
                    count += 1;
                }
            }
        }
        count as f64 / (h * w) as f64
    };

    // the front must stay below the registration band
    let r_max = cy - band_rows - 2.0 * geometry.edge_softness;
    let r_min = cy - h as f64;
    if geometry.area_fraction > 0.0 && fraction_at(r_max) < geometry.area_fraction {
        return Err(Error::Geometry(format!(
            "area fraction {} unreachable below the registration band",
            geometry.area_fraction
        )));
    }

    let mut lo = r_min;
    let mut hi = r_max;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if fraction_at(mid) < geometry.area_fraction {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let radius = 0.5 * (lo + hi);

    let mut map = Image2D::constant(h, w, 1.0);
    let mut mask = Mask2D::zeros(h, w);
    if geometry.contrast > 0.0 {
        for y in 0..h {
            for x in 0..w {
                let d = behind(y, x, radius);
                let s = logistic(d / geometry.edge_softness);
                map.set(y, x, (-geometry.contrast * s).exp());
                if d > 0.0 {
                    mask.set(y, x, true);
                }
            }
        }
    }
    Ok((map, mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_filaments_is_parameter_error() {
        assert!(matches!(
            gen_filament_map(1, (64, 64), 0, &FilamentGeometry::default()),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn zero_contrast_gives_identity_map() {
        let geom = FilamentGeometry {
            contrast_range: (0.0, 0.0),
            ..Default::default()
        };
        let (map, mask, truths) = gen_filament_map(1, (128, 128), 1, &geom).unwrap();
        assert!(map.data().iter().all(|&v| v == 1.0));
        assert_eq!(mask.count_ones(), 0);
        assert_eq!(truths.len(), 1);
    }

    #[test]
    fn worst_case_default_geometry_fits_128() {
        // every seed must fit: max base row + side lobe below, max reach above
        for seed in 0..40 {
            gen_filament_map(seed, (128, 128), 6, &FilamentGeometry::default()).unwrap();
        }
    }

    #[test]
    fn six_filaments_fit_and_record_lengths() {
        let (map, mask, truths) =
            gen_filament_map(3, (128, 128), 6, &FilamentGeometry::default()).unwrap();
        assert_eq!(truths.len(), 6);
        for t in &truths {
            // recorded endpoint pair reproduces the requested length
            let tip = (
                t.base.0 + t.axis.0 * t.length,
                t.base.1 + t.axis.1 * t.length,
            );
            let d = ((tip.0 - t.base.0).powi(2) + (tip.1 - t.base.1).powi(2)).sqrt();
            assert!((d - t.length).abs() < 0.5);
            // axis is unit
            assert!((t.axis.0.powi(2) + t.axis.1.powi(2) - 1.0).abs() < 1e-12);
        }
        assert!(mask.count_ones() > 0);
        // multiplicative map is 1 outside the mask support
        for y in 0..128 {
            for x in 0..128 {
                if !mask.is_set(y, x) {
                    assert!((map.get(y, x) - 1.0).abs() < 0.05);
                }
            }
        }
    }

    #[test]
    fn filament_mask_avoids_registration_band() {
        let (_, mask, _) =
            gen_filament_map(5, (128, 128), 6, &FilamentGeometry::default()).unwrap();
        let band = (128.0 * REGISTRATION_BAND_FRAC).ceil() as usize;
        for y in 0..band {
            for x in 0..128 {
                assert!(!mask.is_set(y, x));
            }
        }
    }

    #[test]
    fn oversized_filaments_are_geometry_error() {
        let geom = FilamentGeometry {
            length_range: (400.0, 500.0),
            ..Default::default()
        };
        assert!(matches!(
            gen_filament_map(1, (64, 64), 1, &geom),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn filament_map_is_deterministic() {
        let g = FilamentGeometry::default();
        let (a, _, _) = gen_filament_map(9, (128, 128), 4, &g).unwrap();
        let (b, _, _) = gen_filament_map(9, (128, 128), 4, &g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shock_area_fraction_matches_pixel_count_oracle() {
        let geom = ShockGeometry {
            area_fraction: 0.3,
            ..Default::default()
        };
        let (map, mask) = gen_shock_map(2, (128, 128), &geom).unwrap();
        let frac = mask.fill_fraction();
        assert!((0.25..=0.35).contains(&frac), "fraction {frac}");
        // deficit present inside, identity outside far field
        assert!(map.get(127, 64) < 0.7);
        assert!((map.get(0, 0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn shock_zero_contrast_is_identity() {
        let geom = ShockGeometry {
            contrast: 0.0,
            ..Default::default()
        };
        let (map, mask) = gen_shock_map(2, (64, 64), &geom).unwrap();
        assert!(map.data().iter().all(|&v| v == 1.0));
        assert_eq!(mask.count_ones(), 0);
    }

    #[test]
    fn shock_is_deterministic_and_avoids_band() {
        let geom = ShockGeometry::default();
        let (a, mask) = gen_shock_map(7, (128, 128), &geom).unwrap();
        let (b, _) = gen_shock_map(7, (128, 128), &geom).unwrap();
        assert_eq!(a, b);
        let band = (128.0 * REGISTRATION_BAND_FRAC) as usize;
        for y in 0..band {
            for x in 0..128 {
                assert!(!mask.is_set(y, x));
            }
        }
    }
}
