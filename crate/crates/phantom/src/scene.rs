//! Scene composition: beam envelope, sample attenuation, artifact layer and
//! noise multiply into shots and flats with exact stored factors.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use transmap_core::{Error, Image2D, Mask2D, Result};

use crate::artifact::{drift_artifact, ArtifactModel, DriftConfig, DriftParams};
use crate::rng::{derive_seed, rng_from_seed};
use crate::signal::FilamentTruth;

/// Static scene parameters shared by every image of a dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SceneConfig {
    pub height: usize,
    pub width: usize,
    /// Mean transmission of the sample slab.
    pub base_transmission: f64,
    /// Rows above this fraction of the height are sample-free beam.
    pub sample_edge_frac: f64,
    /// Logistic softness of the sample edge in pixels.
    pub sample_edge_softness: f64,
    /// Beam-envelope FWHM as a multiple of the image width.
    pub envelope_fwhm_frac: f64,
    /// Multiplicative Gaussian noise sigma.
    pub noise_level: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            height: 128,
            width: 128,
            base_transmission: 0.42,
            sample_edge_frac: 0.2,
            sample_edge_softness: 1.5,
            envelope_fwhm_frac: 2.0,
            noise_level: 0.01,
        }
    }
}

impl SceneConfig {
    /// Broad Gaussian beam profile centered on the image.
    pub fn envelope(&self) -> Image2D {
        let (h, w) = (self.height, self.width);
        let fwhm = self.envelope_fwhm_frac * w as f64;
        let sigma = fwhm / (8.0 * 2.0f64.ln()).sqrt();
        let cy = (h as f64 - 1.0) / 2.0;
        let cx = (w as f64 - 1.0) / 2.0;
        Image2D::from_fn(h, w, |y, x| {
            let dy = y as f64 - cy;
            let dx = x as f64 - cx;
            (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp()
        })
    }

    /// Transmission of the sample slab: 1 above the surface edge,
    /// `base_transmission` inside, with a smooth transition.
    pub fn sample_profile(&self) -> Image2D {
        let edge = self.sample_edge_frac * self.height as f64;
        let bt = self.base_transmission;
        Image2D::from_fn(self.height, self.width, |y, _| {
            let s = 1.0 / (1.0 + (-(y as f64 - edge) / self.sample_edge_softness).exp());
            1.0 - (1.0 - bt) * s
        })
    }

    /// Multiplicative noise field `max(0, 1 + sigma N(0,1))`.
    pub fn noise_field(&self, seed: u64) -> Image2D {
        if self.noise_level == 0.0 {
            return Image2D::constant(self.height, self.width, 1.0);
        }
        let mut rng = rng_from_seed(seed);
        let sigma = self.noise_level;
        Image2D::from_fn(self.height, self.width, |_, _| {
            (1.0 + sigma * rng.sample::<f64, _>(StandardNormal)).max(0.0)
        })
    }
}

/// Seeds for the stochastic parts of one shot/flat pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BundleSeeds {
    pub drift_shot: u64,
    pub drift_flat: u64,
    pub noise_shot: u64,
    pub noise_flat: u64,
}

impl BundleSeeds {
    /// Derives all four streams from one base seed and an image index.
    pub fn derive(base: u64, index: u64) -> Self {
        Self {
            drift_shot: derive_seed(base, "drift-shot", index),
            drift_flat: derive_seed(base, "drift-flat", index),
            noise_shot: derive_seed(base, "noise-shot", index),
            noise_flat: derive_seed(base, "noise-flat", index),
        }
    }
}

/// A synthetic shot plus its exact multiplicative decomposition.
#[derive(Debug, Clone)]
pub struct GroundTruthBundle {
    pub shot: Image2D,
    pub flat: Image2D,
    pub artifact_shot: Image2D,
    pub artifact_flat: Image2D,
    /// Multiplicative signal map; 1 everywhere for cold shots.
    pub signal_map: Image2D,
    pub signal_mask: Mask2D,
    pub base_transmission: f64,
    pub envelope: Image2D,
    pub sample_profile: Image2D,
    pub noise_shot: Image2D,
    pub noise_flat: Image2D,
    pub drift_shot: DriftParams,
    pub drift_flat: DriftParams,
    pub filaments: Vec<FilamentTruth>,
    pub seeds: BundleSeeds,
}

impl GroundTruthBundle {
    /// The artifact-free, noise-free transmission map implied by the
    /// decomposition: `base_profile x signal`, normalized so the sample-free
    /// band sits at 1.
    pub fn clean_transmission(&self) -> Image2D {
        self.sample_profile
            .zip_map(&self.signal_map, |p, s| p * s)
            .expect("stored factors share a shape")
    }

    /// Checks `shot == envelope x profile x signal x artifact x noise`
    /// within `tol` relative.
    pub fn factorization_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.shot.len() {
            let product = self.envelope.data()[i]
                * self.sample_profile.data()[i]
                * self.signal_map.data()[i]
                * self.artifact_shot.data()[i]
                * self.noise_shot.data()[i];
            let denom = product.abs().max(1e-300);
            worst = worst.max((self.shot.data()[i] - product).abs() / denom);
        }
        worst
    }
}

/// Builds a shot/flat pair around an optional signal map.
pub fn gen_bundle(
    artifact: &ArtifactModel,
    scene: &SceneConfig,
    drift_cfg: &DriftConfig,
    signal: Option<(&Image2D, &Mask2D, &[FilamentTruth])>,
    seeds: BundleSeeds,
) -> Result<GroundTruthBundle> {
    let (h, w) = (scene.height, scene.width);
    if artifact.master_pattern().shape() != (h, w) {
        return Err(Error::Shape(format!(
            "artifact master is {:?}, scene wants {}x{}",
            artifact.master_pattern().shape(),
            h,
            w
        )));
    }
    let (signal_map, signal_mask, filaments) = match signal {
        Some((map, mask, truths)) => {
            map.check_same_shape(artifact.master_pattern(), "signal map")?;
            (map.clone(), mask.clone(), truths.to_vec())
        }
        None => (Image2D::constant(h, w, 1.0), Mask2D::zeros(h, w), Vec::new()),
    };

    let drift_shot = drift_cfg.sample(seeds.drift_shot);
    let drift_flat = drift_cfg.sample(seeds.drift_flat);
    let artifact_shot = drift_artifact(artifact, &drift_shot)?;
    let artifact_flat = drift_artifact(artifact, &drift_flat)?;
    let envelope = scene.envelope();
    let sample_profile = scene.sample_profile();
    let noise_shot = scene.noise_field(seeds.noise_shot);
    let noise_flat = scene.noise_field(seeds.noise_flat);

    let mut shot = Image2D::zeros(h, w);
    let mut flat = Image2D::zeros(h, w);
    for i in 0..shot.len() {
        shot.data_mut()[i] = envelope.data()[i]
            * sample_profile.data()[i]
            * signal_map.data()[i]
            * artifact_shot.data()[i]
            * noise_shot.data()[i];
        flat.data_mut()[i] = envelope.data()[i] * artifact_flat.data()[i] * noise_flat.data()[i];
    }

    Ok(GroundTruthBundle {
        shot,
        flat,
        artifact_shot,
        artifact_flat,
        signal_map,
        signal_mask,
        base_transmission: scene.base_transmission,
        envelope,
        sample_profile,
        noise_shot,
        noise_flat,
        drift_shot,
        drift_flat,
        filaments,
        seeds,
    })
}

/// Cold shot: sample in the beam, no drive, no injected signal.
pub fn gen_cold_shot(
    artifact: &ArtifactModel,
    scene: &SceneConfig,
    drift_cfg: &DriftConfig,
    seeds: BundleSeeds,
) -> Result<GroundTruthBundle> {
    gen_bundle(artifact, scene, drift_cfg, None, seeds)
}

/// Multiplies a signal map into a cold shot: `I_syn = I_cold * S`.
pub fn inject(cold: &Image2D, signal_map: &Image2D) -> Result<Image2D> {
    cold.zip_map(signal_map, |c, s| c * s)
}
