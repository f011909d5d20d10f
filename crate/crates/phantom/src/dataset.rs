//! Dataset directory generation: cold shots, flats, injected test shots and
//! ground truth, all reproducible from a single seed block.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use transmap_core::{save_npy, Error, Image2D, Result, Roi};

use crate::artifact::{gen_master_pattern, DriftConfig, DriftParams};
use crate::rng::derive_seed;
use crate::scene::{gen_bundle, gen_cold_shot, inject, BundleSeeds, SceneConfig};
use crate::signal::{gen_filament_map, gen_shock_map, FilamentGeometry, FilamentTruth, ShockGeometry};
use crate::REGISTRATION_BAND_FRAC;

/// Everything needed to regenerate a dataset bit-for-bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub scene: SceneConfig,
    pub drift: DriftConfig,
    /// Artifact spatial-frequency band in cycles/image.
    pub band: (f64, f64),
    /// Log-domain RMS of the artifact master pattern.
    pub artifact_amplitude: f64,
    pub n_train: usize,
    pub n_val: usize,
    pub n_flats: usize,
    pub n_filaments: usize,
    pub filaments: FilamentGeometry,
    /// Contrast multiplier for the weak injection case.
    pub weak_contrast_scale: f64,
    pub shock: ShockGeometry,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self {
            scene: SceneConfig::default(),
            drift: DriftConfig::default(),
            band: (4.0, 32.0),
            artifact_amplitude: 0.08,
            n_train: 64,
            n_val: 16,
            n_flats: 16,
            n_filaments: 6,
            filaments: FilamentGeometry::default(),
            weak_contrast_scale: 0.5,
            shock: ShockGeometry::default(),
        }
    }
}

/// One stored shot image and the seeds/drifts that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImageRecord {
    pub file: String,
    pub seeds: BundleSeeds,
    pub drift_shot: DriftParams,
    pub drift_flat: DriftParams,
}

/// One injection case: synthetic shot, companions and ground truth.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InjectionRecord {
    pub name: String,
    pub syn: String,
    pub cold: String,
    pub flat: String,
    /// Clean transmission ground truth (sample profile x signal map).
    pub truth: String,
    pub signal: String,
    pub mask: String,
    /// Bounding rectangle of the signal support.
    pub signal_roi: Roi,
    pub filaments: Vec<FilamentTruth>,
    pub seeds: BundleSeeds,
}

/// A laser-driven-style shot used only for patch extraction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatchSourceRecord {
    pub name: String,
    pub syn: String,
    pub mask: String,
    /// Crop rectangles (one per filament) for the patch bank.
    pub rects: Vec<Roi>,
    pub filaments: Vec<FilamentTruth>,
}

/// On-disk index of a generated dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub seed: u64,
    pub shape: (usize, usize),
    pub config: DatasetConfig,
    /// Top rows free of signal, used for registration.
    pub registration_region: Roi,
    /// Sample interior used for sigma_T statistics.
    pub sample_region: Roi,
    pub train: Vec<ImageRecord>,
    pub val: Vec<ImageRecord>,
    pub flats: Vec<ImageRecord>,
    /// Mean of the training cold shots.
    pub cold_mean: String,
    pub tests: Vec<InjectionRecord>,
    pub patch_sources: Vec<PatchSourceRecord>,
    pub shock: InjectionRecord,
}

impl Manifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref())?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Format(format!("manifest parse error: {e}")))
    }

    /// Absolute path of a file listed in the manifest.
    pub fn resolve(&self, dataset_dir: impl AsRef<Path>, file: &str) -> PathBuf {
        dataset_dir.as_ref().join(file)
    }
}

fn filament_rect(t: &FilamentTruth, shape: (usize, usize), tip_softness: f64) -> Roi {
    let (h, w) = shape;
    let reach = t.length + 5.0 * tip_softness;
    let side = 3.0 * t.sigma + 1.0;
    let tip = (t.base.0 + t.axis.0 * reach, t.base.1 + t.axis.1 * reach);
    let x_min = (t.base.0.min(tip.0) - side).floor().max(0.0) as usize;
    let x_max = (t.base.0.max(tip.0) + side).ceil().min(w as f64 - 1.0) as usize;
    let y_min = (t.base.1.min(tip.1) - side).floor().max(0.0) as usize;
    let y_max = (t.base.1.max(tip.1) + side).ceil().min(h as f64 - 1.0) as usize;
    Roi::new(x_min, y_min, x_max - x_min + 1, y_max - y_min + 1)
}

struct DatasetWriter<'a> {
    root: &'a Path,
}

impl DatasetWriter<'_> {
    fn write(&self, rel: &str, img: &Image2D) -> Result<String> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        save_npy(img, &path)?;
        Ok(rel.to_string())
    }
}

fn scaled_contrast(geometry: &FilamentGeometry, scale: f64) -> FilamentGeometry {
    FilamentGeometry {
        contrast_range: (
            geometry.contrast_range.0 * scale,
            geometry.contrast_range.1 * scale,
        ),
        ..geometry.clone()
    }
}

/// Generates the full dataset directory and returns the manifest.
pub fn gen_dataset(config: &DatasetConfig, seed: u64, out_dir: impl AsRef<Path>) -> Result<Manifest> {
    let root = out_dir.as_ref();
    fs::create_dir_all(root)?;
    let writer = DatasetWriter { root };
    let (h, w) = (config.scene.height, config.scene.width);
    let shape = (h, w);

    let artifact = gen_master_pattern(
        derive_seed(seed, "artifact-master", 0),
        shape,
        config.band,
        config.artifact_amplitude,
    )?;

    let mut cold_sum = Image2D::zeros(h, w);
    let mut write_colds = |dir: &str, count: usize, accumulate: bool| -> Result<Vec<ImageRecord>> {
        let mut records = Vec::with_capacity(count);
        for i in 0..count {
            let seeds = BundleSeeds::derive(derive_seed(seed, dir, i as u64), i as u64);
            let bundle = gen_cold_shot(&artifact, &config.scene, &config.drift, seeds)?;
            let rel = format!("{dir}/cold_{i:03}.npy");
            writer.write(&rel, &bundle.shot)?;
            if accumulate {
                for (acc, v) in cold_sum.data_mut().iter_mut().zip(bundle.shot.data()) {
                    *acc += v;
                }
            }
            records.push(ImageRecord {
                file: rel,
                seeds,
                drift_shot: bundle.drift_shot,
                drift_flat: bundle.drift_flat,
            });
        }
        Ok(records)
    };

    if config.n_train == 0 {
        return Err(Error::Parameter("n_train must be >= 1".into()));
    }
    let train = write_colds("train", config.n_train, true)?;
    let val = write_colds("val", config.n_val, false)?;
    drop(write_colds);

    let cold_mean = cold_sum.map(|v| v / config.n_train as f64);
    let cold_mean_rel = writer.write("train/cold_mean.npy", &cold_mean)?;

    let mut flats = Vec::with_capacity(config.n_flats);
    for i in 0..config.n_flats {
        let seeds = BundleSeeds::derive(derive_seed(seed, "flats", i as u64), i as u64);
        let bundle = gen_cold_shot(&artifact, &config.scene, &config.drift, seeds)?;
        let rel = format!("flats/flat_{i:03}.npy");
        writer.write(&rel, &bundle.flat)?;
        flats.push(ImageRecord {
            file: rel,
            seeds,
            drift_shot: bundle.drift_shot,
            drift_flat: bundle.drift_flat,
        });
    }

    let write_injection = |name: &str,
                               dir: &str,
                               signal: (&Image2D, &transmap_core::Mask2D, &[FilamentTruth]),
                               stream: &str,
                               index: u64|
     -> Result<InjectionRecord> {
        let seeds = BundleSeeds::derive(derive_seed(seed, stream, index), index);
        let bundle = gen_bundle(&artifact, &config.scene, &config.drift, Some(signal), seeds)?;
        let cold = bundle
            .shot
            .zip_map(&bundle.signal_map, |s, m| s / m)
            .expect("same shape");
        let syn = inject(&cold, &bundle.signal_map)?;
        let truth = bundle.clean_transmission();
        let signal_roi = bundle.signal_mask.bounding_roi().unwrap_or(Roi::new(
            0,
            (h as f64 * REGISTRATION_BAND_FRAC) as usize,
            w,
            h - (h as f64 * REGISTRATION_BAND_FRAC) as usize,
        ));
        Ok(InjectionRecord {
            name: name.to_string(),
            syn: writer.write(&format!("{dir}/{name}_syn.npy"), &syn)?,
            cold: writer.write(&format!("{dir}/{name}_cold.npy"), &cold)?,
            flat: writer.write(&format!("{dir}/{name}_flat.npy"), &bundle.flat)?,
            truth: writer.write(&format!("{dir}/{name}_truth.npy"), &truth)?,
            signal: writer.write(&format!("{dir}/{name}_signal.npy"), &bundle.signal_map)?,
            mask: writer.write(&format!("{dir}/{name}_mask.npy"), &bundle.signal_mask.to_image())?,
            signal_roi,
            filaments: bundle.filaments.clone(),
            seeds,
        })
    };

    // two injection cases: strong and weak filament contrast
    let strong_sig = gen_filament_map(
        derive_seed(seed, "filaments-strong", 0),
        shape,
        config.n_filaments,
        &config.filaments,
    )?;
    let weak_geom = scaled_contrast(&config.filaments, config.weak_contrast_scale);
    let weak_sig = gen_filament_map(
        derive_seed(seed, "filaments-weak", 0),
        shape,
        config.n_filaments,
        &weak_geom,
    )?;
    let tests = vec![
        write_injection(
            "strong",
            "test",
            (&strong_sig.0, &strong_sig.1, &strong_sig.2),
            "inject-strong",
            0,
        )?,
        write_injection(
            "weak",
            "test",
            (&weak_sig.0, &weak_sig.1, &weak_sig.2),
            "inject-weak",
            1,
        )?,
    ];

    // patch-source shots: filament injections reserved for the augmentation bank
    let mut patch_sources = Vec::new();
    for i in 0..2u64 {
        let sig = gen_filament_map(
            derive_seed(seed, "filaments-patch", i),
            shape,
            config.n_filaments,
            &config.filaments,
        )?;
        let seeds = BundleSeeds::derive(derive_seed(seed, "inject-patch", i), i);
        let bundle =
            gen_bundle(&artifact, &config.scene, &config.drift, Some((&sig.0, &sig.1, &sig.2)), seeds)?;
        let rects = bundle
            .filaments
            .iter()
            .map(|t| filament_rect(t, shape, config.filaments.tip_softness))
            .collect();
        let name = format!("patch{i}");
        patch_sources.push(PatchSourceRecord {
            syn: writer.write(&format!("patch/{name}_syn.npy"), &bundle.shot)?,
            mask: writer.write(&format!("patch/{name}_mask.npy"), &bundle.signal_mask.to_image())?,
            name,
            rects,
            filaments: bundle.filaments,
        });
    }

    // shock case for the generalizability study
    let shock_sig = gen_shock_map(derive_seed(seed, "shock", 0), shape, &config.shock)?;
    let shock = write_injection(
        "shock",
        "shock",
        (&shock_sig.0, &shock_sig.1, &[]),
        "inject-shock",
        0,
    )?;

    let band_rows = (h as f64 * REGISTRATION_BAND_FRAC).ceil() as usize;
    let sample_row0 = ((config.scene.sample_edge_frac + 0.08) * h as f64).ceil() as usize;
    let manifest = Manifest {
        version: 1,
        seed,
        shape,
        config: config.clone(),
        registration_region: Roi::new(0, 0, w, band_rows),
        sample_region: Roi::new(0, sample_row0, w, h - sample_row0),
        train,
        val,
        flats,
        cold_mean: cold_mean_rel,
        tests,
        patch_sources,
        shock,
    };

    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::Format(format!("manifest serialize error: {e}")))?;
    fs::write(root.join("manifest.json"), json)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::REGISTRATION_BAND_FRAC;

    fn tiny_config() -> DatasetConfig {
        DatasetConfig {
            scene: SceneConfig {
                height: 64,
                width: 64,
                ..Default::default()
            },
            band: (3.0, 24.0),
            n_train: 8,
            n_val: 2,
            n_flats: 4,
            n_filaments: 3,
            filaments: FilamentGeometry {
                length_range: (14.0, 20.0),
                sigma_range: (1.2, 1.5),
                tip_softness: 1.5,
                base_row_frac: 0.82,
                ..Default::default()
            },
            ..Default::default()
        }
    }

    #[test]
    fn manifest_lists_requested_counts() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = gen_dataset(&tiny_config(), 42, dir.path()).unwrap();
        assert_eq!(manifest.train.len(), 8);
        assert_eq!(manifest.val.len(), 2);
        assert_eq!(manifest.flats.len(), 4);
        assert_eq!(manifest.tests.len(), 2);
        assert_eq!(manifest.patch_sources.len(), 2);
        for record in &manifest.train {
            assert!(dir.path().join(&record.file).exists());
        }
        let reloaded = Manifest::load(dir.path().join("manifest.json")).unwrap();
        assert_eq!(reloaded.train.len(), 8);
        assert_eq!(reloaded.seed, 42);
    }

    #[test]
    fn regeneration_is_byte_identical() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        gen_dataset(&tiny_config(), 7, dir_a.path()).unwrap();
        gen_dataset(&tiny_config(), 7, dir_b.path()).unwrap();
        let mut files: Vec<PathBuf> = walk(dir_a.path());
        files.sort();
        assert!(!files.is_empty());
        for a in files {
            let rel = a.strip_prefix(dir_a.path()).unwrap();
            let b = dir_b.path().join(rel);
            assert_eq!(
                fs::read(&a).unwrap(),
                fs::read(&b).unwrap(),
                "file {rel:?} differs between regenerations"
            );
        }
    }

    fn walk(dir: &Path) -> Vec<PathBuf> {
        let mut out = Vec::new();
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                out.extend(walk(&path));
            } else {
                out.push(path);
            }
        }
        out
    }

    #[test]
    fn signal_masks_stay_out_of_registration_band() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = gen_dataset(&tiny_config(), 13, dir.path()).unwrap();
        let band = (64.0 * REGISTRATION_BAND_FRAC).ceil() as usize;
        for test in manifest.tests.iter().chain(std::iter::once(&manifest.shock)) {
            let mask = transmap_core::load_npy(dir.path().join(&test.mask)).unwrap();
            for y in 0..band {
                for x in 0..64 {
                    assert_eq!(mask.get(y, x), 0.0, "{} mask enters the band", test.name);
                }
            }
        }
    }

    #[test]
    fn injected_shot_factorizes() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = gen_dataset(&tiny_config(), 99, dir.path()).unwrap();
        let test = &manifest.tests[0];
        let syn = transmap_core::load_npy(dir.path().join(&test.syn)).unwrap();
        let cold = transmap_core::load_npy(dir.path().join(&test.cold)).unwrap();
        let signal = transmap_core::load_npy(dir.path().join(&test.signal)).unwrap();
        for i in 0..syn.len() {
            let expected = cold.data()[i] * signal.data()[i];
            assert!((syn.data()[i] - expected).abs() <= 1e-10 * expected.abs().max(1e-300));
        }
    }
}
