//! Corner-error metric and the occlusion-level benchmark.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::classify::FrameCategory;
use crate::error::EvalError;
use crate::frames::{recover, ConstraintConfig, Frame};
use crate::geometry::ImageBounds;
use crate::refine::RefineConfig;
use crate::sim::{degrade, generate_scene, mix_seed, DegradeParams};

/// Sum of corner distances over the image diagonal.
pub fn image_error(detected: &Frame, truth: &Frame, diagonal: f64) -> Result<f64, EvalError> {
    if detected.category != truth.category || detected.corners.len() != truth.corners.len() {
        return Err(EvalError::CategoryMismatch(0));
    }
    Ok(detected.corners.iter().zip(&truth.corners).map(|(a, b)| a.dist(*b)).sum::<f64>() / diagonal)
}

/// Root mean square of per-image errors, as a percentage.
pub fn rms_percent(errors: &[f64]) -> f64 {
    if errors.is_empty() {
        return 0.0;
    }
    100.0 * mean_square(errors).sqrt()
}

fn mean_square(errors: &[f64]) -> f64 {
    errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64
}

/// RMS corner error of aligned frame lists, as a percentage of the diagonal.
pub fn corner_error(detected: &[Frame], truth: &[Frame], diagonals: &[f64]) -> Result<f64, EvalError> {
    if detected.len() != truth.len() || detected.len() != diagonals.len() {
        return Err(EvalError::LengthMismatch);
    }
    let errors = detected
        .iter()
        .zip(truth)
        .zip(diagonals)
        .enumerate()
        .map(|(i, ((d, t), l))| image_error(d, t, *l).map_err(|_| EvalError::CategoryMismatch(i)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rms_percent(&errors))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub index: usize,
    pub scene_seed: u64,
    pub category: FrameCategory,
    pub occlusion_level: u8,
    /// Normalized corner error; 1 for a failed recovery.
    pub error: f64,
    /// The failing stage's message, if recovery failed.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    /// Occlusion level, or `None` for the aggregate.
    pub level: Option<u8>,
    pub count: usize,
    pub failures: usize,
    pub rms_percent: f64,
    pub mean_square_percent: f64,
}

impl LevelReport {
    pub fn from_records<'a>(level: Option<u8>, records: impl Iterator<Item = &'a EvalRecord>) -> Self {
        let (errors, failures) = records.fold((Vec::new(), 0), |(mut e, f), r| {
            e.push(r.error);
            (e, f + usize::from(r.failure.is_some()))
        });
        let ms = if errors.is_empty() { 0.0 } else { mean_square(&errors) };
        Self {
            level,
            count: errors.len(),
            failures,
            rms_percent: rms_percent(&errors),
            mean_square_percent: 100.0 * ms,
        }
    }

    pub fn success_rate(&self) -> f64 {
        if self.count == 0 {
            return 1.0;
        }
        1.0 - self.failures as f64 / self.count as f64
    }
}

/// Deterministic benchmark outcome; wall-clock timing lives in [`Timing`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub levels: Vec<LevelReport>,
    pub aggregate: LevelReport,
    pub records: Vec<EvalRecord>,
}

impl BenchmarkReport {
    pub fn level(&self, level: u8) -> Option<&LevelReport> {
        self.levels.iter().find(|l| l.level == Some(level))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Seconds per record, aligned with [`BenchmarkReport::records`].
    pub runtimes: Vec<f64>,
    pub mean_runtime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchmarkConfig {
    /// Scenes at occlusion levels 0, 1 and 2.
    pub scenes_per_level: [usize; 3],
    /// Scenes cycle through these categories.
    pub categories: Vec<FrameCategory>,
    /// Degradation preset; `seed` and `occlusion_level` are set per scene.
    pub degrade: DegradeParams,
    pub refine: RefineConfig,
    pub constraints: ConstraintConfig,
    pub image: ImageBounds,
    pub seed: u64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            scenes_per_level: [40, 40, 40],
            categories: FrameCategory::ALL.to_vec(),
            degrade: DegradeParams::default(),
            refine: RefineConfig::default(),
            constraints: ConstraintConfig::default(),
            image: ImageBounds::new(640.0, 480.0),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOutcome {
    pub report: BenchmarkReport,
    pub timing: Timing,
}

/// Run the pipeline on simulated scenes at each occlusion level.
///
/// Scene `k` uses the same room and degradation seed at every level, so levels differ only
/// in occlusion. Failures are recorded with error 1.
pub fn run_benchmark(cfg: &BenchmarkConfig) -> BenchmarkOutcome {
    let mut records = Vec::new();
    let mut runtimes = Vec::new();
    for (level, &count) in (0u8..).zip(&cfg.scenes_per_level) {
        for k in 0..count {
            if cfg.categories.is_empty() {
                break;
            }
            let category = cfg.categories[k % cfg.categories.len()];
            let scene_seed = mix_seed(&[cfg.seed, k as u64]);
            let started = Instant::now();
            let outcome = run_one(cfg, category, scene_seed, level);
            runtimes.push(started.elapsed().as_secs_f64());
            let (error, failure) = match outcome {
                Ok(e) => (e, None),
                Err(msg) => (1.0, Some(msg)),
            };
            records.push(EvalRecord { index: k, scene_seed, category, occlusion_level: level, error, failure });
        }
    }
    let levels = (0u8..3)
        .filter(|l| cfg.scenes_per_level[*l as usize] > 0 && !cfg.categories.is_empty())
        .map(|l| LevelReport::from_records(Some(l), records.iter().filter(|r| r.occlusion_level == l)))
        .collect();
    let aggregate = LevelReport::from_records(None, records.iter());
    let mean_runtime = if runtimes.is_empty() { 0.0 } else { runtimes.iter().sum::<f64>() / runtimes.len() as f64 };
    BenchmarkOutcome {
        report: BenchmarkReport { levels, aggregate, records },
        timing: Timing { runtimes, mean_runtime },
    }
}

fn run_one(cfg: &BenchmarkConfig, category: FrameCategory, scene_seed: u64, level: u8) -> Result<f64, String> {
    let scene = generate_scene(scene_seed, category, cfg.image).map_err(|e| e.to_string())?;
    let params = DegradeParams { seed: mix_seed(&[scene_seed, 1]), occlusion_level: level, ..cfg.degrade.clone() };
    let segments = degrade(&scene, &params).map_err(|e| e.to_string())?;
    let rec = recover(&segments, &scene.truth_vps, category, &cfg.image, &cfg.refine, &cfg.constraints)
        .map_err(|e| e.to_string())?;
    image_error(&rec.frame, &scene.truth_frame, cfg.image.diagonal()).map_err(|e| e.to_string())
}
