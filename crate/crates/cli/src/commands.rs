//! The four CLI verbs. Each returns the text destined for standard output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use roomframe::refine::Origin;
use roomframe::{
    classify_segments, degrade, generate_scene, image_error, mix_seed, recover, Axis, ClassifiedSets, DegradeParams,
    EvalRecord, Frame, FrameCategory, LevelReport, Recovery, Segment,
};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::formats::{
    read_json, to_json, write_text, FrameFile, LineOrigin, Manifest, ManifestEntry, ReportFile, SceneFile, SceneInput,
    TimingFile, TimingRecord, TruthFile, MANIFEST_SCHEMA, REPORT_SCHEMA, TIMING_SCHEMA,
};
use crate::svg::{document, Layer, Stroke};

/// Candidate frames drawn in the overlay, in enumeration order.
const MAX_DRAWN_CANDIDATES: usize = 200;

#[derive(Debug, Clone, Default)]
pub struct RecoverArgs {
    pub input: PathBuf,
    pub category: Option<FrameCategory>,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

pub fn cmd_recover(args: &RecoverArgs) -> Result<String> {
    let cfg = RunConfig::load(args.config.as_deref())?;
    let scene: SceneFile = read_json(&args.input)?;
    let input = scene.to_input()?;
    let category = args.category.or(input.category).ok_or_else(|| {
        CliError::input("missing field `category`: absent from the scene file and no --category given")
    })?;
    let rec = recover(&input.segments, &input.vps, category, &input.bounds, &cfg.refine, &cfg.constraints)?;
    let file = frame_file(&rec, &input);
    let json = to_json(&file);
    if let Some(svg) = &args.svg {
        write_text(svg, &recovery_svg(&input, &rec, &file))?;
    }
    match &args.out {
        Some(out) => {
            write_text(out, &json)?;
            Ok(String::new())
        }
        None => Ok(json),
    }
}

fn frame_file(rec: &Recovery, input: &SceneInput) -> FrameFile {
    let fitted = |s: &Segment| rec.diagnostics.fitted.values().flatten().any(|f| f.id == s.id);
    FrameFile::new(&rec.frame, input.bounds, fitted, rec.residuals.clone(), rec.depth)
}

fn classified_layer(id: &str, sets: &ClassifiedSets) -> Layer {
    let mut layer = Layer::new(id);
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        for s in sets.set(axis) {
            layer.segment(s, Stroke::axis(Some(axis), 1.0));
        }
    }
    for s in &sets.outliers {
        layer.segment(s, Stroke::axis(None, 1.0));
    }
    layer
}

fn frame_layer(file: &FrameFile) -> Layer {
    let mut layer = Layer::new("frame");
    for (name, e) in &file.box_lines {
        let axis = name.parse::<roomframe::GroupId>().ok().map(|g| g.axis);
        let stroke = Stroke::axis(axis, 3.5).dashed(e.origin == LineOrigin::Fitted);
        layer.line(roomframe::Point2::new(e.x1, e.y1), roomframe::Point2::new(e.x2, e.y2), stroke);
    }
    for c in &file.corners {
        layer.corner(roomframe::Point2::new(c.x, c.y), &c.label);
    }
    layer
}

/// Layers: initial classification, refined candidates after voting, enumerated candidate
/// frames, final frame.
pub fn recovery_svg(input: &SceneInput, rec: &Recovery, file: &FrameFile) -> String {
    let d = &rec.diagnostics;
    let initial = classified_layer("initial", &d.classified);
    let mut refined = Layer::new("refined");
    for (g, list) in &d.vote.selected {
        for c in list {
            refined.segment(&c.segment, Stroke::axis(Some(g.axis), 1.5).dashed(c.origin == Origin::Fitted));
        }
    }
    let mut candidates = Layer::new("candidates");
    for c in d.candidates.iter().take(MAX_DRAWN_CANDIDATES) {
        for (g, s) in &c.frame.box_lines {
            candidates.segment(s, Stroke::axis(Some(g.axis), 1.0).opacity(0.3));
        }
    }
    document(input.bounds, &[initial, refined, candidates, frame_layer(file)])
}

#[derive(Debug, Clone, Default)]
pub struct RenderArgs {
    pub scene: PathBuf,
    pub frame: PathBuf,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

/// Scene segments by vanishing direction, then the frame. Empty layers are left out.
pub fn cmd_render(args: &RenderArgs) -> Result<String> {
    let cfg = RunConfig::load(args.config.as_deref())?;
    let scene: SceneFile = read_json(&args.scene)?;
    let input = scene.to_input()?;
    let file: FrameFile = read_json(&args.frame)?;
    file.to_frame()?;
    if file.image.bounds() != input.bounds {
        return Err(CliError::input("scene and frame files disagree on the image size"));
    }
    if input.category.is_some_and(|c| c != file.category) {
        return Err(CliError::input("scene and frame files disagree on the category"));
    }
    let segments = classified_layer("segments", &classify_segments(&input.segments, &input.vps, cfg.refine.tau_class));
    let layers: Vec<Layer> = [segments, frame_layer(&file)].into_iter().filter(|l| !l.is_empty()).collect();
    let svg = document(input.bounds, &layers);
    match &args.out {
        Some(out) => {
            write_text(out, &svg)?;
            Ok(String::new())
        }
        None => Ok(svg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// Truth segments unchanged.
    Noiseless,
    /// The `degrade` section of the config (library defaults without one).
    Default,
}

#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub seed: Option<u64>,
    /// Cycle through all categories when absent.
    pub category: Option<FrameCategory>,
    pub count: usize,
    pub preset: Preset,
    pub occlusion: u8,
    pub width: f64,
    pub height: f64,
    pub config: Option<PathBuf>,
    pub out: PathBuf,
}

pub fn scene_file_name(k: usize) -> String {
    format!("scene_{k:04}.json")
}

pub fn truth_file_name(k: usize) -> String {
    format!("truth_{k:04}.json")
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<String> {
    let cfg = RunConfig::load(args.config.as_deref())?;
    if args.count == 0 {
        return Err(CliError::input("--count must be positive"));
    }
    let image = roomframe::ImageBounds::new(args.width, args.height);
    if image.is_empty() || !image.width.is_finite() || !image.height.is_finite() {
        return Err(CliError::input("image size must be positive"));
    }
    let base = match args.preset {
        Preset::Noiseless => DegradeParams::identity(),
        Preset::Default => cfg.degrade.clone(),
    };
    let degrade_params = DegradeParams { occlusion_level: args.occlusion, ..base };
    degrade_params.validate().map_err(|e| CliError::input(e.to_string()))?;
    let seed = args.seed.unwrap_or(cfg.seed);
    fs::create_dir_all(&args.out).map_err(|source| CliError::Write { path: args.out.clone(), source })?;

    let mut entries = Vec::with_capacity(args.count);
    for k in 0..args.count {
        let category = args.category.unwrap_or(FrameCategory::ALL[k % FrameCategory::ALL.len()]);
        let scene_seed = mix_seed(&[seed, k as u64]);
        let scene = generate_scene(scene_seed, category, image).map_err(|e| CliError::input(e.to_string()))?;
        let params = DegradeParams { seed: mix_seed(&[scene_seed, 1]), ..degrade_params.clone() };
        let segments = degrade(&scene, &params).map_err(|e| CliError::input(e.to_string()))?;
        let (scene_name, truth_name) = (scene_file_name(k), truth_file_name(k));
        write_text(&args.out.join(&scene_name), &to_json(&SceneFile::from_scene(&scene, &segments)))?;
        write_text(&args.out.join(&truth_name), &to_json(&TruthFile::from_scene(&scene, args.occlusion)))?;
        entries.push(ManifestEntry {
            index: k,
            scene_seed,
            category,
            occlusion_level: args.occlusion,
            scene: scene_name,
            truth: truth_name,
        });
    }
    let manifest = Manifest { schema: MANIFEST_SCHEMA.into(), seed, degrade: degrade_params, entries };
    write_text(&args.out.join("manifest.json"), &to_json(&manifest))?;
    Ok(format!("wrote {} scenes to {}\n", args.count, args.out.display()))
}

#[derive(Debug, Clone, Default)]
pub struct EvaluateArgs {
    pub manifest: PathBuf,
    pub config: Option<PathBuf>,
    /// Report path; defaults to `report.json` next to the manifest.
    pub out: Option<PathBuf>,
    /// Add the runtime column to the printed table.
    pub timing: bool,
}

/// Sidecar path for wall-clock timings: `report.json` → `report.timing.json`.
pub fn timing_path(report: &Path) -> PathBuf {
    let stem = report.file_stem().map_or_else(|| "report".into(), |s| s.to_string_lossy().into_owned());
    report.with_file_name(format!("{stem}.timing.json"))
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<String> {
    let cfg = RunConfig::load(args.config.as_deref())?;
    let manifest: Manifest = read_json(&args.manifest)?;
    if manifest.schema != MANIFEST_SCHEMA {
        return Err(CliError::input(format!("schema: expected `{MANIFEST_SCHEMA}`, found `{}`", manifest.schema)));
    }
    if manifest.entries.is_empty() {
        return Err(CliError::input("manifest lists no scenes"));
    }
    let dir = args.manifest.parent().unwrap_or(Path::new("."));

    let mut records = Vec::with_capacity(manifest.entries.len());
    let mut timings = Vec::with_capacity(manifest.entries.len());
    for entry in &manifest.entries {
        let (input, truth) = load_entry(dir, entry)?;
        let started = Instant::now();
        let outcome =
            recover(&input.segments, &input.vps, entry.category, &input.bounds, &cfg.refine, &cfg.constraints);
        let runtime = started.elapsed().as_secs_f64();
        let (error, failure) = match outcome {
            Ok(rec) => {
                let e = image_error(&rec.frame, &truth, input.bounds.diagonal())
                    .map_err(|e| CliError::input(e.to_string()))?;
                (e, None)
            }
            Err(e) => (1.0, Some(e.to_string())),
        };
        records.push(EvalRecord {
            index: entry.index,
            scene_seed: entry.scene_seed,
            category: entry.category,
            occlusion_level: entry.occlusion_level,
            error,
            failure,
        });
        timings.push(TimingRecord {
            index: entry.index,
            occlusion_level: entry.occlusion_level,
            runtime_seconds: runtime,
        });
    }

    let mut present: Vec<u8> = records.iter().map(|r| r.occlusion_level).collect();
    present.sort_unstable();
    present.dedup();
    let levels: Vec<LevelReport> = present
        .iter()
        .map(|l| LevelReport::from_records(Some(*l), records.iter().filter(|r| r.occlusion_level == *l)))
        .collect();
    let aggregate = LevelReport::from_records(None, records.iter());
    let mean_runtime = timings.iter().map(|t| t.runtime_seconds).sum::<f64>() / timings.len() as f64;
    let table = report_table(&levels, &aggregate, args.timing.then_some(&timings[..]));

    let report = ReportFile { schema: REPORT_SCHEMA.into(), manifest_seed: manifest.seed, levels, aggregate, records };
    let out = args.out.clone().unwrap_or_else(|| dir.join("report.json"));
    write_text(&out, &to_json(&report))?;
    let timing = TimingFile { schema: TIMING_SCHEMA.into(), mean_runtime_seconds: mean_runtime, records: timings };
    write_text(&timing_path(&out), &to_json(&timing))?;
    Ok(table)
}

fn load_entry(dir: &Path, entry: &ManifestEntry) -> Result<(SceneInput, Frame)> {
    let scene: SceneFile = read_json(&dir.join(&entry.scene))?;
    let input = scene.to_input()?;
    let truth: TruthFile = read_json(&dir.join(&entry.truth))?;
    let corners = truth.corners()?;
    let consistent = truth.category == entry.category
        && input.category.map_or(true, |c| c == entry.category)
        && truth.image.bounds() == input.bounds;
    if !consistent {
        return Err(CliError::input(format!("manifest entry {}: scene, truth and manifest disagree", entry.index)));
    }
    Ok((input, Frame { category: truth.category, box_lines: Default::default(), corners }))
}

/// Plain-text table of per-level and aggregate results.
pub fn report_table(levels: &[LevelReport], aggregate: &LevelReport, timings: Option<&[TimingRecord]>) -> String {
    let mut out = String::new();
    let _ = write!(out, "{:<14} {:>6} {:>9} {:>9} {:>12}", "level", "images", "failures", "rms_%", "mean_sq_%");
    if timings.is_some() {
        let _ = write!(out, " {:>14}", "mean_runtime_s");
    }
    out.push('\n');
    for l in levels.iter().chain(std::iter::once(aggregate)) {
        let name = l.level.map_or_else(|| "aggregate".to_string(), |v| format!("{v}-occlusion"));
        let _ = write!(
            out,
            "{name:<14} {:>6} {:>9} {:>9.3} {:>12.4}",
            l.count, l.failures, l.rms_percent, l.mean_square_percent
        );
        if let Some(t) = timings {
            let sel: Vec<f64> = t
                .iter()
                .filter(|r| l.level.map_or(true, |v| v == r.occlusion_level))
                .map(|r| r.runtime_seconds)
                .collect();
            let mean = if sel.is_empty() { 0.0 } else { sel.iter().sum::<f64>() / sel.len() as f64 };
            let _ = write!(out, " {mean:>14.4}");
        }
        out.push('\n');
    }
    out
}
