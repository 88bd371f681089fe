//! JSON file formats. Each file carries a `schema` field naming its version; the documents
//! in `schemas/` describe them.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use roomframe::{
    DegradeParams, EvalRecord, Frame, FrameCategory, GroupId, HPoint, ImageBounds, LevelReport, Point2, SceneTruth,
    Segment, SegmentId, VanishingTriplet,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCENE_SCHEMA: &str = "roomframe.scene.v1";
pub const FRAME_SCHEMA: &str = "roomframe.frame.v1";
pub const TRUTH_SCHEMA: &str = "roomframe.truth.v1";
pub const MANIFEST_SCHEMA: &str = "roomframe.manifest.v1";
pub const REPORT_SCHEMA: &str = "roomframe.report.v1";
pub const TIMING_SCHEMA: &str = "roomframe.timing.v1";

/// Input coordinates may reach this multiple of the image size.
const COORD_LIMIT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageSize {
    pub width: f64,
    pub height: f64,
}

impl From<ImageBounds> for ImageSize {
    fn from(b: ImageBounds) -> Self {
        Self { width: b.width, height: b.height }
    }
}

impl ImageSize {
    pub fn bounds(&self) -> ImageBounds {
        ImageBounds::new(self.width, self.height)
    }
}

/// A vanishing point: a finite image point or a direction at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum VpEntry {
    Point([f64; 2]),
    Direction([f64; 2]),
}

impl From<HPoint> for VpEntry {
    fn from(h: HPoint) -> Self {
        match h.to_point() {
            Some(p) if !h.is_at_infinity() => VpEntry::Point([p.x, p.y]),
            _ => VpEntry::Direction([h.x, h.y]),
        }
    }
}

impl VpEntry {
    pub fn to_hpoint(self) -> HPoint {
        match self {
            VpEntry::Point([x, y]) => HPoint::finite(x, y),
            VpEntry::Direction([dx, dy]) => HPoint::at_infinity(dx, dy),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VpSet {
    pub x: VpEntry,
    pub y: VpEntry,
    pub z: VpEntry,
}

impl VpSet {
    pub fn from_triplet(t: &VanishingTriplet) -> Self {
        Self { x: t.vp_x().into(), y: t.vp_y().into(), z: t.vp_z().into() }
    }

    pub fn triplet(&self) -> Result<VanishingTriplet> {
        VanishingTriplet::new(self.x.to_hpoint(), self.y.to_hpoint(), self.z.to_hpoint())
            .map_err(|e| CliError::input(format!("vanishing_points: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentEntry {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<u32>,
}

impl From<&Segment> for SegmentEntry {
    fn from(s: &Segment) -> Self {
        Self { x1: s.p.x, y1: s.p.y, x2: s.q.x, y2: s.q.y, id: Some(s.id.0) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CornerEntry {
    pub label: String,
    pub x: f64,
    pub y: f64,
}

fn corner_entries(corners: &[Point2]) -> Vec<CornerEntry> {
    corners
        .iter()
        .zip(["A", "B", "C", "D"])
        .map(|(p, l)| CornerEntry { label: l.to_string(), x: p.x, y: p.y })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub schema: String,
    pub image: ImageSize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<FrameCategory>,
    pub vanishing_points: VpSet,
    pub segments: Vec<SegmentEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth_corners: Option<Vec<CornerEntry>>,
}

/// A scene file checked and converted to pipeline inputs.
#[derive(Debug, Clone)]
pub struct SceneInput {
    pub bounds: ImageBounds,
    pub category: Option<FrameCategory>,
    pub vps: VanishingTriplet,
    pub segments: Vec<Segment>,
}

impl SceneFile {
    pub fn from_scene(scene: &SceneTruth, segments: &[Segment]) -> Self {
        Self {
            schema: SCENE_SCHEMA.into(),
            image: scene.image.into(),
            category: Some(scene.category),
            vanishing_points: VpSet::from_triplet(&scene.truth_vps),
            segments: segments.iter().map(SegmentEntry::from).collect(),
            truth_corners: Some(corner_entries(&scene.truth_frame.corners)),
        }
    }

    /// Validate and convert. Segments without ids are numbered after the largest given id.
    pub fn to_input(&self) -> Result<SceneInput> {
        check_schema(&self.schema, SCENE_SCHEMA)?;
        let bounds = check_image(self.image)?;
        let vps = self.vanishing_points.triplet()?;
        let mut next = self.segments.iter().filter_map(|s| s.id).max().map_or(0, |m| m + 1);
        let lim_x = COORD_LIMIT * bounds.width;
        let lim_y = COORD_LIMIT * bounds.height;
        let segments = self
            .segments
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let ok = [e.x1, e.x2].iter().all(|v| v.abs() <= lim_x) && [e.y1, e.y2].iter().all(|v| v.abs() <= lim_y);
                if !ok {
                    return Err(CliError::input(format!("segments[{i}]: coordinates outside 10x the image bounds")));
                }
                let id = e.id.unwrap_or_else(|| {
                    next += 1;
                    next - 1
                });
                Segment::new(Point2::new(e.x1, e.y1), Point2::new(e.x2, e.y2), SegmentId(id))
                    .map_err(|err| CliError::input(format!("segments[{i}]: {err}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SceneInput { bounds, category: self.category, vps, segments })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineOrigin {
    Detected,
    Fitted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxLineEntry {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
    pub id: u32,
    pub origin: LineOrigin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub schema: String,
    pub image: ImageSize,
    pub category: FrameCategory,
    pub corners: Vec<CornerEntry>,
    /// Keyed by group name (`x_c`, `y`, `z_fl`, ...).
    pub box_lines: BTreeMap<String, BoxLineEntry>,
    pub cross_ratio_residuals: Vec<f64>,
    pub depth_score: f64,
}

impl FrameFile {
    pub fn new(
        frame: &Frame,
        image: ImageBounds,
        fitted: impl Fn(&Segment) -> bool,
        residuals: Vec<f64>,
        depth_score: f64,
    ) -> Self {
        let box_lines = frame
            .box_lines
            .iter()
            .map(|(g, s)| {
                let origin = if fitted(s) { LineOrigin::Fitted } else { LineOrigin::Detected };
                let e = BoxLineEntry { x1: s.p.x, y1: s.p.y, x2: s.q.x, y2: s.q.y, id: s.id.0, origin };
                (g.name(), e)
            })
            .collect();
        Self {
            schema: FRAME_SCHEMA.into(),
            image: image.into(),
            category: frame.category,
            corners: corner_entries(&frame.corners),
            box_lines,
            cross_ratio_residuals: residuals,
            depth_score,
        }
    }

    pub fn to_frame(&self) -> Result<Frame> {
        check_schema(&self.schema, FRAME_SCHEMA)?;
        check_image(self.image)?;
        let corners = check_corners(self.category, &self.corners)?;
        let mut box_lines = BTreeMap::new();
        for (name, e) in &self.box_lines {
            let g: GroupId = name.parse().map_err(CliError::input)?;
            let seg = Segment::new(Point2::new(e.x1, e.y1), Point2::new(e.x2, e.y2), SegmentId(e.id))
                .map_err(|err| CliError::input(format!("box_lines.{name}: {err}")))?;
            box_lines.insert(g, seg);
        }
        Ok(Frame { category: self.category, box_lines, corners })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthFile {
    pub schema: String,
    pub scene_seed: u64,
    pub image: ImageSize,
    pub category: FrameCategory,
    pub occlusion_level: u8,
    pub corners: Vec<CornerEntry>,
    pub box_lines: BTreeMap<String, SegmentEntry>,
}

impl TruthFile {
    pub fn from_scene(scene: &SceneTruth, occlusion_level: u8) -> Self {
        Self {
            schema: TRUTH_SCHEMA.into(),
            scene_seed: scene.seed,
            image: scene.image.into(),
            category: scene.category,
            occlusion_level,
            corners: corner_entries(&scene.truth_frame.corners),
            box_lines: scene.truth_frame.box_lines.iter().map(|(g, s)| (g.name(), s.into())).collect(),
        }
    }

    pub fn corners(&self) -> Result<Vec<Point2>> {
        check_schema(&self.schema, TRUTH_SCHEMA)?;
        check_corners(self.category, &self.corners)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub index: usize,
    pub scene_seed: u64,
    pub category: FrameCategory,
    pub occlusion_level: u8,
    /// Paths relative to the manifest's directory.
    pub scene: String,
    pub truth: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema: String,
    pub seed: u64,
    pub degrade: DegradeParams,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema: String,
    pub manifest_seed: u64,
    pub levels: Vec<LevelReport>,
    pub aggregate: LevelReport,
    pub records: Vec<EvalRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub index: usize,
    pub occlusion_level: u8,
    pub runtime_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingFile {
    pub schema: String,
    pub mean_runtime_seconds: f64,
    pub records: Vec<TimingRecord>,
}

fn check_schema(found: &str, expected: &str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(CliError::input(format!("schema: expected `{expected}`, found `{found}`")))
    }
}

fn check_image(size: ImageSize) -> Result<ImageBounds> {
    let b = size.bounds();
    if b.is_empty() || !b.width.is_finite() || !b.height.is_finite() {
        return Err(CliError::input("image: width and height must be positive"));
    }
    Ok(b)
}

fn check_corners(cat: FrameCategory, corners: &[CornerEntry]) -> Result<Vec<Point2>> {
    if corners.len() != cat.corner_count() {
        return Err(CliError::input(format!(
            "corners: category {cat} has {} corners, found {}",
            cat.corner_count(),
            corners.len()
        )));
    }
    Ok(corners.iter().map(|c| Point2::new(c.x, c.y)).collect())
}

/// Parse a JSON file, mapping I/O and syntax errors to input errors.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}
