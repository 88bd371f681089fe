//! Frame models, candidate enumeration under the cross-ratio constraint, selection by depth,
//! and the end-to-end [`recover`] pipeline.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::camera::{depth_score, intrinsics_from_vps, Camera, VanishingTriplet};
use crate::classify::{
    classify_segments, oriented_correspondence, partition_subsets, Axis, ClassifiedSets, Correspondence, FrameCategory,
    GroupId, PartitionedSegments, Tag,
};
use crate::error::{FrameError, GeometryError, RecoverError, Stage, StageError};
use crate::geometry::{
    intersect, pencil_cross_ratio, standard_transversal, vp_line, ImageBounds, Line2, Point2, Segment,
};
use crate::refine::{
    connect_toward, fit_missing, initial_weights, reclassify, vote_select, Origin, RefineConfig, VoteResult,
    WeightedCandidate,
};

/// One segment per group.
pub type Selection = BTreeMap<GroupId, Segment>;

/// A frame-model instance: its box lines and corners `A, B, C, D` (as many as the model has).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub category: FrameCategory,
    pub box_lines: Selection,
    pub corners: Vec<Point2>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateFrame {
    pub frame: Frame,
    pub cross_ratio_residuals: Vec<f64>,
    pub depth: Option<f64>,
}

impl CandidateFrame {
    pub fn total_residual(&self) -> f64 {
        self.cross_ratio_residuals.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConstraintConfig {
    /// Cross-ratio residual bound.
    pub epsilon: f64,
    /// Corner consistency tolerance at a 640×480 image, pixels; scales with the diagonal.
    pub corner_consistency: f64,
    pub max_candidates: usize,
}

impl Default for ConstraintConfig {
    fn default() -> Self {
        Self { epsilon: 0.05, corner_consistency: 5.0, max_candidates: 100_000 }
    }
}

impl ConstraintConfig {
    pub fn validate(&self) -> Result<(), FrameError> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(FrameError::InvalidConfig("epsilon must be nonnegative".into()));
        }
        if !(self.corner_consistency > 0.0 && self.corner_consistency.is_finite()) {
            return Err(FrameError::InvalidConfig("corner_consistency must be positive".into()));
        }
        if self.max_candidates == 0 {
            return Err(FrameError::InvalidConfig("max_candidates must be positive".into()));
        }
        Ok(())
    }

    /// Corner tolerance in pixels for an image of this size.
    pub fn corner_tolerance(&self, bounds: &ImageBounds) -> f64 {
        self.corner_consistency * bounds.diagonal() / 800.0
    }
}

fn gid(axis: Axis, tag: Tag) -> GroupId {
    GroupId::new(axis, tag)
}

/// The line through a segment's vanishing point and its midpoint.
fn pencil_line(s: &Segment, t: &VanishingTriplet, g: GroupId) -> Result<Line2, FrameError> {
    vp_line(s, t.vp(g.axis)).map_err(|_| FrameError::Geometry(GeometryError::DegeneratePencil))
}

/// Cross ratio `(a, b : c, d)` of four lines through a common vanishing point.
fn bracket(lines: [&Line2; 4], bounds: &ImageBounds, apex: crate::geometry::HPoint) -> Result<f64, FrameError> {
    let owned = lines.map(|l| *l);
    let transversal = standard_transversal(&owned, apex, bounds);
    Ok(pencil_cross_ratio(lines, &transversal)?)
}

/// Pairwise cross ratios used by the residuals; each closes over the vanishing lines.
struct Brackets<'a> {
    t: &'a VanishingTriplet,
    bounds: &'a ImageBounds,
}

impl Brackets<'_> {
    /// `(x_c, l_xz : x_f, l_xy)`
    fn x_cf(&self, xc: &Line2, xf: &Line2) -> Result<f64, FrameError> {
        bracket([xc, self.t.l_xz(), xf, self.t.l_xy()], self.bounds, self.t.vp_x())
    }
    /// `(z_c, l_xz : z_f, l_yz)`
    fn z_cf(&self, zc: &Line2, zf: &Line2) -> Result<f64, FrameError> {
        bracket([zc, self.t.l_xz(), zf, self.t.l_yz()], self.bounds, self.t.vp_z())
    }
    /// `(y_r, l_yz : y_l, l_xy)`
    fn y_rl(&self, yr: &Line2, yl: &Line2) -> Result<f64, FrameError> {
        bracket([yr, self.t.l_yz(), yl, self.t.l_xy()], self.bounds, self.t.vp_y())
    }
    /// `(z_r, l_yz : z_l, l_xz)`
    fn z_rl(&self, zr: &Line2, zl: &Line2) -> Result<f64, FrameError> {
        bracket([zr, self.t.l_yz(), zl, self.t.l_xz()], self.bounds, self.t.vp_z())
    }
}

fn residual_pair(a: f64, b: f64) -> f64 {
    (a - b).abs()
}

fn residual_triple(twice: f64, a: f64, b: f64) -> f64 {
    (2.0 * twice - a - b).abs()
}

fn line_of(sel: &Selection, t: &VanishingTriplet, g: GroupId) -> Result<Line2, FrameError> {
    let s = sel.get(&g).ok_or(FrameError::MissingGroup(g))?;
    pencil_line(s, t, g)
}

/// Cross-ratio residuals of a full selection ("1c" has none).
///
/// Each box line enters through the line joining its vanishing point and its midpoint.
pub fn cross_ratio_residuals(
    selection: &Selection,
    t: &VanishingTriplet,
    cat: FrameCategory,
    bounds: &ImageBounds,
) -> Result<Vec<f64>, FrameError> {
    use Axis::*;
    use Tag::*;
    let b = Brackets { t, bounds };
    let l = |a: Axis, tag: Tag| line_of(selection, t, gid(a, tag));
    match cat {
        FrameCategory::FourC => {
            let (xc, xf, yl, yr) = (l(X, C)?, l(X, F)?, l(Y, L)?, l(Y, R)?);
            let (zcl, zcr, zfl, zfr) = (l(Z, CL)?, l(Z, CR)?, l(Z, FL)?, l(Z, FR)?);
            let r1 = residual_triple(b.x_cf(&xc, &xf)?, b.z_cf(&zcl, &zfl)?, b.z_cf(&zcr, &zfr)?);
            let r2 = residual_triple(b.y_rl(&yr, &yl)?, b.z_rl(&zfr, &zfl)?, b.z_rl(&zcr, &zcl)?);
            Ok(vec![r1, r2])
        }
        FrameCategory::TwoVC => {
            let r = residual_pair(b.x_cf(&l(X, C)?, &l(X, F)?)?, b.z_cf(&l(Z, C)?, &l(Z, F)?)?);
            Ok(vec![r])
        }
        FrameCategory::TwoHC => {
            let r = residual_pair(b.y_rl(&l(Y, R)?, &l(Y, L)?)?, b.z_rl(&l(Z, R)?, &l(Z, L)?)?);
            Ok(vec![r])
        }
        FrameCategory::OneC => Err(FrameError::NotApplicable(cat)),
    }
}

/// Corner definitions: the two lines that meet at the corner and the third line that must pass through it.
fn corner_defs(cat: FrameCategory) -> Vec<(GroupId, GroupId, GroupId)> {
    use Axis::*;
    use Tag::*;
    match cat {
        FrameCategory::FourC => vec![
            (gid(X, C), gid(Y, L), gid(Z, CL)),
            (gid(X, C), gid(Y, R), gid(Z, CR)),
            (gid(X, F), gid(Y, R), gid(Z, FR)),
            (gid(X, F), gid(Y, L), gid(Z, FL)),
        ],
        FrameCategory::TwoVC => vec![(gid(Y, Whole), gid(X, C), gid(Z, C)), (gid(Y, Whole), gid(X, F), gid(Z, F))],
        FrameCategory::TwoHC => vec![(gid(X, Whole), gid(Y, L), gid(Z, L)), (gid(X, Whole), gid(Y, R), gid(Z, R))],
        FrameCategory::OneC => vec![(gid(X, Whole), gid(Y, Whole), gid(Z, Whole))],
    }
}

/// Build a frame from a selection, computing corners from the vanishing-point lines.
pub fn assemble_frame(
    selection: &Selection,
    t: &VanishingTriplet,
    cat: FrameCategory,
    cfg: &ConstraintConfig,
    bounds: &ImageBounds,
) -> Result<Frame, FrameError> {
    let lines: BTreeMap<GroupId, Line2> =
        cat.groups().iter().map(|g| line_of(selection, t, *g).map(|l| (*g, l))).collect::<Result<_, _>>()?;
    let corners = corners_from_lines(&lines, cat, cfg.corner_tolerance(bounds))?;
    let box_lines = cat.groups().iter().map(|g| (*g, selection[g])).collect();
    Ok(Frame { category: cat, box_lines, corners })
}

fn corners_from_lines(
    lines: &BTreeMap<GroupId, Line2>,
    cat: FrameCategory,
    tol: f64,
) -> Result<Vec<Point2>, FrameError> {
    corner_defs(cat)
        .into_iter()
        .map(|(a, b, third)| {
            let p = intersect(&lines[&a], &lines[&b])
                .ok()
                .and_then(|h| h.to_point())
                .ok_or(FrameError::ParallelDefiningLines)?;
            let distance = lines[&third].distance(p);
            if distance > tol {
                return Err(FrameError::CornerInconsistent { group: third, distance });
            }
            Ok(p)
        })
        .collect()
}

/// Candidate lines of one group with their vanishing-point lines; members whose line is
/// undefined are skipped.
struct Pool {
    segments: Vec<Segment>,
    lines: Vec<Line2>,
}

impl Pool {
    fn new(g: GroupId, segs: &[Segment], t: &VanishingTriplet) -> Self {
        let mut segments = Vec::new();
        let mut lines = Vec::new();
        for s in segs {
            if let Ok(l) = pencil_line(s, t, g) {
                segments.push(*s);
                lines.push(l);
            }
        }
        Self { segments, lines }
    }

    fn len(&self) -> usize {
        self.segments.len()
    }
}

/// Cross ratios of every ordered pair drawn from two pools.
fn pair_table(a: &Pool, b: &Pool, f: impl Fn(&Line2, &Line2) -> Result<f64, FrameError>) -> Vec<Vec<Option<f64>>> {
    a.lines.iter().map(|la| b.lines.iter().map(|lb| f(la, lb).ok()).collect()).collect()
}

struct Collector<'a> {
    cat: FrameCategory,
    groups: Vec<GroupId>,
    pools: Vec<&'a Pool>,
    tol: f64,
    max: usize,
    out: Vec<CandidateFrame>,
}

impl Collector<'_> {
    /// Assemble the combination given by one index per group (in `groups` order).
    fn push(&mut self, idx: &[usize], residuals: Vec<f64>) -> Result<(), FrameError> {
        let lines: BTreeMap<GroupId, Line2> =
            self.groups.iter().zip(idx).enumerate().map(|(k, (g, i))| (*g, self.pools[k].lines[*i])).collect();
        let Ok(corners) = corners_from_lines(&lines, self.cat, self.tol) else { return Ok(()) };
        let box_lines =
            self.groups.iter().zip(idx).enumerate().map(|(k, (g, i))| (*g, self.pools[k].segments[*i])).collect();
        if self.out.len() >= self.max {
            return Err(FrameError::CandidateExplosion(self.max));
        }
        self.out.push(CandidateFrame {
            frame: Frame { category: self.cat, box_lines, corners },
            cross_ratio_residuals: residuals,
            depth: None,
        });
        Ok(())
    }
}

/// All selections from the per-group candidates whose residuals stay below `epsilon` and
/// whose corners assemble.
///
/// Pencil pairs are scored once and combined per residual equation, so only combinations
/// passing every equation are assembled. Output order is lexicographic in the category's
/// group order.
pub fn enumerate_candidates(
    groups: &BTreeMap<GroupId, Vec<Segment>>,
    t: &VanishingTriplet,
    cat: FrameCategory,
    cfg: &ConstraintConfig,
    bounds: &ImageBounds,
) -> Result<Vec<CandidateFrame>, FrameError> {
    let order: Vec<GroupId> = cat.groups().to_vec();
    let pools: Vec<Pool> =
        order.iter().map(|g| Pool::new(*g, groups.get(g).map(Vec::as_slice).unwrap_or(&[]), t)).collect();
    let mut col = Collector {
        cat,
        groups: order.clone(),
        pools: pools.iter().collect(),
        tol: cfg.corner_tolerance(bounds),
        max: cfg.max_candidates,
        out: Vec::new(),
    };
    let b = Brackets { t, bounds };
    let eps = cfg.epsilon;
    let pass = |r: f64| r < eps;
    match cat {
        FrameCategory::FourC => {
            // Order: x_c, x_f, y_l, y_r, z_cl, z_cr, z_fl, z_fr.
            let [xc, xf, yl, yr, zcl, zcr, zfl, zfr] = [0, 1, 2, 3, 4, 5, 6, 7].map(|k| &pools[k]);
            let cx = pair_table(xc, xf, |a, c| b.x_cf(a, c));
            let cy = pair_table(yr, yl, |a, c| b.y_rl(a, c));
            let czl = pair_table(zcl, zfl, |a, c| b.z_cf(a, c));
            let czr = pair_table(zcr, zfr, |a, c| b.z_cf(a, c));
            let czf = pair_table(zfr, zfl, |a, c| b.z_rl(a, c));
            let czc = pair_table(zcr, zcl, |a, c| b.z_rl(a, c));
            for i0 in 0..xc.len() {
                for i1 in 0..xf.len() {
                    let Some(vx) = cx[i0][i1] else { continue };
                    for i2 in 0..yl.len() {
                        for i3 in 0..yr.len() {
                            let Some(vy) = cy[i3][i2] else { continue };
                            for i4 in 0..zcl.len() {
                                for i5 in 0..zcr.len() {
                                    let Some(vzc) = czc[i5][i4] else { continue };
                                    for i6 in 0..zfl.len() {
                                        let Some(vzl) = czl[i4][i6] else { continue };
                                        for i7 in 0..zfr.len() {
                                            let (Some(vzr), Some(vzf)) = (czr[i5][i7], czf[i7][i6]) else {
                                                continue;
                                            };
                                            let r1 = residual_triple(vx, vzl, vzr);
                                            if !pass(r1) {
                                                continue;
                                            }
                                            let r2 = residual_triple(vy, vzf, vzc);
                                            if !pass(r2) {
                                                continue;
                                            }
                                            col.push(&[i0, i1, i2, i3, i4, i5, i6, i7], vec![r1, r2])?;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        FrameCategory::TwoVC => {
            // Order: x_c, x_f, y, z_c, z_f.
            let [xc, xf, y, zc, zf] = [0, 1, 2, 3, 4].map(|k| &pools[k]);
            let cx = pair_table(xc, xf, |a, c| b.x_cf(a, c));
            let cz = pair_table(zc, zf, |a, c| b.z_cf(a, c));
            for i0 in 0..xc.len() {
                for i1 in 0..xf.len() {
                    let Some(vx) = cx[i0][i1] else { continue };
                    for i2 in 0..y.len() {
                        for i3 in 0..zc.len() {
                            for i4 in 0..zf.len() {
                                let Some(vz) = cz[i3][i4] else { continue };
                                let r = residual_pair(vx, vz);
                                if pass(r) {
                                    col.push(&[i0, i1, i2, i3, i4], vec![r])?;
                                }
                            }
                        }
                    }
                }
            }
        }
        FrameCategory::TwoHC => {
            // Order: x, y_l, y_r, z_l, z_r.
            let [x, yl, yr, zl, zr] = [0, 1, 2, 3, 4].map(|k| &pools[k]);
            let cy = pair_table(yr, yl, |a, c| b.y_rl(a, c));
            let cz = pair_table(zr, zl, |a, c| b.z_rl(a, c));
            for i0 in 0..x.len() {
                for i1 in 0..yl.len() {
                    for i2 in 0..yr.len() {
                        let Some(vy) = cy[i2][i1] else { continue };
                        for i3 in 0..zl.len() {
                            for i4 in 0..zr.len() {
                                let Some(vz) = cz[i4][i3] else { continue };
                                let r = residual_pair(vy, vz);
                                if pass(r) {
                                    col.push(&[i0, i1, i2, i3, i4], vec![r])?;
                                }
                            }
                        }
                    }
                }
            }
        }
        FrameCategory::OneC => {
            let [x, y, z] = [0, 1, 2].map(|k| &pools[k]);
            for i0 in 0..x.len() {
                for i1 in 0..y.len() {
                    for i2 in 0..z.len() {
                        col.push(&[i0, i1, i2], vec![])?;
                    }
                }
            }
        }
    }
    if col.out.is_empty() {
        return Err(FrameError::EmptyCandidateSet);
    }
    Ok(col.out)
}

/// Score every candidate by depth and return the index of the winner.
///
/// Candidates whose corners cannot be lifted keep `depth = None` and are skipped. Ties in
/// depth go to the smaller total residual, then to the earlier candidate.
pub fn select_final(candidates: &mut [CandidateFrame], camera: &Camera) -> Result<usize, FrameError> {
    let mut best: Option<usize> = None;
    for i in 0..candidates.len() {
        candidates[i].depth = depth_score(&candidates[i].frame, camera).ok();
        let Some(s) = candidates[i].depth else { continue };
        let better = match best {
            None => true,
            Some(b) => {
                let sb = candidates[b].depth.unwrap_or(f64::NEG_INFINITY);
                s > sb || (s == sb && candidates[i].total_residual() < candidates[b].total_residual())
            }
        };
        if better {
            best = Some(i);
        }
    }
    best.ok_or(FrameError::AllCandidatesFailedDepth)
}

/// Intermediate products of [`recover`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub classified: ClassifiedSets,
    pub reclassified: ClassifiedSets,
    pub connected: ClassifiedSets,
    pub partitioned: PartitionedSegments,
    pub correspondence: Correspondence,
    pub fitted: BTreeMap<GroupId, Vec<Segment>>,
    pub vote: VoteResult,
    pub candidates: Vec<CandidateFrame>,
    pub selected: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recovery {
    pub frame: Frame,
    pub residuals: Vec<f64>,
    pub depth: f64,
    pub camera: Camera,
    pub diagnostics: Diagnostics,
}

/// Run the full pipeline on detected segments.
pub fn recover(
    segments: &[Segment],
    t: &VanishingTriplet,
    cat: FrameCategory,
    bounds: &ImageBounds,
    refine: &RefineConfig,
    constraints: &ConstraintConfig,
) -> Result<Recovery, RecoverError> {
    let input = |msg: String| RecoverError::new(Stage::Input, StageError::Input(msg));
    refine.validate().map_err(|e| RecoverError::new(Stage::Input, e))?;
    constraints.validate().map_err(|e| RecoverError::new(Stage::Input, e))?;
    if segments.is_empty() {
        return Err(input("no input segments".into()));
    }
    if bounds.is_empty() {
        return Err(input("image size must be positive".into()));
    }

    let classified = classify_segments(segments, t, refine.tau_class);
    let reclassified = reclassify(&classified, t, refine);
    let connected = ClassifiedSets {
        x: connect_toward(&reclassified.x, t.vp_x(), refine),
        y: connect_toward(&reclassified.y, t.vp_y(), refine),
        z: connect_toward(&reclassified.z, t.vp_z(), refine),
        outliers: reclassified.outliers.clone(),
    };
    let partitioned = partition_subsets(&connected, t, cat);
    let correspondence = oriented_correspondence(cat, t, bounds);
    let first_id = segments.iter().map(|s| s.id.0).max().map_or(0, |m| m + 1);
    let fitted = fit_missing(&partitioned, t, &correspondence, bounds, refine, first_id)
        .map_err(|e| RecoverError::new(Stage::Fit, e))?;

    let mut groups: BTreeMap<GroupId, Vec<WeightedCandidate>> = BTreeMap::new();
    for g in cat.groups() {
        let mut list: Vec<WeightedCandidate> = partitioned
            .group(*g)
            .iter()
            .map(|s| WeightedCandidate::new(*s, Origin::Detected))
            .chain(fitted[g].iter().map(|s| WeightedCandidate::new(*s, Origin::Fitted)))
            .collect();
        initial_weights(*g, &mut list, t.vp(g.axis), refine).map_err(|e| RecoverError::new(Stage::Vote, e))?;
        groups.insert(*g, list);
    }
    let vote = vote_select(groups, &correspondence, refine).map_err(|e| RecoverError::new(Stage::Vote, e))?;

    let mut candidates = enumerate_candidates(&vote.selected_segments(), t, cat, constraints, bounds)
        .map_err(|e| RecoverError::new(Stage::Enumerate, e))?;
    let camera = intrinsics_from_vps(t, bounds).map_err(|e| RecoverError::new(Stage::Calibrate, e))?;
    let selected = select_final(&mut candidates, &camera).map_err(|e| RecoverError::new(Stage::Select, e))?;
    let chosen = candidates[selected].clone();
    Ok(Recovery {
        frame: chosen.frame,
        residuals: chosen.cross_ratio_residuals,
        depth: chosen.depth.unwrap_or(0.0),
        camera,
        diagnostics: Diagnostics {
            classified,
            reclassified,
            connected,
            partitioned,
            correspondence,
            fitted,
            vote,
            candidates,
            selected,
        },
    })
}
