use serde::{Deserialize, Serialize};

use crate::geometry::{HPoint, Line2, Point2, Segment, SegmentId};

use super::RefineConfig;

/// Terms of the collinearity test for a pair of segments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollinearityReport {
    /// Longest endpoint-pair distance.
    pub l_dis: f64,
    /// Shortest distance between the two closed segments.
    pub s_dis: f64,
    /// Sum of the two lengths.
    pub length: f64,
    /// `|l_dis − s_dis − length|`.
    pub e: f64,
}

pub fn collinearity_error(a: &Segment, b: &Segment) -> CollinearityReport {
    let (u, v) = a.farthest_pair(b);
    let l_dis = u.dist(v);
    let s_dis = a.distance_to_segment(b);
    let length = a.length() + b.length();
    CollinearityReport { l_dis, s_dis, length, e: (l_dis - s_dis - length).abs() }
}

/// The segment spanning the farthest endpoints of `a` and `b`, if every endpoint lies within
/// `max_offset` of its line.
fn merged_span(a: &Segment, b: &Segment, max_offset: f64) -> Option<(Point2, Point2)> {
    let (p, q) = a.farthest_pair(b);
    let line = Line2::from_points(p, q).ok()?;
    [a.p, a.q, b.p, b.q].iter().all(|x| line.distance(*x) <= max_offset).then_some((p, q))
}

/// Whether `a` and `b` lie on opposite sides of the foot of `vp` on their merged span.
fn straddles(a: &Segment, b: &Segment, span: (Point2, Point2), vp: HPoint) -> bool {
    let Some(v) = vp.to_point() else { return false };
    let dir = span.1 - span.0;
    let t = |x: Point2| (x - span.0).dot(dir);
    let tv = t(v);
    let (a0, a1) = (t(a.p).min(t(a.q)), t(a.p).max(t(a.q)));
    let (b0, b1) = (t(b.p).min(t(b.q)), t(b.p).max(t(b.q)));
    (a1 < tv && tv < b0) || (b1 < tv && tv < a0)
}

/// Merge collinear pairs (error below `tau_e`) into the segment spanning their farthest
/// endpoints, repeating until no pair qualifies. Pairs whose endpoints stray more than
/// `connect_offset_px` from the merged line are left apart.
///
/// Each round ranks qualifying pairs by error, then by ids, and merges greedily so every
/// segment takes part in at most one merge per round. A merged segment keeps the smaller id
/// and the position of the earlier segment.
pub fn connect_collinear(set: &[Segment], cfg: &RefineConfig) -> Vec<Segment> {
    connect(set, None, cfg)
}

/// [`connect_collinear`] for a set converging on `vp`: pieces on opposite sides of the
/// vanishing point are never joined.
pub fn connect_toward(set: &[Segment], vp: HPoint, cfg: &RefineConfig) -> Vec<Segment> {
    connect(set, Some(vp), cfg)
}

fn mergeable(a: &Segment, b: &Segment, vp: Option<HPoint>, cfg: &RefineConfig) -> Option<(Point2, Point2)> {
    let span = merged_span(a, b, cfg.connect_offset_px)?;
    match vp {
        Some(vp) if straddles(a, b, span, vp) => None,
        _ => Some(span),
    }
}

fn connect(set: &[Segment], vp: Option<HPoint>, cfg: &RefineConfig) -> Vec<Segment> {
    let mut current: Vec<Segment> = set.to_vec();
    loop {
        let mut pairs: Vec<(f64, SegmentId, SegmentId, usize, usize)> = Vec::new();
        for i in 0..current.len() {
            for j in (i + 1)..current.len() {
                let e = collinearity_error(&current[i], &current[j]).e;
                if e < cfg.tau_e && mergeable(&current[i], &current[j], vp, cfg).is_some() {
                    let (lo, hi) = ordered(current[i].id, current[j].id);
                    pairs.push((e, lo, hi, i, j));
                }
            }
        }
        if pairs.is_empty() {
            return current;
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)).then(a.3.cmp(&b.3)));
        let mut used = vec![false; current.len()];
        let mut replacement: Vec<Option<Segment>> = vec![None; current.len()];
        for (_, lo, _, i, j) in pairs {
            if used[i] || used[j] {
                continue;
            }
            used[i] = true;
            used[j] = true;
            let merged = mergeable(&current[i], &current[j], vp, cfg).and_then(|(p, q)| Segment::new(p, q, lo).ok());
            replacement[i] = merged;
        }
        current = current
            .iter()
            .enumerate()
            .filter_map(|(k, s)| match (used[k], replacement[k]) {
                (true, Some(m)) => Some(m),
                (true, None) => None,
                (false, _) => Some(*s),
            })
            .collect();
    }
}

fn ordered(a: SegmentId, b: SegmentId) -> (SegmentId, SegmentId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}
