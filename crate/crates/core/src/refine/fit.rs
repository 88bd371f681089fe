use std::collections::BTreeMap;

use crate::camera::VanishingTriplet;
use crate::classify::{Correspondence, GroupId, PartitionedSegments};
use crate::error::RefineError;
use crate::geometry::{ImageBounds, Segment, SegmentId};

use super::RefineConfig;

/// Endpoints closer than this to the image border count as truncated, pixels.
const BORDER_PX: f64 = 1.0;

/// Candidate box lines through each group's vanishing point and the supporting points of its
/// supporter groups, clipped to the image.
///
/// A finite vanishing point contributes the half-line from the vanishing point through the
/// supporting point. Supporting points on the image border are truncations, not corners, and
/// are skipped. New segments are numbered from `first_id` in group order.
pub fn fit_missing(
    p: &PartitionedSegments,
    t: &VanishingTriplet,
    corr: &Correspondence,
    bounds: &ImageBounds,
    cfg: &RefineConfig,
    first_id: u32,
) -> Result<BTreeMap<GroupId, Vec<Segment>>, RefineError> {
    if bounds.is_empty() {
        return Err(RefineError::EmptyImageBounds);
    }
    let mut next = first_id;
    let mut out = BTreeMap::new();
    for g in p.category.groups() {
        let vp = t.vp(g.axis);
        let mut fitted: Vec<Segment> = Vec::new();
        for sup in corr.supporters(*g) {
            for s in p.group(sup.group) {
                let point = sup.side.endpoint(s);
                if !bounds.contains_with_margin(point, BORDER_PX) {
                    continue;
                }
                let Some(seg) = bounds.clip_ray(vp, point, SegmentId(next)) else { continue };
                let duplicate = fitted.iter().any(|f| {
                    f.distance_to_point(seg.p) <= cfg.fit_dedup_px && f.distance_to_point(seg.q) <= cfg.fit_dedup_px
                });
                if !duplicate {
                    fitted.push(seg);
                    next += 1;
                }
            }
        }
        out.insert(*g, fitted);
    }
    Ok(out)
}
