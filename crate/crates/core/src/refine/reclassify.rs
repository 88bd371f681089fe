use crate::camera::VanishingTriplet;
use crate::classify::{Axis, ClassifiedSets};
use crate::geometry::{acute_angle_deg, Line2, Segment};

use super::RefineConfig;

/// Move segments that run nearly parallel to `l_xz` (X↔Z) or `l_yz` (Y↔Z) into the other set
/// when at least `n_min` of that set's segments cross their midpoint disk.
///
/// Decisions are taken against a snapshot of the input, so one move never triggers another.
pub fn reclassify(sets: &ClassifiedSets, t: &VanishingTriplet, cfg: &RefineConfig) -> ClassifiedSets {
    let mut out = ClassifiedSets { outliers: sets.outliers.clone(), ..Default::default() };
    let mut moved: Vec<(Axis, Segment)> = Vec::new();
    for axis in Axis::ALL {
        let options: &[(Axis, &Line2)] = match axis {
            Axis::X => &[(Axis::Z, t.l_xz())],
            Axis::Y => &[(Axis::Z, t.l_yz())],
            Axis::Z => &[(Axis::X, t.l_xz()), (Axis::Y, t.l_yz())],
        };
        for s in sets.set(axis) {
            let mut target: Option<(Axis, usize)> = None;
            for (other, axis_line) in options {
                if acute_angle_deg(s.direction(), axis_line.direction()) >= cfg.tau_theta {
                    continue;
                }
                let n = neighbors_in_disk(s, sets.set(*other));
                if n >= cfg.n_min && target.map_or(true, |(_, best)| n > best) {
                    target = Some((*other, n));
                }
            }
            match target {
                Some((other, _)) => moved.push((other, *s)),
                None => out.set_mut(axis).push(*s),
            }
        }
    }
    for (axis, s) in moved {
        out.set_mut(axis).push(s);
    }
    out
}

fn neighbors_in_disk(s: &Segment, others: &[Segment]) -> usize {
    let center = s.midpoint();
    let radius = 0.5 * s.length();
    others.iter().filter(|o| o.distance_to_point(center) <= radius).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{HPoint, Point2, SegmentId};

    fn triplet() -> VanishingTriplet {
        VanishingTriplet::new(
            HPoint::finite(-2000.0, 240.0),
            HPoint::finite(320.0, 5000.0),
            HPoint::finite(320.0, 240.0),
        )
        .unwrap()
    }

    fn seg(id: u32, x1: f64, y1: f64, x2: f64, y2: f64) -> Segment {
        Segment::new(Point2::new(x1, y1), Point2::new(x2, y2), SegmentId(id)).unwrap()
    }

    fn scene(crossing: usize, x_angle_deg: f64) -> ClassifiedSets {
        let a = x_angle_deg.to_radians();
        let x1 = seg(0, 100.0 - 20.0 * a.cos(), 400.0 - 20.0 * a.sin(), 100.0 + 20.0 * a.cos(), 400.0 + 20.0 * a.sin());
        let z = (0..crossing)
            .map(|k| {
                let x = 90.0 + 5.0 * k as f64;
                seg(10 + k as u32, x, 380.0, x + 2.0, 420.0)
            })
            .collect();
        ClassifiedSets { x: vec![x1], y: vec![], z, outliers: vec![] }
    }

    #[test]
    fn moves_with_enough_neighbors() {
        let out = reclassify(&scene(4, 0.0), &triplet(), &RefineConfig::default());
        assert!(out.x.is_empty());
        assert_eq!(out.z.len(), 5);
        assert_eq!(out.z.last().unwrap().id, SegmentId(0));
    }

    #[test]
    fn keeps_with_two_neighbors() {
        let out = reclassify(&scene(2, 0.0), &triplet(), &RefineConfig::default());
        assert_eq!(out.x.len(), 1);
        assert_eq!(out.z.len(), 2);
    }

    #[test]
    fn angle_gate() {
        let out = reclassify(&scene(6, 25.0), &triplet(), &RefineConfig::default());
        assert_eq!(out.x.len(), 1);
        assert_eq!(out.total(), 7);
    }
}
