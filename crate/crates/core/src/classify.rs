//! Segment classification into vanishing directions and frame-model groups.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::camera::VanishingTriplet;
use crate::geometry::{angle_to_vp, HPoint, ImageBounds, Point2, Segment};

/// Midpoints closer than this to a partition axis are treated as outliers.
pub const ON_AXIS_PX: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FrameCategory {
    #[serde(rename = "4c")]
    FourC,
    #[serde(rename = "2vc")]
    TwoVC,
    #[serde(rename = "2hc")]
    TwoHC,
    #[serde(rename = "1c")]
    OneC,
}

impl FrameCategory {
    pub const ALL: [FrameCategory; 4] =
        [FrameCategory::FourC, FrameCategory::TwoVC, FrameCategory::TwoHC, FrameCategory::OneC];

    pub fn as_str(self) -> &'static str {
        match self {
            FrameCategory::FourC => "4c",
            FrameCategory::TwoVC => "2vc",
            FrameCategory::TwoHC => "2hc",
            FrameCategory::OneC => "1c",
        }
    }

    /// Candidate box-line groups in canonical order.
    pub fn groups(self) -> &'static [GroupId] {
        use Axis::*;
        use Tag::*;
        const FOUR: [GroupId; 8] = [
            GroupId::new(X, C),
            GroupId::new(X, F),
            GroupId::new(Y, L),
            GroupId::new(Y, R),
            GroupId::new(Z, CL),
            GroupId::new(Z, CR),
            GroupId::new(Z, FL),
            GroupId::new(Z, FR),
        ];
        const TWO_V: [GroupId; 5] =
            [GroupId::new(X, C), GroupId::new(X, F), GroupId::new(Y, Whole), GroupId::new(Z, C), GroupId::new(Z, F)];
        const TWO_H: [GroupId; 5] =
            [GroupId::new(X, Whole), GroupId::new(Y, L), GroupId::new(Y, R), GroupId::new(Z, L), GroupId::new(Z, R)];
        const ONE: [GroupId; 3] = [GroupId::new(X, Whole), GroupId::new(Y, Whole), GroupId::new(Z, Whole)];
        match self {
            FrameCategory::FourC => &FOUR,
            FrameCategory::TwoVC => &TWO_V,
            FrameCategory::TwoHC => &TWO_H,
            FrameCategory::OneC => &ONE,
        }
    }

    pub fn corner_count(self) -> usize {
        match self {
            FrameCategory::FourC => 4,
            FrameCategory::TwoVC | FrameCategory::TwoHC => 2,
            FrameCategory::OneC => 1,
        }
    }

    fn index(self) -> u64 {
        match self {
            FrameCategory::FourC => 0,
            FrameCategory::TwoVC => 1,
            FrameCategory::TwoHC => 2,
            FrameCategory::OneC => 3,
        }
    }

    /// Stable small integer for seeding.
    pub fn seed_index(self) -> u64 {
        self.index()
    }
}

impl fmt::Display for FrameCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FrameCategory {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "4c" => Ok(FrameCategory::FourC),
            "2vc" => Ok(FrameCategory::TwoVC),
            "2hc" => Ok(FrameCategory::TwoHC),
            "1c" => Ok(FrameCategory::OneC),
            other => Err(format!("unknown frame category `{other}` (expected 4c, 2vc, 2hc or 1c)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Positional tag of a group: ceiling/floor, left/right, or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tag {
    Whole,
    C,
    F,
    L,
    R,
    CL,
    CR,
    FL,
    FR,
}

impl Tag {
    fn suffix(self) -> &'static str {
        match self {
            Tag::Whole => "",
            Tag::C => "c",
            Tag::F => "f",
            Tag::L => "l",
            Tag::R => "r",
            Tag::CL => "cl",
            Tag::CR => "cr",
            Tag::FL => "fl",
            Tag::FR => "fr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupId {
    pub axis: Axis,
    pub tag: Tag,
}

impl GroupId {
    pub const fn new(axis: Axis, tag: Tag) -> Self {
        Self { axis, tag }
    }

    /// Short name such as `x_c`, `y` or `z_fl`.
    pub fn name(&self) -> String {
        let axis = match self.axis {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        };
        match self.tag {
            Tag::Whole => axis.to_string(),
            t => format!("{axis}_{}", t.suffix()),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for GroupId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (axis, tag) = s.split_once('_').unwrap_or((s, ""));
        let axis = match axis {
            "x" => Axis::X,
            "y" => Axis::Y,
            "z" => Axis::Z,
            _ => return Err(format!("unknown group `{s}`")),
        };
        let tag = match tag {
            "" => Tag::Whole,
            "c" => Tag::C,
            "f" => Tag::F,
            "l" => Tag::L,
            "r" => Tag::R,
            "cl" => Tag::CL,
            "cr" => Tag::CR,
            "fl" => Tag::FL,
            "fr" => Tag::FR,
            _ => return Err(format!("unknown group `{s}`")),
        };
        Ok(GroupId { axis, tag })
    }
}

/// Which endpoint of a supporter segment is the candidate supporting point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Upper,
    Lower,
    Left,
    Right,
}

impl Side {
    /// The designated endpoint, followed by the other one.
    pub fn split(self, s: &Segment) -> (Point2, Point2) {
        let (a, b) = (s.p, s.q);
        let a_first = match self {
            Side::Upper => (a.y, a.x) <= (b.y, b.x),
            Side::Lower => (a.y, a.x) >= (b.y, b.x),
            Side::Left => (a.x, a.y) <= (b.x, b.y),
            Side::Right => (a.x, a.y) >= (b.x, b.y),
        };
        if a_first {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn endpoint(self, s: &Segment) -> Point2 {
        self.split(s).0
    }

    fn flip_h(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            s => s,
        }
    }

    fn flip_v(self) -> Side {
        match self {
            Side::Upper => Side::Lower,
            Side::Lower => Side::Upper,
            s => s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Supporter {
    pub group: GroupId,
    pub side: Side,
}

/// For each candidate box-line group, the supporter groups and endpoint sides that vote for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub category: FrameCategory,
    pub entries: BTreeMap<GroupId, Vec<Supporter>>,
}

impl Correspondence {
    pub fn supporters(&self, g: GroupId) -> &[Supporter] {
        self.entries.get(&g).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The table with left/right (`h`) and/or upper/lower (`v`) endpoint sides swapped.
    pub fn mirrored(&self, h: bool, v: bool) -> Correspondence {
        let entries = self
            .entries
            .iter()
            .map(|(g, list)| {
                let list = list
                    .iter()
                    .map(|s| {
                        let mut side = s.side;
                        if h {
                            side = side.flip_h();
                        }
                        if v {
                            side = side.flip_v();
                        }
                        Supporter { group: s.group, side }
                    })
                    .collect();
                (*g, list)
            })
            .collect();
        Correspondence { category: self.category, entries }
    }
}

/// The canonical table: "4c" and "2vc" as seen from inside a room, "2hc" looking down at two
/// floor corners, "1c" looking at a floor corner right of the vertical line.
pub fn correspondence_table(cat: FrameCategory) -> Correspondence {
    use Axis::*;
    use Side::*;
    use Tag::*;
    let g = GroupId::new;
    let s = |group: GroupId, side: Side| Supporter { group, side };
    let rows: Vec<(GroupId, Vec<Supporter>)> = match cat {
        FrameCategory::FourC => vec![
            (g(X, C), vec![s(g(Z, CL), Lower), s(g(Z, CR), Lower), s(g(Y, L), Upper), s(g(Y, R), Upper)]),
            (g(X, F), vec![s(g(Z, FL), Upper), s(g(Z, FR), Upper), s(g(Y, L), Lower), s(g(Y, R), Lower)]),
            (g(Y, L), vec![s(g(Z, CL), Right), s(g(Z, FL), Right), s(g(X, C), Left), s(g(X, F), Left)]),
            (g(Y, R), vec![s(g(Z, CR), Left), s(g(Z, FR), Left), s(g(X, C), Right), s(g(X, F), Right)]),
            (g(Z, CL), vec![s(g(X, C), Left), s(g(Y, L), Upper)]),
            (g(Z, CR), vec![s(g(X, C), Right), s(g(Y, R), Upper)]),
            (g(Z, FL), vec![s(g(X, F), Left), s(g(Y, L), Lower)]),
            (g(Z, FR), vec![s(g(X, F), Right), s(g(Y, R), Lower)]),
        ],
        FrameCategory::TwoVC => vec![
            (g(X, C), vec![s(g(Z, C), Lower), s(g(Y, Whole), Upper)]),
            (g(X, F), vec![s(g(Z, F), Upper), s(g(Y, Whole), Lower)]),
            (g(Y, Whole), vec![s(g(X, C), Lower), s(g(X, F), Upper), s(g(Z, C), Lower), s(g(Z, F), Upper)]),
            (g(Z, C), vec![s(g(X, C), Lower), s(g(Y, Whole), Upper)]),
            (g(Z, F), vec![s(g(X, F), Upper), s(g(Y, Whole), Lower)]),
        ],
        FrameCategory::TwoHC => vec![
            (g(X, Whole), vec![s(g(Z, L), Upper), s(g(Z, R), Upper), s(g(Y, L), Lower), s(g(Y, R), Lower)]),
            (g(Y, L), vec![s(g(Z, L), Right), s(g(X, Whole), Left)]),
            (g(Y, R), vec![s(g(Z, R), Left), s(g(X, Whole), Right)]),
            (g(Z, L), vec![s(g(X, Whole), Left), s(g(Y, L), Lower)]),
            (g(Z, R), vec![s(g(X, Whole), Right), s(g(Y, R), Lower)]),
        ],
        FrameCategory::OneC => vec![
            (g(X, Whole), vec![s(g(Z, Whole), Upper), s(g(Y, Whole), Lower)]),
            (g(Y, Whole), vec![s(g(Z, Whole), Left), s(g(X, Whole), Right)]),
            (g(Z, Whole), vec![s(g(X, Whole), Right), s(g(Y, Whole), Lower)]),
        ],
    };
    Correspondence { category: cat, entries: rows.into_iter().collect() }
}

/// Mirroring needed to adapt the canonical table to the view implied by the vanishing points.
///
/// "2hc" and "1c" views looking up (image center above the horizon) swap upper and lower;
/// "1c" views whose center lies left of the vertical line swap left and right.
pub fn view_mirroring(cat: FrameCategory, t: &VanishingTriplet, bounds: &ImageBounds) -> (bool, bool) {
    let center = bounds.center();
    match cat {
        FrameCategory::FourC | FrameCategory::TwoVC => (false, false),
        FrameCategory::TwoHC => (false, t.l_xz().above(center) > 0.0),
        FrameCategory::OneC => (t.l_yz().left_of(center) > 0.0, t.l_xz().above(center) > 0.0),
    }
}

/// The correspondence table oriented for this view.
pub fn oriented_correspondence(cat: FrameCategory, t: &VanishingTriplet, bounds: &ImageBounds) -> Correspondence {
    let (h, v) = view_mirroring(cat, t, bounds);
    correspondence_table(cat).mirrored(h, v)
}

/// Segments assigned to the three vanishing directions.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedSets {
    pub x: Vec<Segment>,
    pub y: Vec<Segment>,
    pub z: Vec<Segment>,
    pub outliers: Vec<Segment>,
}

impl ClassifiedSets {
    pub fn set(&self, axis: Axis) -> &Vec<Segment> {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
            Axis::Z => &self.z,
        }
    }

    pub fn set_mut(&mut self, axis: Axis) -> &mut Vec<Segment> {
        match axis {
            Axis::X => &mut self.x,
            Axis::Y => &mut self.y,
            Axis::Z => &mut self.z,
        }
    }

    pub fn total(&self) -> usize {
        self.x.len() + self.y.len() + self.z.len() + self.outliers.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionedSegments {
    pub category: FrameCategory,
    pub subsets: BTreeMap<GroupId, Vec<Segment>>,
    pub outliers: Vec<Segment>,
}

impl PartitionedSegments {
    pub fn group(&self, g: GroupId) -> &[Segment] {
        self.subsets.get(&g).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Assign each segment to the vanishing direction it points at most closely, within `tau_class` degrees.
pub fn classify_segments(segments: &[Segment], t: &VanishingTriplet, tau_class: f64) -> ClassifiedSets {
    let mut out = ClassifiedSets::default();
    for s in segments {
        let mut best: Option<(Axis, f64)> = None;
        for axis in Axis::ALL {
            let Ok(angle) = angle_to_vp(s, t.vp(axis)) else { continue };
            if best.map_or(true, |(_, b)| angle < b) {
                best = Some((axis, angle));
            }
        }
        match best {
            Some((axis, angle)) if angle <= tau_class => out.set_mut(axis).push(*s),
            _ => out.outliers.push(*s),
        }
    }
    out
}

/// Split the direction sets into the category's groups by the side of `l_xz` and `l_yz`.
pub fn partition_subsets(sets: &ClassifiedSets, t: &VanishingTriplet, cat: FrameCategory) -> PartitionedSegments {
    let mut subsets: BTreeMap<GroupId, Vec<Segment>> = cat.groups().iter().map(|g| (*g, Vec::new())).collect();
    let mut outliers = sets.outliers.clone();
    let split_v = |s: &Segment| side_of(t.l_xz().above(s.midpoint()));
    let split_h = |s: &Segment| side_of(t.l_yz().left_of(s.midpoint()));
    for axis in Axis::ALL {
        for s in sets.set(axis) {
            let tag = match (cat, axis) {
                (FrameCategory::OneC, _) | (FrameCategory::TwoVC, Axis::Y) | (FrameCategory::TwoHC, Axis::X) => {
                    Some(Tag::Whole)
                }
                (FrameCategory::FourC | FrameCategory::TwoVC, Axis::X) => {
                    split_v(s).map(|up| if up { Tag::C } else { Tag::F })
                }
                (FrameCategory::FourC | FrameCategory::TwoHC, Axis::Y) => {
                    split_h(s).map(|left| if left { Tag::L } else { Tag::R })
                }
                (FrameCategory::TwoVC, Axis::Z) => split_v(s).map(|up| if up { Tag::C } else { Tag::F }),
                (FrameCategory::TwoHC, Axis::Z) => split_h(s).map(|left| if left { Tag::L } else { Tag::R }),
                (FrameCategory::FourC, Axis::Z) => match (split_v(s), split_h(s)) {
                    (Some(true), Some(true)) => Some(Tag::CL),
                    (Some(true), Some(false)) => Some(Tag::CR),
                    (Some(false), Some(true)) => Some(Tag::FL),
                    (Some(false), Some(false)) => Some(Tag::FR),
                    _ => None,
                },
            };
            match tag {
                Some(tag) => subsets.entry(GroupId::new(axis, tag)).or_default().push(*s),
                None => outliers.push(*s),
            }
        }
    }
    PartitionedSegments { category: cat, subsets, outliers }
}

fn side_of(offset: f64) -> Option<bool> {
    if offset > ON_AXIS_PX {
        Some(true)
    } else if offset < -ON_AXIS_PX {
        Some(false)
    } else {
        None
    }
}

/// The vanishing point a group converges to.
pub fn group_vp(t: &VanishingTriplet, g: GroupId) -> HPoint {
    t.vp(g.axis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SegmentId;

    fn triplet() -> VanishingTriplet {
        // A level camera: horizon y = 240, vertical line x = 320.
        VanishingTriplet::new(
            HPoint::finite(-400.0, 240.0),
            HPoint::at_infinity(0.0, 1.0),
            HPoint::finite(320.0, 240.0),
        )
        .unwrap()
    }

    fn seg(id: u32, x1: f64, y1: f64, x2: f64, y2: f64) -> Segment {
        Segment::new(Point2::new(x1, y1), Point2::new(x2, y2), SegmentId(id)).unwrap()
    }

    #[test]
    fn classify_by_nearest_vp() {
        let t = triplet();
        let sets = classify_segments(
            &[seg(0, 120.0, 140.0, 220.0, 190.0), seg(1, 50.0, 10.0, 50.0, 90.0), seg(2, 600.0, 100.0, 610.0, 110.0)],
            &t,
            8.0,
        );
        assert_eq!(sets.z.len(), 1);
        assert_eq!(sets.y.len(), 1);
        assert_eq!(sets.total(), 3);
        assert_eq!(sets.outliers.len(), 1);
    }

    #[test]
    fn tie_prefers_x() {
        let t = VanishingTriplet::new(
            HPoint::finite(100.0, 100.0),
            HPoint::finite(100.0, -100.0),
            HPoint::finite(-1000.0, 5000.0),
        )
        .unwrap();
        let sets = classify_segments(&[seg(0, -1.0, 0.0, 1.0, 0.0)], &t, 50.0);
        assert_eq!(sets.x.len(), 1);
    }

    #[test]
    fn far_off_segment_is_outlier() {
        let t = triplet();
        let sets = classify_segments(&[seg(0, 600.0, 400.0, 610.0, 390.0)], &t, 8.0);
        assert_eq!(sets.outliers.len(), 1);
    }

    #[test]
    fn partition_four_corner_groups() {
        let t = triplet();
        let sets = ClassifiedSets {
            x: vec![seg(0, 100.0, 100.0, 200.0, 128.0), seg(1, 100.0, 400.0, 200.0, 360.0)],
            y: vec![
                seg(2, 100.0, 10.0, 100.0, 90.0),
                seg(3, 500.0, 10.0, 500.0, 90.0),
                seg(4, 320.0, 0.0, 320.0, 10.0),
            ],
            z: vec![seg(5, 0.0, 0.0, 100.0, 60.0), seg(6, 640.0, 480.0, 600.0, 456.0)],
            outliers: vec![],
        };
        let p = partition_subsets(&sets, &t, FrameCategory::FourC);
        let ids = |g: &str| p.group(g.parse().unwrap()).iter().map(|s| s.id.0).collect::<Vec<_>>();
        assert_eq!(ids("x_c"), vec![0]);
        assert_eq!(ids("x_f"), vec![1]);
        assert_eq!(ids("y_l"), vec![2]);
        assert_eq!(ids("y_r"), vec![3]);
        assert_eq!(ids("z_cl"), vec![5]);
        assert_eq!(ids("z_fr"), vec![6]);
        assert_eq!(p.outliers.iter().map(|s| s.id.0).collect::<Vec<_>>(), vec![4]);
    }

    #[test]
    fn one_corner_keeps_sets() {
        let t = triplet();
        let sets = ClassifiedSets {
            x: vec![seg(0, 0.0, 0.0, 10.0, 0.0)],
            y: vec![seg(1, 0.0, 0.0, 0.0, 10.0)],
            z: vec![seg(2, 0.0, 0.0, 10.0, 10.0)],
            outliers: vec![],
        };
        let p = partition_subsets(&sets, &t, FrameCategory::OneC);
        assert_eq!(p.subsets.len(), 3);
        assert_eq!(p.group("x".parse().unwrap()), sets.x.as_slice());
        assert_eq!(p.group("y".parse().unwrap()), sets.y.as_slice());
        assert_eq!(p.group("z".parse().unwrap()), sets.z.as_slice());
    }

    #[test]
    fn table_closure() {
        for cat in FrameCategory::ALL {
            let c = correspondence_table(cat);
            assert_eq!(c.entries.len(), cat.groups().len());
            for g in cat.groups() {
                assert!(!c.supporters(*g).is_empty());
                let supports = c.entries.values().flatten().any(|s| s.group == *g);
                assert!(supports, "{g} never supports in {cat}");
            }
        }
        let four = correspondence_table(FrameCategory::FourC);
        let xc = four.supporters("x_c".parse().unwrap());
        assert_eq!(xc.len(), 4);
        assert_eq!(xc[0], Supporter { group: "z_cl".parse().unwrap(), side: Side::Lower });
    }

    #[test]
    fn mirrored_swaps_sides() {
        let one = correspondence_table(FrameCategory::OneC).mirrored(true, true);
        let x = one.supporters("x".parse().unwrap());
        assert_eq!(x[0].side, Side::Lower);
        let y = one.supporters("y".parse().unwrap());
        assert_eq!(y[0].side, Side::Right);
    }

    #[test]
    fn side_endpoints() {
        let s = seg(0, 10.0, 5.0, 0.0, 20.0);
        assert_eq!(Side::Upper.endpoint(&s), Point2::new(10.0, 5.0));
        assert_eq!(Side::Lower.endpoint(&s), Point2::new(0.0, 20.0));
        assert_eq!(Side::Left.endpoint(&s), Point2::new(0.0, 20.0));
        assert_eq!(Side::Right.endpoint(&s), Point2::new(10.0, 5.0));
    }

    #[test]
    fn group_names_round_trip() {
        for cat in FrameCategory::ALL {
            for g in cat.groups() {
                assert_eq!(g.name().parse::<GroupId>().unwrap(), *g);
            }
            assert_eq!(cat.as_str().parse::<FrameCategory>().unwrap(), cat);
        }
    }
}
