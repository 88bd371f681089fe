//! Projective-geometry primitives in image coordinates.
//!
//! Image coordinates are pixels with the origin at the top-left corner and
//! `y` growing downward. Points that may sit at infinity (vanishing points,
//! line intersections) use [`HPoint`]; everything measured on the image uses
//! [`Point2`].

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// Coefficient tolerance for treating two normalized lines as the same line.
const COINCIDENT_TOL: f64 = 1e-12;
/// Relative collinearity tolerance for [`cross_ratio_points`].
const COLLINEAR_TOL: f64 = 1e-6;
/// Algebraic incidence tolerance for pencil concurrency (unit-normalized apex).
const CONCURRENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn to_h(self) -> HPoint {
        HPoint::finite(self.x, self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.3}, {:.3})", self.x, self.y)
    }
}

/// A homogeneous image point `(x, y, w)`; `w = 0` is a point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

impl HPoint {
    pub const fn new(x: f64, y: f64, w: f64) -> Self {
        Self { x, y, w }
    }

    pub const fn finite(x: f64, y: f64) -> Self {
        Self { x, y, w: 1.0 }
    }

    /// The point at infinity in direction `(dx, dy)`.
    pub const fn at_infinity(dx: f64, dy: f64) -> Self {
        Self { x: dx, y: dy, w: 0.0 }
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.w]
    }

    fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.w * self.w).sqrt()
    }

    /// True when the point is at infinity (relative to its own scale).
    pub fn is_at_infinity(&self) -> bool {
        self.w.abs() <= 1e-12 * self.x.hypot(self.y)
    }

    /// Euclidean point, or `None` for points at infinity.
    pub fn to_point(&self) -> Option<Point2> {
        if self.is_at_infinity() {
            None
        } else {
            Some(Point2::new(self.x / self.w, self.y / self.w))
        }
    }

    /// Unit direction of a point at infinity.
    pub fn direction(&self) -> Point2 {
        let n = self.x.hypot(self.y);
        Point2::new(self.x / n, self.y / n)
    }

    /// Scaled to unit Euclidean norm as a 3-vector.
    pub fn unit(&self) -> [f64; 3] {
        let n = self.norm();
        [self.x / n, self.y / n, self.w / n]
    }

    /// Unit direction from `from` toward this point (its own direction when at infinity).
    pub fn direction_from(&self, from: Point2) -> Option<Point2> {
        let d = match self.to_point() {
            Some(p) => p - from,
            None => self.direction(),
        };
        let n = d.norm();
        if n < 1e-12 || !n.is_finite() {
            None
        } else {
            Some(d * (1.0 / n))
        }
    }
}

/// A line `a x + b y + c = 0`, stored with `a² + b² = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line2 {
    a: f64,
    b: f64,
    c: f64,
}

impl Line2 {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, GeometryError> {
        let n = a.hypot(b);
        if !(n > 0.0) || !c.is_finite() || !n.is_finite() {
            return Err(GeometryError::InvalidLine);
        }
        Ok(Self { a: a / n, b: b / n, c: c / n })
    }

    /// The line through two homogeneous points.
    pub fn through(p: HPoint, q: HPoint) -> Result<Self, GeometryError> {
        let [a, b, c] = cross3(p.coords(), q.coords());
        // Rescale before normalizing so far-away points keep precision.
        let s = a.abs().max(b.abs()).max(c.abs());
        if !(s > 0.0) {
            return Err(GeometryError::CoincidentPoints);
        }
        Line2::new(a / s, b / s, c / s).map_err(|_| GeometryError::CoincidentPoints)
    }

    pub fn from_points(p: Point2, q: Point2) -> Result<Self, GeometryError> {
        Self::through(p.to_h(), q.to_h())
    }

    /// The line through `p` with direction `dir`.
    pub fn from_point_dir(p: Point2, dir: Point2) -> Result<Self, GeometryError> {
        Line2::new(-dir.y, dir.x, dir.y * p.x - dir.x * p.y)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn coeffs(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    /// Signed perpendicular distance in pixels.
    pub fn signed_distance(&self, p: Point2) -> f64 {
        self.a * p.x + self.b * p.y + self.c
    }

    pub fn distance(&self, p: Point2) -> f64 {
        self.signed_distance(p).abs()
    }

    /// Unit direction vector along the line.
    pub fn direction(&self) -> Point2 {
        Point2::new(-self.b, self.a)
    }

    pub fn normal(&self) -> Point2 {
        Point2::new(self.a, self.b)
    }

    /// Foot of the perpendicular from `p`.
    pub fn project(&self, p: Point2) -> Point2 {
        let d = self.signed_distance(p);
        Point2::new(p.x - d * self.a, p.y - d * self.b)
    }

    /// Algebraic incidence `l · p̂` with `p̂` scaled to unit norm.
    pub fn incidence(&self, p: HPoint) -> f64 {
        let u = p.unit();
        self.a * u[0] + self.b * u[1] + self.c * u[2]
    }

    /// Signed offset that is positive above the line (smaller image `y`).
    pub fn above(&self, p: Point2) -> f64 {
        let s = if self.b > 0.0 { -1.0 } else { 1.0 };
        s * self.signed_distance(p)
    }

    /// Signed offset that is positive left of the line (smaller image `x`).
    pub fn left_of(&self, p: Point2) -> f64 {
        let s = if self.a > 0.0 { -1.0 } else { 1.0 };
        s * self.signed_distance(p)
    }

    fn same_as(&self, other: &Line2) -> bool {
        let s = if self.a * other.a + self.b * other.b >= 0.0 { 1.0 } else { -1.0 };
        let scale = 1.0f64.max(self.c.abs()).max(other.c.abs());
        (self.a - s * other.a).abs() <= COINCIDENT_TOL
            && (self.b - s * other.b).abs() <= COINCIDENT_TOL
            && (self.c - s * other.c).abs() <= COINCIDENT_TOL * scale
    }
}

fn cross3(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

/// Intersection of two lines; parallel lines meet at infinity.
pub fn intersect(a: &Line2, b: &Line2) -> Result<HPoint, GeometryError> {
    if a.same_as(b) {
        return Err(GeometryError::CoincidentLines);
    }
    let [x, y, w] = cross3(a.coeffs(), b.coeffs());
    Ok(HPoint::new(x, y, w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct SegmentId(pub u32);

impl fmt::Display for SegmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A finite image segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub p: Point2,
    pub q: Point2,
    pub id: SegmentId,
}

impl Segment {
    pub fn new(p: Point2, q: Point2, id: SegmentId) -> Result<Self, GeometryError> {
        if !p.is_finite() || !q.is_finite() || p == q {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Self { p, q, id })
    }

    pub fn length(&self) -> f64 {
        self.p.dist(self.q)
    }

    pub fn midpoint(&self) -> Point2 {
        Point2::new(0.5 * (self.p.x + self.q.x), 0.5 * (self.p.y + self.q.y))
    }

    /// Unit direction from `p` to `q`.
    pub fn direction(&self) -> Point2 {
        let d = self.q - self.p;
        d * (1.0 / d.norm())
    }

    pub fn line(&self) -> Line2 {
        // Endpoints are distinct and finite, so this cannot fail.
        Line2::from_points(self.p, self.q).expect("segment endpoints are distinct")
    }

    pub fn reversed(&self) -> Segment {
        Segment { p: self.q, q: self.p, id: self.id }
    }

    pub fn with_id(mut self, id: SegmentId) -> Segment {
        self.id = id;
        self
    }

    /// Position of the projection of `x` along the segment, `0` at `p`, `length` at `q`.
    pub fn param(&self, x: Point2) -> f64 {
        (x - self.p).dot(self.direction())
    }

    pub fn closest_point(&self, x: Point2) -> Point2 {
        let d = self.q - self.p;
        let t = (x - self.p).dot(d);
        if t <= 0.0 {
            self.p
        } else if t >= d.dot(d) {
            self.q
        } else {
            self.p + d * (t / d.dot(d))
        }
    }

    pub fn distance_to_point(&self, x: Point2) -> f64 {
        self.closest_point(x).dist(x)
    }

    /// Whether the closed segments share a point.
    pub fn intersects(&self, other: &Segment) -> bool {
        let d1 = orient(other.p, other.q, self.p);
        let d2 = orient(other.p, other.q, self.q);
        let d3 = orient(self.p, self.q, other.p);
        let d4 = orient(self.p, self.q, other.q);
        if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
            return true;
        }
        (d1 == 0.0 && on_box(other.p, other.q, self.p))
            || (d2 == 0.0 && on_box(other.p, other.q, self.q))
            || (d3 == 0.0 && on_box(self.p, self.q, other.p))
            || (d4 == 0.0 && on_box(self.p, self.q, other.q))
    }

    /// Minimum distance between the two closed segments.
    pub fn distance_to_segment(&self, other: &Segment) -> f64 {
        if self.intersects(other) {
            return 0.0;
        }
        self.distance_to_point(other.p)
            .min(self.distance_to_point(other.q))
            .min(other.distance_to_point(self.p))
            .min(other.distance_to_point(self.q))
    }

    /// Endpoint pair with the largest separation among the four endpoints of the two segments.
    pub fn farthest_pair(&self, other: &Segment) -> (Point2, Point2) {
        let pts = [self.p, self.q, other.p, other.q];
        let mut best = (pts[0], pts[1]);
        let mut best_d = -1.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let d = pts[i].dist(pts[j]);
                if d > best_d {
                    best_d = d;
                    best = (pts[i], pts[j]);
                }
            }
        }
        best
    }
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_box(a: Point2, b: Point2, c: Point2) -> bool {
    c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
}

/// Image rectangle `[0, width] × [0, height]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageBounds {
    pub width: f64,
    pub height: f64,
}

impl ImageBounds {
    pub fn new(width: f64, height: f64) -> Self {
        Self { width, height }
    }

    pub fn is_empty(&self) -> bool {
        !(self.width > 0.0 && self.height > 0.0)
    }

    pub fn diagonal(&self) -> f64 {
        self.width.hypot(self.height)
    }

    pub fn center(&self) -> Point2 {
        Point2::new(0.5 * self.width, 0.5 * self.height)
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= 0.0 && p.x <= self.width && p.y >= 0.0 && p.y <= self.height
    }

    /// Whether `p` lies at least `margin` pixels inside the border.
    pub fn contains_with_margin(&self, p: Point2, margin: f64) -> bool {
        p.x >= margin && p.x <= self.width - margin && p.y >= margin && p.y <= self.height - margin
    }

    /// Parameter interval `[t0, t1]` of `origin + t·dir` inside the rectangle (Liang–Barsky).
    pub fn clip_param(&self, origin: Point2, dir: Point2, mut t0: f64, mut t1: f64) -> Option<(f64, f64)> {
        let checks =
            [(-dir.x, origin.x), (dir.x, self.width - origin.x), (-dir.y, origin.y), (dir.y, self.height - origin.y)];
        for (p, q) in checks {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    t0 = t0.max(r);
                } else {
                    t1 = t1.min(r);
                }
            }
        }
        (t0 <= t1).then_some((t0, t1))
    }

    /// The part of a segment inside the rectangle.
    pub fn clip_segment(&self, s: &Segment) -> Option<Segment> {
        let d = s.q - s.p;
        let (t0, t1) = self.clip_param(s.p, d, 0.0, 1.0)?;
        Segment::new(s.p + d * t0, s.p + d * t1, s.id).ok()
    }

    /// The part of the ray from `vp` through `through` inside the rectangle; for a vanishing
    /// point at infinity the whole line is used.
    pub fn clip_ray(&self, vp: HPoint, through: Point2, id: SegmentId) -> Option<Segment> {
        let (origin, dir, t0) = match vp.to_point() {
            Some(v) => {
                let d = through - v;
                if d.norm() < 1e-12 {
                    return None;
                }
                (v, d * (1.0 / d.norm()), 0.0)
            }
            None => (through, vp.direction(), f64::NEG_INFINITY),
        };
        let (a, b) = self.clip_param(origin, dir, t0, f64::INFINITY)?;
        Segment::new(origin + dir * a, origin + dir * b, id).ok()
    }
}

/// Cross ratio `((t1−t3)(t2−t4)) / ((t2−t3)(t1−t4))` of four collinear points, with each `t`
/// the signed position along their common line.
pub fn cross_ratio_points(p1: Point2, p2: Point2, p3: Point2, p4: Point2) -> Result<f64, GeometryError> {
    let pts = [p1, p2, p3, p4];
    let mut best = (0, 1);
    let mut span = -1.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let d = pts[i].dist(pts[j]);
            if d > span {
                span = d;
                best = (i, j);
            }
        }
    }
    if !(span > 0.0) {
        return Err(GeometryError::DegeneratePencil);
    }
    let origin = pts[best.0];
    let dir = (pts[best.1] - origin) * (1.0 / span);
    let normal = Point2::new(-dir.y, dir.x);
    if pts.iter().any(|p| (*p - origin).dot(normal).abs() > COLLINEAR_TOL * span) {
        return Err(GeometryError::NonCollinear);
    }
    let t: Vec<f64> = pts.iter().map(|p| (*p - origin).dot(dir)).collect();
    cross_ratio_params([(t[0], 1.0), (t[1], 1.0), (t[2], 1.0), (t[3], 1.0)], span)
}

/// Cross ratio of four 1D homogeneous parameters `(t, s)` (position `t/s`).
fn cross_ratio_params(t: [(f64, f64); 4], scale: f64) -> Result<f64, GeometryError> {
    let det = |i: usize, j: usize| t[i].0 * t[j].1 - t[j].0 * t[i].1;
    let den = det(1, 2) * det(0, 3);
    let tol = 1e-12 * scale * scale;
    if det(1, 2).abs() <= 1e-12 * scale || det(0, 3).abs() <= 1e-12 * scale || den.abs() <= tol * 1e-12 {
        return Err(GeometryError::DegeneratePencil);
    }
    Ok(det(0, 2) * det(1, 3) / den)
}

/// Common point of a pencil, taken from its best-conditioned pair of lines.
pub fn pencil_apex(lines: &[Line2]) -> Result<HPoint, GeometryError> {
    let mut best: Option<([f64; 3], f64)> = None;
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let c = cross3(lines[i].coeffs(), lines[j].coeffs());
            let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
            if best.map_or(true, |(_, bn)| n > bn) {
                best = Some((c, n));
            }
        }
    }
    match best {
        Some((c, n)) if n > 0.0 => Ok(HPoint::new(c[0] / n, c[1] / n, c[2] / n)),
        _ => Err(GeometryError::NonConcurrentPencil),
    }
}

/// Cross ratio of four concurrent lines, evaluated on their intersections with `transversal`
/// in argument order.
pub fn pencil_cross_ratio(lines: [&Line2; 4], transversal: &Line2) -> Result<f64, GeometryError> {
    let owned = lines.map(|l| *l);
    let apex = pencil_apex(&owned)?;
    if owned.iter().any(|l| l.incidence(apex).abs() > CONCURRENT_TOL) {
        return Err(GeometryError::NonConcurrentPencil);
    }
    if transversal.incidence(apex).abs() <= CONCURRENT_TOL {
        return Err(GeometryError::TransversalThroughApex);
    }
    // Parametrize the transversal as origin + t·dir and solve l·(origin + t·dir) = 0 for t,
    // kept homogeneous so a member parallel to the transversal lands at t = ∞.
    let origin = transversal.project(Point2::new(0.0, 0.0));
    let dir = transversal.direction();
    let params = owned.map(|l| {
        let num = -(l.a() * origin.x + l.b() * origin.y + l.c());
        let den = l.a() * dir.x + l.b() * dir.y;
        (num, den)
    });
    let scale = params.iter().map(|(n, d)| n.abs().max(d.abs())).fold(0.0f64, f64::max);
    if !(scale > 0.0) {
        return Err(GeometryError::DegeneratePencil);
    }
    let normalized = params.map(|(n, d)| (n / scale, d / scale));
    cross_ratio_params(normalized, 1.0)
}

/// A transversal for `lines` through `center`, perpendicular to the bisector of the pencil's
/// extreme directions. Falls back to the vertical, then horizontal centerline when the
/// preferred line passes within a pixel of a finite apex, and finally to a perpendicular
/// offset half a diagonal away from the apex.
pub fn standard_transversal(lines: &[Line2], apex: HPoint, bounds: &ImageBounds) -> Line2 {
    let center = bounds.center();
    let mut angles: Vec<f64> = lines
        .iter()
        .map(|l| {
            let d = l.direction();
            d.y.atan2(d.x).rem_euclid(std::f64::consts::PI)
        })
        .collect();
    angles.sort_by(f64::total_cmp);
    // The pencil spans the half-circle minus its largest angular gap.
    let n = angles.len();
    let mut gap_start = n - 1;
    let mut largest = angles[0] + std::f64::consts::PI - angles[n - 1];
    for i in 0..n.saturating_sub(1) {
        let g = angles[i + 1] - angles[i];
        if g > largest {
            largest = g;
            gap_start = i;
        }
    }
    let first = angles[(gap_start + 1) % n];
    let spread = std::f64::consts::PI - largest;
    let bisector = first + 0.5 * spread;
    let normal = Point2::new(bisector.cos(), bisector.sin());
    let preferred = Line2::new(normal.x, normal.y, -normal.dot(center)).expect("unit normal");
    let Some(apex_pt) = apex.to_point() else {
        return preferred;
    };
    let clear = |l: &Line2| l.distance(apex_pt) > 1.0;
    if clear(&preferred) {
        return preferred;
    }
    let vertical = Line2::new(1.0, 0.0, -center.x).expect("unit normal");
    if clear(&vertical) {
        return vertical;
    }
    let horizontal = Line2::new(0.0, 1.0, -center.y).expect("unit normal");
    if clear(&horizontal) {
        return horizontal;
    }
    let offset = apex_pt + normal * (0.5 * bounds.diagonal());
    Line2::new(normal.x, normal.y, -normal.dot(offset)).expect("unit normal")
}

/// Sum normalization `x_i / Σ x`; uniform when every value is zero.
pub fn psi_normalize(values: &[f64]) -> Result<Vec<f64>, GeometryError> {
    if values.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(GeometryError::InvalidWeights);
    }
    let sum: f64 = values.iter().sum();
    if sum <= 0.0 {
        return Ok(vec![1.0 / values.len() as f64; values.len()]);
    }
    Ok(values.iter().map(|v| v / sum).collect())
}

/// Reverse normalization `(max − x_i) / Σ (max − x)`; uniform when every value is equal.
pub fn eta_normalize(values: &[f64]) -> Result<Vec<f64>, GeometryError> {
    if values.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(GeometryError::InvalidWeights);
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let diffs: Vec<f64> = values.iter().map(|v| max - v).collect();
    psi_normalize(&diffs)
}

/// Acute angle in degrees between two undirected directions.
pub fn acute_angle_deg(u: Point2, v: Point2) -> f64 {
    u.cross(v).abs().atan2(u.dot(v).abs()).to_degrees()
}

/// Angle in degrees (within `[0, 90]`) between a segment and the ray from its midpoint toward `vp`.
pub fn angle_to_vp(s: &Segment, vp: HPoint) -> Result<f64, GeometryError> {
    let toward = vp.direction_from(s.midpoint()).ok_or(GeometryError::VpAtMidpoint)?;
    Ok(acute_angle_deg(s.direction(), toward))
}

/// The line through `vp` and the midpoint of `s`.
pub fn vp_line(s: &Segment, vp: HPoint) -> Result<Line2, GeometryError> {
    Line2::through(vp, s.midpoint().to_h())
}
