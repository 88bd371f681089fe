//! Calibration from orthogonal vanishing points, back-projection and the depth score.
//!
//! The Manhattan frame has `y` pointing up, `z` pointing into the scene and `x = y × z`,
//! which appears toward the image left. The optic center is the origin and the camera
//! sits one unit above the floor plane `y = −1`.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::classify::{Axis, FrameCategory};
use crate::error::CameraError;
use crate::frames::Frame;
use crate::geometry::{HPoint, ImageBounds, Line2, Point2};

/// Rays with a smaller vertical component cannot meet a horizontal plane.
const PARALLEL_TOL: f64 = 1e-9;

/// The three Manhattan vanishing points and the lines joining them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingTriplet {
    vp_x: HPoint,
    vp_y: HPoint,
    vp_z: HPoint,
    l_xz: Line2,
    l_yz: Line2,
    l_xy: Line2,
}

impl VanishingTriplet {
    pub fn new(vp_x: HPoint, vp_y: HPoint, vp_z: HPoint) -> Result<Self, CameraError> {
        let vps = [vp_x, vp_y, vp_z];
        if vps.iter().any(|v| !v.coords().iter().all(|c| c.is_finite()) || v.unit().iter().all(|c| *c == 0.0)) {
            return Err(CameraError::CoincidentVps);
        }
        if vps.iter().filter(|v| v.is_at_infinity()).count() > 1 {
            return Err(CameraError::TooFewFiniteVps);
        }
        let join = |a: HPoint, b: HPoint| Line2::through(a, b).map_err(|_| CameraError::CoincidentVps);
        Ok(Self { vp_x, vp_y, vp_z, l_xz: join(vp_x, vp_z)?, l_yz: join(vp_y, vp_z)?, l_xy: join(vp_x, vp_y)? })
    }

    pub fn vp(&self, axis: Axis) -> HPoint {
        match axis {
            Axis::X => self.vp_x,
            Axis::Y => self.vp_y,
            Axis::Z => self.vp_z,
        }
    }

    pub fn vp_x(&self) -> HPoint {
        self.vp_x
    }
    pub fn vp_y(&self) -> HPoint {
        self.vp_y
    }
    pub fn vp_z(&self) -> HPoint {
        self.vp_z
    }

    /// The horizon, joining `vp_x` and `vp_z`.
    pub fn l_xz(&self) -> &Line2 {
        &self.l_xz
    }

    /// The vertical line, joining `vp_y` and `vp_z`.
    pub fn l_yz(&self) -> &Line2 {
        &self.l_yz
    }

    pub fn l_xy(&self) -> &Line2 {
        &self.l_xy
    }

    /// Same vanishing points with every image coordinate transformed by `x ↦ s·x + t`.
    pub fn scaled(&self, s: f64, t: Point2) -> Result<Self, CameraError> {
        let map = |v: HPoint| match v.to_point() {
            Some(p) => HPoint::finite(s * p.x + t.x, s * p.y + t.y),
            None => v,
        };
        Self::new(map(self.vp_x), map(self.vp_y), map(self.vp_z))
    }
}

/// A pinhole camera at the Manhattan origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    pub focal: f64,
    pub principal_point: Point2,
    /// Columns are the Manhattan axes in camera coordinates (x right, y down, z forward).
    pub rotation: Matrix3<f64>,
    pub optic_center: Vector3<f64>,
}

impl Camera {
    pub fn new(focal: f64, principal_point: Point2, rotation: Matrix3<f64>) -> Self {
        Self { focal, principal_point, rotation, optic_center: Vector3::zeros() }
    }

    /// Camera coordinates of a Manhattan-frame point.
    pub fn to_camera(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * (x - self.optic_center)
    }

    /// Pixel of a Manhattan-frame point; `None` behind the image plane.
    pub fn project(&self, x: &Vector3<f64>) -> Option<Point2> {
        let c = self.to_camera(x);
        (c.z > 0.0).then(|| self.pixel_of(&c))
    }

    /// Pixel of a camera-frame point with positive depth.
    pub fn pixel_of(&self, c: &Vector3<f64>) -> Point2 {
        Point2::new(self.principal_point.x + self.focal * c.x / c.z, self.principal_point.y + self.focal * c.y / c.z)
    }

    /// Homogeneous image of the direction `d` (Manhattan frame).
    pub fn vanishing_point(&self, d: &Vector3<f64>) -> HPoint {
        let c = self.rotation * d;
        let (px, py, f) = (self.principal_point.x, self.principal_point.y, self.focal);
        HPoint::new(f * c.x + px * c.z, f * c.y + py * c.z, c.z)
    }

    pub fn vanishing_points(&self) -> Result<VanishingTriplet, CameraError> {
        VanishingTriplet::new(
            self.vanishing_point(&Vector3::x()),
            self.vanishing_point(&Vector3::y()),
            self.vanishing_point(&Vector3::z()),
        )
    }

    /// Camera-frame direction of the ray through `p` (not normalized).
    fn ray_camera(&self, p: Point2) -> Vector3<f64> {
        Vector3::new((p.x - self.principal_point.x) / self.focal, (p.y - self.principal_point.y) / self.focal, 1.0)
    }
}

/// Unit ray through pixel `p`, in the Manhattan frame.
pub fn backproject(c: &Camera, p: Point2) -> Vector3<f64> {
    (c.rotation.transpose() * c.ray_camera(p)).normalize()
}

/// Calibrate focal length, principal point and rotation from three orthogonal vanishing points.
pub fn intrinsics_from_vps(t: &VanishingTriplet, bounds: &ImageBounds) -> Result<Camera, CameraError> {
    if bounds.is_empty() {
        return Err(CameraError::EmptyImage);
    }
    let finite: Vec<Point2> = Axis::ALL.iter().filter_map(|a| t.vp(*a).to_point()).collect();
    let (pp, f2) = match finite.as_slice() {
        [a, b, c] => {
            let pp = orthocenter(*a, *b, *c).ok_or(CameraError::NegativeFocalSquare)?;
            (pp, -(*a - pp).dot(*b - pp))
        }
        [a, b] => {
            let pp = bounds.center();
            (pp, -(*a - pp).dot(*b - pp))
        }
        _ => return Err(CameraError::TooFewFiniteVps),
    };
    if !(f2 > 0.0) || !f2.is_finite() {
        return Err(CameraError::NegativeFocalSquare);
    }
    let focal = f2.sqrt();
    let back = |v: HPoint| -> Vector3<f64> {
        let [x, y, w] = v.unit();
        Vector3::new((x - pp.x * w) / focal, (y - pp.y * w) / focal, w).normalize()
    };
    let mut rx = back(t.vp_x());
    let mut ry = back(t.vp_y());
    let mut rz = back(t.vp_z());
    if ry.y > 0.0 {
        ry = -ry;
    }
    if rz.z < 0.0 || (rz.z == 0.0 && rz.x < 0.0) {
        rz = -rz;
    }
    if rx.dot(&ry.cross(&rz)) < 0.0 {
        rx = -rx;
    }
    let m = Matrix3::from_columns(&[rx, ry, rz]);
    let svd = m.svd(true, true);
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(CameraError::NegativeFocalSquare);
    };
    let rotation = u * v_t;
    if rotation.determinant() < 0.0 {
        return Err(CameraError::NegativeFocalSquare);
    }
    Ok(Camera::new(focal, pp, rotation))
}

fn orthocenter(a: Point2, b: Point2, c: Point2) -> Option<Point2> {
    // (h − a)·(b − c) = 0 and (h − b)·(a − c) = 0, solved relative to c for conditioning.
    let u = b - c;
    let v = a - c;
    let (a0, b0) = (a - c, b - c);
    let r1 = a0.dot(u);
    let r2 = b0.dot(v);
    let det = u.x * v.y - u.y * v.x;
    let scale = u.norm() * v.norm();
    if det.abs() <= 1e-12 * scale {
        return None;
    }
    let hx = (r1 * v.y - u.y * r2) / det;
    let hy = (u.x * r2 - r1 * v.x) / det;
    Some(Point2::new(hx + c.x, hy + c.y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CornerLabel {
    A,
    B,
    C,
    D,
}

impl CornerLabel {
    pub const ALL: [CornerLabel; 4] = [CornerLabel::A, CornerLabel::B, CornerLabel::C, CornerLabel::D];
}

/// A frame corner lifted to the Manhattan frame, in camera-height units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corner3 {
    pub position: Vector3<f64>,
    pub source_corner: CornerLabel,
}

/// Lift the frame corners to 3D with the floor at `y = −1`.
pub fn reconstruct_corners(f: &Frame, c: &Camera) -> Result<Vec<Corner3>, CameraError> {
    let rays: Vec<Vector3<f64>> = f.corners.iter().map(|p| backproject(c, *p)).collect();
    let on_plane = |d: &Vector3<f64>, height: f64| -> Result<Vector3<f64>, CameraError> {
        if d.y.abs() < PARALLEL_TOL {
            return Err(CameraError::RayParallelToPlane);
        }
        let t = height / d.y;
        if t <= 0.0 {
            return Err(CameraError::CornerBehindCamera);
        }
        Ok(d * t)
    };
    let above_floor = |d: &Vector3<f64>, floor: &Vector3<f64>| -> Result<Vector3<f64>, CameraError> {
        let h2 = d.x * d.x + d.z * d.z;
        if h2 < PARALLEL_TOL * PARALLEL_TOL {
            return Err(CameraError::RayParallelToPlane);
        }
        let t = (d.x * floor.x + d.z * floor.z) / h2;
        if t <= 0.0 {
            return Err(CameraError::CornerBehindCamera);
        }
        Ok(Vector3::new(floor.x, t * d.y, floor.z))
    };
    let side_plane = |d: &Vector3<f64>| -> Result<Vector3<f64>, CameraError> {
        if d.y.abs() < PARALLEL_TOL {
            return Err(CameraError::RayParallelToPlane);
        }
        on_plane(d, d.y.signum())
    };
    let expected = f.category.corner_count();
    if rays.len() != expected {
        return Err(CameraError::Geometry(crate::error::GeometryError::EmptyInput));
    }
    let positions: Vec<Vector3<f64>> = match f.category {
        FrameCategory::FourC => {
            let d = on_plane(&rays[3], -1.0)?;
            let cc = on_plane(&rays[2], -1.0)?;
            let a = above_floor(&rays[0], &d)?;
            let b = above_floor(&rays[1], &cc)?;
            vec![a, b, cc, d]
        }
        FrameCategory::TwoVC => {
            let b = on_plane(&rays[1], -1.0)?;
            let a = above_floor(&rays[0], &b)?;
            vec![a, b]
        }
        FrameCategory::TwoHC | FrameCategory::OneC => rays.iter().map(side_plane).collect::<Result<_, _>>()?,
    };
    Ok(positions
        .into_iter()
        .zip(CornerLabel::ALL)
        .map(|(position, source_corner)| Corner3 { position, source_corner })
        .collect())
}

/// Sum of distances from the optic center to the reconstructed corners.
pub fn depth_score(f: &Frame, c: &Camera) -> Result<f64, CameraError> {
    Ok(reconstruct_corners(f, c)?.iter().map(|k| (k.position - c.optic_center).norm()).sum())
}
