//! Pinhole camera model, rigid motions and the re-centering translation used
//! when synthesizing a new focal length.
//!
//! Conventions: camera frame with Z along the optical axis, X to the right and
//! Y down the image. Rotations are right-handed about the camera axes. A
//! [`RigidMotion`] maps a point `p` to `R (p - t)`.

use nalgebra::{Matrix3, Point3, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Rgb, RgbdFrame};

const ORTHONORMAL_TOL: f64 = 1e-12;

/// Pinhole intrinsics: focal length and principal point in pixels plus the
/// raster size they apply to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Intrinsics {
    pub f: f64,
    pub u0: f64,
    pub v0: f64,
    pub width: usize,
    pub height: usize,
}

impl Intrinsics {
    pub fn new(f: f64, u0: f64, v0: f64, width: usize, height: usize) -> Result<Self> {
        if !(f.is_finite() && f > 0.0) {
            return Err(Error::Input(format!("focal length must be positive, got {f}")));
        }
        if !(u0.is_finite() && v0.is_finite()) {
            return Err(Error::Input("principal point must be finite".into()));
        }
        if width == 0 || height == 0 {
            return Err(Error::Input(format!("image size must be positive, got {width}x{height}")));
        }
        Ok(Self { f, u0, v0, width, height })
    }

    /// Principal point at `(width / 2, height / 2)`.
    pub fn centered(f: f64, width: usize, height: usize) -> Result<Self> {
        Self::new(f, width as f64 / 2.0, height as f64 / 2.0, width, height)
    }

    /// Same principal point and raster, different focal length.
    pub fn with_focal(&self, f: f64) -> Result<Self> {
        Self::new(f, self.u0, self.v0, self.width, self.height)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }
}

/// Continuous image location of a projected point together with its depth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projection {
    pub u: f64,
    pub v: f64,
    pub depth: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn unit(self) -> Unit<Vector3<f64>> {
        match self {
            Axis::X => Vector3::x_axis(),
            Axis::Y => Vector3::y_axis(),
            Axis::Z => Vector3::z_axis(),
        }
    }
}

/// Rotation `R` and translation `t` applied as `p' = R (p - t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidMotion {
    rotation: Matrix3<f64>,
    translation: Vector3<f64>,
}

impl RigidMotion {
    /// Fails unless `R` is orthonormal with determinant +1 (to 1e-12).
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        if rotation.iter().chain(translation.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Input("rigid motion has non-finite entries".into()));
        }
        let gram = rotation.transpose() * rotation - Matrix3::identity();
        if gram.iter().any(|v| v.abs() > ORTHONORMAL_TOL) {
            return Err(Error::Input("rotation matrix is not orthonormal".into()));
        }
        if (rotation.determinant() - 1.0).abs() > ORTHONORMAL_TOL {
            return Err(Error::Input("rotation matrix has determinant != +1".into()));
        }
        Ok(Self { rotation, translation })
    }

    pub fn identity() -> Self {
        Self { rotation: Matrix3::identity(), translation: Vector3::zeros() }
    }

    pub fn translation_only(translation: Vector3<f64>) -> Result<Self> {
        Self::new(Matrix3::identity(), translation)
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.translation
    }

    /// The motion undoing `self`: `p = Rᵀ p' + t = Rᵀ (p' - (-R t))`.
    pub fn inverse(&self) -> Self {
        Self {
            rotation: self.rotation.transpose(),
            translation: -(self.rotation * self.translation),
        }
    }

    pub fn apply(&self, p: &Point3<f64>) -> Point3<f64> {
        Point3::from(self.rotation * (p.coords - self.translation))
    }
}

/// Right-handed rotation by `angle` radians about a camera axis.
pub fn rotation_about_axis(axis: Axis, angle: f64) -> Result<Matrix3<f64>> {
    if !angle.is_finite() {
        return Err(Error::Input(format!("rotation angle must be finite, got {angle}")));
    }
    Ok(Rotation3::from_axis_angle(&axis.unit(), angle).into_inner())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColoredPoint {
    pub position: Point3<f64>,
    pub color: Rgb,
    /// `(u, v)` of the pixel the point was lifted from.
    pub source_pixel: (u32, u32),
}

/// Points in source-scan order (row-major over the originating frame).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ColoredPointCloud {
    pub points: Vec<ColoredPoint>,
}

impl ColoredPointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ColoredPoint> {
        self.points.iter()
    }
}

impl FromIterator<ColoredPoint> for ColoredPointCloud {
    fn from_iter<I: IntoIterator<Item = ColoredPoint>>(iter: I) -> Self {
        Self { points: iter.into_iter().collect() }
    }
}

/// Lift every valid depth pixel to a camera-frame point:
/// `X = (u - u0) Z / f`, `Y = (v - v0) Z / f`.
pub fn backproject(frame: &RgbdFrame, k: &Intrinsics) -> Result<ColoredPointCloud> {
    if frame.dims() != k.dims() {
        return Err(Error::DimensionMismatch { expected: k.dims(), actual: frame.dims() });
    }
    let mut points = Vec::with_capacity(frame.valid_count());
    for v in 0..frame.height {
        for u in 0..frame.width {
            let idx = frame.index(u, v);
            if !frame.is_valid(idx) {
                continue;
            }
            let z = frame.depth[idx];
            points.push(ColoredPoint {
                position: Point3::new(
                    (u as f64 - k.u0) * z / k.f,
                    (v as f64 - k.v0) * z / k.f,
                    z,
                ),
                color: frame.color[idx],
                source_pixel: (u as u32, v as u32),
            });
        }
    }
    Ok(ColoredPointCloud { points })
}

/// `u = f X / Z + u0`, `v = f Y / Z + v0`.
pub fn project(p: &Point3<f64>, k: &Intrinsics) -> Result<Projection> {
    if p.z.is_nan() || p.z <= 0.0 {
        return Err(Error::BehindCamera(p.z));
    }
    Ok(Projection { u: k.f * p.x / p.z + k.u0, v: k.f * p.y / p.z + k.v0, depth: p.z })
}

pub fn apply_motion(cloud: &ColoredPointCloud, m: &RigidMotion) -> ColoredPointCloud {
    cloud
        .iter()
        .map(|cp| ColoredPoint { position: m.apply(&cp.position), ..*cp })
        .collect()
}

/// Axis the synthetic camera is turned about while re-centering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecenterAxis {
    X,
    Y,
}

impl From<RecenterAxis> for Axis {
    fn from(a: RecenterAxis) -> Self {
        match a {
            RecenterAxis::X => Axis::X,
            RecenterAxis::Y => Axis::Y,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecenteringSpec {
    pub axis: RecenterAxis,
    /// Camera rotation in radians; must satisfy `|angle| < π/2`.
    pub angle: f64,
    /// Target focal length in pixels.
    pub f_new: f64,
}

impl RecenteringSpec {
    pub fn new(axis: RecenterAxis, angle: f64, f_new: f64) -> Result<Self> {
        if !angle.is_finite() || angle.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::Input(format!("recentering angle must lie in (-pi/2, pi/2), got {angle}")));
        }
        if !(f_new.is_finite() && f_new > 0.0) {
            return Err(Error::Input(format!("new focal length must be positive, got {f_new}")));
        }
        Ok(Self { axis, angle, f_new })
    }

    /// Pure focal change, no rotation.
    pub fn focal_only(f_new: f64) -> Result<Self> {
        Self::new(RecenterAxis::Y, 0.0, f_new)
    }
}

/// Camera translation `(Cx, Cy, Cz)` that keeps the image centered after
/// turning the camera by `spec.angle` and switching to `spec.f_new`.
///
/// Each component's per-point expression is averaged over the cloud. For a
/// turn about y by β:
///
/// ```text
/// Cy = 0
/// Cx = mean(X - (X + Z sinβ) / cosβ)
/// Cz = mean(Z - f'Z / (f cosβ) + (X - Cx) tanβ)
/// ```
///
/// and symmetrically about x by α with `Y - Z sinα` and `- (Y - Cy) tanα`.
/// `Cz` uses the already averaged lateral component.
pub fn recentering_translation(
    cloud: &ColoredPointCloud,
    k: &Intrinsics,
    spec: &RecenteringSpec,
) -> Result<Vector3<f64>> {
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if spec.angle.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Input(format!("recentering angle must lie in (-pi/2, pi/2), got {}", spec.angle)));
    }
    let n = cloud.len() as f64;
    let (sin, cos) = spec.angle.sin_cos();
    let tan = spec.angle.tan();
    let zoom = spec.f_new / (k.f * cos);

    match spec.axis {
        RecenterAxis::Y => {
            let cx = cloud
                .iter()
                .map(|p| p.position.x - (p.position.x + p.position.z * sin) / cos)
                .sum::<f64>()
                / n;
            let cz = cloud
                .iter()
                .map(|p| p.position.z - zoom * p.position.z + (p.position.x - cx) * tan)
                .sum::<f64>()
                / n;
            Ok(Vector3::new(cx, 0.0, cz))
        }
        RecenterAxis::X => {
            let cy = cloud
                .iter()
                .map(|p| p.position.y - (p.position.y - p.position.z * sin) / cos)
                .sum::<f64>()
                / n;
            let cz = cloud
                .iter()
                .map(|p| p.position.z - zoom * p.position.z - (p.position.y - cy) * tan)
                .sum::<f64>()
                / n;
            Ok(Vector3::new(0.0, cy, cz))
        }
    }
}

/// Full re-centering motion: the camera turns by `+angle` about the axis and
/// moves to the re-centering translation, so points map through
/// `Rᵀ (p - C)` where `R` is the right-handed rotation by `angle`.
pub fn recentering_motion(
    cloud: &ColoredPointCloud,
    k: &Intrinsics,
    spec: &RecenteringSpec,
) -> Result<RigidMotion> {
    let t = recentering_translation(cloud, k, spec)?;
    let r = rotation_about_axis(spec.axis.into(), spec.angle)?.transpose();
    RigidMotion::new(r, t)
}
