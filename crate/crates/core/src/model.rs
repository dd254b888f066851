//! Shared domain types: asset requests, rigid transforms, support relations,
//! and axis-aligned bounding boxes.
//!
//! Conventions used throughout the crate:
//!
//! - Object-local frame: `+x` = width (right), `+y` = depth (back), `-y` =
//!   the front face, `+z` = up. Joint-axis inference and wall alignment
//!   depend on this.
//! - Units are SI meters and kilograms everywhere; files carry no unit
//!   annotations.
//! - Rotations are stored as 3x3 matrices in memory and serialized as unit
//!   quaternions in `(x, y, z, w)` order.

use nalgebra::{Matrix3, Quaternion, Rotation3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 3-vector of f64, the workhorse linear-algebra type of the crate.
pub type Vec3 = Vector3<f64>;

/// Tolerance for rotation orthonormality checks (entries of `R*R^T - I`).
pub const ROTATION_TOL: f64 = 1e-9;

/// Valid range for requested object dimensions, meters.
pub const DIM_RANGE: (f64, f64) = (0.001, 20.0);

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),
    #[error("rotation is not orthonormal with det +1 (max deviation {max_dev:.3e})")]
    InvalidRotation { max_dev: f64 },
    #[error("target dims {dims:?} outside [{}, {}] m", DIM_RANGE.0, DIM_RANGE.1)]
    DimsOutOfRange { dims: [f64; 3] },
    #[error("request id must be non-empty")]
    EmptyId,
    #[error("support parent_id must be present exactly when kind = object")]
    SupportParentMismatch,
}

// ---------------------------------------------------------------------------
// Rigid transforms
// ---------------------------------------------------------------------------

/// A rigid (SE(3)) transform: rotation followed by translation.
///
/// Serialized as `{ "rotation": [x, y, z, w], "translation": [x, y, z] }`
/// with the rotation encoded as a unit quaternion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    pub rotation: Matrix3<f64>,
    pub translation: Vec3,
}

#[derive(Serialize, Deserialize)]
struct RigidTransformRepr {
    rotation: [f64; 4],
    translation: [f64; 3],
}

impl Serialize for RigidTransform {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let q = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(
            self.rotation,
        ));
        let c = q.coords; // (x, y, z, w)
        RigidTransformRepr {
            rotation: [c.x, c.y, c.z, c.w],
            translation: [self.translation.x, self.translation.y, self.translation.z],
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RigidTransform {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = RigidTransformRepr::deserialize(de)?;
        let [x, y, z, w] = repr.rotation;
        let q = UnitQuaternion::from_quaternion(Quaternion::new(w, x, y, z));
        Ok(RigidTransform {
            rotation: q.to_rotation_matrix().into_inner(),
            translation: Vec3::new(repr.translation[0], repr.translation[1], repr.translation[2]),
        })
    }
}

impl Default for RigidTransform {
    fn default() -> Self {
        Self::identity()
    }
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn from_translation(t: Vec3) -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: t,
        }
    }

    pub fn from_rotation(rotation: Matrix3<f64>) -> Self {
        Self {
            rotation,
            translation: Vec3::zeros(),
        }
    }

    /// Rotation by `angle` radians about an arbitrary axis through `pivot`.
    pub fn rotation_about(pivot: Vec3, axis: Vec3, angle: f64) -> Self {
        let rot = Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle)
            .into_inner();
        Self {
            rotation: rot,
            translation: pivot - rot * pivot,
        }
    }

    pub fn apply_point(&self, p: Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    pub fn apply_vector(&self, v: Vec3) -> Vec3 {
        self.rotation * v
    }

    /// `self ∘ other`: applying the result to a point equals
    /// `self(other(p))`.
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    /// Maximum absolute entry of `R*R^T - I`, plus the determinant deviation.
    pub fn rotation_deviation(&self) -> f64 {
        let err = self.rotation * self.rotation.transpose() - Matrix3::identity();
        let max_entry = err.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
        let det_dev = (self.rotation.determinant() - 1.0).abs();
        max_entry.max(det_dev)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.translation.iter().all(|c| c.is_finite())
            || !self.rotation.iter().all(|c| c.is_finite())
        {
            return Err(ModelError::NonFinite("rigid transform"));
        }
        let dev = self.rotation_deviation();
        if dev > ROTATION_TOL {
            return Err(ModelError::InvalidRotation { max_dev: dev });
        }
        Ok(())
    }
}

/// Composition of two rigid transforms; `(a ∘ b)(p) = a(b(p))`.
pub fn se3_compose(a: &RigidTransform, b: &RigidTransform) -> RigidTransform {
    a.compose(b)
}

// ---------------------------------------------------------------------------
// Support relations
// ---------------------------------------------------------------------------

/// Surface kind an object rests against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportKind {
    Ground,
    Object,
    Wall,
    Ceiling,
}

/// Declared support of one object: the surface kind, and for
/// object-on-object support the id of the supporting object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportRelation {
    pub kind: SupportKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
}

impl SupportRelation {
    pub fn ground() -> Self {
        Self {
            kind: SupportKind::Ground,
            parent_id: None,
        }
    }

    pub fn wall() -> Self {
        Self {
            kind: SupportKind::Wall,
            parent_id: None,
        }
    }

    pub fn ceiling() -> Self {
        Self {
            kind: SupportKind::Ceiling,
            parent_id: None,
        }
    }

    pub fn on_object(parent_id: impl Into<String>) -> Self {
        Self {
            kind: SupportKind::Object,
            parent_id: Some(parent_id.into()),
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match (self.kind, &self.parent_id) {
            (SupportKind::Object, Some(_)) => Ok(()),
            (SupportKind::Object, None) => Err(ModelError::SupportParentMismatch),
            (_, Some(_)) => Err(ModelError::SupportParentMismatch),
            (_, None) => Ok(()),
        }
    }
}

// ---------------------------------------------------------------------------
// Axis-aligned bounding boxes
// ---------------------------------------------------------------------------

/// Axis-aligned bounding box; `min <= max` component-wise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        Self { min, max }
    }

    /// Tightest box containing all points. Errors on an empty or non-finite
    /// input.
    pub fn from_points<I>(points: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = Vec3>,
    {
        let mut it = points.into_iter();
        let first = it.next().ok_or(ModelError::EmptyInput("aabb_of_points"))?;
        if !first.iter().all(|c| c.is_finite()) {
            return Err(ModelError::NonFinite("aabb_of_points"));
        }
        let mut min = first;
        let mut max = first;
        for p in it {
            if !p.iter().all(|c| c.is_finite()) {
                return Err(ModelError::NonFinite("aabb_of_points"));
            }
            min = min.inf(&p);
            max = max.sup(&p);
        }
        Ok(Self { min, max })
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn extents(&self) -> Vec3 {
        self.max - self.min
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: self.min.inf(&other.min),
            max: self.max.sup(&other.max),
        }
    }

    /// Grow (or shrink, for negative `d`) every face outward by `d`.
    pub fn inflate(&self, d: f64) -> Aabb {
        let v = Vec3::new(d, d, d);
        Aabb {
            min: self.min - v,
            max: self.max + v,
        }
    }

    pub fn contains_point(&self, p: Vec3) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    pub fn intersects(&self, other: &Aabb) -> bool {
        (0..3).all(|i| self.min[i] <= other.max[i] && self.max[i] >= other.min[i])
    }

    /// Overlap extents per axis when the boxes intersect; `None` otherwise.
    pub fn overlap(&self, other: &Aabb) -> Option<Vec3> {
        let mut o = Vec3::zeros();
        for i in 0..3 {
            let lo = self.min[i].max(other.min[i]);
            let hi = self.max[i].min(other.max[i]);
            if hi < lo {
                return None;
            }
            o[i] = hi - lo;
        }
        Some(o)
    }

    /// Transform the box by a rigid transform and re-wrap the 8 corners.
    pub fn transformed(&self, t: &RigidTransform) -> Aabb {
        let corners = self.corners();
        Aabb::from_points(corners.iter().map(|c| t.apply_point(*c)))
            .expect("8 corners are never empty")
    }

    pub fn corners(&self) -> [Vec3; 8] {
        let (a, b) = (self.min, self.max);
        [
            Vec3::new(a.x, a.y, a.z),
            Vec3::new(b.x, a.y, a.z),
            Vec3::new(a.x, b.y, a.z),
            Vec3::new(b.x, b.y, a.z),
            Vec3::new(a.x, a.y, b.z),
            Vec3::new(b.x, a.y, b.z),
            Vec3::new(a.x, b.y, b.z),
            Vec3::new(b.x, b.y, b.z),
        ]
    }
}

/// Spec-level alias for [`Aabb::from_points`].
pub fn aabb_of_points(points: &[Vec3]) -> Result<Aabb, ModelError> {
    Aabb::from_points(points.iter().copied())
}

// ---------------------------------------------------------------------------
// Asset requests
// ---------------------------------------------------------------------------

/// The room-level contract for one object: what to build, how large, where
/// it goes, and what it rests against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetRequest {
    /// Unique id within one house registry.
    pub id: String,
    /// Object category, resolved against the ontology by the router.
    pub category: String,
    /// Free-text description; scanned for articulation keywords.
    #[serde(default)]
    pub description: String,
    /// Target dimensions (width, depth, height) in object-local x, y, z.
    pub target_dims: [f64; 3],
    /// Style context, carried into material selection.
    #[serde(default)]
    pub style: String,
    /// Planned world placement.
    #[serde(default)]
    pub placement: RigidTransform,
    /// Declared support relation.
    pub support: SupportRelation,
}

impl AssetRequest {
    pub fn dims(&self) -> Vec3 {
        Vec3::new(self.target_dims[0], self.target_dims[1], self.target_dims[2])
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.id.is_empty() {
            return Err(ModelError::EmptyId);
        }
        let d = self.dims();
        if !d.iter().all(|c| c.is_finite()) {
            return Err(ModelError::NonFinite("target_dims"));
        }
        if d.iter().any(|&c| c < DIM_RANGE.0 || c > DIM_RANGE.1) {
            return Err(ModelError::DimsOutOfRange {
                dims: self.target_dims,
            });
        }
        self.placement.validate()?;
        self.support.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::Matrix4;
    use proptest::prelude::*;

    fn rot_xyz(a: f64, b: f64, c: f64) -> Matrix3<f64> {
        Rotation3::from_euler_angles(a, b, c).into_inner()
    }

    #[test]
    fn compose_identity_is_identity() {
        let t = RigidTransform {
            rotation: rot_xyz(0.3, -0.2, 1.1),
            translation: Vec3::new(1.0, 2.0, 3.0),
        };
        let got = se3_compose(&RigidTransform::identity(), &t);
        assert_abs_diff_eq!(got.rotation, t.rotation, epsilon = 1e-12);
        assert_abs_diff_eq!(got.translation, t.translation, epsilon = 1e-12);
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let t = RigidTransform {
            rotation: rot_xyz(0.5, 0.7, -0.4),
            translation: Vec3::new(-2.0, 0.5, 4.0),
        };
        let got = se3_compose(&t, &t.inverse());
        assert_abs_diff_eq!(got.rotation, Matrix3::identity(), epsilon = 1e-9);
        assert_abs_diff_eq!(got.translation, Vec3::zeros(), epsilon = 1e-9);
    }

    /// Oracle: composition must equal the 4x4 homogeneous matrix product.
    fn homogeneous(t: &RigidTransform) -> Matrix4<f64> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&t.rotation);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&t.translation);
        m
    }

    #[test]
    fn compose_matches_homogeneous_matrix_oracle() {
        let a = RigidTransform {
            rotation: rot_xyz(0.2, 0.9, -1.3),
            translation: Vec3::new(0.4, -1.1, 2.2),
        };
        let b = RigidTransform {
            rotation: rot_xyz(-0.8, 0.1, 0.6),
            translation: Vec3::new(3.0, 0.2, -0.7),
        };
        let got = homogeneous(&se3_compose(&a, &b));
        let want = homogeneous(&a) * homogeneous(&b);
        assert_abs_diff_eq!(got, want, epsilon = 1e-12);
    }

    #[test]
    fn aabb_of_two_corners() {
        let b = aabb_of_points(&[Vec3::zeros(), Vec3::new(1.0, 1.0, 1.0)]).unwrap();
        assert_eq!(b.min, Vec3::zeros());
        assert_eq!(b.max, Vec3::new(1.0, 1.0, 1.0));
    }

    #[test]
    fn aabb_single_point_degenerate() {
        let p = Vec3::new(0.3, -0.4, 2.0);
        let b = aabb_of_points(&[p]).unwrap();
        assert_eq!(b.min, p);
        assert_eq!(b.max, p);
    }

    #[test]
    fn aabb_empty_input_errors() {
        assert_eq!(
            aabb_of_points(&[]).unwrap_err(),
            ModelError::EmptyInput("aabb_of_points")
        );
    }

    #[test]
    fn aabb_tightness_on_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Vec3> = (0..1000)
            .map(|_| {
                Vec3::new(
                    rng.random_range(-5.0..5.0),
                    rng.random_range(-5.0..5.0),
                    rng.random_range(-5.0..5.0),
                )
            })
            .collect();
        let b = aabb_of_points(&pts).unwrap();
        for p in &pts {
            assert!(b.contains_point(*p));
        }
        // Shrinking any face by epsilon must exclude at least one point.
        let eps = 1e-9;
        for axis in 0..3 {
            for side in 0..2 {
                let mut shrunk = b;
                if side == 0 {
                    shrunk.min[axis] += eps;
                } else {
                    shrunk.max[axis] -= eps;
                }
                assert!(
                    pts.iter().any(|p| !shrunk.contains_point(*p)),
                    "axis {axis} side {side} was not tight"
                );
            }
        }
    }

    #[test]
    fn support_parent_iff_object() {
        assert!(SupportRelation::ground().validate().is_ok());
        assert!(SupportRelation::on_object("table_1").validate().is_ok());
        let bad = SupportRelation {
            kind: SupportKind::Object,
            parent_id: None,
        };
        assert!(bad.validate().is_err());
        let bad2 = SupportRelation {
            kind: SupportKind::Ground,
            parent_id: Some("x".into()),
        };
        assert!(bad2.validate().is_err());
    }

    #[test]
    fn transform_serde_uses_quaternion_xyzw() {
        let t = RigidTransform::rotation_about(Vec3::zeros(), Vec3::z(), std::f64::consts::PI / 2.0);
        let json = serde_json::to_value(&t).unwrap();
        let q = json["rotation"].as_array().unwrap();
        // 90 degrees about z: (x, y, z, w) = (0, 0, sin45, cos45).
        assert_abs_diff_eq!(q[0].as_f64().unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q[1].as_f64().unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            q[2].as_f64().unwrap(),
            (std::f64::consts::PI / 4.0).sin(),
            epsilon = 1e-12
        );
        let back: RigidTransform = serde_json::from_value(json).unwrap();
        assert_abs_diff_eq!(back.rotation, t.rotation, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn transforms_preserve_pairwise_distance(
            ea in -3.0..3.0f64, eb in -1.5..1.5f64, ec in -3.0..3.0f64,
            tx in -5.0..5.0f64, ty in -5.0..5.0f64, tz in -5.0..5.0f64,
            px in -5.0..5.0f64, py in -5.0..5.0f64, pz in -5.0..5.0f64,
            qx in -5.0..5.0f64, qy in -5.0..5.0f64, qz in -5.0..5.0f64,
        ) {
            let t = RigidTransform {
                rotation: rot_xyz(ea, eb, ec),
                translation: Vec3::new(tx, ty, tz),
            };
            let p = Vec3::new(px, py, pz);
            let q = Vec3::new(qx, qy, qz);
            let before = (p - q).norm();
            let after = (t.apply_point(p) - t.apply_point(q)).norm();
            prop_assert!((before - after).abs() < 1e-9);
        }

        #[test]
        fn compose_is_associative(
            s in proptest::collection::vec(-2.0..2.0f64, 18)
        ) {
            let mk = |c: &[f64]| RigidTransform {
                rotation: rot_xyz(c[0], c[1], c[2]),
                translation: Vec3::new(c[3], c[4], c[5]),
            };
            let (a, b, c) = (mk(&s[0..6]), mk(&s[6..12]), mk(&s[12..18]));
            let left = se3_compose(&se3_compose(&a, &b), &c);
            let right = se3_compose(&a, &se3_compose(&b, &c));
            let p = Vec3::new(0.7, -0.3, 1.9);
            prop_assert!((left.apply_point(p) - right.apply_point(p)).norm() < 1e-9);
        }
    }
}
