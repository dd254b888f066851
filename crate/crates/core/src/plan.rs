//! The part-level object plan IR: each object is a list of semantic parts
//! with a primitive type, local pose, dimensions, material, symmetry tag,
//! and movability flags. Plans arrive from a backend (or a template) and
//! must pass the [`crate::verify`] checker before any geometry is built.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{MaterialSpec, PrimitiveKind};
use crate::model::{Aabb, RigidTransform, Vec3};

/// Maximum allowed nesting depth for `sub_parts`.
pub const MAX_SUBPART_DEPTH: usize = 2;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PlanError {
    #[error("plan has no parts")]
    NoParts,
    #[error("part {0}: radial symmetry needs count >= 2")]
    RadialCountTooSmall(String),
    #[error("part {0}: sub_parts nest deeper than {MAX_SUBPART_DEPTH} levels")]
    TooDeep(String),
    #[error("part {0}: non-finite value in {1}")]
    NonFinite(String, &'static str),
    #[error("invalid pose for part {0}: {1}")]
    BadPose(String, String),
}

/// Hint from the planner about how a movable part articulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JointHint {
    Hinged,
    Sliding,
}

/// Symmetry tag carried by a part: generation of mirrored or radially
/// arrayed instances is deferred to program lowering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymmetryTag {
    #[default]
    None,
    /// Mirror about the object-local x = 0 plane.
    MirrorX,
    /// `count` copies rotated about the vertical axis through `pivot`.
    Radial { count: u32, pivot: [f64; 3] },
}

impl SymmetryTag {
    pub fn is_none(&self) -> bool {
        matches!(self, SymmetryTag::None)
    }
}

/// One semantic part of an object plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartSpec {
    /// Semantic role name, unique within the plan (path-qualified for
    /// nested parts).
    pub name: String,
    pub primitive: PrimitiveKind,
    #[serde(default)]
    pub local_pose: RigidTransform,
    /// Primitive-specific dimensions; see [`PartSpec::local_extents`] for
    /// the axis-aligned footprint they imply.
    pub dims: [f64; 3],
    pub material: MaterialSpec,
    #[serde(default)]
    pub symmetry_tag: SymmetryTag,
    #[serde(default)]
    pub movable: bool,
    #[serde(default)]
    pub must_be_independent: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sub_parts: Vec<PartSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint_hint: Option<JointHint>,
}

impl PartSpec {
    pub fn new(
        name: impl Into<String>,
        primitive: PrimitiveKind,
        dims: [f64; 3],
        material: MaterialSpec,
    ) -> Self {
        Self {
            name: name.into(),
            primitive,
            local_pose: RigidTransform::identity(),
            dims,
            material,
            symmetry_tag: SymmetryTag::None,
            movable: false,
            must_be_independent: false,
            sub_parts: Vec::new(),
            joint_hint: None,
        }
    }

    pub fn at(mut self, translation: Vec3) -> Self {
        self.local_pose.translation = translation;
        self
    }

    pub fn posed(mut self, pose: RigidTransform) -> Self {
        self.local_pose = pose;
        self
    }

    pub fn movable(mut self, hint: JointHint) -> Self {
        self.movable = true;
        self.must_be_independent = true;
        self.joint_hint = Some(hint);
        self
    }

    pub fn with_symmetry(mut self, tag: SymmetryTag) -> Self {
        self.symmetry_tag = tag;
        self
    }

    pub fn with_sub_parts(mut self, sub_parts: Vec<PartSpec>) -> Self {
        self.sub_parts = sub_parts;
        self
    }

    /// Axis-aligned extents of the constructed primitive in its own frame
    /// before posing: boxes use dims directly; cylinders and spheres take
    /// their diameter from `dims[0]` with height `dims[2]`; tori read the
    /// outer diameter from `dims[0]` and the tube diameter from `dims[2]`;
    /// revolved profiles are fit to the dims box by construction.
    pub fn local_extents(&self) -> Vec3 {
        let [x, _y, z] = self.dims;
        match self.primitive {
            PrimitiveKind::Box | PrimitiveKind::Curve => {
                Vec3::new(self.dims[0], self.dims[1], self.dims[2])
            }
            PrimitiveKind::Cyl => Vec3::new(x, x, z),
            PrimitiveKind::Sph => Vec3::new(x, x, x),
            PrimitiveKind::Torus => Vec3::new(x, x, z),
        }
    }

    /// Bounding box of this part alone, in the frame of `pose`.
    pub fn aabb_in(&self, pose: &RigidTransform) -> Aabb {
        let h = self.local_extents() * 0.5;
        Aabb::new(-h, h).transformed(&pose.compose(&self.local_pose))
    }

    /// Bounding box of this part and its nested sub-parts (sub-part poses
    /// are relative to their parent part's frame).
    pub fn subtree_aabb(&self, pose: &RigidTransform) -> Aabb {
        let mut bb = self.aabb_in(pose);
        let own = pose.compose(&self.local_pose);
        for sp in &self.sub_parts {
            bb = bb.union(&sp.subtree_aabb(&own));
        }
        bb
    }

    /// True when this part or any nested sub-part is movable.
    pub fn subtree_has_movable(&self) -> bool {
        self.movable || self.sub_parts.iter().any(PartSpec::subtree_has_movable)
    }

    fn validate_recursive(&self, depth: usize) -> Result<(), PlanError> {
        if depth > MAX_SUBPART_DEPTH {
            return Err(PlanError::TooDeep(self.name.clone()));
        }
        if !self.dims.iter().all(|d| d.is_finite()) {
            return Err(PlanError::NonFinite(self.name.clone(), "dims"));
        }
        self.local_pose
            .validate()
            .map_err(|e| PlanError::BadPose(self.name.clone(), e.to_string()))?;
        if let SymmetryTag::Radial { count, pivot } = &self.symmetry_tag {
            if *count < 2 {
                return Err(PlanError::RadialCountTooSmall(self.name.clone()));
            }
            if !pivot.iter().all(|c| c.is_finite()) {
                return Err(PlanError::NonFinite(self.name.clone(), "radial pivot"));
            }
        }
        for sp in &self.sub_parts {
            sp.validate_recursive(depth + 1)?;
        }
        Ok(())
    }
}

/// Where a plan came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanProvenance {
    Backend,
    Template,
    User,
}

/// The structured part-level plan for one object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectPlan {
    pub category: String,
    #[serde(default)]
    pub style: String,
    pub target_dims: [f64; 3],
    pub parts: Vec<PartSpec>,
    pub provenance: PlanProvenance,
}

impl ObjectPlan {
    pub fn dims(&self) -> Vec3 {
        Vec3::new(self.target_dims[0], self.target_dims[1], self.target_dims[2])
    }

    /// Structural validity: non-empty, finite, bounded nesting, radial
    /// counts in range. Name uniqueness and geometric coherence are the
    /// verifier's responsibility (it can repair them).
    pub fn validate_structure(&self) -> Result<(), PlanError> {
        if self.parts.is_empty() {
            return Err(PlanError::NoParts);
        }
        if !self.target_dims.iter().all(|d| d.is_finite()) {
            return Err(PlanError::NonFinite("<plan>".into(), "target_dims"));
        }
        for p in &self.parts {
            p.validate_recursive(0)?;
        }
        Ok(())
    }

    /// Path-qualified names of all parts, depth-first: nested parts are
    /// reported as `parent/child`.
    pub fn part_paths(&self) -> Vec<String> {
        fn walk(parts: &[PartSpec], prefix: &str, out: &mut Vec<String>) {
            for p in parts {
                let path = if prefix.is_empty() {
                    p.name.clone()
                } else {
                    format!("{prefix}/{}", p.name)
                };
                walk(&p.sub_parts, &path, out);
                out.push(path);
            }
        }
        let mut out = Vec::new();
        walk(&self.parts, "", &mut out);
        out
    }

    /// Union bounding box of all top-level part subtrees in the object
    /// frame.
    pub fn union_aabb(&self) -> Option<Aabb> {
        let identity = RigidTransform::identity();
        let mut it = self.parts.iter().map(|p| p.subtree_aabb(&identity));
        let first = it.next()?;
        Some(it.fold(first, |acc, bb| acc.union(&bb)))
    }

    pub fn find_part(&self, path: &str) -> Option<&PartSpec> {
        fn walk<'a>(parts: &'a [PartSpec], path: &str) -> Option<&'a PartSpec> {
            match path.split_once('/') {
                None => parts.iter().find(|p| p.name == path),
                Some((head, rest)) => {
                    walk(&parts.iter().find(|p| p.name == head)?.sub_parts, rest)
                }
            }
        }
        walk(&self.parts, path)
    }

    pub fn find_part_mut(&mut self, path: &str) -> Option<&mut PartSpec> {
        fn walk<'a>(parts: &'a mut [PartSpec], path: &str) -> Option<&'a mut PartSpec> {
            match path.split_once('/') {
                None => parts.iter_mut().find(|p| p.name == path),
                Some((head, rest)) => {
                    walk(&mut parts.iter_mut().find(|p| p.name == head)?.sub_parts, rest)
                }
            }
        }
        walk(&mut self.parts, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gray() -> MaterialSpec {
        MaterialSpec::flat("gray", [0.5, 0.5, 0.5])
    }

    #[test]
    fn part_paths_are_qualified() {
        let plan = ObjectPlan {
            category: "cabinet".into(),
            style: String::new(),
            target_dims: [1.0, 0.5, 1.0],
            parts: vec![
                PartSpec::new("body", PrimitiveKind::Box, [1.0, 0.5, 1.0], gray()).with_sub_parts(
                    vec![PartSpec::new("shelf_1", PrimitiveKind::Box, [0.9, 0.45, 0.02], gray())],
                ),
            ],
            provenance: PlanProvenance::Template,
        };
        assert_eq!(plan.part_paths(), vec!["body/shelf_1", "body"]);
        assert!(plan.find_part("body/shelf_1").is_some());
        assert!(plan.find_part("body/shelf_2").is_none());
    }

    #[test]
    fn nesting_depth_is_bounded() {
        let leaf = PartSpec::new("c", PrimitiveKind::Box, [0.1; 3], gray());
        let mid = PartSpec::new("b", PrimitiveKind::Box, [0.2; 3], gray()).with_sub_parts(vec![leaf]);
        let ok_plan = ObjectPlan {
            category: "x".into(),
            style: String::new(),
            target_dims: [1.0; 3],
            parts: vec![PartSpec::new("a", PrimitiveKind::Box, [0.3; 3], gray())
                .with_sub_parts(vec![mid])],
            provenance: PlanProvenance::User,
        };
        ok_plan.validate_structure().unwrap();

        let deep = PartSpec::new("d", PrimitiveKind::Box, [0.2; 3], gray());
        let mid2 =
            PartSpec::new("c2", PrimitiveKind::Box, [0.2; 3], gray()).with_sub_parts(vec![deep]);
        let mid3 =
            PartSpec::new("b2", PrimitiveKind::Box, [0.2; 3], gray()).with_sub_parts(vec![mid2]);
        let too_deep = ObjectPlan {
            parts: vec![PartSpec::new("a", PrimitiveKind::Box, [0.3; 3], gray())
                .with_sub_parts(vec![mid3])],
            ..ok_plan
        };
        assert!(matches!(
            too_deep.validate_structure(),
            Err(PlanError::TooDeep(_))
        ));
    }

    #[test]
    fn radial_count_validated() {
        let plan = ObjectPlan {
            category: "table".into(),
            style: String::new(),
            target_dims: [1.0; 3],
            parts: vec![PartSpec::new("leg", PrimitiveKind::Box, [0.05, 0.05, 0.7], gray())
                .with_symmetry(SymmetryTag::Radial {
                    count: 1,
                    pivot: [0.0; 3],
                })],
            provenance: PlanProvenance::User,
        };
        assert!(matches!(
            plan.validate_structure(),
            Err(PlanError::RadialCountTooSmall(_))
        ));
    }

    #[test]
    fn plan_json_roundtrip() {
        let plan = ObjectPlan {
            category: "nightstand".into(),
            style: "oak".into(),
            target_dims: [0.5, 0.5, 0.6],
            parts: vec![
                PartSpec::new("drawer", PrimitiveKind::Box, [0.4, 0.5, 0.15], gray())
                    .movable(JointHint::Sliding)
                    .at(Vec3::new(0.0, 0.0, 0.3)),
            ],
            provenance: PlanProvenance::Template,
        };
        let json = serde_json::to_string_pretty(&plan).unwrap();
        let back: ObjectPlan = serde_json::from_str(&json).unwrap();
        assert_eq!(plan, back);
        assert!(json.contains("\"joint_hint\": \"sliding\""));
        assert!(json.contains("\"movable\": true"));
    }
}
