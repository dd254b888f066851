//! The simulation compilation map: rigid assets become single-body
//! packages; articulated assets become link-joint structures with masses,
//! inertia tensors, and collision proxies.
//!
//! Joint inference is a deterministic geometric heuristic over the movable
//! parts, keyed on the plan's joint hints and part proportions. It covers
//! the two dominant indoor mechanisms: prismatic drawers sliding out the
//! front (-y) and revolute doors/lids about a vertical or horizontal hinge
//! edge.

pub mod mass;

pub use mass::{mass_properties, parallel_axis_shift, MassProperties};

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{MaterialSpec, TriMesh};
use crate::model::{Aabb, RigidTransform, Vec3};
use crate::program::{expand_instances, ObjectAsset, ProgramOp};
use crate::router::Strategy;

/// Mass clamp range for a single link, kg.
pub const MASS_RANGE: (f64, f64) = (0.05, 300.0);

/// Prismatic travel as a fraction of the sliding part's depth.
pub const PRISMATIC_TRAVEL_RATIO: f64 = 0.8;

/// Shipped density table, kg/m^3, keyed by material family.
pub const DENSITY_TABLE: &[(&str, f64)] = &[
    ("wood", 700.0),
    ("metal", 7800.0),
    ("plastic", 1000.0),
    ("glass", 2500.0),
    ("fabric", 300.0),
    ("ceramic", 2300.0),
];

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ArticError {
    #[error("mesh '{0}' is open and not declared a shell")]
    OpenMeshNotShell(String),
    #[error("movable part '{0}' matches no joint pattern (hint or geometry)")]
    UnclassifiableMovable(String),
    #[error("asset expansion failed: {0}")]
    Expansion(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JointType {
    Revolute,
    Prismatic,
}

/// One joint: parent/child links, frame, axis, and motion range (radians
/// for revolute, meters for prismatic). The origin is the joint frame at
/// the closed pose, so driving every joint to its lower limit reproduces
/// the as-built part poses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointSpec {
    pub name: String,
    pub parent_link: String,
    pub child_link: String,
    pub joint_type: JointType,
    pub origin: RigidTransform,
    pub axis: [f64; 3],
    pub limits: (f64, f64),
}

impl JointSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.limits.0 > self.limits.1 {
            return Err(format!("joint {}: lower > upper", self.name));
        }
        let n = Vec3::from(self.axis).norm();
        if (n - 1.0).abs() > 1e-9 {
            return Err(format!("joint {}: axis not unit length", self.name));
        }
        Ok(())
    }
}

/// Oriented-box collision proxy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObbProxy {
    pub center: [f64; 3],
    pub half_extents: [f64; 3],
    /// Rotation of the box frame, stored like a pose rotation.
    pub rotation: RigidTransform,
}

impl ObbProxy {
    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        let local = self
            .rotation
            .rotation
            .transpose()
            * (p - Vec3::from(self.center));
        (0..3).all(|i| local[i].abs() <= self.half_extents[i] + tol)
    }
}

/// Mass, inertia about the center of mass (in the link frame), center of
/// mass, and collision proxies for one link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalAttrs {
    pub mass: f64,
    /// Symmetric 3x3 inertia about `com`, kg m^2.
    pub inertia: [[f64; 3]; 3],
    pub com: [f64; 3],
    pub collision_proxies: Vec<ObbProxy>,
    /// Set when an open mesh forced the AABB fallback formula.
    #[serde(default)]
    pub approximated: bool,
}

impl PhysicalAttrs {
    pub fn inertia_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.inertia[i][j])
    }

    /// Simulator load-time requirements: symmetry, positive semidefinite,
    /// principal-moment triangle inequality.
    pub fn validate(&self) -> Result<(), String> {
        if !(MASS_RANGE.0..=MASS_RANGE.1).contains(&self.mass) {
            return Err(format!("mass {} outside {:?}", self.mass, MASS_RANGE));
        }
        let m = self.inertia_matrix();
        if (m - m.transpose()).norm() > 1e-9 * m.norm().max(1.0) {
            return Err("inertia not symmetric".into());
        }
        let eig = m.symmetric_eigenvalues();
        let scale = eig.iter().fold(0.0_f64, |a, &b| a.max(b.abs())).max(1e-12);
        let mut principal: Vec<f64> = eig.iter().copied().collect();
        principal.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if principal[0] < -1e-9 * scale {
            return Err(format!("inertia not PSD: eigenvalues {principal:?}"));
        }
        if principal[0] + principal[1] < principal[2] - 1e-9 * scale {
            return Err(format!(
                "principal moments violate triangle inequality: {principal:?}"
            ));
        }
        Ok(())
    }
}

/// One link: a name, the meshes it renders with, and physical attributes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub name: String,
    pub meshes: Vec<TriMesh>,
    pub attrs: PhysicalAttrs,
}

/// Compiled simulation asset: a base link, movable links, and the joint
/// tree connecting them (empty for rigid assets).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimAsset {
    pub id: String,
    pub base_link: Link,
    pub movable_links: Vec<Link>,
    pub joints: Vec<JointSpec>,
    /// Non-fatal compilation notes (e.g. rigid fallback for an
    /// unclassifiable movable part).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SimAsset {
    pub fn total_mass(&self) -> f64 {
        self.base_link.attrs.mass
            + self
                .movable_links
                .iter()
                .map(|l| l.attrs.mass)
                .sum::<f64>()
    }

    /// Joints must form a tree rooted at the base link with every movable
    /// link the child of exactly one joint.
    pub fn validate_joint_tree(&self) -> Result<(), String> {
        let mut names: Vec<&str> = vec![self.base_link.name.as_str()];
        names.extend(self.movable_links.iter().map(|l| l.name.as_str()));
        let mut child_seen = std::collections::BTreeSet::new();
        for j in &self.joints {
            j.validate()?;
            if !names.contains(&j.parent_link.as_str()) {
                return Err(format!("joint {}: unknown parent {}", j.name, j.parent_link));
            }
            if !names.contains(&j.child_link.as_str()) {
                return Err(format!("joint {}: unknown child {}", j.name, j.child_link));
            }
            if j.child_link == self.base_link.name {
                return Err(format!("joint {}: base link cannot be a child", j.name));
            }
            if !child_seen.insert(j.child_link.clone()) {
                return Err(format!("link {} is a joint child twice", j.child_link));
            }
        }
        for l in &self.movable_links {
            if !child_seen.contains(&l.name) {
                return Err(format!("movable link {} has no joint", l.name));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Mass and inertia
// ---------------------------------------------------------------------------

/// Density for a material, inferred from family keywords in its name.
pub fn density_for(material: &MaterialSpec) -> f64 {
    let name = material.name.to_lowercase();
    for (family, density) in DENSITY_TABLE {
        if name.contains(family) {
            return *density;
        }
    }
    1000.0 // plastic default
}

/// Estimate a part's mass from its enclosed volume and material family
/// density, clamped to [`MASS_RANGE`]. Open meshes must be declared shells
/// (mass then falls back to surface area times a nominal 2 mm wall).
pub fn estimate_mass(mesh: &TriMesh, material: &MaterialSpec, shell: bool) -> Result<f64, ArticError> {
    let density = density_for(material);
    let volume = if mesh.is_closed_manifold() {
        mesh.signed_volume().abs()
    } else if shell {
        mesh.surface_area() * 0.002
    } else {
        return Err(ArticError::OpenMeshNotShell(mesh.part_name.clone()));
    };
    Ok((density * volume).clamp(MASS_RANGE.0, MASS_RANGE.1))
}

/// Inertia tensor (about the center of mass) for a mesh carrying the given
/// mass. Closed meshes get the exact polyhedral integral; open meshes fall
/// back to the AABB box formula with the `approximated` flag set.
pub fn inertia_tensor(mesh: &TriMesh, mass: f64) -> (Matrix3<f64>, Vec3, bool) {
    if mesh.is_closed_manifold() && mesh.signed_volume() > 1e-12 {
        let props = mass_properties(mesh);
        (props.inertia_for_mass(mass), props.com, false)
    } else {
        let bb = mesh.aabb().unwrap_or(Aabb::new(Vec3::zeros(), Vec3::zeros()));
        let e = bb.extents();
        let inertia = Matrix3::from_diagonal(&Vec3::new(
            mass / 12.0 * (e.y * e.y + e.z * e.z),
            mass / 12.0 * (e.x * e.x + e.z * e.z),
            mass / 12.0 * (e.x * e.x + e.y * e.y),
        ));
        (inertia, bb.center(), true)
    }
}

/// One oriented box per part: the part's local-frame AABB transported by
/// its pose. Without a rigid pose (mirrored instances) the model-frame AABB
/// is used directly.
pub fn collision_proxy(mesh: &TriMesh, pose: Option<&RigidTransform>) -> ObbProxy {
    match pose {
        Some(t) => {
            let inv = t.inverse();
            let local = Aabb::from_points(mesh.vertices.iter().map(|v| inv.apply_point(*v)))
                .unwrap_or(Aabb::new(Vec3::zeros(), Vec3::zeros()));
            let center_world = t.apply_point(local.center());
            let he = local.extents() * 0.5;
            ObbProxy {
                center: [center_world.x, center_world.y, center_world.z],
                half_extents: [he.x, he.y, he.z],
                rotation: RigidTransform::from_rotation(t.rotation),
            }
        }
        None => {
            let bb = mesh.aabb().unwrap_or(Aabb::new(Vec3::zeros(), Vec3::zeros()));
            let he = bb.extents() * 0.5;
            let c = bb.center();
            ObbProxy {
                center: [c.x, c.y, c.z],
                half_extents: [he.x, he.y, he.z],
                rotation: RigidTransform::identity(),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Joint inference
// ---------------------------------------------------------------------------

struct MovableGroup {
    link_name: String,
    aabb: Aabb,
    hint: Option<crate::plan::JointHint>,
}

fn movable_groups(asset: &ObjectAsset) -> Result<(Vec<MovableGroup>, Option<Aabb>), ArticError> {
    let instances =
        expand_instances(&asset.plan).map_err(|e| ArticError::Expansion(e.to_string()))?;
    let mesh_box = |name: &str| -> Option<Aabb> {
        asset
            .parts
            .iter()
            .find(|m| m.part_name == name)
            .and_then(|m| m.aabb().ok())
    };
    let mut groups: Vec<MovableGroup> = Vec::new();
    let mut base_box: Option<Aabb> = None;
    for inst in &instances {
        match &inst.movable_root {
            Some(root) if root == &inst.name => {
                // Own bounding box plus nested sub-part meshes.
                let mut bb = mesh_box(&inst.name);
                let prefix = format!("{}/", inst.name);
                for other in &instances {
                    if other.name.starts_with(&prefix) {
                        if let Some(sub) = mesh_box(&other.name) {
                            bb = Some(match bb {
                                Some(b) => b.union(&sub),
                                None => sub,
                            });
                        }
                    }
                }
                if let Some(bb) = bb {
                    groups.push(MovableGroup {
                        link_name: inst.name.replace('/', "_"),
                        aabb: bb,
                        hint: inst.spec.joint_hint,
                    });
                }
            }
            Some(_) => {} // nested under a movable root, grouped above
            None => {
                if let Some(bb) = mesh_box(&inst.name) {
                    base_box = Some(match base_box {
                        Some(b) => b.union(&bb),
                        None => bb,
                    });
                }
            }
        }
    }
    Ok((groups, base_box))
}

fn classify(
    group: &MovableGroup,
    object_box: &Aabb,
    base_box: Option<&Aabb>,
) -> Result<JointSpec, ArticError> {
    use crate::plan::JointHint;
    let bb = &group.aabb;
    let ext = bb.extents();
    let center = bb.center();
    let obj_ext = object_box.extents();

    let top_mounted = center.z >= object_box.min.z + 0.7 * obj_ext.z;
    let lid_like = top_mounted && ext.z <= 0.3 * ext.x.max(ext.y);
    let front_reaching = bb.min.y <= object_box.min.y + 0.15 * obj_ext.y;
    let drawer_like = ext.y >= ext.z && front_reaching;
    let door_like = ext.z >= ext.y && ext.y <= 0.35 * ext.z.max(ext.x);

    let drawer = || JointSpec {
        name: format!("{}_joint", group.link_name),
        parent_link: "base".into(),
        child_link: group.link_name.clone(),
        joint_type: JointType::Prismatic,
        origin: RigidTransform::from_translation(center),
        axis: [0.0, -1.0, 0.0],
        limits: (0.0, PRISMATIC_TRAVEL_RATIO * ext.y),
    };
    let door = || {
        // Hinge on the vertical edge nearer the body's side wall (the
        // outer edge relative to the base center).
        let body_cx = base_box.map(|b| b.center().x).unwrap_or(object_box.center().x);
        let hinge_x = if center.x >= body_cx { bb.max.x } else { bb.min.x };
        JointSpec {
            name: format!("{}_joint", group.link_name),
            parent_link: "base".into(),
            child_link: group.link_name.clone(),
            joint_type: JointType::Revolute,
            origin: RigidTransform::from_translation(Vec3::new(hinge_x, center.y, center.z)),
            axis: [0.0, 0.0, 1.0],
            limits: (0.0, std::f64::consts::FRAC_PI_2),
        }
    };
    let lid = || JointSpec {
        name: format!("{}_joint", group.link_name),
        parent_link: "base".into(),
        child_link: group.link_name.clone(),
        joint_type: JointType::Revolute,
        origin: RigidTransform::from_translation(Vec3::new(center.x, bb.max.y, bb.min.z)),
        axis: [1.0, 0.0, 0.0],
        limits: (0.0, std::f64::consts::FRAC_PI_2),
    };

    match group.hint {
        Some(JointHint::Sliding) => Ok(drawer()),
        Some(JointHint::Hinged) => {
            if lid_like {
                Ok(lid())
            } else {
                Ok(door())
            }
        }
        None => {
            if lid_like {
                Ok(lid())
            } else if drawer_like {
                Ok(drawer())
            } else if door_like {
                Ok(door())
            } else {
                Err(ArticError::UnclassifiableMovable(group.link_name.clone()))
            }
        }
    }
}

/// Infer the joint schema over an asset's movable parts. Errors with
/// `UnclassifiableMovable` when any movable group matches no pattern; the
/// compiler then falls back to rigid packaging with a warning.
pub fn infer_joints(asset: &ObjectAsset) -> Result<Vec<JointSpec>, ArticError> {
    let (groups, base_box) = movable_groups(asset)?;
    let mut joints = Vec::with_capacity(groups.len());
    for g in &groups {
        joints.push(classify(g, &asset.object_aabb, base_box.as_ref())?);
    }
    Ok(joints)
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

/// A part is a closed shell when its program solidified an open surface.
fn is_shell_part(asset: &ObjectAsset, mesh_name: &str) -> bool {
    asset
        .programs
        .iter()
        .find(|p| p.part_name == mesh_name)
        .map(|p| p.ops.iter().any(|op| matches!(op, ProgramOp::Solidify { .. })))
        .unwrap_or(false)
}

/// Rigid pose of a part instance in the model frame, when its symmetry
/// chain is rigid (radial rotations compose; mirrors do not).
fn rigid_instance_pose(inst: &crate::program::PartInstance) -> Option<RigidTransform> {
    let mut pose = inst.pose;
    for op in &inst.sym_ops {
        match op {
            ProgramOp::RadialArray {
                pivot,
                axis,
                count,
                index,
            } => {
                let angle = 2.0 * std::f64::consts::PI * f64::from(*index) / f64::from(*count);
                let rot = RigidTransform::rotation_about(Vec3::from(*pivot), Vec3::from(*axis), angle);
                pose = rot.compose(&pose);
            }
            ProgramOp::MirrorAbout { .. } => return None,
            _ => {}
        }
    }
    Some(pose)
}

fn link_attrs(
    asset: &ObjectAsset,
    meshes: &[(TriMesh, Option<RigidTransform>)],
) -> Result<PhysicalAttrs, ArticError> {
    let mut total_mass = 0.0;
    let mut weighted_com = Vec3::zeros();
    let mut contributions: Vec<(f64, Vec3, Matrix3<f64>, bool)> = Vec::new();
    let mut proxies = Vec::new();
    for (mesh, pose) in meshes {
        let material = mesh
            .material_slots
            .first()
            .cloned()
            .unwrap_or_else(|| MaterialSpec::flat("default_plastic", [0.5; 3]));
        let shell = is_shell_part(asset, &mesh.part_name);
        let mass = estimate_mass(mesh, &material, shell)?;
        let (inertia, com, approximated) = inertia_tensor(mesh, mass);
        total_mass += mass;
        weighted_com += com * mass;
        contributions.push((mass, com, inertia, approximated));
        proxies.push(collision_proxy(mesh, pose.as_ref()));
    }
    let link_mass = total_mass.clamp(MASS_RANGE.0, MASS_RANGE.1);
    let com = if total_mass > 0.0 {
        weighted_com / total_mass
    } else {
        Vec3::zeros()
    };
    let mut inertia = Matrix3::zeros();
    let mut approximated = false;
    for (mass, part_com, part_inertia, approx) in contributions {
        inertia += part_inertia + parallel_axis_shift(mass, part_com - com);
        approximated |= approx;
    }
    // Keep inertia consistent with a clamped link mass.
    if (link_mass - total_mass).abs() > 1e-12 && total_mass > 0.0 {
        inertia *= link_mass / total_mass;
    }
    Ok(PhysicalAttrs {
        mass: link_mass,
        inertia: [
            [inertia[(0, 0)], inertia[(0, 1)], inertia[(0, 2)]],
            [inertia[(1, 0)], inertia[(1, 1)], inertia[(1, 2)]],
            [inertia[(2, 0)], inertia[(2, 1)], inertia[(2, 2)]],
        ],
        com: [com.x, com.y, com.z],
        collision_proxies: proxies,
        approximated,
    })
}

/// Compile a built object into a simulation asset. Rigid routes merge all
/// parts into the base link (concatenated, never welded); the articulated
/// route gives each movable group its own link and infers the joint
/// schema. When a movable part cannot be classified the whole object falls
/// back to rigid packaging with a warning.
pub fn compile(asset: &ObjectAsset, route: Strategy) -> Result<SimAsset, ArticError> {
    let instances =
        expand_instances(&asset.plan).map_err(|e| ArticError::Expansion(e.to_string()))?;
    let pose_of = |name: &str| -> Option<RigidTransform> {
        instances
            .iter()
            .find(|i| i.name == name)
            .and_then(rigid_instance_pose)
    };
    let mesh_entry = |mesh: &TriMesh| (mesh.clone(), pose_of(&mesh.part_name));

    let mut warnings = Vec::new();
    let mut joints = Vec::new();
    let mut movable_names: Vec<String> = Vec::new();

    if route == Strategy::Artic {
        match infer_joints(asset) {
            Ok(j) => {
                movable_names = j.iter().map(|js| js.child_link.clone()).collect();
                joints = j;
            }
            Err(ArticError::UnclassifiableMovable(part)) => {
                warnings.push(format!(
                    "movable part '{part}' unclassifiable; packaged rigid"
                ));
            }
            Err(other) => return Err(other),
        }
    }

    // Partition meshes into base vs movable links by instance movable root.
    let root_of = |name: &str| -> Option<String> {
        instances
            .iter()
            .find(|i| i.name == name)
            .and_then(|i| i.movable_root.clone())
            .map(|r| r.replace('/', "_"))
    };
    let mut base_meshes: Vec<(TriMesh, Option<RigidTransform>)> = Vec::new();
    let mut per_link: std::collections::BTreeMap<String, Vec<(TriMesh, Option<RigidTransform>)>> =
        Default::default();
    for mesh in &asset.parts {
        match root_of(&mesh.part_name) {
            Some(root) if movable_names.contains(&root) => {
                per_link.entry(root).or_default().push(mesh_entry(mesh));
            }
            _ => base_meshes.push(mesh_entry(mesh)),
        }
    }

    let base_link = Link {
        name: "base".into(),
        attrs: link_attrs(asset, &base_meshes)?,
        meshes: base_meshes.into_iter().map(|(m, _)| m).collect(),
    };
    let mut movable_links = Vec::new();
    // Keep link order aligned with joint order.
    for name in &movable_names {
        let meshes = per_link.remove(name).unwrap_or_default();
        movable_links.push(Link {
            name: name.clone(),
            attrs: link_attrs(asset, &meshes)?,
            meshes: meshes.into_iter().map(|(m, _)| m).collect(),
        });
    }

    let sim = SimAsset {
        id: asset.id.clone(),
        base_link,
        movable_links,
        joints,
        warnings,
    };
    sim.validate_joint_tree().map_err(ArticError::Expansion)?;
    Ok(sim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{PlannerBackend, TemplateBackend};
    use crate::kernel::primitives::{make_primitive, PrimitiveSpec};
    use crate::program::{build_with_repair, LoopBudgets};
    use crate::verify::verify;

    fn build(category: &str, dims: Vec3) -> ObjectAsset {
        let backend = TemplateBackend::new();
        let plan = backend.plan_for(category, dims, "").unwrap();
        let report = verify(&plan, backend.ontology()).unwrap();
        let (result, _) = build_with_repair(
            &format!("{category}_1"),
            &report.verified_plan.unwrap(),
            &backend,
            LoopBudgets::default(),
        );
        result.unwrap()
    }

    #[test]
    fn nightstand_drawer_matches_reference_articulation() {
        let asset = build("nightstand", Vec3::new(0.5, 0.5, 0.6));
        let joints = infer_joints(&asset).unwrap();
        assert_eq!(joints.len(), 1);
        let j = &joints[0];
        assert_eq!(j.joint_type, JointType::Prismatic);
        assert_eq!(j.axis, [0.0, -1.0, 0.0]);
        assert!((j.limits.0 - 0.0).abs() < 1e-9);
        assert!((j.limits.1 - 0.4).abs() < 1e-6, "upper = {}", j.limits.1);
    }

    #[test]
    fn cabinet_doors_are_revolute_about_z() {
        let asset = build("cabinet", Vec3::new(0.9, 0.45, 1.1));
        let joints = infer_joints(&asset).unwrap();
        assert_eq!(joints.len(), 2);
        for j in &joints {
            assert_eq!(j.joint_type, JointType::Revolute);
            assert_eq!(j.axis, [0.0, 0.0, 1.0]);
            assert!((j.limits.1 - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        }
        // Hinges at the outer edges: left door hinge below body center,
        // right door hinge above.
        let xs: Vec<f64> = joints.iter().map(|j| j.origin.translation.x).collect();
        assert!(xs[0] < 0.0 && xs[1] > 0.0, "hinges at {xs:?}");
        assert!(xs[0].abs() > 0.4 && xs[1].abs() > 0.4);
    }

    #[test]
    fn lid_is_revolute_about_x_at_back_edge() {
        let asset = build("trash can", Vec3::new(0.3, 0.3, 0.4));
        let joints = infer_joints(&asset).unwrap();
        assert_eq!(joints.len(), 1);
        let j = &joints[0];
        assert_eq!(j.joint_type, JointType::Revolute);
        assert_eq!(j.axis, [1.0, 0.0, 0.0]);
        assert!(j.origin.translation.y > 0.14); // back edge
    }

    #[test]
    fn rigid_asset_has_empty_joints() {
        let asset = build("bowl", Vec3::new(0.2, 0.2, 0.08));
        assert!(infer_joints(&asset).unwrap().is_empty());
        let sim = compile(&asset, Strategy::SimpleManip).unwrap();
        assert!(sim.joints.is_empty());
        assert_eq!(sim.movable_links.len(), 0);
        assert!(sim.base_link.meshes.len() == 1);
    }

    #[test]
    fn compile_nightstand_gives_two_links_one_joint() {
        let asset = build("nightstand", Vec3::new(0.5, 0.5, 0.6));
        let sim = compile(&asset, Strategy::Artic).unwrap();
        assert_eq!(sim.movable_links.len(), 1);
        assert_eq!(sim.joints.len(), 1);
        sim.validate_joint_tree().unwrap();
        sim.base_link.attrs.validate().unwrap();
        sim.movable_links[0].attrs.validate().unwrap();
        // Mass additivity.
        let sum: f64 = sim.base_link.attrs.mass + sim.movable_links[0].attrs.mass;
        assert!((sim.total_mass() - sum).abs() < 1e-12);
    }

    #[test]
    fn cabinet_star_tree() {
        let asset = build("cabinet", Vec3::new(0.9, 0.45, 1.1));
        let sim = compile(&asset, Strategy::Artic).unwrap();
        assert_eq!(sim.movable_links.len(), 2);
        assert_eq!(sim.joints.len(), 2);
        sim.validate_joint_tree().unwrap();
        for j in &sim.joints {
            assert_eq!(j.parent_link, "base");
        }
    }

    #[test]
    fn estimate_mass_uses_density_table_and_clamps() {
        // Solid wood box of 0.1 m^3 -> 70 kg.
        let mesh = make_primitive(
            &PrimitiveSpec::Box {
                extents: [1.0, 0.5, 0.2],
            },
            4,
        )
        .unwrap();
        let wood = MaterialSpec::flat("oak_wood", [0.5, 0.3, 0.2]);
        let mass = estimate_mass(&mesh, &wood, false).unwrap();
        assert!((mass - 70.0).abs() < 1e-9);

        // Tiny plastic knob clamps to the floor.
        let knob = make_primitive(&PrimitiveSpec::Box { extents: [0.01; 3] }, 4).unwrap();
        let plastic = MaterialSpec::flat("plastic", [0.5; 3]);
        assert_eq!(estimate_mass(&knob, &plastic, false).unwrap(), 0.05);

        // Open mesh without shell declaration is an error.
        let mut open = mesh.clone();
        open.triangles.pop();
        open.face_material.pop();
        assert!(matches!(
            estimate_mass(&open, &wood, false),
            Err(ArticError::OpenMeshNotShell(_))
        ));
    }

    #[test]
    fn collision_proxy_contains_all_vertices() {
        let cyl = make_primitive(
            &PrimitiveSpec::Cyl {
                radius: 0.5,
                height: 1.0,
            },
            32,
        )
        .unwrap();
        let proxy = collision_proxy(&cyl, None);
        // Half extents sit on the nominal radius up to the equal-volume
        // tessellation compensation (~0.2% at 32 segments).
        assert!((proxy.half_extents[0] - 0.5).abs() < 0.002);
        assert!((proxy.half_extents[2] - 0.5).abs() < 1e-9);
        for v in &cyl.vertices {
            assert!(proxy.contains(*v, 1e-9));
        }
        // A rotated pose yields a tight oriented box that still contains
        // every vertex.
        let pose = RigidTransform::rotation_about(Vec3::new(0.1, 0.2, 0.0), Vec3::y(), 0.7);
        let moved = cyl.transformed(&pose);
        let obb = collision_proxy(&moved, Some(&pose));
        for v in &moved.vertices {
            assert!(obb.contains(*v, 1e-9));
        }
    }

    #[test]
    fn closed_pose_consistency_at_lower_limit() {
        let asset = build("nightstand", Vec3::new(0.5, 0.5, 0.6));
        let sim = compile(&asset, Strategy::Artic).unwrap();
        // Lower limits are zero, so the joint origin must sit on the
        // as-built drawer center.
        let j = &sim.joints[0];
        assert_eq!(j.limits.0, 0.0);
        let drawer_box = {
            let mut pts = Vec::new();
            for m in &sim.movable_links[0].meshes {
                pts.extend(m.vertices.iter().copied());
            }
            Aabb::from_points(pts).unwrap()
        };
        assert!((j.origin.translation - drawer_box.center()).norm() < 1e-6);
    }
}
