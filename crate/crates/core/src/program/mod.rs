//! The part-program IR and its lowering from verified plans.
//!
//! A `PartProgram` is a closed, deterministic op sequence that materializes
//! exactly one named part mesh; there is no free-form generated code
//! anywhere. Symmetry tags expand at lowering time into one program per
//! instance (`leg_1..leg_4`, `side`/`side_m`), each computed from the
//! original part so instances never accumulate drift.

pub mod engine;

pub use engine::{
    assemble_object, build_with_repair, critic_review, execute_program, BuildFailure, BuildStage,
    BuildStats, CritiqueVerdict, ExecError,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{MaterialSpec, PrimitiveKind, PrimitiveSpec, UvKind};
use crate::model::{Aabb, RigidTransform, Vec3};
use crate::plan::{ObjectPlan, PartSpec, SymmetryTag};

/// Default tessellation per primitive family.
pub fn default_segments(kind: PrimitiveKind) -> u32 {
    match kind {
        PrimitiveKind::Box => 4,
        PrimitiveKind::Cyl | PrimitiveKind::Sph => 32,
        PrimitiveKind::Torus => 24,
        PrimitiveKind::Curve => 24,
    }
}

/// Which faces a material assignment touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceSelector {
    All,
    /// Faces whose normal is dominantly -y (the front face).
    Front,
}

/// One construction op. Programs are interpreted by
/// [`engine::execute_program`]; every op's preconditions are checkable
/// before execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ProgramOp {
    CreatePrimitive {
        #[serde(flatten)]
        spec: PrimitiveSpec,
        segments: u32,
    },
    Transform {
        pose: RigidTransform,
    },
    MirrorAbout {
        point: [f64; 3],
        normal: [f64; 3],
    },
    /// Rotate this instance by `2 pi * index / count` about the axis
    /// through `pivot`; the index pins which copy of the array this
    /// program materializes.
    RadialArray {
        pivot: [f64; 3],
        axis: [f64; 3],
        count: u32,
        index: u32,
    },
    Solidify {
        thickness: f64,
    },
    Bevel {
        width: f64,
        segments: u32,
    },
    AssignMaterial {
        material: MaterialSpec,
        selector: FaceSelector,
    },
    GenerateUv {
        kind: UvKind,
    },
}

/// Executable construction recipe for one named part instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartProgram {
    pub part_name: String,
    pub ops: Vec<ProgramOp>,
}

impl PartProgram {
    /// Structural validity: exactly one `CreatePrimitive`, first, with
    /// finite parameters everywhere.
    pub fn validate(&self) -> Result<(), String> {
        if self.ops.is_empty() {
            return Err(format!("{}: program has no ops", self.part_name));
        }
        for (i, op) in self.ops.iter().enumerate() {
            let is_create = matches!(op, ProgramOp::CreatePrimitive { .. });
            if (i == 0) != is_create {
                return Err(format!(
                    "{}: op {i}: CreatePrimitive must be the first op and appear exactly once",
                    self.part_name
                ));
            }
            let finite = |vs: &[f64]| vs.iter().all(|v| v.is_finite());
            let ok = match op {
                ProgramOp::CreatePrimitive { spec, .. } => match spec {
                    PrimitiveSpec::Box { extents } => finite(extents),
                    PrimitiveSpec::Cyl { radius, height } => finite(&[*radius, *height]),
                    PrimitiveSpec::Sph { radius } => finite(&[*radius]),
                    PrimitiveSpec::Torus {
                        major_radius,
                        minor_radius,
                    } => finite(&[*major_radius, *minor_radius]),
                    PrimitiveSpec::Curve { profile, .. } => profile.iter().all(|p| finite(p)),
                },
                ProgramOp::Transform { pose } => pose.validate().is_ok(),
                ProgramOp::MirrorAbout { point, normal } => {
                    finite(point) && finite(normal) && {
                        let n = Vec3::from(*normal).norm();
                        (n - 1.0).abs() < 1e-6
                    }
                }
                ProgramOp::RadialArray {
                    pivot,
                    axis,
                    count,
                    index,
                } => finite(pivot) && finite(axis) && *count >= 2 && index < count,
                ProgramOp::Solidify { thickness } => thickness.is_finite(),
                ProgramOp::Bevel { width, .. } => width.is_finite(),
                ProgramOp::AssignMaterial { material, .. } => material.validate().is_ok(),
                ProgramOp::GenerateUv { .. } => true,
            };
            if !ok {
                return Err(format!("{}: op {i} has invalid parameters", self.part_name));
            }
        }
        Ok(())
    }
}

/// The built object: one or more meshes per plan part (symmetry instances),
/// the verified plan, and the programs that materialized the parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectAsset {
    pub id: String,
    pub plan: ObjectPlan,
    pub parts: Vec<crate::kernel::TriMesh>,
    pub object_aabb: Aabb,
    pub programs: Vec<PartProgram>,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LowerError {
    #[error("part {0}: symmetry tag on a movable subtree cannot be lowered (verifier bug)")]
    UnloweredSymmetry(String),
    #[error("part {0}: torus dims need outer diameter > 2 x tube diameter")]
    BadTorusDims(String),
}

/// One flattened, symmetry-expanded part instance.
#[derive(Debug, Clone)]
pub struct PartInstance {
    /// Plan path of the source part, e.g. `body/shelf_1`.
    pub plan_path: String,
    /// Unique mesh/program name, e.g. `leg_3` or `side_m/bracket`.
    pub name: String,
    /// Instance name of the innermost movable ancestor (or self), if any.
    pub movable_root: Option<String>,
    /// Leaf spec without sub-parts.
    pub spec: PartSpec,
    /// Pose in the object frame (ancestors composed with the own pose).
    pub pose: RigidTransform,
    /// Symmetry ops to apply after the placing transform, innermost first.
    pub sym_ops: Vec<ProgramOp>,
}

/// Expand a verified plan into flattened per-instance parts.
pub fn expand_instances(plan: &ObjectPlan) -> Result<Vec<PartInstance>, LowerError> {
    fn own_instances(
        part: &PartSpec,
        path: &str,
    ) -> Result<Vec<(String, Vec<ProgramOp>)>, LowerError> {
        match &part.symmetry_tag {
            SymmetryTag::None => Ok(vec![(String::new(), vec![])]),
            _ if part.subtree_has_movable() => {
                Err(LowerError::UnloweredSymmetry(path.to_string()))
            }
            SymmetryTag::MirrorX => Ok(vec![
                (String::new(), vec![]),
                (
                    "_m".to_string(),
                    vec![ProgramOp::MirrorAbout {
                        point: [0.0; 3],
                        normal: [1.0, 0.0, 0.0],
                    }],
                ),
            ]),
            SymmetryTag::Radial { count, pivot } => Ok((0..*count)
                .map(|k| {
                    (
                        format!("_{}", k + 1),
                        vec![ProgramOp::RadialArray {
                            pivot: *pivot,
                            axis: [0.0, 0.0, 1.0],
                            count: *count,
                            index: k,
                        }],
                    )
                })
                .collect()),
        }
    }

    fn walk(
        part: &PartSpec,
        plan_prefix: &str,
        name_prefix: &str,
        pose: &RigidTransform,
        inherited_ops: &[ProgramOp],
        movable_root: Option<&str>,
        out: &mut Vec<PartInstance>,
    ) -> Result<(), LowerError> {
        let plan_path = if plan_prefix.is_empty() {
            part.name.clone()
        } else {
            format!("{plan_prefix}/{}", part.name)
        };
        let own_pose = pose.compose(&part.local_pose);
        for (suffix, ops) in own_instances(part, &plan_path)? {
            let instance_name = format!("{name_prefix}{}{suffix}", part.name);
            let mut sym_ops = ops.clone();
            sym_ops.extend_from_slice(inherited_ops);
            let root = movable_root
                .map(str::to_string)
                .or_else(|| part.movable.then(|| instance_name.clone()));
            let mut leaf = part.clone();
            leaf.sub_parts = Vec::new();
            out.push(PartInstance {
                plan_path: plan_path.clone(),
                name: instance_name.clone(),
                movable_root: root.clone(),
                spec: leaf,
                pose: own_pose,
                sym_ops: sym_ops.clone(),
            });
            for sp in &part.sub_parts {
                walk(
                    sp,
                    &plan_path,
                    &format!("{instance_name}/"),
                    &own_pose,
                    &sym_ops,
                    root.as_deref(),
                    out,
                )?;
            }
        }
        Ok(())
    }

    let mut out = Vec::new();
    for part in &plan.parts {
        walk(
            part,
            "",
            "",
            &RigidTransform::identity(),
            &[],
            None,
            &mut out,
        )?;
    }
    Ok(out)
}

/// Unit-space revolve profiles keyed by part role; `r` and `z` both in
/// [0, 1], ordered bottom-to-top along the outer surface.
fn unit_profile_for_role(role: &str) -> Vec<[f64; 2]> {
    let lower = role.to_lowercase();
    let has = |s: &str| lower.contains(s);
    if has("shade") {
        // Truncated cone shell, open at both ends.
        return vec![[1.0, 0.0], [0.9, 0.25], [0.8, 0.5], [0.7, 0.75], [0.6, 1.0]];
    }
    if has("plate") || has("dish") || has("saucer") || has("coaster") {
        return vec![[0.0, 0.0], [0.35, 0.0], [0.7, 0.1], [1.0, 1.0]];
    }
    if has("vase") {
        return vec![
            [0.0, 0.0],
            [0.6, 0.0],
            [0.9, 0.1],
            [1.0, 0.35],
            [0.85, 0.65],
            [0.7, 0.85],
            [0.75, 1.0],
        ];
    }
    if has("pot") {
        return vec![[0.0, 0.0], [0.75, 0.0], [1.0, 1.0]];
    }
    if has("bowl") {
        let n = 10;
        return (0..=n)
            .map(|k| {
                let t = std::f64::consts::FRAC_PI_2 * k as f64 / n as f64;
                [t.sin(), 1.0 - t.cos()]
            })
            .collect();
    }
    // Default: straight-walled cup shell with a bottom.
    vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]
}

/// Shell wall thickness for a solidified revolve part.
fn shell_thickness(extents: Vec3) -> f64 {
    let min_ext = extents.x.min(extents.y).min(extents.z);
    (0.06 * min_ext).clamp(0.0015, 0.02)
}

fn primitive_spec_for(part: &PartSpec) -> Result<(PrimitiveSpec, bool), LowerError> {
    let [dx, _dy, dz] = part.dims;
    Ok(match part.primitive {
        PrimitiveKind::Box => (
            PrimitiveSpec::Box { extents: part.dims },
            false,
        ),
        PrimitiveKind::Cyl => (
            PrimitiveSpec::Cyl {
                radius: dx * 0.5,
                height: dz,
            },
            false,
        ),
        PrimitiveKind::Sph => (PrimitiveSpec::Sph { radius: dx * 0.5 }, false),
        PrimitiveKind::Torus => {
            let minor = dz * 0.5;
            let major = dx * 0.5 - minor;
            if major <= minor {
                return Err(LowerError::BadTorusDims(part.name.clone()));
            }
            (
                PrimitiveSpec::Torus {
                    major_radius: major,
                    minor_radius: minor,
                },
                false,
            )
        }
        PrimitiveKind::Curve => {
            // Scale the role profile into the dims box, z-centered; the
            // open shell is then closed by a solidify pass.
            let unit = unit_profile_for_role(&part.name);
            let profile: Vec<[f64; 2]> = unit
                .iter()
                .map(|p| [p[0] * dx * 0.5, p[1] * dz - dz * 0.5])
                .collect();
            (
                PrimitiveSpec::Curve {
                    profile,
                    closed: false,
                },
                true,
            )
        }
    })
}

/// Lower a verified plan into one program per flattened part instance.
pub fn compile_plan_to_programs(plan: &ObjectPlan) -> Result<Vec<PartProgram>, LowerError> {
    let instances = expand_instances(plan)?;
    let mut programs = Vec::with_capacity(instances.len());
    for inst in instances {
        let (spec, needs_solidify) = primitive_spec_for(&inst.spec)?;
        let kind = inst.spec.primitive;
        let mut ops = vec![ProgramOp::CreatePrimitive {
            spec,
            segments: default_segments(kind),
        }];
        if needs_solidify {
            ops.push(ProgramOp::Solidify {
                thickness: shell_thickness(inst.spec.local_extents()),
            });
        }
        let uv_kind = if inst.spec.material.image_texture.is_some() && kind == PrimitiveKind::Box {
            UvKind::CanvasFront
        } else {
            UvKind::from(kind)
        };
        ops.push(ProgramOp::GenerateUv { kind: uv_kind });
        ops.push(ProgramOp::AssignMaterial {
            material: inst.spec.material.clone(),
            selector: FaceSelector::All,
        });
        ops.push(ProgramOp::Transform { pose: inst.pose });
        ops.extend(inst.sym_ops.iter().cloned());
        programs.push(PartProgram {
            part_name: inst.name,
            ops,
        });
    }
    Ok(programs)
}

/// Two-budget loop limits: `k_exec` repair attempts per part and `k_ref`
/// critic-driven refinement rounds per object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopBudgets {
    pub k_exec: u32,
    pub k_ref: u32,
}

impl Default for LoopBudgets {
    fn default() -> Self {
        Self { k_exec: 3, k_ref: 2 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::MaterialSpec;
    use crate::plan::{JointHint, PlanProvenance};

    fn gray() -> MaterialSpec {
        MaterialSpec::flat("gray", [0.5, 0.5, 0.5])
    }

    #[test]
    fn radial_tag_expands_to_named_instances() {
        let plan = ObjectPlan {
            category: "table".into(),
            style: String::new(),
            target_dims: [1.0, 1.0, 0.75],
            parts: vec![
                PartSpec::new("top", PrimitiveKind::Box, [1.0, 1.0, 0.04], gray())
                    .at(Vec3::new(0.0, 0.0, 0.73)),
                PartSpec::new("leg", PrimitiveKind::Box, [0.05, 0.05, 0.71], gray())
                    .at(Vec3::new(0.42, 0.42, 0.355))
                    .with_symmetry(SymmetryTag::Radial {
                        count: 4,
                        pivot: [0.0; 3],
                    }),
            ],
            provenance: PlanProvenance::Template,
        };
        let programs = compile_plan_to_programs(&plan).unwrap();
        let names: Vec<_> = programs.iter().map(|p| p.part_name.as_str()).collect();
        assert_eq!(names, vec!["top", "leg_1", "leg_2", "leg_3", "leg_4"]);
        for p in &programs {
            p.validate().unwrap();
        }
    }

    #[test]
    fn sub_parts_get_qualified_names() {
        let plan = ObjectPlan {
            category: "cabinet".into(),
            style: String::new(),
            target_dims: [0.8, 0.4, 1.0],
            parts: vec![PartSpec::new("body", PrimitiveKind::Box, [0.8, 0.4, 1.0], gray())
                .at(Vec3::new(0.0, 0.0, 0.5))
                .with_sub_parts(vec![
                    PartSpec::new("shelf_1", PrimitiveKind::Box, [0.76, 0.36, 0.02], gray()),
                    PartSpec::new("shelf_2", PrimitiveKind::Box, [0.76, 0.36, 0.02], gray())
                        .at(Vec3::new(0.0, 0.0, 0.3)),
                ])],
            provenance: PlanProvenance::Template,
        };
        let programs = compile_plan_to_programs(&plan).unwrap();
        let names: Vec<_> = programs.iter().map(|p| p.part_name.as_str()).collect();
        assert_eq!(names, vec!["body", "body/shelf_1", "body/shelf_2"]);
    }

    #[test]
    fn movable_with_symmetry_is_a_lowering_error() {
        let plan = ObjectPlan {
            category: "nightstand".into(),
            style: String::new(),
            target_dims: [0.5, 0.5, 0.6],
            parts: vec![PartSpec::new("drawer", PrimitiveKind::Box, [0.4, 0.5, 0.15], gray())
                .movable(JointHint::Sliding)
                .with_symmetry(SymmetryTag::MirrorX)],
            provenance: PlanProvenance::Template,
        };
        assert!(matches!(
            compile_plan_to_programs(&plan),
            Err(LowerError::UnloweredSymmetry(_))
        ));
    }

    #[test]
    fn program_json_roundtrip() {
        let plan = ObjectPlan {
            category: "bowl".into(),
            style: String::new(),
            target_dims: [0.2, 0.2, 0.08],
            parts: vec![PartSpec::new("body", PrimitiveKind::Curve, [0.2, 0.2, 0.08], gray())
                .at(Vec3::new(0.0, 0.0, 0.04))],
            provenance: PlanProvenance::Template,
        };
        let programs = compile_plan_to_programs(&plan).unwrap();
        let json = serde_json::to_string_pretty(&programs).unwrap();
        let back: Vec<PartProgram> = serde_json::from_str(&json).unwrap();
        assert_eq!(programs, back);
        assert!(json.contains("\"op\": \"create_primitive\""));
        assert!(json.contains("\"op\": \"solidify\""));
    }

    #[test]
    fn default_budgets_match_loop_constants() {
        let b = LoopBudgets::default();
        assert_eq!((b.k_exec, b.k_ref), (3, 2));
    }
}
