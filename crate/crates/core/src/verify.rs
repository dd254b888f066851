//! Plan verification: four rule families that repair or reject object
//! plans before any geometry is built.
//!
//! - completeness: missing required roles are inserted, duplicate roles
//!   removed;
//! - dimension plausibility: sub-millimeter part dims are clamped and
//!   oversized plans rescaled to the target dimensions;
//! - spatial consistency: floating components are translated into contact
//!   and parts below the ground plane lifted;
//! - movable-part independence: movable parts fused through mirror/array
//!   symmetry are rejected, missing independence flags repaired.
//!
//! `verify` runs all four in order, applies fixes, then re-runs the checks
//! once: a plan that still raises fixable issues is reported as
//! non-convergent instead of being silently looped.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{MaterialSpec, PrimitiveKind};
use crate::model::{Aabb, RigidTransform, Vec3, DIM_RANGE};
use crate::plan::{ObjectPlan, PartSpec, SymmetryTag};
use crate::router::CategoryOntology;

/// Minimum part dimension; anything smaller is clamped here.
pub const MIN_PART_DIM: f64 = 0.001;
/// Union AABB slack over the target dims before a rescale fix kicks in.
pub const OVERFLOW_TOLERANCE: f64 = 1.05;
/// AABB inflation for the part-connectivity graph.
pub const CONNECT_INFLATION: f64 = 0.005;
/// Parts may dip below the ground plane by this much.
pub const GROUND_TOLERANCE: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Completeness,
    Dimension,
    Spatial,
    MovableIndependence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Fixed,
    Rejected,
}

/// One finding: which rule fired, whether it was repaired or fatal, and on
/// which part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Issue {
    pub rule: RuleKind,
    pub severity: Severity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<String>,
    pub detail: String,
}

impl Issue {
    fn fixed(rule: RuleKind, part: Option<&str>, detail: impl Into<String>) -> Self {
        Issue {
            rule,
            severity: Severity::Fixed,
            part: part.map(str::to_string),
            detail: detail.into(),
        }
    }

    fn rejected(rule: RuleKind, part: Option<&str>, detail: impl Into<String>) -> Self {
        Issue {
            rule,
            severity: Severity::Rejected,
            part: part.map(str::to_string),
            detail: detail.into(),
        }
    }
}

/// Verification outcome: the issue log plus the repaired plan when nothing
/// fatal was found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub issues: Vec<Issue>,
    pub verified_plan: Option<ObjectPlan>,
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.verified_plan.is_some()
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum VerifyError {
    #[error("fixes did not converge; {} issue(s) remain after re-run", remaining.len())]
    NonConvergent { remaining: Vec<Issue> },
}

/// Part completeness: remove duplicate roles, insert missing required ones
/// from the category's ontology entry.
pub fn check_completeness(plan: &mut ObjectPlan, ont: &CategoryOntology) -> Vec<Issue> {
    let mut issues = Vec::new();

    // Duplicate roles (path-qualified) are removed beyond the first.
    fn dedup(parts: &mut Vec<PartSpec>, prefix: &str, issues: &mut Vec<Issue>) {
        let mut seen = std::collections::BTreeSet::new();
        parts.retain(|p| {
            let path = if prefix.is_empty() {
                p.name.clone()
            } else {
                format!("{prefix}/{}", p.name)
            };
            if seen.contains(&path) {
                issues.push(Issue::fixed(
                    RuleKind::Completeness,
                    Some(&path),
                    "duplicate part role removed",
                ));
                false
            } else {
                seen.insert(path);
                true
            }
        });
        for p in parts.iter_mut() {
            let path = if prefix.is_empty() {
                p.name.clone()
            } else {
                format!("{prefix}/{}", p.name)
            };
            dedup(&mut p.sub_parts, &path, issues);
        }
    }
    dedup(&mut plan.parts, "", &mut issues);

    let Some((_, entry)) = ont.resolve(&plan.category) else {
        issues.push(Issue::fixed(
            RuleKind::Completeness,
            None,
            format!(
                "category '{}' not in ontology; completeness check skipped",
                plan.category
            ),
        ));
        return issues;
    };

    let role_present = |parts: &[PartSpec], role: &str| -> bool {
        parts
            .iter()
            .any(|p| p.name == role || p.name.starts_with(&format!("{role}_")))
    };
    let d = plan.dims();
    for role in entry.required_parts.clone() {
        if role_present(&plan.parts, &role) {
            continue;
        }
        // Default-dimension stand-in: a box at a fifth of the target dims,
        // resting on the local ground plane.
        let dims = [
            (d.x / 5.0).max(2.0 * MIN_PART_DIM),
            (d.y / 5.0).max(2.0 * MIN_PART_DIM),
            (d.z / 5.0).max(2.0 * MIN_PART_DIM),
        ];
        let movable = entry.movable_roles.iter().any(|m| m == &role);
        let mut part = PartSpec::new(
            role.clone(),
            PrimitiveKind::Box,
            dims,
            MaterialSpec::flat("default", [0.6, 0.6, 0.6]).with_roughness(0.8),
        )
        .at(Vec3::new(0.0, 0.0, dims[2] * 0.5));
        part.movable = movable;
        part.must_be_independent = movable;
        plan.parts.push(part);
        issues.push(Issue::fixed(
            RuleKind::Completeness,
            Some(&role),
            "missing required part inserted with default dimensions",
        ));
    }
    issues
}

/// Dimension plausibility: reject out-of-range target dims, clamp
/// sub-millimeter part dims, rescale plans overflowing the target box.
pub fn check_dimensions(plan: &mut ObjectPlan) -> Vec<Issue> {
    let mut issues = Vec::new();
    let d = plan.dims();
    if d.iter().any(|&c| c < DIM_RANGE.0 || c > DIM_RANGE.1) {
        issues.push(Issue::rejected(
            RuleKind::Dimension,
            None,
            format!(
                "target dims {:?} outside [{}, {}] m",
                plan.target_dims, DIM_RANGE.0, DIM_RANGE.1
            ),
        ));
        return issues;
    }

    fn clamp_parts(parts: &mut [PartSpec], prefix: &str, issues: &mut Vec<Issue>) {
        for p in parts.iter_mut() {
            let path = if prefix.is_empty() {
                p.name.clone()
            } else {
                format!("{prefix}/{}", p.name)
            };
            if p.dims.iter().any(|&v| v < MIN_PART_DIM) {
                for v in p.dims.iter_mut() {
                    *v = v.max(MIN_PART_DIM);
                }
                issues.push(Issue::fixed(
                    RuleKind::Dimension,
                    Some(&path),
                    format!("part dimension below {MIN_PART_DIM} m clamped"),
                ));
            }
            clamp_parts(&mut p.sub_parts, &path, issues);
        }
    }
    clamp_parts(&mut plan.parts, "", &mut issues);

    if let Some(bb) = plan.union_aabb() {
        let ext = bb.extents();
        let mut scale = 1.0_f64;
        for i in 0..3 {
            let limit = OVERFLOW_TOLERANCE * d[i];
            if ext[i] > limit {
                scale = scale.min(limit / ext[i]);
            }
        }
        if scale < 1.0 {
            fn rescale(parts: &mut [PartSpec], s: f64) {
                for p in parts.iter_mut() {
                    for v in p.dims.iter_mut() {
                        *v *= s;
                    }
                    p.local_pose.translation *= s;
                    if let SymmetryTag::Radial { pivot, .. } = &mut p.symmetry_tag {
                        for c in pivot.iter_mut() {
                            *c *= s;
                        }
                    }
                    rescale(&mut p.sub_parts, s);
                }
            }
            rescale(&mut plan.parts, scale);
            issues.push(Issue::fixed(
                RuleKind::Dimension,
                None,
                format!("parts overflow target dims; uniformly rescaled by {scale:.6}"),
            ));
        }
    }
    issues
}

/// Spatial consistency: connect floating components to the main body and
/// lift parts that dip below the local ground plane.
pub fn check_spatial(plan: &mut ObjectPlan) -> Vec<Issue> {
    let mut issues = Vec::new();
    let identity = RigidTransform::identity();

    // Connectivity over top-level parts: edge when inflated subtree AABBs
    // intersect.
    let n = plan.parts.len();
    if n > 1 {
        let boxes: Vec<Aabb> = plan
            .parts
            .iter()
            .map(|p| p.subtree_aabb(&identity).inflate(CONNECT_INFLATION))
            .collect();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if boxes[i].intersects(&boxes[j]) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let mut components: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let root = find(&mut parent, i);
            components.entry(root).or_default().push(i);
        }
        if components.len() > 1 {
            // Largest component wins; ties break toward the earliest part.
            let main_root = *components
                .iter()
                .max_by_key(|(root, members)| (members.len(), std::cmp::Reverse(**root)))
                .map(|(root, _)| root)
                .unwrap();
            let main_box = components[&main_root]
                .iter()
                .map(|&i| plan.parts[i].subtree_aabb(&identity))
                .reduce(|a, b| a.union(&b))
                .unwrap();
            let floating: Vec<(usize, Vec<usize>)> = components
                .iter()
                .filter(|(root, _)| **root != main_root)
                .map(|(root, members)| (*root, members.clone()))
                .collect();
            for (_, members) in floating {
                let comp_box = members
                    .iter()
                    .map(|&i| plan.parts[i].subtree_aabb(&identity))
                    .reduce(|a, b| a.union(&b))
                    .unwrap();
                // Shortest positive gap axis; when the boxes already
                // overlap, align centers along the least-overlapping axis.
                let mut best_axis = 0;
                let mut best_gap = f64::INFINITY;
                let mut shift = Vec3::zeros();
                for axis in 0..3 {
                    let gap_pos = main_box.min[axis] - comp_box.max[axis];
                    let gap_neg = comp_box.min[axis] - main_box.max[axis];
                    let gap = gap_pos.max(gap_neg);
                    if gap > 0.0 && gap < best_gap {
                        best_gap = gap;
                        best_axis = axis;
                        shift = Vec3::zeros();
                        shift[axis] = if gap_pos > 0.0 { gap } else { -gap };
                    }
                }
                if best_gap == f64::INFINITY {
                    // Overlapping unions but disconnected parts: center the
                    // component on the axis with the largest center offset.
                    let delta = main_box.center() - comp_box.center();
                    let axis = (0..3)
                        .max_by(|&a, &b| delta[a].abs().partial_cmp(&delta[b].abs()).unwrap())
                        .unwrap();
                    best_axis = axis;
                    shift = Vec3::zeros();
                    shift[axis] = delta[axis];
                }
                for &i in &members {
                    plan.parts[i].local_pose.translation += shift;
                }
                let names: Vec<&str> = members.iter().map(|&i| plan.parts[i].name.as_str()).collect();
                issues.push(Issue::fixed(
                    RuleKind::Spatial,
                    Some(&names.join(",")),
                    format!(
                        "floating component translated {:.4} m along axis {} into contact",
                        shift[best_axis], best_axis
                    ),
                ));
            }
        }
    }

    // Ground plane: lift parts whose subtree dips below -1 mm.
    for p in plan.parts.iter_mut() {
        let bb = p.subtree_aabb(&identity);
        if bb.min.z < -GROUND_TOLERANCE {
            p.local_pose.translation.z -= bb.min.z;
            issues.push(Issue::fixed(
                RuleKind::Spatial,
                Some(&p.name),
                format!("part below local ground plane lifted by {:.4} m", -bb.min.z),
            ));
        }
    }
    issues
}

/// Movable-part independence: movable parts must not be generated through
/// mirror or radial symmetry, and must carry the independence flag.
pub fn check_movable_independence(plan: &mut ObjectPlan) -> Vec<Issue> {
    let mut issues = Vec::new();
    fn walk(parts: &mut [PartSpec], prefix: &str, issues: &mut Vec<Issue>) {
        for p in parts.iter_mut() {
            let path = if prefix.is_empty() {
                p.name.clone()
            } else {
                format!("{prefix}/{}", p.name)
            };
            if !p.symmetry_tag.is_none() && p.subtree_has_movable() {
                issues.push(Issue::rejected(
                    RuleKind::MovableIndependence,
                    Some(&path),
                    "movable part would be fused through a mirror/array operation",
                ));
            }
            if p.movable && !p.must_be_independent {
                p.must_be_independent = true;
                issues.push(Issue::fixed(
                    RuleKind::MovableIndependence,
                    Some(&path),
                    "movable part marked must_be_independent",
                ));
            }
            walk(&mut p.sub_parts, &path, issues);
        }
    }
    walk(&mut plan.parts, "", &mut issues);
    issues
}

fn run_all(plan: &mut ObjectPlan, ont: &CategoryOntology) -> Vec<Issue> {
    let mut issues = check_completeness(plan, ont);
    issues.extend(check_dimensions(plan));
    if issues.iter().any(|i| i.severity == Severity::Rejected) {
        return issues;
    }
    issues.extend(check_spatial(plan));
    issues.extend(check_movable_independence(plan));
    issues
}

/// Run the four checks in order, apply fixes, and re-run once to confirm a
/// fixed point. Rejected when any fatal issue is found; non-convergent when
/// fixes breed new fixable issues.
pub fn verify(plan: &ObjectPlan, ont: &CategoryOntology) -> Result<VerificationReport, VerifyError> {
    let mut work = plan.clone();
    let mut issues = run_all(&mut work, ont);
    if issues.iter().any(|i| i.severity == Severity::Rejected) {
        issues.retain(|i| i.severity == Severity::Rejected || i.severity == Severity::Fixed);
        return Ok(VerificationReport {
            issues,
            verified_plan: None,
        });
    }
    // Re-run on a copy: the fixed plan must be a fixed point. The
    // category-missing warning repeats by construction and does not count.
    let mut audit = work.clone();
    let remaining: Vec<Issue> = run_all(&mut audit, ont)
        .into_iter()
        .filter(|i| !i.detail.contains("completeness check skipped"))
        .collect();
    if !remaining.is_empty() {
        return Err(VerifyError::NonConvergent { remaining });
    }
    Ok(VerificationReport {
        issues,
        verified_plan: Some(work),
    })
}
