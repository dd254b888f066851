//! Deterministic template backend: a library of parameterized object plans
//! covering the shipped category set. Templates scale to the requested
//! dimensions, pick materials from the style string, and verify cleanly
//! against the shipped ontology.
//!
//! Repair is parameter clamping only (halve solidify thickness or bevel
//! width); the backend does not revise plans.

use super::{BackendCaps, BackendError, PlannerBackend};
use crate::kernel::{MaterialSpec, PrimitiveKind, srgb_to_linear};
use crate::model::{AssetRequest, RigidTransform, Vec3};
use crate::plan::{JointHint, ObjectPlan, PartSpec, PlanProvenance, SymmetryTag};
use crate::program::{ExecError, PartProgram, ProgramOp};
use crate::router::{default_ontology, CategoryOntology, Strategy};

pub struct TemplateBackend {
    ontology: CategoryOntology,
}

impl Default for TemplateBackend {
    fn default() -> Self {
        Self::new()
    }
}

impl TemplateBackend {
    pub fn new() -> Self {
        Self {
            ontology: default_ontology(),
        }
    }

    pub fn with_ontology(ontology: CategoryOntology) -> Self {
        Self { ontology }
    }

    /// Template library keys, for enumeration in tests and docs.
    pub fn template_categories() -> &'static [&'static str] {
        &[
            "table",
            "chair",
            "stool",
            "bed",
            "sofa",
            "shelf",
            "nightstand",
            "cabinet",
            "wardrobe",
            "refrigerator",
            "bowl",
            "plate",
            "mug",
            "vase",
            "lamp",
            "potted plant",
            "rug",
            "poster",
            "mirror",
            "wall clock",
            "monitor",
            "office chair",
            "trash can",
            "pendulum clock",
            "crate",
        ]
    }

    /// Build the template plan for a category, already sized to `dims`.
    pub fn plan_for(&self, category: &str, dims: Vec3, style: &str) -> Option<ObjectPlan> {
        let key = self
            .ontology
            .resolve(category)
            .map(|(k, _)| k.to_string())
            .unwrap_or_else(|| crate::router::normalize_category(category));
        let builder = builder_for(&key)?;
        let mut plan = builder(dims, &Palette::new(&key, style));
        plan.category = key;
        plan.style = style.to_string();
        plan.provenance = PlanProvenance::Template;
        Some(plan)
    }
}

impl PlannerBackend for TemplateBackend {
    fn capabilities(&self) -> BackendCaps {
        BackendCaps {
            can_propose: true,
            can_repair: true,
            can_revise: false,
            can_critique: false,
        }
    }

    fn ontology(&self) -> &CategoryOntology {
        &self.ontology
    }

    fn propose_plan(
        &self,
        req: &AssetRequest,
        strategy: Strategy,
    ) -> Result<ObjectPlan, BackendError> {
        // Thin coverings always use the fixed template, bypassing category
        // specifics.
        if strategy == Strategy::ThinCover {
            let mut plan = rug(req.dims(), &Palette::new("rug", &req.style));
            plan.category = "rug".into();
            plan.style = req.style.clone();
            return Ok(plan);
        }
        self.plan_for(&req.category, req.dims(), &req.style)
            .ok_or_else(|| BackendError::NoTemplate(req.category.clone()))
    }

    fn repair_program(
        &self,
        prog: &PartProgram,
        err: &ExecError,
    ) -> Result<PartProgram, BackendError> {
        // Minimal deterministic repair: clamp the offending op's parameter.
        let mut repaired = prog.clone();
        match repaired.ops.get_mut(err.op_index) {
            Some(ProgramOp::Solidify { thickness }) => *thickness *= 0.5,
            Some(ProgramOp::Bevel { width, .. }) => *width *= 0.5,
            _ => return Err(BackendError::Unsupported("repair of this op".into())),
        }
        Ok(repaired)
    }

    fn revise_plan(
        &self,
        _plan: &ObjectPlan,
        _reasons: &[String],
    ) -> Result<ObjectPlan, BackendError> {
        Err(BackendError::Unsupported("plan revision".into()))
    }
}

// ---------------------------------------------------------------------------
// Materials
// ---------------------------------------------------------------------------

/// Style-derived material palette for one object.
struct Palette {
    family: &'static str,
    color: Option<[f64; 3]>,
}

fn linear_rgb(r: u8, g: u8, b: u8) -> [f64; 3] {
    [
        srgb_to_linear(r as f64 / 255.0),
        srgb_to_linear(g as f64 / 255.0),
        srgb_to_linear(b as f64 / 255.0),
    ]
}

impl Palette {
    fn new(category: &str, style: &str) -> Self {
        let text = format!("{category} {style}").to_lowercase();
        let has = |s: &str| text.contains(s);
        let family = if has("metal") || has("steel") || has("stainless") || has("iron") || has("alumin") {
            "metal"
        } else if has("glass") {
            "glass"
        } else if has("fabric") || has("velvet") || has("linen") || has("upholster") {
            "fabric"
        } else if has("ceramic") || has("porcelain") {
            "ceramic"
        } else if has("plastic") {
            "plastic"
        } else if has("wood") || has("oak") || has("walnut") || has("pine") || has("rustic") {
            "wood"
        } else {
            ""
        };
        let color = [
            ("black", linear_rgb(30, 30, 32)),
            ("white", linear_rgb(235, 235, 230)),
            ("red", linear_rgb(170, 40, 35)),
            ("green", linear_rgb(60, 120, 60)),
            ("blue", linear_rgb(50, 80, 150)),
            ("yellow", linear_rgb(210, 180, 60)),
            ("tan", linear_rgb(205, 170, 125)),
            ("brown", linear_rgb(110, 75, 45)),
            ("gray", linear_rgb(128, 128, 128)),
            ("grey", linear_rgb(128, 128, 128)),
        ]
        .iter()
        .find(|(name, _)| has(name))
        .map(|(_, rgb)| *rgb);
        Self { family, color }
    }

    fn with_family(&self, default_family: &'static str) -> &'static str {
        if self.family.is_empty() {
            default_family
        } else {
            self.family
        }
    }

    /// Material for a part, honoring style color/family overrides.
    fn material(&self, name: &str, default_family: &'static str) -> MaterialSpec {
        let family = self.with_family(default_family);
        let (color, rough, metal) = match family {
            "wood" => (linear_rgb(133, 94, 66), 0.65, 0.0),
            "metal" => (linear_rgb(160, 163, 168), 0.35, 1.0),
            "plastic" => (linear_rgb(200, 200, 205), 0.5, 0.0),
            "glass" => (linear_rgb(220, 230, 235), 0.05, 0.0),
            "fabric" => (linear_rgb(150, 140, 130), 0.9, 0.0),
            "ceramic" => (linear_rgb(225, 222, 215), 0.25, 0.0),
            _ => (linear_rgb(150, 150, 150), 0.6, 0.0),
        };
        let mut m = MaterialSpec::flat(format!("{name}_{family}"), self.color.unwrap_or(color))
            .with_roughness(rough)
            .with_metallic(metal);
        if family == "glass" {
            m = m.with_alpha(0.35);
        }
        m
    }
}

// ---------------------------------------------------------------------------
// Template builders
// ---------------------------------------------------------------------------

type Builder = fn(Vec3, &Palette) -> ObjectPlan;

fn builder_for(key: &str) -> Option<Builder> {
    let b: Builder = match key {
        "table" | "dining table" | "coffee table" | "side table" | "bar table"
        | "bistro table" | "desk" | "gaming desk" | "plant stand" | "tv stand" | "sideboard"
        | "vanity" | "ladder" => table,
        "chair" | "dining chair" => chair,
        "stool" | "bar stool" | "bench" => stool,
        "bed" | "twin bed" | "double bed" | "king-size bed" | "queen bed" => bed,
        "sofa" | "couch" | "armchair" | "loveseat" | "bean bag chair" => sofa,
        "shelf" | "bookshelf" | "bookcase" | "display shelf" | "pantry shelf"
        | "shelving unit" | "wall shelf" => shelf,
        "floor lamp" | "lamp" | "table lamp" | "desk lamp" => lamp,
        "mirror" | "tall mirror" => mirror,
        "wall clock" | "clock" => wall_clock,
        "bowl" | "fruit bowl" => bowl,
        "plate" | "dish" | "saucer" | "coaster" => plate,
        "vase" => vase,
        "mug" | "cup" | "teacup" => mug,
        "monitor" | "tv" | "flatscreen tv" | "television" => monitor,
        "flower pot" | "potted plant" | "plant" | "herb planter" => potted_plant,
        "nightstand" | "night stand" | "bedside table" | "dresser" | "filing cabinet"
        | "drawer unit" | "chest of drawers" => nightstand,
        "cabinet" | "wine cabinet" | "kitchen cabinet" | "cupboard" | "hutch" => cabinet,
        "wardrobe" | "closet" | "armoire" => wardrobe,
        "refrigerator" | "fridge" | "mini fridge" | "freezer" | "oven" | "microwave"
        | "dishwasher" | "washing machine" | "dryer" | "toaster" => refrigerator,
        "office chair" | "rolling chair" => office_chair,
        "trash can" | "kettle" | "thermos" | "hinged box" | "mailbox" | "laptop" => lid_box,
        "cuckoo clock" | "pendulum clock" => pendulum_clock,
        "rug" | "carpet" | "mat" | "doormat" | "area rug" => rug,
        "poster" | "painting" | "artwork" | "picture frame" | "framed photo"
        | "framed artwork" | "canvas print" | "mural" | "print" | "wall art" | "photo" => poster,
        "sconce" | "ceiling lamp" | "pendant light" | "light switch" | "ceiling fan"
        | "treadmill" | "exercise bike" | "pool table" | "popcorn machine" | "bicycle"
        | "fork" | "spoon" | "book" | "tape" | "scissors" | "whole fruit" | "fruit" | "apple"
        | "jug" | "phone" | "remote control" | "toy" | "usb stick" | "chopsticks"
        | "hardware" | "crate" | "tire" | "basket" | "laundry hamper" | "box" => generic_box,
        _ => return None,
    };
    Some(b)
}

fn plan(category: &str, d: Vec3, parts: Vec<PartSpec>) -> ObjectPlan {
    ObjectPlan {
        category: category.into(),
        style: String::new(),
        target_dims: [d.x, d.y, d.z],
        parts,
        provenance: PlanProvenance::Template,
    }
}

/// Carcass wall thickness for case furniture.
fn wall(d: Vec3) -> f64 {
    (0.04 * d.x.min(d.y)).clamp(0.008, 0.03)
}

/// Pose of `child_world` expressed in the frame of `parent_world`.
fn relative_to(parent_world: &RigidTransform, child_world: &RigidTransform) -> RigidTransform {
    parent_world.inverse().compose(child_world)
}

fn table(d: Vec3, pal: &Palette) -> ObjectPlan {
    let top_t = (0.06 * d.z).clamp(0.015, 0.05);
    let leg_w = (0.08 * d.x.min(d.y)).clamp(0.02, 0.08);
    let leg_h = d.z - top_t;
    let inset = leg_w * 0.5;
    let lx = d.x * 0.5 - leg_w * 0.5 - inset;
    let ly = d.y * 0.5 - leg_w * 0.5 - inset;
    let mat = pal.material("table", "wood");
    let mut parts = vec![PartSpec::new(
        "top",
        PrimitiveKind::Box,
        [d.x, d.y, top_t],
        mat.clone(),
    )
    .at(Vec3::new(0.0, 0.0, d.z - top_t * 0.5))];
    if (d.x - d.y).abs() < 1e-9 {
        // Square top: one leg arrayed at quarter turns.
        parts.push(
            PartSpec::new("leg", PrimitiveKind::Box, [leg_w, leg_w, leg_h], mat)
                .at(Vec3::new(lx, ly, leg_h * 0.5))
                .with_symmetry(SymmetryTag::Radial {
                    count: 4,
                    pivot: [0.0, 0.0, 0.0],
                }),
        );
    } else {
        // Rectangular top: two diagonal leg pairs.
        for (name, x, y) in [("leg_a", lx, -ly), ("leg_b", lx, ly)] {
            parts.push(
                PartSpec::new(name, PrimitiveKind::Box, [leg_w, leg_w, leg_h], mat.clone())
                    .at(Vec3::new(x, y, leg_h * 0.5))
                    .with_symmetry(SymmetryTag::Radial {
                        count: 2,
                        pivot: [0.0, 0.0, 0.0],
                    }),
            );
        }
    }
    plan("table", d, parts)
}

fn chair(d: Vec3, pal: &Palette) -> ObjectPlan {
    let seat_t = (0.06 * d.z).clamp(0.015, 0.05);
    let seat_h = 0.5 * d.z;
    let leg_w = (0.1 * d.x).clamp(0.02, 0.06);
    let back_t = (0.1 * d.y).clamp(0.015, 0.05);
    let mat = pal.material("chair", "wood");
    let lx = d.x * 0.5 - leg_w * 0.5;
    let ly = d.y * 0.5 - leg_w * 0.5;
    let mut legs = PartSpec::new(
        "leg",
        PrimitiveKind::Box,
        [leg_w, leg_w, seat_h - seat_t],
        mat.clone(),
    )
    .at(Vec3::new(lx, ly, (seat_h - seat_t) * 0.5));
    if (d.x - d.y).abs() < 1e-9 {
        legs = legs.with_symmetry(SymmetryTag::Radial {
            count: 4,
            pivot: [0.0, 0.0, 0.0],
        });
    }
    plan(
        "chair",
        d,
        vec![
            PartSpec::new("seat", PrimitiveKind::Box, [d.x, d.y, seat_t], mat.clone())
                .at(Vec3::new(0.0, 0.0, seat_h - seat_t * 0.5)),
            PartSpec::new(
                "backrest",
                PrimitiveKind::Box,
                [d.x, back_t, d.z - seat_h],
                mat.clone(),
            )
            .at(Vec3::new(0.0, d.y * 0.5 - back_t * 0.5, seat_h + (d.z - seat_h) * 0.5)),
            legs,
        ],
    )
}

fn stool(d: Vec3, pal: &Palette) -> ObjectPlan {
    let seat_t = (0.08 * d.z).clamp(0.015, 0.05);
    let leg_w = (0.12 * d.x).clamp(0.02, 0.06);
    let mat = pal.material("stool", "wood");
    let lx = d.x * 0.5 - leg_w * 0.5;
    let ly = d.y * 0.5 - leg_w * 0.5;
    let mut legs = PartSpec::new(
        "leg",
        PrimitiveKind::Box,
        [leg_w, leg_w, d.z - seat_t],
        mat.clone(),
    )
    .at(Vec3::new(lx, ly, (d.z - seat_t) * 0.5));
    if (d.x - d.y).abs() < 1e-9 {
        legs = legs.with_symmetry(SymmetryTag::Radial {
            count: 4,
            pivot: [0.0, 0.0, 0.0],
        });
    }
    plan(
        "stool",
        d,
        vec![
            PartSpec::new("seat", PrimitiveKind::Box, [d.x, d.y, seat_t], mat.clone())
                .at(Vec3::new(0.0, 0.0, d.z - seat_t * 0.5)),
            legs,
        ],
    )
}

fn bed(d: Vec3, pal: &Palette) -> ObjectPlan {
    let frame_h = 0.35 * d.z;
    let head_t = (0.05 * d.y).clamp(0.02, 0.06);
    let wood = pal.material("bed_frame", "wood");
    let fabric = pal.material("mattress", "fabric");
    plan(
        "bed",
        d,
        vec![
            PartSpec::new(
                "frame",
                PrimitiveKind::Box,
                [d.x, d.y, frame_h],
                wood.clone(),
            )
            .at(Vec3::new(0.0, 0.0, frame_h * 0.5)),
            PartSpec::new(
                "mattress",
                PrimitiveKind::Box,
                [d.x * 0.96, d.y * 0.92, 0.3 * d.z],
                fabric,
            )
            .at(Vec3::new(0.0, -head_t * 0.5, frame_h + 0.15 * d.z)),
            PartSpec::new(
                "headboard",
                PrimitiveKind::Box,
                [d.x, head_t, d.z],
                wood,
            )
            .at(Vec3::new(0.0, d.y * 0.5 - head_t * 0.5, d.z * 0.5)),
        ],
    )
}

fn sofa(d: Vec3, pal: &Palette) -> ObjectPlan {
    let fabric = pal.material("sofa", "fabric");
    let base_h = 0.4 * d.z;
    let back_t = 0.22 * d.y;
    let arm_w = (0.12 * d.x).min(0.25);
    plan(
        "sofa",
        d,
        vec![
            PartSpec::new("base", PrimitiveKind::Box, [d.x, d.y, base_h], fabric.clone())
                .at(Vec3::new(0.0, 0.0, base_h * 0.5)),
            PartSpec::new(
                "backrest",
                PrimitiveKind::Box,
                [d.x, back_t, d.z - base_h],
                fabric.clone(),
            )
            .at(Vec3::new(0.0, d.y * 0.5 - back_t * 0.5, base_h + (d.z - base_h) * 0.5)),
            PartSpec::new(
                "armrest",
                PrimitiveKind::Box,
                [arm_w, d.y, 0.72 * d.z - base_h],
                fabric.clone(),
            )
            .at(Vec3::new(
                d.x * 0.5 - arm_w * 0.5,
                0.0,
                base_h + (0.72 * d.z - base_h) * 0.5,
            ))
            .with_symmetry(SymmetryTag::MirrorX),
            PartSpec::new(
                "cushion",
                PrimitiveKind::Box,
                [d.x - 2.0 * arm_w - 0.02, d.y - back_t, 0.1 * d.z],
                fabric,
            )
            .at(Vec3::new(0.0, -back_t * 0.5, base_h + 0.05 * d.z)),
        ],
    )
}

fn shelf(d: Vec3, pal: &Palette) -> ObjectPlan {
    let t = wall(d);
    let mat = pal.material("shelf", "wood");
    let mut parts = vec![PartSpec::new(
        "side",
        PrimitiveKind::Box,
        [t, d.y, d.z],
        mat.clone(),
    )
    .at(Vec3::new(d.x * 0.5 - t * 0.5, 0.0, d.z * 0.5))
    .with_symmetry(SymmetryTag::MirrorX)];
    let boards = 4;
    for k in 0..boards {
        let z = if k == 0 {
            t * 0.5
        } else {
            d.z * (k as f64 / (boards - 1) as f64) - t * 0.5
        };
        parts.push(
            PartSpec::new(
                format!("board_{}", k + 1),
                PrimitiveKind::Box,
                [d.x - 2.0 * t, d.y, t],
                mat.clone(),
            )
            .at(Vec3::new(0.0, 0.0, z.max(t * 0.5))),
        );
    }
    plan("shelf", d, parts)
}

fn lamp(d: Vec3, pal: &Palette) -> ObjectPlan {
    let metal = pal.material("lamp_hardware", "metal");
    let fabric = pal.material("lamp_shade", "fabric");
    let base_h = (0.03 * d.z).max(0.015);
    let shade_h = 0.22 * d.z;
    let pole_d = (0.05 * d.x).clamp(0.012, 0.05);
    plan(
        "floor lamp",
        d,
        vec![
            PartSpec::new(
                "base",
                PrimitiveKind::Cyl,
                [0.7 * d.x, 0.7 * d.x, base_h],
                metal.clone(),
            )
            .at(Vec3::new(0.0, 0.0, base_h * 0.5)),
            PartSpec::new(
                "pole",
                PrimitiveKind::Cyl,
                [pole_d, pole_d, d.z - base_h - shade_h * 0.5],
                metal,
            )
            .at(Vec3::new(0.0, 0.0, base_h + (d.z - base_h - shade_h * 0.5) * 0.5)),
            PartSpec::new(
                "shade",
                PrimitiveKind::Curve,
                [d.x, d.x, shade_h],
                fabric,
            )
            .at(Vec3::new(0.0, 0.0, d.z - shade_h * 0.5)),
        ],
    )
}

fn mirror(d: Vec3, pal: &Palette) -> ObjectPlan {
    let frame_mat = pal.material("mirror_frame", "wood");
    let mut plate_mat = MaterialSpec::flat("mirror_plate", linear_rgb(220, 225, 228))
        .with_roughness(0.03)
        .with_metallic(1.0);
    plate_mat.normal_map = None;
    plan(
        "mirror",
        d,
        vec![
            PartSpec::new(
                "frame",
                PrimitiveKind::Box,
                [d.x, d.y * 0.5, d.z],
                frame_mat,
            )
            .at(Vec3::new(0.0, d.y * 0.25, d.z * 0.5)),
            PartSpec::new(
                "plate",
                PrimitiveKind::Box,
                [d.x * 0.9, d.y * 0.5, d.z * 0.9],
                plate_mat,
            )
            .at(Vec3::new(0.0, -d.y * 0.25, d.z * 0.5)),
        ],
    )
}

fn wall_clock(d: Vec3, pal: &Palette) -> ObjectPlan {
    let metal = pal.material("clock_rim", "metal");
    let face_mat = MaterialSpec::flat("clock_face", linear_rgb(240, 238, 230)).with_roughness(0.4);
    let hand_mat = MaterialSpec::flat("clock_hand", linear_rgb(20, 20, 20)).with_roughness(0.4);
    // Face the -y direction: rotate the cylinder axis from +z onto -y.
    let facing = RigidTransform::rotation_about(Vec3::zeros(), Vec3::x(), std::f64::consts::FRAC_PI_2);
    let face_t = 0.5 * d.y;
    let mut face_pose = facing;
    face_pose.translation = Vec3::new(0.0, d.y * 0.25, d.z * 0.5);
    let mut rim_pose = facing;
    rim_pose.translation = Vec3::new(0.0, d.y * 0.25 - 0.01 * d.y, d.z * 0.5);
    plan(
        "wall clock",
        d,
        vec![
            PartSpec::new(
                "face",
                PrimitiveKind::Cyl,
                [0.94 * d.x, 0.94 * d.x, face_t],
                face_mat,
            )
            .posed(face_pose),
            PartSpec::new(
                "rim",
                PrimitiveKind::Torus,
                [d.x, d.x, 0.1 * d.x],
                metal,
            )
            .posed(rim_pose),
            PartSpec::new(
                "hand_hour",
                PrimitiveKind::Box,
                [0.05 * d.x, 0.4 * d.y, 0.3 * d.x],
                hand_mat.clone(),
            )
            .at(Vec3::new(0.0, -0.2 * d.y, d.z * 0.5 + 0.075 * d.x)),
            PartSpec::new(
                "hand_minute",
                PrimitiveKind::Box,
                [0.4 * d.x, 0.4 * d.y, 0.05 * d.x],
                hand_mat,
            )
            .at(Vec3::new(0.1 * d.x, -0.2 * d.y, d.z * 0.5)),
        ],
    )
}

fn bowl(d: Vec3, pal: &Palette) -> ObjectPlan {
    plan(
        "bowl",
        d,
        vec![PartSpec::new(
            "body",
            PrimitiveKind::Curve,
            [d.x, d.x, d.z],
            pal.material("bowl", "ceramic"),
        )
        .at(Vec3::new(0.0, 0.0, d.z * 0.5))],
    )
}

fn plate(d: Vec3, pal: &Palette) -> ObjectPlan {
    plan(
        "plate",
        d,
        vec![PartSpec::new(
            "body",
            PrimitiveKind::Curve,
            [d.x, d.x, d.z],
            pal.material("plate", "ceramic"),
        )
        .at(Vec3::new(0.0, 0.0, d.z * 0.5))],
    )
}

fn vase(d: Vec3, pal: &Palette) -> ObjectPlan {
    plan(
        "vase",
        d,
        vec![PartSpec::new(
            "body",
            PrimitiveKind::Curve,
            [d.x, d.x, d.z],
            pal.material("vase", "ceramic"),
        )
        .at(Vec3::new(0.0, 0.0, d.z * 0.5))],
    )
}

fn mug(d: Vec3, pal: &Palette) -> ObjectPlan {
    let mat = pal.material("mug", "ceramic");
    let body_d = d.y.min(d.x);
    let body_x = -(d.x - body_d) * 0.5;
    let handle_outer = (d.x - body_d).max(0.25 * body_d) * 2.0;
    let handle_tube = (0.12 * handle_outer).max(0.004);
    // Handle loop in the x-z plane, half embedded in the body wall.
    let mut pose = RigidTransform::rotation_about(
        Vec3::zeros(),
        Vec3::x(),
        std::f64::consts::FRAC_PI_2,
    );
    pose.translation = Vec3::new(body_x + body_d * 0.5, 0.0, d.z * 0.5);
    plan(
        "mug",
        d,
        vec![
            PartSpec::new("body", PrimitiveKind::Curve, [body_d, body_d, d.z], mat.clone())
                .at(Vec3::new(body_x, 0.0, d.z * 0.5)),
            PartSpec::new(
                "handle",
                PrimitiveKind::Torus,
                [handle_outer, handle_outer, handle_tube],
                mat,
            )
            .posed(pose),
        ],
    )
}

fn monitor(d: Vec3, pal: &Palette) -> ObjectPlan {
    let body = pal.material("monitor_body", "plastic");
    let screen_mat = MaterialSpec::flat("monitor_screen", linear_rgb(15, 15, 18))
        .with_roughness(0.1)
        .with_emission([0.05, 0.05, 0.08]);
    let base_h = (0.04 * d.z).max(0.008);
    let screen_h = 0.72 * d.z;
    let screen_t = (0.3 * d.y).min(0.05);
    plan(
        "monitor",
        d,
        vec![
            PartSpec::new(
                "base",
                PrimitiveKind::Box,
                [0.5 * d.x, d.y, base_h],
                body.clone(),
            )
            .at(Vec3::new(0.0, 0.0, base_h * 0.5)),
            PartSpec::new(
                "stand",
                PrimitiveKind::Box,
                [0.08 * d.x, 0.35 * d.y, d.z - screen_h - base_h],
                body.clone(),
            )
            .at(Vec3::new(0.0, 0.25 * d.y, base_h + (d.z - screen_h - base_h) * 0.5)),
            PartSpec::new(
                "screen",
                PrimitiveKind::Box,
                [d.x, screen_t, screen_h],
                screen_mat,
            )
            .at(Vec3::new(0.0, 0.0, d.z - screen_h * 0.5)),
        ],
    )
}

fn potted_plant(d: Vec3, pal: &Palette) -> ObjectPlan {
    let pot_mat = pal.material("pot", "ceramic");
    let soil = MaterialSpec::flat("soil", linear_rgb(60, 45, 30)).with_roughness(0.95);
    let leaf_mat = MaterialSpec::flat("leaf", linear_rgb(55, 110, 50)).with_roughness(0.7);
    let stem_mat = MaterialSpec::flat("stem", linear_rgb(70, 95, 50)).with_roughness(0.7);
    let pot_h = 0.35 * d.z;
    let pot_d = 0.65 * d.x;
    let stem_h = 0.45 * d.z;
    // Leaves pitch outward from the stem top and radiate at equal angles.
    let leaf_len = 0.48 * d.x;
    let pitch = RigidTransform::rotation_about(Vec3::zeros(), Vec3::y(), -0.7);
    let mut leaf_pose = pitch;
    leaf_pose.translation = Vec3::new(0.22 * d.x, 0.0, pot_h + stem_h + 0.05 * d.z);
    plan(
        "potted plant",
        d,
        vec![
            PartSpec::new("pot", PrimitiveKind::Curve, [pot_d, pot_d, pot_h], pot_mat)
                .at(Vec3::new(0.0, 0.0, pot_h * 0.5)),
            PartSpec::new(
                "soil",
                PrimitiveKind::Cyl,
                [0.85 * pot_d, 0.85 * pot_d, 0.05 * d.z],
                soil,
            )
            .at(Vec3::new(0.0, 0.0, pot_h - 0.02 * d.z)),
            PartSpec::new(
                "stem",
                PrimitiveKind::Cyl,
                [(0.06 * pot_d).max(0.006), (0.06 * pot_d).max(0.006), stem_h],
                stem_mat,
            )
            .at(Vec3::new(0.0, 0.0, pot_h + stem_h * 0.5)),
            PartSpec::new(
                "leaf",
                PrimitiveKind::Box,
                [leaf_len, 0.22 * leaf_len, (0.02 * d.z).max(0.002)],
                leaf_mat,
            )
            .posed(leaf_pose)
            .with_symmetry(SymmetryTag::Radial {
                count: 6,
                pivot: [0.0, 0.0, 0.0],
            }),
        ],
    )
}

fn rug(d: Vec3, pal: &Palette) -> ObjectPlan {
    let h = d.z.clamp(0.005, 0.03);
    plan(
        "rug",
        Vec3::new(d.x, d.y, h),
        vec![PartSpec::new(
            "body",
            PrimitiveKind::Box,
            [d.x, d.y, h],
            pal.material("rug", "fabric"),
        )
        .at(Vec3::new(0.0, 0.0, h * 0.5))],
    )
}

fn poster(d: Vec3, pal: &Palette) -> ObjectPlan {
    let t = d.y.clamp(0.004, 0.02);
    let canvas = pal
        .material("canvas", "fabric")
        .with_image_texture("textures/canvas.png");
    plan(
        "poster",
        Vec3::new(d.x, t, d.z),
        vec![PartSpec::new(
            "canvas",
            PrimitiveKind::Box,
            [d.x, t, d.z],
            canvas,
        )
        .at(Vec3::new(0.0, 0.0, d.z * 0.5))],
    )
}

/// Case furniture carcass: a top panel whose sub-parts are the sides,
/// bottom, and optionally a back panel and interior shelves. World-space
/// geometry is computed here and converted to parent-relative poses.
fn carcass(
    d: Vec3,
    t: f64,
    mat: &MaterialSpec,
    with_back: bool,
    shelf_count: usize,
) -> PartSpec {
    let body_world = RigidTransform::from_translation(Vec3::new(0.0, 0.0, d.z - t * 0.5));
    let mut subs = Vec::new();
    let side_h = d.z - t;
    for (name, sx) in [("side_l", -1.0), ("side_r", 1.0)] {
        let world = RigidTransform::from_translation(Vec3::new(
            sx * (d.x * 0.5 - t * 0.5),
            0.0,
            side_h * 0.5,
        ));
        subs.push(
            PartSpec::new(name, PrimitiveKind::Box, [t, d.y, side_h], mat.clone())
                .posed(relative_to(&body_world, &world)),
        );
    }
    let bottom_world = RigidTransform::from_translation(Vec3::new(0.0, 0.0, t * 0.5));
    subs.push(
        PartSpec::new(
            "bottom",
            PrimitiveKind::Box,
            [d.x - 2.0 * t, d.y, t],
            mat.clone(),
        )
        .posed(relative_to(&body_world, &bottom_world)),
    );
    if with_back {
        let back_world =
            RigidTransform::from_translation(Vec3::new(0.0, d.y * 0.5 - t * 0.5, d.z * 0.5));
        subs.push(
            PartSpec::new(
                "back",
                PrimitiveKind::Box,
                [d.x - 2.0 * t, t, d.z],
                mat.clone(),
            )
            .posed(relative_to(&body_world, &back_world)),
        );
    }
    for k in 0..shelf_count {
        let z = d.z * (k + 1) as f64 / (shelf_count + 1) as f64;
        let world = RigidTransform::from_translation(Vec3::new(0.0, 0.0, z));
        subs.push(
            PartSpec::new(
                format!("shelf_{}", k + 1),
                PrimitiveKind::Box,
                [d.x - 2.0 * t, d.y - if with_back { t } else { 0.0 }, t],
                mat.clone(),
            )
            .posed(relative_to(&body_world, &world)),
        );
    }
    PartSpec::new("body", PrimitiveKind::Box, [d.x, d.y, t], mat.clone())
        .posed(body_world)
        .with_sub_parts(subs)
}

fn nightstand(d: Vec3, pal: &Palette) -> ObjectPlan {
    let t = wall(d);
    let mat = pal.material("nightstand", "wood");
    let body = carcass(d, t, &mat, false, 0);
    // Drawer fills the upper cavity at full depth; the front face is flush
    // with the carcass front.
    let drawer_h = (d.z - 2.0 * t) * 0.4;
    let drawer_z = d.z - t - drawer_h * 0.5 - 0.004;
    let drawer = PartSpec::new(
        "drawer",
        PrimitiveKind::Box,
        [d.x - 2.0 * t - 0.004, d.y, drawer_h],
        pal.material("drawer", "wood"),
    )
    .at(Vec3::new(0.0, 0.0, drawer_z))
    .movable(JointHint::Sliding);
    plan("nightstand", d, vec![body, drawer])
}

fn cabinet(d: Vec3, pal: &Palette) -> ObjectPlan {
    let t = wall(d);
    let mat = pal.material("cabinet", "wood");
    let body = carcass(d, t, &mat, true, 1);
    let door_w = d.x * 0.5 - t - 0.002;
    let door_h = d.z - 2.0 * t - 0.004;
    let door_y = -(d.y * 0.5) + t * 0.5;
    let mut parts = vec![body];
    for (name, sx) in [("door_l", -1.0), ("door_r", 1.0)] {
        parts.push(
            PartSpec::new(
                name,
                PrimitiveKind::Box,
                [door_w, t, door_h],
                pal.material(name, "wood"),
            )
            .at(Vec3::new(sx * (door_w * 0.5 + 0.002), door_y, d.z * 0.5))
            .movable(JointHint::Hinged),
        );
    }
    plan("cabinet", d, parts)
}

fn wardrobe(d: Vec3, pal: &Palette) -> ObjectPlan {
    let mut p = cabinet(d, pal);
    p.category = "wardrobe".into();
    p
}

fn refrigerator(d: Vec3, pal: &Palette) -> ObjectPlan {
    let t = wall(d);
    let mat = pal.material("fridge_body", "metal");
    let body = carcass(d, t, &mat, true, 2);
    let door = PartSpec::new(
        "door",
        PrimitiveKind::Box,
        [d.x - 0.004, t, d.z - 2.0 * t - 0.004],
        pal.material("fridge_door", "metal"),
    )
    .at(Vec3::new(0.0, -(d.y * 0.5) + t * 0.5, d.z * 0.5))
    .movable(JointHint::Hinged);
    plan("refrigerator", d, vec![body, door])
}

fn office_chair(d: Vec3, pal: &Palette) -> ObjectPlan {
    let mat = pal.material("office_chair", "plastic");
    let base_h = 0.05 * d.z;
    let seat_h = 0.5 * d.z;
    let seat_t = 0.08 * d.z;
    plan(
        "office chair",
        d,
        vec![
            PartSpec::new("base", PrimitiveKind::Cyl, [d.x, d.x, base_h], mat.clone())
                .at(Vec3::new(0.0, 0.0, base_h * 0.5)),
            PartSpec::new(
                "pole",
                PrimitiveKind::Cyl,
                [0.08 * d.x, 0.08 * d.x, seat_h - base_h - seat_t],
                mat.clone(),
            )
            .at(Vec3::new(0.0, 0.0, base_h + (seat_h - base_h - seat_t) * 0.5)),
            PartSpec::new(
                "seat",
                PrimitiveKind::Box,
                [0.9 * d.x, 0.9 * d.y, seat_t],
                mat.clone(),
            )
            .at(Vec3::new(0.0, 0.0, seat_h - seat_t * 0.5)),
            PartSpec::new(
                "backrest",
                PrimitiveKind::Box,
                [0.9 * d.x, 0.1 * d.y, d.z - seat_h],
                mat,
            )
            .at(Vec3::new(0.0, d.y * 0.45, seat_h + (d.z - seat_h) * 0.5)),
        ],
    )
}

fn lid_box(d: Vec3, pal: &Palette) -> ObjectPlan {
    let mat = pal.material("lid_box", "metal");
    let lid_t = (0.08 * d.z).clamp(0.004, 0.03);
    plan(
        "trash can",
        d,
        vec![
            PartSpec::new(
                "body",
                PrimitiveKind::Box,
                [d.x, d.y, d.z - lid_t - 0.002],
                mat.clone(),
            )
            .at(Vec3::new(0.0, 0.0, (d.z - lid_t - 0.002) * 0.5)),
            PartSpec::new("lid", PrimitiveKind::Box, [d.x, d.y, lid_t], mat)
                .at(Vec3::new(0.0, 0.0, d.z - lid_t * 0.5))
                .movable(JointHint::Hinged),
        ],
    )
}

fn pendulum_clock(d: Vec3, pal: &Palette) -> ObjectPlan {
    let wood = pal.material("clock_case", "wood");
    let metal = pal.material("pendulum", "metal");
    let pend_t = (0.1 * d.y).clamp(0.004, 0.02);
    plan(
        "pendulum clock",
        d,
        vec![
            PartSpec::new(
                "body",
                PrimitiveKind::Box,
                [d.x, d.y * 0.6, d.z * 0.55],
                wood,
            )
            .at(Vec3::new(0.0, d.y * 0.2, d.z * 0.725)),
            PartSpec::new(
                "pendulum",
                PrimitiveKind::Box,
                [0.2 * d.x, pend_t, d.z * 0.45],
                metal,
            )
            .at(Vec3::new(0.0, d.y * 0.2, d.z * 0.225))
            .movable(JointHint::Hinged),
        ],
    )
}

fn generic_box(d: Vec3, pal: &Palette) -> ObjectPlan {
    plan(
        "crate",
        d,
        vec![PartSpec::new(
            "body",
            PrimitiveKind::Box,
            [d.x, d.y, d.z],
            pal.material("body", "plastic"),
        )
        .at(Vec3::new(0.0, 0.0, d.z * 0.5))],
    )
}
