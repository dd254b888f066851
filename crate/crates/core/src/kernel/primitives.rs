//! Deterministic primitive mesh construction.
//!
//! Every constructor returns a closed (or explicitly open, for partial
//! revolves) oriented mesh with canonical per-corner UVs already assigned:
//!
//! - box: single cross-layout UV island;
//! - cylinder: three islands (side strip plus two cap disks);
//! - sphere: one equirectangular island;
//! - torus: one island;
//! - curve (profile revolve): one island.
//!
//! Curved geometry comes only from sampled profile polylines revolved about
//! `+z` and from the analytic primitives; there is no spline solver.

use serde::{Deserialize, Serialize};

use super::mesh::{CornerUv, TriMesh};
use super::KernelError;
use crate::model::Vec3;

/// Primitive families available to plans and programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimitiveKind {
    Box,
    Cyl,
    Sph,
    Torus,
    Curve,
}

/// Primitive construction parameters. The curve variant revolves a sampled
/// `(r, z)` profile polyline about `+z`; profiles must be ordered so the
/// outside of the surface lies to the right of the traversal (bottom-to-top
/// along the outer wall), and a zero radius is only allowed at the profile
/// endpoints, where it closes the surface with a pole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PrimitiveSpec {
    Box {
        extents: [f64; 3],
    },
    Cyl {
        radius: f64,
        height: f64,
    },
    Sph {
        radius: f64,
    },
    Torus {
        major_radius: f64,
        minor_radius: f64,
    },
    Curve {
        profile: Vec<[f64; 2]>,
        closed: bool,
    },
}

impl PrimitiveSpec {
    pub fn kind(&self) -> PrimitiveKind {
        match self {
            PrimitiveSpec::Box { .. } => PrimitiveKind::Box,
            PrimitiveSpec::Cyl { .. } => PrimitiveKind::Cyl,
            PrimitiveSpec::Sph { .. } => PrimitiveKind::Sph,
            PrimitiveSpec::Torus { .. } => PrimitiveKind::Torus,
            PrimitiveSpec::Curve { .. } => PrimitiveKind::Curve,
        }
    }
}

/// Build a primitive mesh. `segments` controls tessellation of curved
/// primitives (>= 3); boxes ignore it.
pub fn make_primitive(spec: &PrimitiveSpec, segments: u32) -> Result<TriMesh, KernelError> {
    match spec {
        PrimitiveSpec::Box { extents } => make_box(*extents),
        PrimitiveSpec::Cyl { radius, height } => make_cylinder(*radius, *height, segments),
        PrimitiveSpec::Sph { radius } => make_sphere(*radius, segments),
        PrimitiveSpec::Torus {
            major_radius,
            minor_radius,
        } => make_torus(*major_radius, *minor_radius, segments),
        PrimitiveSpec::Curve { profile, closed } => make_revolve(profile, *closed, segments),
    }
}

fn require_positive(value: f64, what: &str) -> Result<(), KernelError> {
    if !(value.is_finite() && value > 0.0) {
        return Err(KernelError::DegenerateParams(format!(
            "{what} must be positive and finite, got {value}"
        )));
    }
    Ok(())
}

fn require_segments(segments: u32) -> Result<(), KernelError> {
    if segments < 3 {
        return Err(KernelError::DegenerateParams(format!(
            "curved primitives need segments >= 3, got {segments}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Box
// ---------------------------------------------------------------------------

fn make_box(extents: [f64; 3]) -> Result<TriMesh, KernelError> {
    for (v, what) in extents.iter().zip(["x extent", "y extent", "z extent"]) {
        require_positive(*v, what)?;
    }
    let h = Vec3::new(extents[0] * 0.5, extents[1] * 0.5, extents[2] * 0.5);
    let vertices = vec![
        Vec3::new(-h.x, -h.y, -h.z), // 0
        Vec3::new(h.x, -h.y, -h.z),  // 1
        Vec3::new(h.x, h.y, -h.z),   // 2
        Vec3::new(-h.x, h.y, -h.z),  // 3
        Vec3::new(-h.x, -h.y, h.z),  // 4
        Vec3::new(h.x, -h.y, h.z),   // 5
        Vec3::new(h.x, h.y, h.z),    // 6
        Vec3::new(-h.x, h.y, h.z),   // 7
    ];
    // Outward CCW winding per face: -z +z -y +y -x +x.
    let triangles: Vec<[u32; 3]> = vec![
        [0, 3, 2],
        [0, 2, 1],
        [4, 5, 6],
        [4, 6, 7],
        [0, 1, 5],
        [0, 5, 4],
        [2, 3, 7],
        [2, 7, 6],
        [3, 0, 4],
        [3, 4, 7],
        [1, 2, 6],
        [1, 6, 5],
    ];
    let mut mesh = TriMesh::new("box", vertices, triangles);
    mesh.uv = Some(box_cross_uvs());
    Ok(mesh)
}

/// Cross-layout UV for the canonical 12-triangle box above: the four side
/// faces form a strip in the middle row and the top/bottom faces attach to
/// the front (-y) face, so every face pair adjacent in the layout shares
/// identical UVs along its mesh edge and the box unwraps to one island.
fn box_cross_uvs() -> Vec<CornerUv> {
    // u columns around the side strip, keyed by (x sign, y sign).
    let u_of = |x_pos: bool, y_pos: bool, wrap: bool| -> f64 {
        match (x_pos, y_pos) {
            (false, true) => {
                if wrap {
                    1.0
                } else {
                    0.0
                }
            }
            (false, false) => 0.25,
            (true, false) => 0.5,
            (true, true) => 0.75,
        }
    };
    let v_lo = 1.0 / 3.0;
    let v_hi = 2.0 / 3.0;
    // Vertex coordinates by index: (x_pos, y_pos, z_pos).
    let sign = |i: u32| -> (bool, bool, bool) {
        match i {
            0 => (false, false, false),
            1 => (true, false, false),
            2 => (true, true, false),
            3 => (false, true, false),
            4 => (false, false, true),
            5 => (true, false, true),
            6 => (true, true, true),
            7 => (false, true, true),
            _ => unreachable!(),
        }
    };
    let side = |i: u32, wrap: bool| -> [f64; 2] {
        let (xp, yp, zp) = sign(i);
        [u_of(xp, yp, wrap), if zp { v_hi } else { v_lo }]
    };
    // Top face cell [0.25,0.5] x [2/3,1]; v grows toward +y.
    let top = |i: u32| -> [f64; 2] {
        let (xp, yp, _) = sign(i);
        [
            if xp { 0.5 } else { 0.25 },
            if yp { 1.0 } else { v_hi },
        ]
    };
    // Bottom face cell [0.25,0.5] x [0,1/3]; v grows toward -y.
    let bottom = |i: u32| -> [f64; 2] {
        let (xp, yp, _) = sign(i);
        [
            if xp { 0.5 } else { 0.25 },
            if yp { 0.0 } else { v_lo },
        ]
    };
    vec![
        // -z: [0,3,2], [0,2,1]
        [bottom(0), bottom(3), bottom(2)],
        [bottom(0), bottom(2), bottom(1)],
        // +z: [4,5,6], [4,6,7]
        [top(4), top(5), top(6)],
        [top(4), top(6), top(7)],
        // -y: [0,1,5], [0,5,4]
        [side(0, false), side(1, false), side(5, false)],
        [side(0, false), side(5, false), side(4, false)],
        // +y: [2,3,7], [2,7,6] -- wraps at the (-x,+y) column.
        [side(2, false), side(3, true), side(7, true)],
        [side(2, false), side(7, true), side(6, false)],
        // -x: [3,0,4], [3,4,7] -- u=0 at the (-x,+y) column.
        [side(3, false), side(0, false), side(4, false)],
        [side(3, false), side(4, false), side(7, false)],
        // +x: [1,2,6], [1,6,5]
        [side(1, false), side(2, false), side(6, false)],
        [side(1, false), side(6, false), side(5, false)],
    ]
}

// ---------------------------------------------------------------------------
// Cylinder
// ---------------------------------------------------------------------------

fn make_cylinder(radius: f64, height: f64, segments: u32) -> Result<TriMesh, KernelError> {
    require_positive(radius, "cylinder radius")?;
    require_positive(height, "cylinder height")?;
    require_segments(segments)?;
    let n = segments as usize;
    let hz = height * 0.5;

    // Equal-area ring radius: the inscribed n-gon underestimates the disk,
    // so vertices sit at r*sqrt(theta/sin theta) and the prism volume (and
    // thus mass/inertia to leading order) matches the analytic cylinder.
    let theta = 2.0 * std::f64::consts::PI / n as f64;
    let ring_r = radius * (theta / theta.sin()).sqrt();

    let mut vertices = Vec::with_capacity(2 * n + 2);
    for ring in [-hz, hz] {
        for i in 0..n {
            let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            vertices.push(Vec3::new(ring_r * a.cos(), ring_r * a.sin(), ring));
        }
    }
    let bc = vertices.len() as u32; // bottom center
    vertices.push(Vec3::new(0.0, 0.0, -hz));
    let tc = vertices.len() as u32; // top center
    vertices.push(Vec3::new(0.0, 0.0, hz));

    let mut triangles = Vec::with_capacity(4 * n);
    let mut uvs: Vec<CornerUv> = Vec::with_capacity(4 * n);

    // Side strip: u around the circumference, v in the middle band.
    let (v_lo, v_hi) = (0.35, 0.65);
    for i in 0..n {
        let j = (i + 1) % n;
        let (b_i, b_j) = (i as u32, j as u32);
        let (t_i, t_j) = ((n + i) as u32, (n + j) as u32);
        let u0 = i as f64 / n as f64;
        let u1 = (i + 1) as f64 / n as f64; // 1.0 at the seam, stays in range
        triangles.push([b_i, b_j, t_j]);
        uvs.push([[u0, v_lo], [u1, v_lo], [u1, v_hi]]);
        triangles.push([b_i, t_j, t_i]);
        uvs.push([[u0, v_lo], [u1, v_hi], [u0, v_hi]]);
    }
    // Caps: disks in their own UV regions.
    let disk = |center: [f64; 2], a: f64| -> [f64; 2] {
        [center[0] + 0.14 * a.cos(), center[1] + 0.14 * a.sin()]
    };
    for i in 0..n {
        let j = (i + 1) % n;
        let a0 = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        let a1 = 2.0 * std::f64::consts::PI * (i + 1) as f64 / n as f64;
        // Bottom cap faces -z.
        triangles.push([bc, (j % n) as u32, i as u32]);
        uvs.push([[0.25, 0.15], disk([0.25, 0.15], a1), disk([0.25, 0.15], a0)]);
        // Top cap faces +z.
        triangles.push([tc, (n + i) as u32, (n + j) as u32]);
        uvs.push([[0.75, 0.85], disk([0.75, 0.85], a0), disk([0.75, 0.85], a1)]);
    }

    let mut mesh = TriMesh::new("cyl", vertices, triangles);
    mesh.face_material = vec![0; mesh.triangles.len()];
    mesh.uv = Some(uvs);
    Ok(mesh)
}

// ---------------------------------------------------------------------------
// Sphere
// ---------------------------------------------------------------------------

fn make_sphere(radius: f64, segments: u32) -> Result<TriMesh, KernelError> {
    require_positive(radius, "sphere radius")?;
    require_segments(segments)?;
    let n = segments as usize; // longitude
    let m = (segments as usize / 2).max(2); // latitude bands

    let mut vertices = Vec::new();
    let south = 0u32;
    vertices.push(Vec3::new(0.0, 0.0, -radius));
    for k in 1..m {
        let phi = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI * k as f64 / m as f64;
        for i in 0..n {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            vertices.push(Vec3::new(
                radius * phi.cos() * theta.cos(),
                radius * phi.cos() * theta.sin(),
                radius * phi.sin(),
            ));
        }
    }
    let north = vertices.len() as u32;
    vertices.push(Vec3::new(0.0, 0.0, radius));

    let ring = |k: usize, i: usize| -> u32 { (1 + (k - 1) * n + (i % n)) as u32 };
    let u_at = |i: usize| i as f64 / n as f64;
    let v_at = |k: usize| k as f64 / m as f64;

    let mut triangles = Vec::new();
    let mut uvs: Vec<CornerUv> = Vec::new();
    for i in 0..n {
        // South fan; corner u at the triangle's mid-longitude.
        triangles.push([south, ring(1, i + 1), ring(1, i)]);
        uvs.push([
            [(i as f64 + 0.5) / n as f64, 0.0],
            [u_at(i + 1), v_at(1)],
            [u_at(i), v_at(1)],
        ]);
        // North fan.
        triangles.push([north, ring(m - 1, i), ring(m - 1, i + 1)]);
        uvs.push([
            [(i as f64 + 0.5) / n as f64, 1.0],
            [u_at(i), v_at(m - 1)],
            [u_at(i + 1), v_at(m - 1)],
        ]);
    }
    for k in 1..m - 1 {
        for i in 0..n {
            let (a, b, c, d) = (ring(k, i), ring(k, i + 1), ring(k + 1, i + 1), ring(k + 1, i));
            triangles.push([a, b, c]);
            uvs.push([[u_at(i), v_at(k)], [u_at(i + 1), v_at(k)], [u_at(i + 1), v_at(k + 1)]]);
            triangles.push([a, c, d]);
            uvs.push([[u_at(i), v_at(k)], [u_at(i + 1), v_at(k + 1)], [u_at(i), v_at(k + 1)]]);
        }
    }

    let mut mesh = TriMesh::new("sph", vertices, triangles);
    mesh.face_material = vec![0; mesh.triangles.len()];
    mesh.uv = Some(uvs);
    // Scale so the discretized volume equals the analytic sphere's.
    let analytic = 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3);
    let factor = (analytic / mesh.signed_volume()).cbrt();
    for v in &mut mesh.vertices {
        *v *= factor;
    }
    Ok(mesh)
}

// ---------------------------------------------------------------------------
// Torus
// ---------------------------------------------------------------------------

fn make_torus(major_radius: f64, minor_radius: f64, segments: u32) -> Result<TriMesh, KernelError> {
    require_positive(major_radius, "torus major radius")?;
    require_positive(minor_radius, "torus minor radius")?;
    if minor_radius >= major_radius {
        return Err(KernelError::DegenerateParams(format!(
            "torus minor radius {minor_radius} must be smaller than major radius {major_radius}"
        )));
    }
    require_segments(segments)?;
    let n = segments as usize;
    let m = (segments as usize / 2).max(3);

    let mut vertices = Vec::with_capacity(n * m);
    for i in 0..n {
        let alpha = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        for j in 0..m {
            let beta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            let rho = major_radius + minor_radius * beta.cos();
            vertices.push(Vec3::new(
                rho * alpha.cos(),
                rho * alpha.sin(),
                minor_radius * beta.sin(),
            ));
        }
    }
    let at = |i: usize, j: usize| -> u32 { ((i % n) * m + (j % m)) as u32 };
    let mut triangles = Vec::with_capacity(2 * n * m);
    let mut uvs: Vec<CornerUv> = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        for j in 0..m {
            let (u0, u1) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            let (v0, v1) = (j as f64 / m as f64, (j + 1) as f64 / m as f64);
            // Outward winding: increasing minor angle then major angle.
            triangles.push([at(i, j), at(i + 1, j), at(i + 1, j + 1)]);
            uvs.push([[u0, v0], [u1, v0], [u1, v1]]);
            triangles.push([at(i, j), at(i + 1, j + 1), at(i, j + 1)]);
            uvs.push([[u0, v0], [u1, v1], [u0, v1]]);
        }
    }

    let mut mesh = TriMesh::new("torus", vertices, triangles);
    mesh.face_material = vec![0; mesh.triangles.len()];
    mesh.uv = Some(uvs);
    // Scale so the discretized volume equals the analytic torus's.
    let analytic = 2.0 * std::f64::consts::PI.powi(2) * major_radius * minor_radius.powi(2);
    let factor = (analytic / mesh.signed_volume()).cbrt();
    for v in &mut mesh.vertices {
        *v *= factor;
    }
    Ok(mesh)
}

// ---------------------------------------------------------------------------
// Profile revolve ("curve" primitive)
// ---------------------------------------------------------------------------

/// Radius below which a profile point is treated as lying on the axis.
const POLE_EPS: f64 = 1e-9;

fn make_revolve(profile: &[[f64; 2]], closed: bool, segments: u32) -> Result<TriMesh, KernelError> {
    require_segments(segments)?;
    if profile.len() < 2 {
        return Err(KernelError::DegenerateParams(
            "revolve profile needs at least 2 points".into(),
        ));
    }
    for (k, p) in profile.iter().enumerate() {
        if !(p[0].is_finite() && p[1].is_finite()) {
            return Err(KernelError::DegenerateParams(format!(
                "revolve profile point {k} is not finite"
            )));
        }
        if p[0] < -POLE_EPS {
            return Err(KernelError::DegenerateParams(format!(
                "revolve profile point {k} has negative radius {}",
                p[0]
            )));
        }
    }
    let on_axis: Vec<bool> = profile.iter().map(|p| p[0] <= POLE_EPS).collect();
    if closed && on_axis.iter().any(|&a| a) {
        return Err(KernelError::DegenerateParams(
            "closed revolve profile may not touch the axis".into(),
        ));
    }
    for (k, &axis) in on_axis.iter().enumerate() {
        if axis && k != 0 && k != profile.len() - 1 {
            return Err(KernelError::DegenerateParams(format!(
                "revolve profile touches the axis at interior point {k}"
            )));
        }
    }
    for w in profile.windows(2) {
        let d = ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2)).sqrt();
        if d < 1e-12 {
            return Err(KernelError::DegenerateParams(
                "revolve profile has duplicate consecutive points".into(),
            ));
        }
    }
    if profile_self_intersects(profile, closed) {
        return Err(KernelError::DegenerateParams(
            "revolve profile polyline self-intersects".into(),
        ));
    }

    let n = segments as usize;
    let p = profile.len();
    // Cumulative arc length for the v coordinate.
    let mut arc = vec![0.0; p];
    for k in 1..p {
        let d = ((profile[k][0] - profile[k - 1][0]).powi(2)
            + (profile[k][1] - profile[k - 1][1]).powi(2))
        .sqrt();
        arc[k] = arc[k - 1] + d;
    }
    let total = if closed {
        let dlast = ((profile[0][0] - profile[p - 1][0]).powi(2)
            + (profile[0][1] - profile[p - 1][1]).powi(2))
        .sqrt();
        arc[p - 1] + dlast
    } else {
        arc[p - 1].max(1e-12)
    };

    // Vertex layout: rings for off-axis profile points in profile order,
    // then pole vertices (if any).
    let mut vertices = Vec::new();
    let mut ring_start = vec![u32::MAX; p];
    for k in 0..p {
        if !on_axis[k] {
            ring_start[k] = vertices.len() as u32;
            for i in 0..n {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                vertices.push(Vec3::new(
                    profile[k][0] * theta.cos(),
                    profile[k][0] * theta.sin(),
                    profile[k][1],
                ));
            }
        }
    }
    let mut pole = vec![u32::MAX; p];
    for k in [0, p - 1] {
        if on_axis[k] {
            pole[k] = vertices.len() as u32;
            vertices.push(Vec3::new(0.0, 0.0, profile[k][1]));
        }
    }

    let ring = |k: usize, i: usize| -> u32 { ring_start[k] + (i % n) as u32 };
    let u_at = |i: usize| i as f64 / n as f64;
    let v_at = |k: usize| arc[k] / total;

    let mut triangles = Vec::new();
    let mut uvs: Vec<CornerUv> = Vec::new();
    let band_count = if closed { p } else { p - 1 };
    for k in 0..band_count {
        let k2 = (k + 1) % p;
        let (v0, v1) = (v_at(k), if closed && k2 == 0 { 1.0 } else { v_at(k2) });
        match (on_axis[k], on_axis[k2]) {
            (false, false) => {
                for i in 0..n {
                    let (u0, u1) = (u_at(i), u_at(i + 1));
                    triangles.push([ring(k, i), ring(k, i + 1), ring(k2, i + 1)]);
                    uvs.push([[u0, v0], [u1, v0], [u1, v1]]);
                    triangles.push([ring(k, i), ring(k2, i + 1), ring(k2, i)]);
                    uvs.push([[u0, v0], [u1, v1], [u0, v1]]);
                }
            }
            // Start pole: fan opening the surface.
            (true, false) => {
                for i in 0..n {
                    triangles.push([pole[k], ring(k2, i + 1), ring(k2, i)]);
                    uvs.push([
                        [(i as f64 + 0.5) / n as f64, v0],
                        [u_at(i + 1), v1],
                        [u_at(i), v1],
                    ]);
                }
            }
            // End pole: fan closing the surface.
            (false, true) => {
                for i in 0..n {
                    triangles.push([pole[k2], ring(k, i), ring(k, i + 1)]);
                    uvs.push([
                        [(i as f64 + 0.5) / n as f64, v1],
                        [u_at(i), v0],
                        [u_at(i + 1), v0],
                    ]);
                }
            }
            (true, true) => {
                return Err(KernelError::DegenerateParams(
                    "revolve profile segment lies entirely on the axis".into(),
                ))
            }
        }
    }

    let mut mesh = TriMesh::new("curve", vertices, triangles);
    mesh.face_material = vec![0; mesh.triangles.len()];
    mesh.uv = Some(uvs);
    Ok(mesh)
}

/// 2D segment intersection test over non-adjacent profile segments.
fn profile_self_intersects(profile: &[[f64; 2]], closed: bool) -> bool {
    let p = profile.len();
    let seg_count = if closed { p } else { p - 1 };
    let seg = |k: usize| -> ([f64; 2], [f64; 2]) { (profile[k], profile[(k + 1) % p]) };
    for a in 0..seg_count {
        for b in (a + 1)..seg_count {
            // Skip adjacent segments (shared endpoint), including the wrap pair.
            if b == a + 1 || (closed && a == 0 && b == seg_count - 1) {
                continue;
            }
            let (p1, p2) = seg(a);
            let (q1, q2) = seg(b);
            if segments_intersect_2d(p1, p2, q1, q2) {
                return true;
            }
        }
    }
    false
}

fn segments_intersect_2d(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| -> f64 {
        (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    };
    let on_seg = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| -> bool {
        c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
    };
    let (d1, d2) = (orient(q1, q2, p1), orient(q1, q2, p2));
    let (d3, d4) = (orient(p1, p2, q1), orient(p1, p2, q2));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_seg(q1, q2, p1))
        || (d2 == 0.0 && on_seg(q1, q2, p2))
        || (d3 == 0.0 && on_seg(p1, p2, q1))
        || (d4 == 0.0 && on_seg(p1, p2, q2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_topology() {
        let m = make_box([1.0, 1.0, 1.0]).unwrap();
        assert_eq!(m.vertices.len(), 8);
        assert_eq!(m.triangles.len(), 12);
        let degrees = m.edge_degrees();
        assert_eq!(degrees.len(), 18);
        assert!(degrees.values().all(|&d| d == 2));
        assert!(m.signed_volume() > 0.0);
        m.validate().unwrap();
    }

    #[test]
    fn cylinder_is_closed_genus_zero() {
        let m = make_cylinder(0.5, 1.0, 32).unwrap();
        assert_eq!(m.euler_characteristic(), 2);
        assert_eq!(m.non_manifold_edge_count(), 0);
        // Equal-area compensation makes the prism volume exact.
        let expected = std::f64::consts::PI * 0.25; // pi r^2 h
        assert!((m.signed_volume() - expected).abs() / expected < 1e-12);
        m.validate().unwrap();
    }

    #[test]
    fn torus_is_genus_one() {
        let m = make_torus(0.4, 0.1, 24).unwrap();
        assert_eq!(m.euler_characteristic(), 0);
        assert_eq!(m.non_manifold_edge_count(), 0);
        let expected = 2.0 * std::f64::consts::PI.powi(2) * 0.4 * 0.01;
        assert!((m.signed_volume() - expected).abs() / expected < 1e-12);
        m.validate().unwrap();
    }

    #[test]
    fn sphere_volume_and_topology() {
        let m = make_sphere(0.5, 32).unwrap();
        assert_eq!(m.euler_characteristic(), 2);
        assert_eq!(m.non_manifold_edge_count(), 0);
        let expected = 4.0 / 3.0 * std::f64::consts::PI * 0.125;
        assert!((m.signed_volume() - expected).abs() / expected < 1e-12);
        m.validate().unwrap();
    }

    #[test]
    fn solid_revolve_is_closed() {
        // Solid cylinder profile: axis -> rim -> rim -> axis.
        let profile = vec![[0.0, 0.0], [0.4, 0.0], [0.4, 1.0], [0.0, 1.0]];
        let m = make_revolve(&profile, false, 24).unwrap();
        assert_eq!(m.non_manifold_edge_count(), 0);
        assert_eq!(m.euler_characteristic(), 2);
        let expected = std::f64::consts::PI * 0.16;
        assert!((m.signed_volume() - expected).abs() / expected < 0.02);
    }

    #[test]
    fn open_cup_revolve_has_one_boundary_ring() {
        // Bottom disk plus wall, open at the top: boundary = top rim only.
        let profile = vec![[0.0, 0.0], [0.3, 0.0], [0.3, 0.5]];
        let m = make_revolve(&profile, false, 16).unwrap();
        assert_eq!(m.boundary_edges().len(), 16);
        m.validate().unwrap();
    }

    #[test]
    fn closed_loop_revolve_matches_torus() {
        let r = 0.1;
        let n_prof = 12;
        let profile: Vec<[f64; 2]> = (0..n_prof)
            .map(|j| {
                let b = 2.0 * std::f64::consts::PI * j as f64 / n_prof as f64;
                [0.4 + r * b.cos(), r * b.sin()]
            })
            .collect();
        let m = make_revolve(&profile, true, 24).unwrap();
        assert_eq!(m.euler_characteristic(), 0);
        assert!(m.signed_volume() > 0.0);
    }

    #[test]
    fn degenerate_params_rejected() {
        assert!(make_box([0.0, 1.0, 1.0]).is_err());
        assert!(make_cylinder(0.5, 1.0, 2).is_err());
        assert!(make_torus(0.1, 0.4, 24).is_err());
        // Self-intersecting bow-tie profile.
        let bow = vec![[0.1, 0.0], [0.4, 0.4], [0.4, 0.0], [0.1, 0.4]];
        assert!(matches!(
            make_revolve(&bow, false, 16),
            Err(KernelError::DegenerateParams(_))
        ));
    }

    #[test]
    fn uv_coordinates_are_in_unit_square() {
        let meshes = [
            make_box([1.0, 2.0, 0.5]).unwrap(),
            make_cylinder(0.3, 0.8, 17).unwrap(),
            make_sphere(0.4, 13).unwrap(),
            make_torus(0.5, 0.12, 21).unwrap(),
            make_revolve(&[[0.0, 0.0], [0.3, 0.0], [0.3, 0.5]], false, 9).unwrap(),
        ];
        for m in &meshes {
            for corner in m.uv.as_ref().unwrap().iter().flatten() {
                assert!(corner[0] >= -1e-12 && corner[0] <= 1.0 + 1e-12);
                assert!(corner[1] >= -1e-12 && corner[1] <= 1.0 + 1e-12);
            }
        }
    }
}
