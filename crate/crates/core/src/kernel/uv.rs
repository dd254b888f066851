//! Canonical UV (re)generation for kernel meshes.
//!
//! After topology-changing modifiers (solidify, bevel) drop UVs, programs
//! re-assign them here. Except for the pristine box (which gets the exact
//! single-island cross layout), coordinates are pure functions of vertex
//! position, so every shared mesh edge inside one mapping region matches
//! exactly and island structure is stable: box = 1 island, cylinder = 3,
//! sphere/torus/revolve = 1.

use serde::{Deserialize, Serialize};

use super::mesh::{CornerUv, TriMesh};
use super::primitives::PrimitiveKind;
use super::KernelError;
use crate::model::{Aabb, Vec3};

/// UV mapping family. `CanvasFront` maps the front (-y) face to the full
/// unit square for image materials on wall art.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UvKind {
    Box,
    Cyl,
    Sph,
    Torus,
    Curve,
    CanvasFront,
}

impl From<PrimitiveKind> for UvKind {
    fn from(kind: PrimitiveKind) -> Self {
        match kind {
            PrimitiveKind::Box => UvKind::Box,
            PrimitiveKind::Cyl => UvKind::Cyl,
            PrimitiveKind::Sph => UvKind::Sph,
            PrimitiveKind::Torus => UvKind::Torus,
            PrimitiveKind::Curve => UvKind::Curve,
        }
    }
}

/// Assign canonical UVs for a mesh produced by this kernel, in its
/// construction frame (before the part's placing transform).
pub fn generate_uv(mesh: &TriMesh, kind: UvKind) -> Result<TriMesh, KernelError> {
    if mesh.triangles.is_empty() {
        return Err(KernelError::UnsupportedTopology(
            "cannot unwrap an empty mesh".into(),
        ));
    }
    let bounds = mesh
        .aabb()
        .map_err(|e| KernelError::UnsupportedTopology(e.to_string()))?;
    let mut out = mesh.clone();
    out.uv = Some(match kind {
        UvKind::Box => {
            if let Some(cross) = pristine_box_cross(mesh, &bounds) {
                cross
            } else {
                box_projection(mesh, &bounds, false)
            }
        }
        UvKind::CanvasFront => box_projection(mesh, &bounds, true),
        UvKind::Cyl => cylindrical(mesh, &bounds),
        UvKind::Sph | UvKind::Curve => spherical_or_revolve(mesh, &bounds),
        UvKind::Torus => toroidal(mesh, &bounds),
    });
    Ok(out)
}

fn norm01(value: f64, lo: f64, hi: f64) -> f64 {
    if hi - lo < 1e-12 {
        0.5
    } else {
        ((value - lo) / (hi - lo)).clamp(0.0, 1.0)
    }
}

/// Angle about +z remapped to [0, 1).
fn angular_u(p: Vec3, center: Vec3) -> f64 {
    let theta = (p.y - center.y).atan2(p.x - center.x);
    (theta.rem_euclid(2.0 * std::f64::consts::PI)) / (2.0 * std::f64::consts::PI)
}

/// Exact cross layout for an 8-vertex, 12-triangle axis-aligned box.
fn pristine_box_cross(mesh: &TriMesh, bounds: &Aabb) -> Option<Vec<CornerUv>> {
    if mesh.vertices.len() != 8 || mesh.triangles.len() != 12 {
        return None;
    }
    let c = bounds.center();
    let h = bounds.extents() * 0.5;
    if h.iter().any(|&e| e < 1e-12) {
        return None;
    }
    // Every vertex must sit on a corner.
    let mut signs = Vec::with_capacity(8);
    for v in &mesh.vertices {
        let d = v - c;
        let mut s = [false; 3];
        for i in 0..3 {
            if (d[i].abs() - h[i]).abs() > 1e-9 * h[i].max(1.0) {
                return None;
            }
            s[i] = d[i] > 0.0;
        }
        signs.push(s);
    }
    let v_lo = 1.0 / 3.0;
    let v_hi = 2.0 / 3.0;
    let u_of = |xp: bool, yp: bool, wrap: bool| -> f64 {
        match (xp, yp) {
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
    let mut uvs = Vec::with_capacity(12);
    for t in 0..mesh.triangles.len() {
        let n = mesh.triangle_normal(t);
        let axis = (0..3).max_by(|&a, &b| n[a].abs().partial_cmp(&n[b].abs()).unwrap())?;
        let positive = n[axis] > 0.0;
        let tri = mesh.triangles[t];
        let mut corner_uv = [[0.0; 2]; 3];
        for (k, &vi) in tri.iter().enumerate() {
            let [xp, yp, zp] = signs[vi as usize];
            corner_uv[k] = match (axis, positive) {
                // Side faces: strip in the middle row.
                (0, _) | (1, false) => {
                    // The (-x,+y) column is u=0 except on the +y face where
                    // it wraps to u=1.
                    [u_of(xp, yp, false), if zp { v_hi } else { v_lo }]
                }
                (1, true) => [u_of(xp, yp, !xp && yp), if zp { v_hi } else { v_lo }],
                // Top face above the front cell.
                (2, true) => [if xp { 0.5 } else { 0.25 }, if yp { 1.0 } else { v_hi }],
                // Bottom face below the front cell.
                (2, false) => [if xp { 0.5 } else { 0.25 }, if yp { 0.0 } else { v_lo }],
                _ => unreachable!(),
            };
        }
        uvs.push(corner_uv);
    }
    Some(uvs)
}

/// Per-face-direction planar projection. With `canvas` set, the -y bin maps
/// to the full unit square; every other bin overlaps it, which is fine for
/// island counting (connectivity, not occupancy).
fn box_projection(mesh: &TriMesh, bounds: &Aabb, canvas: bool) -> Vec<CornerUv> {
    let cells: [([f64; 2], [f64; 2]); 6] = [
        ([0.00, 1.0 / 3.0], [0.25, 2.0 / 3.0]), // -x
        ([0.50, 1.0 / 3.0], [0.75, 2.0 / 3.0]), // +x
        ([0.25, 1.0 / 3.0], [0.50, 2.0 / 3.0]), // -y
        ([0.75, 1.0 / 3.0], [1.00, 2.0 / 3.0]), // +y
        ([0.25, 0.0], [0.50, 1.0 / 3.0]),       // -z
        ([0.25, 2.0 / 3.0], [0.50, 1.0]),       // +z
    ];
    let mut uvs = Vec::with_capacity(mesh.triangles.len());
    for t in 0..mesh.triangles.len() {
        let n = mesh.triangle_normal(t);
        let axis = (0..3)
            .max_by(|&a, &b| n[a].abs().partial_cmp(&n[b].abs()).unwrap())
            .unwrap();
        let positive = n[axis] > 0.0;
        let bin = axis * 2 + usize::from(positive);
        // In-plane axes per bin: u along the first remaining axis, v along
        // the second.
        let (ua, va) = match axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let full_front = canvas && axis == 1 && !positive;
        let (lo, hi) = if full_front {
            ([0.0, 0.0], [1.0, 1.0])
        } else {
            cells[bin]
        };
        let mut corner_uv = [[0.0; 2]; 3];
        for (k, &vi) in mesh.triangles[t].iter().enumerate() {
            let p = mesh.vertices[vi as usize];
            let u01 = norm01(p[ua], bounds.min[ua], bounds.max[ua]);
            let v01 = norm01(p[va], bounds.min[va], bounds.max[va]);
            corner_uv[k] = [lo[0] + u01 * (hi[0] - lo[0]), lo[1] + v01 * (hi[1] - lo[1])];
        }
        uvs.push(corner_uv);
    }
    uvs
}

/// Side strip plus two cap disks, three islands.
fn cylindrical(mesh: &TriMesh, bounds: &Aabb) -> Vec<CornerUv> {
    let c = bounds.center();
    let mut uvs = Vec::with_capacity(mesh.triangles.len());
    for t in 0..mesh.triangles.len() {
        let n = mesh.triangle_normal(t);
        let mut corner_uv = [[0.0; 2]; 3];
        if n.z.abs() > 0.9 {
            // Cap: planar xy projection into a disk cell per side.
            let top = n.z > 0.0;
            let (cx, cy) = if top { (0.75, 0.85) } else { (0.25, 0.15) };
            for (k, &vi) in mesh.triangles[t].iter().enumerate() {
                let p = mesh.vertices[vi as usize];
                let u01 = norm01(p.x, bounds.min.x, bounds.max.x) - 0.5;
                let v01 = norm01(p.y, bounds.min.y, bounds.max.y) - 0.5;
                corner_uv[k] = [cx + 0.28 * u01, cy + 0.28 * v01];
            }
        } else {
            for (k, &vi) in mesh.triangles[t].iter().enumerate() {
                let p = mesh.vertices[vi as usize];
                corner_uv[k] = [
                    angular_u(p, c),
                    0.35 + 0.3 * norm01(p.z, bounds.min.z, bounds.max.z),
                ];
            }
        }
        uvs.push(corner_uv);
    }
    uvs
}

/// Equirectangular-style mapping: angle for u, height for v. Used for both
/// spheres and profile revolves; one island.
fn spherical_or_revolve(mesh: &TriMesh, bounds: &Aabb) -> Vec<CornerUv> {
    let c = bounds.center();
    let mut uvs = Vec::with_capacity(mesh.triangles.len());
    for t in 0..mesh.triangles.len() {
        let mut corner_uv = [[0.0; 2]; 3];
        for (k, &vi) in mesh.triangles[t].iter().enumerate() {
            let p = mesh.vertices[vi as usize];
            corner_uv[k] = [angular_u(p, c), norm01(p.z, bounds.min.z, bounds.max.z)];
        }
        uvs.push(corner_uv);
    }
    uvs
}

fn toroidal(mesh: &TriMesh, bounds: &Aabb) -> Vec<CornerUv> {
    let c = bounds.center();
    // Ring radius estimated from the radial span.
    let mut rho_min = f64::INFINITY;
    let mut rho_max = 0.0_f64;
    for v in &mesh.vertices {
        let rho = ((v.x - c.x).powi(2) + (v.y - c.y).powi(2)).sqrt();
        rho_min = rho_min.min(rho);
        rho_max = rho_max.max(rho);
    }
    let ring_r = 0.5 * (rho_min + rho_max);
    let mut uvs = Vec::with_capacity(mesh.triangles.len());
    for t in 0..mesh.triangles.len() {
        let mut corner_uv = [[0.0; 2]; 3];
        for (k, &vi) in mesh.triangles[t].iter().enumerate() {
            let p = mesh.vertices[vi as usize];
            let rho = ((p.x - c.x).powi(2) + (p.y - c.y).powi(2)).sqrt();
            let beta = (p.z - c.z).atan2(rho - ring_r);
            corner_uv[k] = [
                angular_u(p, c),
                beta.rem_euclid(2.0 * std::f64::consts::PI) / (2.0 * std::f64::consts::PI),
            ];
        }
        uvs.push(corner_uv);
    }
    uvs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::modifiers::solidify;
    use crate::kernel::primitives::{make_primitive, PrimitiveSpec};
    use crate::metrics::object::uv_island_count;

    #[test]
    fn box_unwraps_to_one_island() {
        let m = make_primitive(
            &PrimitiveSpec::Box {
                extents: [0.8, 0.5, 0.3],
            },
            4,
        )
        .unwrap();
        let unwrapped = generate_uv(&m, UvKind::Box).unwrap();
        assert_eq!(uv_island_count(&unwrapped), 1);
        // Construction-time UVs agree with regeneration.
        assert_eq!(uv_island_count(&m), 1);
    }

    #[test]
    fn cylinder_unwraps_to_three_islands() {
        let m = make_primitive(
            &PrimitiveSpec::Cyl {
                radius: 0.5,
                height: 1.0,
            },
            32,
        )
        .unwrap();
        assert_eq!(uv_island_count(&m), 3);
        let re = generate_uv(&m, UvKind::Cyl).unwrap();
        assert_eq!(uv_island_count(&re), 3);
    }

    #[test]
    fn sphere_and_torus_are_single_islands() {
        let sph = make_primitive(&PrimitiveSpec::Sph { radius: 0.4 }, 24).unwrap();
        assert_eq!(uv_island_count(&sph), 1);
        let tor = make_primitive(
            &PrimitiveSpec::Torus {
                major_radius: 0.4,
                minor_radius: 0.1,
            },
            24,
        )
        .unwrap();
        assert_eq!(uv_island_count(&tor), 1);
    }

    #[test]
    fn canvas_front_face_covers_unit_square() {
        let m = make_primitive(
            &PrimitiveSpec::Box {
                extents: [0.6, 0.02, 0.4],
            },
            4,
        )
        .unwrap();
        let unwrapped = generate_uv(&m, UvKind::CanvasFront).unwrap();
        let uvs = unwrapped.uv.as_ref().unwrap();
        let mut front_corners = Vec::new();
        for t in 0..unwrapped.triangles.len() {
            let n = unwrapped.triangle_normal(t);
            if n.y < -0.9 {
                front_corners.extend_from_slice(&uvs[t]);
            }
        }
        assert_eq!(front_corners.len(), 6);
        for target in [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]] {
            assert!(
                front_corners
                    .iter()
                    .any(|c| (c[0] - target[0]).abs() < 1e-9 && (c[1] - target[1]).abs() < 1e-9),
                "missing canvas corner {target:?}"
            );
        }
    }

    #[test]
    fn uvs_stay_in_unit_square_after_modifiers() {
        let profile: Vec<[f64; 2]> = (0..=8)
            .map(|k| {
                let a = std::f64::consts::FRAC_PI_2 * k as f64 / 8.0;
                [0.1 * a.cos(), 0.1 * a.sin()]
            })
            .collect();
        let shell = make_primitive(&PrimitiveSpec::Curve { profile, closed: false }, 20).unwrap();
        let solid = solidify(&shell, 0.004).unwrap();
        let unwrapped = generate_uv(&solid, UvKind::Curve).unwrap();
        for corner in unwrapped.uv.as_ref().unwrap().iter().flatten() {
            assert!((0.0..=1.0).contains(&corner[0]));
            assert!((0.0..=1.0).contains(&corner[1]));
        }
    }

    #[test]
    fn empty_mesh_is_unsupported() {
        let empty = TriMesh::new("x", vec![], vec![]);
        assert!(matches!(
            generate_uv(&empty, UvKind::Box),
            Err(KernelError::UnsupportedTopology(_))
        ));
    }
}
