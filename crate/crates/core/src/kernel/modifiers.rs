//! Mesh modifiers: mirror, radial array, solidify, bevel, duplicate.
//!
//! Solidify and bevel drop UVs (topology changes); callers regenerate them
//! with [`super::uv::generate_uv`]. Mirror and radial array carry UVs
//! through unchanged.

use std::collections::BTreeMap;

use super::mesh::{TriMesh, MIN_TRIANGLE_AREA};
use super::KernelError;
use crate::model::{RigidTransform, Vec3};

/// Dihedral-angle threshold above which an edge counts as sharp for
/// beveling: faces meeting at more than 30 degrees.
const SHARP_COS_THRESHOLD: f64 = 0.866_025_403_784_438_6;

/// Mirror a mesh about the plane through `plane_point` with unit
/// `plane_normal`, flipping triangle winding so normals stay outward. The
/// mirror plane is always the explicit (point, normal) pair, never the mesh
/// origin.
pub fn mirror_about(mesh: &TriMesh, plane_point: Vec3, plane_normal: Vec3) -> TriMesh {
    debug_assert!((plane_normal.norm() - 1.0).abs() < 1e-9);
    let mut out = mesh.clone();
    for v in &mut out.vertices {
        let d = (*v - plane_point).dot(&plane_normal);
        *v -= 2.0 * d * plane_normal;
    }
    for tri in &mut out.triangles {
        tri.swap(1, 2);
    }
    if let Some(uv) = &mut out.uv {
        for corners in uv.iter_mut() {
            corners.swap(1, 2);
        }
    }
    out
}

/// `count` copies rotated by `2*pi*k/count` about the axis through `pivot`,
/// `k = 0..count-1`. Every copy is computed from the original, so there is
/// no cumulative drift.
pub fn radial_array(
    mesh: &TriMesh,
    pivot: Vec3,
    axis: Vec3,
    count: u32,
) -> Result<Vec<TriMesh>, KernelError> {
    if count < 2 {
        return Err(KernelError::DegenerateParams(format!(
            "radial array needs count >= 2, got {count}"
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    for k in 0..count {
        let angle = 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(count);
        let t = RigidTransform::rotation_about(pivot, axis, angle);
        out.push(mesh.transformed(&t));
    }
    Ok(out)
}

/// Rotate one radial-array instance into place; instance 0 is the identity.
pub fn radial_instance(
    mesh: &TriMesh,
    pivot: Vec3,
    axis: Vec3,
    count: u32,
    index: u32,
) -> Result<TriMesh, KernelError> {
    if count < 2 {
        return Err(KernelError::DegenerateParams(format!(
            "radial array needs count >= 2, got {count}"
        )));
    }
    if index >= count {
        return Err(KernelError::DegenerateParams(format!(
            "radial index {index} out of range for count {count}"
        )));
    }
    let angle = 2.0 * std::f64::consts::PI * f64::from(index) / f64::from(count);
    Ok(mesh.transformed(&RigidTransform::rotation_about(pivot, axis, angle)))
}

/// Deep copy with independent storage, renamed and transformed.
pub fn duplicate_part(mesh: &TriMesh, new_name: &str, offset: &RigidTransform) -> TriMesh {
    let mut out = mesh.clone();
    out.part_name = new_name.to_string();
    out.transform(offset);
    out
}

// ---------------------------------------------------------------------------
// Solidify
// ---------------------------------------------------------------------------

/// Close an oriented open shell by offsetting an inner surface `thickness`
/// along the inward vertex normals and stitching rim faces along every
/// boundary loop. The result is a closed 2-manifold with zero non-manifold
/// edges.
pub fn solidify(mesh: &TriMesh, thickness: f64) -> Result<TriMesh, KernelError> {
    if !(thickness.is_finite() && thickness > 0.0) {
        return Err(KernelError::DegenerateParams(format!(
            "solidify thickness must be positive, got {thickness}"
        )));
    }
    // Boundary vertices must have exactly two boundary edges, i.e. simple
    // boundary loops; anything else cannot be stitched into a manifold rim.
    let boundary = mesh.boundary_edges();
    let mut boundary_degree: BTreeMap<u32, u32> = BTreeMap::new();
    for (a, b) in &boundary {
        *boundary_degree.entry(*a).or_insert(0) += 1;
        *boundary_degree.entry(*b).or_insert(0) += 1;
    }
    if boundary_degree.values().any(|&d| d != 2) {
        return Err(KernelError::UnsupportedTopology(
            "shell boundary is not a set of simple loops".into(),
        ));
    }

    let normals = mesh.vertex_normals();
    if normals.iter().any(|n| n.norm() == 0.0) {
        return Err(KernelError::UnsupportedTopology(
            "shell has isolated vertices".into(),
        ));
    }

    // The inward offset may not exceed the local curvature radius, estimated
    // per convex interior edge as edge_length / (2 sin(phi/2)) with phi the
    // dihedral turning angle. Beyond that radius the offset surface crosses
    // the medial axis and self-intersects.
    {
        let mut dir_owner: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            for k in 0..3 {
                dir_owner.insert((tri[k], tri[(k + 1) % 3]), t);
            }
        }
        let mut max_thickness = f64::INFINITY;
        for (&(a, b), &f1) in &dir_owner {
            if a > b {
                continue;
            }
            let Some(&f2) = dir_owner.get(&(b, a)) else {
                continue;
            };
            let (n1, n2) = (mesh.triangle_normal(f1), mesh.triangle_normal(f2));
            let e = mesh.vertices[b as usize] - mesh.vertices[a as usize];
            if n1.cross(&n2).dot(&e) <= 0.0 {
                continue; // concave or flat: no inward-offset limit here
            }
            let phi = n1.dot(&n2).clamp(-1.0, 1.0).acos();
            if phi > 1e-9 {
                max_thickness = max_thickness.min(e.norm() / (2.0 * (phi * 0.5).sin()));
            }
        }
        if thickness >= max_thickness {
            return Err(KernelError::SelfIntersection(format!(
                "thickness {thickness} exceeds local curvature radius {max_thickness:.6}"
            )));
        }
    }

    let nv = mesh.vertices.len();
    let mut out = TriMesh::new(
        mesh.part_name.clone(),
        Vec::with_capacity(nv * 2),
        Vec::with_capacity(mesh.triangles.len() * 2 + boundary.len() * 2),
    );
    out.material_slots = mesh.material_slots.clone();
    out.vertices.extend_from_slice(&mesh.vertices);
    for (v, n) in mesh.vertices.iter().zip(&normals) {
        out.vertices.push(v - n * thickness);
    }

    let inner = |v: u32| v + nv as u32;
    let mut face_material = Vec::new();
    // Outer surface unchanged.
    for (t, tri) in mesh.triangles.iter().enumerate() {
        out.triangles.push(*tri);
        face_material.push(mesh.face_material.get(t).copied().unwrap_or(0));
    }
    // Inner surface: offset copy with reversed winding. A flipped or
    // collapsed inner triangle means the offset exceeded the local
    // curvature radius.
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let it = [inner(tri[0]), inner(tri[2]), inner(tri[1])];
        out.triangles.push(it);
        face_material.push(mesh.face_material.get(t).copied().unwrap_or(0));

        let p = [
            out.vertices[it[0] as usize],
            out.vertices[it[1] as usize],
            out.vertices[it[2] as usize],
        ];
        let n_inner = (p[1] - p[0]).cross(&(p[2] - p[0]));
        if n_inner.norm() * 0.5 <= MIN_TRIANGLE_AREA {
            return Err(KernelError::SelfIntersection(format!(
                "inner offset collapses triangle {t}"
            )));
        }
        let n_outer = mesh.triangle_normal(t);
        if n_inner.normalize().dot(&n_outer) > 0.0 {
            return Err(KernelError::SelfIntersection(format!(
                "offset thickness {thickness} inverts triangle {t}"
            )));
        }
    }
    // Rim quads along each boundary edge. The outer face traverses a->b, so
    // the rim traverses b->a to stay consistently oriented.
    let owning_material: BTreeMap<(u32, u32), u32> = {
        let mut map = BTreeMap::new();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            for k in 0..3 {
                map.insert(
                    (tri[k], tri[(k + 1) % 3]),
                    mesh.face_material.get(t).copied().unwrap_or(0),
                );
            }
        }
        map
    };
    for (a, b) in &boundary {
        let slot = owning_material.get(&(*a, *b)).copied().unwrap_or(0);
        out.triangles.push([*b, *a, inner(*a)]);
        face_material.push(slot);
        out.triangles.push([*b, inner(*a), inner(*b)]);
        face_material.push(slot);
    }
    out.face_material = face_material;
    out.uv = None;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Bevel
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct SharpEdge {
    a: u32,
    b: u32,
    /// Face traversing a->b and its region.
    f1: usize,
    /// Face traversing b->a and its region.
    f2: usize,
}

/// Replace sharp convex edges with `segments` facets of width `width`.
///
/// The mesh is split into smooth regions along sharp edges; each region's
/// rim vertices are inset by `width` within the surface, and the gaps are
/// filled with facet strips (plus fan patches where three or more sharp
/// edges meet at a vertex). Output stays 2-manifold; concave and boundary
/// edges are left untouched, and a mesh without sharp edges is returned
/// unchanged.
pub fn bevel_edges(mesh: &TriMesh, width: f64, segments: u32) -> Result<TriMesh, KernelError> {
    if width == 0.0 {
        return Ok(mesh.clone());
    }
    if !(width.is_finite() && width > 0.0) {
        return Err(KernelError::DegenerateParams(format!(
            "bevel width must be non-negative and finite, got {width}"
        )));
    }
    let segments = segments.max(1);

    // Directed edge -> face index.
    let mut dir_owner: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            dir_owner.insert((tri[k], tri[(k + 1) % 3]), t);
        }
    }
    let face_normals: Vec<Vec3> = (0..mesh.triangles.len())
        .map(|t| mesh.triangle_normal(t))
        .collect();

    // Sharp convex interior edges.
    let mut sharp: Vec<SharpEdge> = Vec::new();
    let mut sharp_set: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for (&(a, b), &f1) in &dir_owner {
        if a > b {
            continue; // visit each undirected edge once, from its a<b side
        }
        let Some(&f2) = dir_owner.get(&(b, a)) else {
            continue; // boundary edge
        };
        let (n1, n2) = (face_normals[f1], face_normals[f2]);
        if n1.dot(&n2) >= SHARP_COS_THRESHOLD {
            continue; // smooth
        }
        let e = mesh.vertices[b as usize] - mesh.vertices[a as usize];
        if n1.cross(&n2).dot(&e) <= 0.0 {
            continue; // concave
        }
        sharp_set.insert((a, b), sharp.len());
        sharp.push(SharpEdge { a, b, f1, f2 });
    }
    if sharp.is_empty() {
        return Ok(mesh.clone());
    }

    // Width precondition: less than half the shortest sharp edge.
    let mut min_len = f64::INFINITY;
    for s in &sharp {
        min_len = min_len.min((mesh.vertices[s.b as usize] - mesh.vertices[s.a as usize]).norm());
    }
    if width >= 0.5 * min_len {
        return Err(KernelError::WidthTooLarge {
            width,
            max: 0.5 * min_len,
        });
    }

    // Smooth regions: union-find over faces, merged across non-sharp edges.
    let mut parent: Vec<usize> = (0..mesh.triangles.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (&(a, b), &f1) in &dir_owner {
        if a > b {
            continue;
        }
        if sharp_set.contains_key(&(a, b)) {
            continue;
        }
        if let Some(&f2) = dir_owner.get(&(b, a)) {
            let (ra, rb) = (find(&mut parent, f1), find(&mut parent, f2));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }

    // Inset direction of a sharp edge within a region: in-face perpendicular
    // pointing into the face that owns the directed edge.
    let in_face_perp = |a: u32, b: u32, face: usize| -> Vec3 {
        let e = (mesh.vertices[b as usize] - mesh.vertices[a as usize]).normalize();
        face_normals[face].cross(&e)
    };

    // Per (region, vertex): list of inset directions from incident sharp
    // edges bounding that region.
    let mut inset: BTreeMap<(usize, u32), Vec<Vec3>> = BTreeMap::new();
    for s in &sharp {
        let r1 = find(&mut parent, s.f1);
        let r2 = find(&mut parent, s.f2);
        let d1 = in_face_perp(s.a, s.b, s.f1);
        let d2 = in_face_perp(s.b, s.a, s.f2);
        for v in [s.a, s.b] {
            inset.entry((r1, v)).or_default().push(d1);
            inset.entry((r2, v)).or_default().push(d2);
        }
    }

    // Region-local vertex copies. Vertices on a region's sharp boundary get
    // mitered inset positions; everything else keeps its position.
    let mut out_vertices: Vec<Vec3> = Vec::new();
    let mut copy_of: BTreeMap<(usize, u32), u32> = BTreeMap::new();
    let mut region_of_face: Vec<usize> = Vec::with_capacity(mesh.triangles.len());
    for t in 0..mesh.triangles.len() {
        region_of_face.push(find(&mut parent, t));
    }
    let mut out_triangles: Vec<[u32; 3]> = Vec::new();
    let mut out_face_material: Vec<u32> = Vec::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let region = region_of_face[t];
        let mut new_tri = [0u32; 3];
        for (k, &v) in tri.iter().enumerate() {
            let key = (region, v);
            let idx = match copy_of.get(&key) {
                Some(&i) => i,
                None => {
                    let pos = match inset.get(&key) {
                        Some(dirs) => mesh.vertices[v as usize] + miter_offset(dirs) * width,
                        None => mesh.vertices[v as usize],
                    };
                    let i = out_vertices.len() as u32;
                    out_vertices.push(pos);
                    copy_of.insert(key, i);
                    i
                }
            };
            new_tri[k] = idx;
        }
        out_triangles.push(new_tri);
        out_face_material.push(mesh.face_material.get(t).copied().unwrap_or(0));
    }

    // Facet strips along each sharp edge. The chain at an endpoint runs from
    // the f1-region copy to the f2-region copy along an arc of radius
    // `width` around the original vertex.
    let chain_at = |v: u32,
                    r1: usize,
                    r2: usize,
                    copy_of: &BTreeMap<(usize, u32), u32>,
                    out_vertices: &mut Vec<Vec3>,
                    cache: &mut BTreeMap<(u32, usize, usize), Vec<u32>>|
     -> Vec<u32> {
        if let Some(c) = cache.get(&(v, r1, r2)) {
            return c.clone();
        }
        let start = copy_of[&(r1, v)];
        let end = copy_of[&(r2, v)];
        let mut chain = vec![start];
        let p = mesh.vertices[v as usize];
        let d_start = out_vertices[start as usize] - p;
        let d_end = out_vertices[end as usize] - p;
        for k in 1..segments {
            let t = f64::from(k) / f64::from(segments);
            let dir = slerp_dir(d_start, d_end, t);
            let radius = d_start.norm() * (1.0 - t) + d_end.norm() * t;
            let idx = out_vertices.len() as u32;
            out_vertices.push(p + dir * radius);
            chain.push(idx);
        }
        chain.push(end);
        cache.insert((v, r1, r2), chain.clone());
        // The reverse traversal reuses the same vertices.
        let rev: Vec<u32> = cache[&(v, r1, r2)].iter().rev().copied().collect();
        cache.insert((v, r2, r1), rev);
        chain
    };

    let mut chain_cache: BTreeMap<(u32, usize, usize), Vec<u32>> = BTreeMap::new();
    for s in &sharp {
        let r1 = region_of_face[s.f1];
        let r2 = region_of_face[s.f2];
        let ca = chain_at(s.a, r1, r2, &copy_of, &mut out_vertices, &mut chain_cache);
        let cb = chain_at(s.b, r1, r2, &copy_of, &mut out_vertices, &mut chain_cache);
        let slot = mesh.face_material.get(s.f1).copied().unwrap_or(0);
        for k in 0..segments as usize {
            // Row k edge (A_k, B_k) to row k+1; strip traverses b->a against
            // the region face's a->b.
            let (a0, a1) = (ca[k], ca[k + 1]);
            let (b0, b1) = (cb[k], cb[k + 1]);
            out_triangles.push([b0, a0, a1]);
            out_face_material.push(slot);
            out_triangles.push([b0, a1, b1]);
            out_face_material.push(slot);
        }
    }

    // Corner patches where three or more sharp edges meet at a vertex.
    let mut edges_at_vertex: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, s) in sharp.iter().enumerate() {
        edges_at_vertex.entry(s.a).or_default().push(i);
        edges_at_vertex.entry(s.b).or_default().push(i);
    }
    for (&v, edge_ids) in &edges_at_vertex {
        if edge_ids.len() < 3 {
            continue;
        }
        // The patch must traverse each chain opposite to its strip: strips
        // walk the a-endpoint chain forward (r1 -> r2) and the b-endpoint
        // chain backward, so the patch takes the reverse of each. The
        // resulting directed chains concatenate into a loop around the
        // corner, consecutive pairs sharing a region copy of v.
        let mut chains: Vec<Vec<u32>> = edge_ids
            .iter()
            .map(|&i| {
                let s = &sharp[i];
                let r1 = region_of_face[s.f1];
                let r2 = region_of_face[s.f2];
                if v == s.a {
                    chain_cache[&(v, r2, r1)].clone()
                } else {
                    chain_cache[&(v, r1, r2)].clone()
                }
            })
            .collect();
        let mut loop_verts: Vec<u32> = chains.swap_remove(0);
        while !chains.is_empty() {
            let tail = *loop_verts.last().unwrap();
            let pos = chains.iter().position(|c| c[0] == tail).ok_or_else(|| {
                KernelError::UnsupportedTopology(format!(
                    "cannot close bevel corner loop at vertex {v}"
                ))
            })?;
            let next = chains.swap_remove(pos);
            loop_verts.extend_from_slice(&next[1..]);
        }
        if loop_verts.first() != loop_verts.last() {
            return Err(KernelError::UnsupportedTopology(format!(
                "bevel corner loop at vertex {v} does not close"
            )));
        }
        loop_verts.pop();
        let slot = mesh.face_material.get(sharp[edge_ids[0]].f1).copied().unwrap_or(0);
        if loop_verts.len() == 3 {
            out_triangles.push([loop_verts[0], loop_verts[1], loop_verts[2]]);
            out_face_material.push(slot);
        } else {
            // Fan from the loop centroid pushed onto the corner sphere.
            let centroid: Vec3 = loop_verts
                .iter()
                .map(|&i| out_vertices[i as usize])
                .sum::<Vec3>()
                / loop_verts.len() as f64;
            let p = mesh.vertices[v as usize];
            let dir = centroid - p;
            let center = if dir.norm() > 1e-12 {
                p + dir.normalize() * width
            } else {
                centroid
            };
            let c_idx = out_vertices.len() as u32;
            out_vertices.push(center);
            for k in 0..loop_verts.len() {
                let (p0, p1) = (loop_verts[k], loop_verts[(k + 1) % loop_verts.len()]);
                out_triangles.push([c_idx, p0, p1]);
                out_face_material.push(slot);
            }
        }
    }

    let mut out = TriMesh::new(mesh.part_name.clone(), out_vertices, out_triangles);
    out.material_slots = mesh.material_slots.clone();
    out.face_material = out_face_material;
    out.uv = None;
    Ok(out)
}

/// Mitered inset offset for a vertex given the inset directions of its
/// incident sharp boundary edges within one region.
fn miter_offset(dirs: &[Vec3]) -> Vec3 {
    match dirs.len() {
        0 => Vec3::zeros(),
        1 => dirs[0],
        2 => {
            let denom = 1.0 + dirs[0].dot(&dirs[1]);
            if denom.abs() < 1e-9 {
                // Opposed directions: degenerate miter, fall back to average.
                (dirs[0] + dirs[1]) * 0.5
            } else {
                (dirs[0] + dirs[1]) / denom
            }
        }
        _ => {
            let sum: Vec3 = dirs.iter().sum();
            if sum.norm() > 1e-12 {
                sum.normalize()
            } else {
                Vec3::zeros()
            }
        }
    }
}

/// Spherical interpolation between two offset directions around a corner.
fn slerp_dir(a: Vec3, b: Vec3, t: f64) -> Vec3 {
    let (an, bn) = (a.normalize(), b.normalize());
    let cos = an.dot(&bn).clamp(-1.0, 1.0);
    let omega = cos.acos();
    if omega < 1e-9 {
        return (an * (1.0 - t) + bn * t).normalize();
    }
    let s = omega.sin();
    (an * ((1.0 - t) * omega).sin() / s + bn * ((t * omega).sin() / s)).normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::primitives::{make_primitive, PrimitiveSpec};

    fn unit_cube() -> TriMesh {
        make_primitive(
            &PrimitiveSpec::Box {
                extents: [1.0, 1.0, 1.0],
            },
            8,
        )
        .unwrap()
    }

    #[test]
    fn mirror_of_symmetric_mesh_is_same_vertex_multiset() {
        let cube = unit_cube();
        let mirrored = mirror_about(&cube, Vec3::zeros(), Vec3::x());
        let mut a: Vec<_> = cube.vertices.iter().map(|v| format!("{:.9?}", v)).collect();
        let mut b: Vec<_> = mirrored
            .vertices
            .iter()
            .map(|v| format!("{:.9?}", v))
            .collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        assert!(mirrored.signed_volume() > 0.0, "winding must stay outward");
    }

    #[test]
    fn mirror_offsets_flip_about_explicit_plane() {
        let mut cube = unit_cube();
        cube.transform(&RigidTransform::from_translation(Vec3::new(0.5, 0.0, 0.0)));
        let mirrored = mirror_about(&cube, Vec3::zeros(), Vec3::x());
        let c = mirrored.aabb().unwrap().center();
        assert!((c.x + 0.5).abs() < 1e-12);
    }

    #[test]
    fn mirror_twice_is_identity() {
        let m = make_primitive(
            &PrimitiveSpec::Cyl {
                radius: 0.2,
                height: 0.7,
            },
            16,
        )
        .unwrap()
        .transformed(&RigidTransform::from_translation(Vec3::new(0.3, 0.1, -0.2)));
        let back = mirror_about(
            &mirror_about(&m, Vec3::new(0.1, 0.0, 0.0), Vec3::x()),
            Vec3::new(0.1, 0.0, 0.0),
            Vec3::x(),
        );
        for (a, b) in m.vertices.iter().zip(&back.vertices) {
            assert!((a - b).norm() < 1e-9);
        }
        assert_eq!(m.triangles, back.triangles);
    }

    #[test]
    fn radial_array_half_turn() {
        let mut cube = unit_cube();
        cube.transform(&RigidTransform::from_translation(Vec3::new(1.0, 0.0, 0.0)));
        let copies = radial_array(&cube, Vec3::zeros(), Vec3::z(), 2).unwrap();
        assert_eq!(copies.len(), 2);
        let c1 = copies[1].aabb().unwrap().center();
        assert!((c1 - Vec3::new(-1.0, 0.0, 0.0)).norm() < 1e-9);
        assert!(radial_array(&cube, Vec3::zeros(), Vec3::z(), 1).is_err());
    }

    #[test]
    fn radial_array_centroid_angles_match_oracle() {
        let mut cube = unit_cube();
        cube.transform(&RigidTransform::from_translation(Vec3::new(0.8, 0.0, 0.0)));
        let copies = radial_array(&cube, Vec3::zeros(), Vec3::z(), 4).unwrap();
        let radius0 = copies[0].aabb().unwrap().center().norm();
        for (k, c) in copies.iter().enumerate() {
            let center = c.aabb().unwrap().center();
            let angle = center.y.atan2(center.x).rem_euclid(2.0 * std::f64::consts::PI);
            let expected = 2.0 * std::f64::consts::PI * k as f64 / 4.0;
            assert!((angle - expected).abs() < 1e-9 || (angle - expected).abs() > 2.0 * std::f64::consts::PI - 1e-9);
            assert!((center.norm() - radius0).abs() < 1e-9);
        }
        // Rotating copy 0 by 2*pi*k/count reproduces copy k.
        for (k, c) in copies.iter().enumerate() {
            let t = RigidTransform::rotation_about(
                Vec3::zeros(),
                Vec3::z(),
                2.0 * std::f64::consts::PI * k as f64 / 4.0,
            );
            let rot = copies[0].transformed(&t);
            for (a, b) in rot.vertices.iter().zip(&c.vertices) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn duplicate_is_independent() {
        let cube = unit_cube();
        let mut copy = duplicate_part(&cube, "copy", &RigidTransform::identity());
        assert_eq!(copy.triangles.len(), cube.triangles.len());
        for (a, b) in cube.vertices.iter().zip(&copy.vertices) {
            assert!((a - b).norm() == 0.0);
        }
        copy.vertices[0] += Vec3::new(1.0, 0.0, 0.0);
        assert!((cube.vertices[0] - copy.vertices[0]).norm() > 0.5);
    }

    #[test]
    fn solidify_flat_patch_volume() {
        // Open 1x1 quad in the xy plane, normal +z.
        let mut patch = TriMesh::new(
            "patch",
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
        );
        patch.face_material = vec![0, 0];
        let slab = solidify(&patch, 0.01).unwrap();
        assert_eq!(slab.non_manifold_edge_count(), 0);
        assert!((slab.signed_volume() - 0.01).abs() / 0.01 < 0.01);
    }

    #[test]
    fn solidify_hemisphere_is_manifold() {
        // Open hemisphere shell: quarter-circle profile from rim to pole.
        let r = 0.1;
        let profile: Vec<[f64; 2]> = (0..=8)
            .map(|k| {
                let a = std::f64::consts::FRAC_PI_2 * k as f64 / 8.0;
                [r * a.cos(), r * a.sin()]
            })
            .collect();
        let shell = make_primitive(&PrimitiveSpec::Curve { profile, closed: false }, 24).unwrap();
        assert!(!shell.boundary_edges().is_empty());
        let solid = solidify(&shell, 0.005).unwrap();
        assert_eq!(solid.non_manifold_edge_count(), 0);
        assert!(solid.signed_volume() > 0.0);
        solid.validate().unwrap();
    }

    #[test]
    fn solidify_rejects_bad_thickness() {
        let patch = TriMesh::new(
            "patch",
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2]],
        );
        assert!(matches!(
            solidify(&patch, 0.0),
            Err(KernelError::DegenerateParams(_))
        ));
    }

    #[test]
    fn solidify_excessive_thickness_self_intersects() {
        let r = 0.05;
        let profile: Vec<[f64; 2]> = (0..=8)
            .map(|k| {
                let a = std::f64::consts::FRAC_PI_2 * k as f64 / 8.0;
                [r * a.cos(), r * a.sin()]
            })
            .collect();
        let shell = make_primitive(&PrimitiveSpec::Curve { profile, closed: false }, 16).unwrap();
        assert!(matches!(
            solidify(&shell, 0.2),
            Err(KernelError::SelfIntersection(_))
        ));
    }

    #[test]
    fn bevel_cube_chamfer_topology() {
        let cube = unit_cube();
        let beveled = bevel_edges(&cube, 0.01, 1).unwrap();
        // 6 shrunk faces (2 tris) + 12 edge strips (2 tris) + 8 corners (1 tri).
        assert_eq!(beveled.triangles.len(), 6 * 2 + 12 * 2 + 8);
        assert_eq!(beveled.non_manifold_edge_count(), 0);
        assert!(beveled.signed_volume() > 0.0);
        assert!(beveled.signed_volume() < cube.signed_volume());
        beveled.validate().unwrap();
    }

    #[test]
    fn bevel_zero_width_is_identity() {
        let cube = unit_cube();
        let same = bevel_edges(&cube, 0.0, 1).unwrap();
        assert_eq!(same.vertices.len(), cube.vertices.len());
        assert_eq!(same.triangles, cube.triangles);
    }

    #[test]
    fn bevel_does_not_grow_aabb() {
        let cube = unit_cube();
        for segments in [1, 2, 3] {
            let beveled = bevel_edges(&cube, 0.05, segments).unwrap();
            let b0 = cube.aabb().unwrap();
            let b1 = beveled.aabb().unwrap();
            for i in 0..3 {
                assert!(b1.min[i] >= b0.min[i] - 1e-12);
                assert!(b1.max[i] <= b0.max[i] + 1e-12);
            }
            assert_eq!(beveled.non_manifold_edge_count(), 0, "segments {segments}");
        }
    }

    #[test]
    fn bevel_cylinder_rims_stay_manifold() {
        let cyl = make_primitive(
            &PrimitiveSpec::Cyl {
                radius: 0.3,
                height: 0.8,
            },
            24,
        )
        .unwrap();
        let beveled = bevel_edges(&cyl, 0.01, 2).unwrap();
        assert_eq!(beveled.non_manifold_edge_count(), 0);
        assert!(beveled.signed_volume() > 0.0);
    }

    #[test]
    fn bevel_sphere_is_identity_no_sharp_edges() {
        let sph = make_primitive(&PrimitiveSpec::Sph { radius: 0.3 }, 24).unwrap();
        let beveled = bevel_edges(&sph, 0.01, 1).unwrap();
        assert_eq!(beveled.triangles.len(), sph.triangles.len());
    }

    #[test]
    fn bevel_width_too_large_rejected() {
        let cube = unit_cube();
        assert!(matches!(
            bevel_edges(&cube, 0.6, 1),
            Err(KernelError::WidthTooLarge { .. })
        ));
    }
}
