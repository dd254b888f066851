//! Object-level mesh and material metrics: material slot count (MAT), PBR
//! channel coverage (PBR), non-manifold edge count (NME), face count (FAC),
//! vertex count (VTX), and UV island count (UVI).

use serde::{Deserialize, Serialize};

use crate::kernel::TriMesh;

/// UV coordinates on both sides of a shared mesh edge must agree within
/// this tolerance (in UV units) to count as continuous.
pub const UV_MATCH_TOL: f64 = 1e-6;

/// Number of channels in the fixed PBR coverage set
/// {base_color, roughness, metallic, normal, alpha, emission}.
pub const PBR_CHANNEL_COUNT: usize = 6;

/// Per-asset mesh/material quality report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetReport {
    /// Non-empty material slots summed over parts.
    pub mat: u64,
    /// Mean present-channel fraction over all materials, in [0,1].
    pub pbr: f64,
    /// Edges with incident-face count != 2, summed over parts.
    pub nme: u64,
    /// Total face (triangle) count.
    pub fac: u64,
    /// Total vertex count.
    pub vtx: u64,
    /// UV islands summed over parts.
    pub uvi: u64,
}

/// Compute the six object-level metrics over the part meshes of one asset.
pub fn object_metrics(meshes: &[TriMesh]) -> AssetReport {
    let mut mat = 0u64;
    let mut channel_fracs: Vec<f64> = Vec::new();
    let mut nme = 0u64;
    let mut fac = 0u64;
    let mut vtx = 0u64;
    let mut uvi = 0u64;
    for mesh in meshes {
        mat += mesh.material_slots.len() as u64;
        for m in &mesh.material_slots {
            channel_fracs.push(m.present_channel_count() as f64 / PBR_CHANNEL_COUNT as f64);
        }
        nme += mesh.non_manifold_edge_count() as u64;
        fac += mesh.triangles.len() as u64;
        vtx += mesh.vertices.len() as u64;
        uvi += uv_island_count(mesh) as u64;
    }
    let pbr = if channel_fracs.is_empty() {
        0.0
    } else {
        channel_fracs.iter().sum::<f64>() / channel_fracs.len() as f64
    };
    AssetReport {
        mat,
        pbr,
        nme,
        fac,
        vtx,
        uvi,
    }
}

/// Count connected components of the UV face graph: two faces are connected
/// when they share a mesh edge whose UV coordinates agree on both sides (at
/// both endpoints) within [`UV_MATCH_TOL`]. A mesh without a UV map has no
/// layout and counts zero islands.
pub fn uv_island_count(mesh: &TriMesh) -> usize {
    let Some(uv) = &mesh.uv else {
        return 0;
    };
    if mesh.triangles.is_empty() {
        return 0;
    }

    // Union-find over faces.
    let mut parent: Vec<usize> = (0..mesh.triangles.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    // Undirected edge -> occurrences of (face, uv at lo vertex, uv at hi).
    use std::collections::HashMap;
    let mut edge_faces: HashMap<(u32, u32), Vec<(usize, [f64; 2], [f64; 2])>> = HashMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            let (uva, uvb) = (uv[t][k], uv[t][(k + 1) % 3]);
            let (key, lo_uv, hi_uv) = if a < b {
                ((a, b), uva, uvb)
            } else {
                ((b, a), uvb, uva)
            };
            edge_faces.entry(key).or_default().push((t, lo_uv, hi_uv));
        }
    }
    let close = |a: [f64; 2], b: [f64; 2]| -> bool {
        (a[0] - b[0]).abs() <= UV_MATCH_TOL && (a[1] - b[1]).abs() <= UV_MATCH_TOL
    };
    for occurrences in edge_faces.values() {
        for i in 0..occurrences.len() {
            for j in (i + 1)..occurrences.len() {
                let (fi, lo_i, hi_i) = occurrences[i];
                let (fj, lo_j, hi_j) = occurrences[j];
                if close(lo_i, lo_j) && close(hi_i, hi_j) {
                    let (ri, rj) = (find(&mut parent, fi), find(&mut parent, fj));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
    }
    let mut roots: Vec<usize> = (0..mesh.triangles.len())
        .map(|t| find(&mut parent, t))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::primitives::{make_primitive, PrimitiveSpec};
    use crate::kernel::MaterialSpec;
    use crate::model::Vec3;

    #[test]
    fn cube_report_matches_formulas() {
        let mut cube = make_primitive(
            &PrimitiveSpec::Box {
                extents: [1.0, 1.0, 1.0],
            },
            4,
        )
        .unwrap();
        cube.material_slots = vec![MaterialSpec::flat("paint", [0.5, 0.5, 0.5]).with_roughness(0.4)];
        let report = object_metrics(&[cube]);
        assert_eq!(report.mat, 1);
        assert!((report.pbr - 2.0 / 6.0).abs() < 1e-12);
        assert_eq!(report.nme, 0);
        assert_eq!(report.fac, 12);
        assert_eq!(report.vtx, 8);
        assert_eq!(report.uvi, 1);
    }

    #[test]
    fn isolated_quad_has_four_boundary_edges() {
        let mut quad = crate::kernel::TriMesh::new(
            "quad",
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
        );
        quad.face_material = vec![0, 0];
        let report = object_metrics(&[quad]);
        assert_eq!(report.nme, 4);
    }

    /// Independent BFS oracle for island counting using a different traversal
    /// and adjacency representation.
    pub(crate) fn uv_island_oracle(mesh: &TriMesh) -> usize {
        let Some(uv) = &mesh.uv else { return 0 };
        if mesh.triangles.is_empty() {
            return 0;
        }
        use std::collections::{HashMap, HashSet, VecDeque};
        let mut edge_faces: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let key = if a < b { (a, b) } else { (b, a) };
                edge_faces.entry(key).or_default().push(t);
            }
        }
        let uv_at = |t: usize, v: u32| -> Option<[f64; 2]> {
            let tri = mesh.triangles[t];
            (0..3).find(|&k| tri[k] == v).map(|k| uv[t][k])
        };
        let connected = |t1: usize, t2: usize, a: u32, b: u32| -> bool {
            let ok = |v: u32| -> bool {
                match (uv_at(t1, v), uv_at(t2, v)) {
                    (Some(x), Some(y)) => {
                        (x[0] - y[0]).abs() <= UV_MATCH_TOL && (x[1] - y[1]).abs() <= UV_MATCH_TOL
                    }
                    _ => false,
                }
            };
            ok(a) && ok(b)
        };
        let mut seen: HashSet<usize> = HashSet::new();
        let mut islands = 0;
        for start in 0..mesh.triangles.len() {
            if seen.contains(&start) {
                continue;
            }
            islands += 1;
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(t) = queue.pop_front() {
                let tri = mesh.triangles[t];
                for k in 0..3 {
                    let (a, b) = (tri[k], tri[(k + 1) % 3]);
                    let key = if a < b { (a, b) } else { (b, a) };
                    for &other in &edge_faces[&key] {
                        if other != t && !seen.contains(&other) && connected(t, other, a, b) {
                            seen.insert(other);
                            queue.push_back(other);
                        }
                    }
                }
            }
        }
        islands
    }

    #[test]
    fn union_find_matches_bfs_oracle_on_primitives() {
        let meshes = vec![
            make_primitive(&PrimitiveSpec::Box { extents: [0.5, 0.8, 0.3] }, 4).unwrap(),
            make_primitive(&PrimitiveSpec::Cyl { radius: 0.2, height: 0.9 }, 19).unwrap(),
            make_primitive(&PrimitiveSpec::Sph { radius: 0.3 }, 15).unwrap(),
            make_primitive(
                &PrimitiveSpec::Torus { major_radius: 0.4, minor_radius: 0.08 },
                17,
            )
            .unwrap(),
        ];
        for m in &meshes {
            assert_eq!(uv_island_count(m), uv_island_oracle(m), "{}", m.part_name);
        }
    }
}
