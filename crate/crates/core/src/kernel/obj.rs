//! Wavefront-style mesh export and import.
//!
//! One named group per part, per-corner UVs, and a companion material
//! library. Vertex precision is fixed at 6 decimal places so that identical
//! builds produce byte-identical files.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::mesh::{CornerUv, MaterialSpec, TriMesh};
use super::KernelError;
use crate::model::Vec3;

fn fmt6(x: f64) -> String {
    // Avoid "-0.000000" so equal geometry serializes identically.
    let s = format!("{:.6}", x);
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

/// Serialize meshes into OBJ text. `mtl_rel` is the library path written in
/// the `mtllib` line, relative to the OBJ's own directory.
pub fn obj_text(meshes: &[TriMesh], mtl_rel: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(lib) = mtl_rel {
        let _ = writeln!(out, "mtllib {lib}");
    }
    let mut v_base: u32 = 1;
    let mut vt_base: u32 = 1;
    for mesh in meshes {
        let _ = writeln!(out, "g {}", mesh.part_name);
        for v in &mesh.vertices {
            let _ = writeln!(out, "v {} {} {}", fmt6(v.x), fmt6(v.y), fmt6(v.z));
        }
        // Deduplicate exact UV pairs within the mesh, insertion-ordered.
        let mut vt_index: HashMap<(u64, u64), u32> = HashMap::new();
        let mut vt_list: Vec<[f64; 2]> = Vec::new();
        let mut corner_vt: Vec<[u32; 3]> = Vec::new();
        if let Some(uv) = &mesh.uv {
            for corners in uv {
                let mut ids = [0u32; 3];
                for (k, c) in corners.iter().enumerate() {
                    let key = (c[0].to_bits(), c[1].to_bits());
                    let id = *vt_index.entry(key).or_insert_with(|| {
                        vt_list.push(*c);
                        (vt_list.len() - 1) as u32
                    });
                    ids[k] = id;
                }
                corner_vt.push(ids);
            }
            for c in &vt_list {
                let _ = writeln!(out, "vt {} {}", fmt6(c[0]), fmt6(c[1]));
            }
        }
        let mut current_slot: Option<u32> = None;
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let slot = mesh.face_material.get(t).copied().unwrap_or(0);
            if current_slot != Some(slot) {
                if let Some(mat) = mesh.material_slots.get(slot as usize) {
                    let _ = writeln!(out, "usemtl {}", mat.name);
                }
                current_slot = Some(slot);
            }
            if mesh.uv.is_some() {
                let vt = corner_vt[t];
                let _ = writeln!(
                    out,
                    "f {}/{} {}/{} {}/{}",
                    v_base + tri[0],
                    vt_base + vt[0],
                    v_base + tri[1],
                    vt_base + vt[1],
                    v_base + tri[2],
                    vt_base + vt[2],
                );
            } else {
                let _ = writeln!(
                    out,
                    "f {} {} {}",
                    v_base + tri[0],
                    v_base + tri[1],
                    v_base + tri[2]
                );
            }
        }
        v_base += mesh.vertices.len() as u32;
        vt_base += vt_list.len() as u32;
    }
    out
}

/// Serialize a material library. Channel keywords follow the common PBR
/// extension: `Pr` roughness, `Pm` metallic, `norm` normal map, `d` alpha,
/// `Ke` emission, `map_Kd` image texture. Colors are linear RGB.
pub fn mtl_text(materials: &[MaterialSpec]) -> String {
    let mut out = String::new();
    for m in materials {
        let _ = writeln!(out, "newmtl {}", m.name);
        let _ = writeln!(
            out,
            "Kd {} {} {}",
            fmt6(m.base_color[0]),
            fmt6(m.base_color[1]),
            fmt6(m.base_color[2])
        );
        if let Some(r) = m.roughness {
            let _ = writeln!(out, "Pr {}", fmt6(r));
        }
        if let Some(mt) = m.metallic {
            let _ = writeln!(out, "Pm {}", fmt6(mt));
        }
        if let Some(p) = &m.normal_map {
            let _ = writeln!(out, "norm {p}");
        }
        if let Some(a) = m.alpha {
            let _ = writeln!(out, "d {}", fmt6(a));
        }
        if let Some(e) = m.emission {
            let _ = writeln!(out, "Ke {} {} {}", fmt6(e[0]), fmt6(e[1]), fmt6(e[2]));
        }
        if let Some(p) = &m.image_texture {
            let _ = writeln!(out, "map_Kd {p}");
        }
        let _ = writeln!(out);
    }
    out
}

/// Gather the union of material slots across meshes, deduplicated by name
/// in first-appearance order.
pub fn collect_materials(meshes: &[TriMesh]) -> Vec<MaterialSpec> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut out = Vec::new();
    for mesh in meshes {
        for m in &mesh.material_slots {
            if !seen.contains_key(&m.name) {
                seen.insert(m.name.clone(), out.len());
                out.push(m.clone());
            }
        }
    }
    out
}

/// Write an OBJ plus its material library.
pub fn write_obj(
    meshes: &[TriMesh],
    obj_path: &Path,
    mtl_rel: Option<&str>,
) -> Result<(), KernelError> {
    let text = obj_text(meshes, mtl_rel);
    fs::write(obj_path, text).map_err(|e| KernelError::Io(format!("{}: {e}", obj_path.display())))
}

pub fn write_mtl(materials: &[MaterialSpec], path: &Path) -> Result<(), KernelError> {
    fs::write(path, mtl_text(materials))
        .map_err(|e| KernelError::Io(format!("{}: {e}", path.display())))
}

/// Parse an OBJ file back into per-group meshes, resolving `mtllib`
/// relative to the OBJ's directory.
pub fn read_obj(obj_path: &Path) -> Result<Vec<TriMesh>, KernelError> {
    let text = fs::read_to_string(obj_path)
        .map_err(|e| KernelError::Io(format!("{}: {e}", obj_path.display())))?;
    let mut materials: Vec<MaterialSpec> = Vec::new();

    // First pass: material library.
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("mtllib ") {
            let lib_path = obj_path
                .parent()
                .unwrap_or_else(|| Path::new("."))
                .join(rest.trim());
            materials.extend(read_mtl(&lib_path)?);
        }
    }

    let mut meshes: Vec<TriMesh> = Vec::new();
    let mut all_vertices: Vec<Vec3> = Vec::new();
    let mut all_uvs: Vec<[f64; 2]> = Vec::new();

    struct Group {
        name: String,
        triangles: Vec<[u32; 3]>,
        corner_uvs: Vec<Option<CornerUv>>,
        face_material: Vec<u32>,
        used_slots: Vec<String>,
        vertex_remap: HashMap<u32, u32>,
        vertices: Vec<Vec3>,
    }
    impl Group {
        fn new(name: String) -> Self {
            Self {
                name,
                triangles: Vec::new(),
                corner_uvs: Vec::new(),
                face_material: Vec::new(),
                used_slots: Vec::new(),
                vertex_remap: HashMap::new(),
                vertices: Vec::new(),
            }
        }
    }
    let finish = |g: Group, materials: &[MaterialSpec], meshes: &mut Vec<TriMesh>| {
        if g.triangles.is_empty() {
            return;
        }
        let mut mesh = TriMesh::new(g.name, g.vertices, g.triangles);
        mesh.face_material = g.face_material;
        mesh.material_slots = g
            .used_slots
            .iter()
            .map(|name| {
                materials
                    .iter()
                    .find(|m| &m.name == name)
                    .cloned()
                    .unwrap_or_else(|| MaterialSpec::flat(name.clone(), [0.8, 0.8, 0.8]))
            })
            .collect();
        if mesh.material_slots.is_empty() {
            mesh.face_material = vec![0; mesh.triangles.len()];
        }
        if g.corner_uvs.iter().all(|c| c.is_some()) && !g.corner_uvs.is_empty() {
            mesh.uv = Some(g.corner_uvs.into_iter().map(|c| c.unwrap()).collect());
        }
        meshes.push(mesh);
    };

    let mut group: Option<Group> = None;
    let mut current_mtl: Option<String> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |message: String| KernelError::Parse {
            line: ln + 1,
            message,
        };
        if line.is_empty() || line.starts_with('#') || line.starts_with("mtllib") {
            continue;
        }
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "g" | "o" => {
                if let Some(g) = group.take() {
                    finish(g, &materials, &mut meshes);
                }
                group = Some(Group::new(rest.trim().to_string()));
                current_mtl = None;
            }
            "v" => {
                let c: Vec<f64> = rest
                    .split_whitespace()
                    .map(|s| s.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| err(format!("bad vertex: {e}")))?;
                if c.len() < 3 {
                    return Err(err("vertex needs 3 coordinates".into()));
                }
                all_vertices.push(Vec3::new(c[0], c[1], c[2]));
            }
            "vt" => {
                let c: Vec<f64> = rest
                    .split_whitespace()
                    .map(|s| s.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| err(format!("bad uv: {e}")))?;
                if c.len() < 2 {
                    return Err(err("uv needs 2 coordinates".into()));
                }
                all_uvs.push([c[0], c[1]]);
            }
            "usemtl" => current_mtl = Some(rest.trim().to_string()),
            "f" => {
                let g = group.get_or_insert_with(|| Group::new("default".into()));
                let mut vids = Vec::new();
                let mut uvids: Vec<Option<u32>> = Vec::new();
                for fragment in rest.split_whitespace() {
                    let mut it = fragment.split('/');
                    let vi: i64 = it
                        .next()
                        .ok_or_else(|| err("empty face vertex".into()))?
                        .parse()
                        .map_err(|e| err(format!("bad face index: {e}")))?;
                    if vi <= 0 {
                        return Err(err("negative/zero OBJ indices unsupported".into()));
                    }
                    vids.push((vi - 1) as u32);
                    let vt = match it.next() {
                        Some("") | None => None,
                        Some(s) => Some(
                            s.parse::<i64>()
                                .map_err(|e| err(format!("bad uv index: {e}")))?,
                        ),
                    };
                    uvids.push(match vt {
                        Some(t) if t > 0 => Some((t - 1) as u32),
                        Some(_) => return Err(err("negative uv indices unsupported".into())),
                        None => None,
                    });
                }
                if vids.len() < 3 {
                    return Err(err("face needs at least 3 vertices".into()));
                }
                // Slot index for the active material within this group.
                let slot = match &current_mtl {
                    Some(name) => {
                        match g.used_slots.iter().position(|s| s == name) {
                            Some(i) => i as u32,
                            None => {
                                g.used_slots.push(name.clone());
                                (g.used_slots.len() - 1) as u32
                            }
                        }
                    }
                    None => {
                        if g.used_slots.is_empty() {
                            g.used_slots.push("default".into());
                        }
                        0
                    }
                };
                // Triangulate fans for quads and larger polygons.
                for k in 1..vids.len() - 1 {
                    let tri_global = [vids[0], vids[k], vids[k + 1]];
                    let mut tri_local = [0u32; 3];
                    for (slot_i, &gv) in tri_global.iter().enumerate() {
                        let local = match g.vertex_remap.get(&gv) {
                            Some(&l) => l,
                            None => {
                                let p = *all_vertices.get(gv as usize).ok_or_else(|| {
                                    err(format!("vertex index {} out of range", gv + 1))
                                })?;
                                let l = g.vertices.len() as u32;
                                g.vertices.push(p);
                                g.vertex_remap.insert(gv, l);
                                l
                            }
                        };
                        tri_local[slot_i] = local;
                    }
                    g.triangles.push(tri_local);
                    g.face_material.push(slot);
                    let corner = match (uvids[0], uvids[k], uvids[k + 1]) {
                        (Some(a), Some(b), Some(c)) => {
                            let look = |i: u32| -> Result<[f64; 2], KernelError> {
                                all_uvs
                                    .get(i as usize)
                                    .copied()
                                    .ok_or_else(|| err(format!("uv index {} out of range", i + 1)))
                            };
                            Some([look(a)?, look(b)?, look(c)?])
                        }
                        _ => None,
                    };
                    g.corner_uvs.push(corner);
                }
            }
            _ => {} // normals, smoothing groups etc. are ignored
        }
    }
    if let Some(g) = group.take() {
        finish(g, &materials, &mut meshes);
    }
    Ok(meshes)
}

/// Parse a material library written by [`mtl_text`].
pub fn read_mtl(path: &Path) -> Result<Vec<MaterialSpec>, KernelError> {
    let text = fs::read_to_string(path)
        .map_err(|e| KernelError::Io(format!("{}: {e}", path.display())))?;
    let mut out: Vec<MaterialSpec> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| KernelError::Parse {
            line: ln + 1,
            message,
        };
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        let floats = |s: &str| -> Result<Vec<f64>, KernelError> {
            s.split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| err(format!("bad number: {e}"))))
                .collect()
        };
        match key {
            "newmtl" => out.push(MaterialSpec::flat(rest.trim(), [0.8, 0.8, 0.8])),
            _ => {
                let Some(m) = out.last_mut() else { continue };
                match key {
                    "Kd" => {
                        let c = floats(rest)?;
                        if c.len() >= 3 {
                            m.base_color = [c[0], c[1], c[2]];
                        }
                    }
                    "Pr" => m.roughness = floats(rest)?.first().copied(),
                    "Pm" => m.metallic = floats(rest)?.first().copied(),
                    "d" => m.alpha = floats(rest)?.first().copied(),
                    "Ke" => {
                        let c = floats(rest)?;
                        if c.len() >= 3 {
                            m.emission = Some([c[0], c[1], c[2]]);
                        }
                    }
                    "norm" => m.normal_map = Some(rest.trim().to_string()),
                    "map_Kd" => m.image_texture = Some(rest.trim().to_string()),
                    _ => {}
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::primitives::{make_primitive, PrimitiveSpec};
    use crate::model::RigidTransform;

    #[test]
    fn obj_roundtrip_preserves_geometry_and_materials() {
        let dir = tempfile::tempdir().unwrap();
        let mut cube = make_primitive(
            &PrimitiveSpec::Box {
                extents: [0.4, 0.3, 0.2],
            },
            4,
        )
        .unwrap();
        cube.part_name = "body".into();
        cube.material_slots = vec![MaterialSpec::flat("oak", [0.4, 0.25, 0.1])
            .with_roughness(0.7)
            .with_metallic(0.0)];
        let mut cyl = make_primitive(
            &PrimitiveSpec::Cyl {
                radius: 0.05,
                height: 0.3,
            },
            16,
        )
        .unwrap();
        cyl.part_name = "leg_1".into();
        cyl.material_slots = vec![MaterialSpec::flat("steel", [0.6, 0.6, 0.65]).with_metallic(1.0)];
        cyl.transform(&RigidTransform::from_translation(crate::model::Vec3::new(
            0.2, 0.0, -0.25,
        )));

        let meshes = vec![cube, cyl];
        let obj_path = dir.path().join("part.obj");
        let mtl_path = dir.path().join("part.mtl");
        write_mtl(&collect_materials(&meshes), &mtl_path).unwrap();
        write_obj(&meshes, &obj_path, Some("part.mtl")).unwrap();

        let back = read_obj(&obj_path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].part_name, "body");
        assert_eq!(back[1].part_name, "leg_1");
        for (orig, loaded) in meshes.iter().zip(&back) {
            assert_eq!(orig.triangles.len(), loaded.triangles.len());
            assert!((orig.signed_volume() - loaded.signed_volume()).abs() < 1e-5);
            assert!((orig.surface_area() - loaded.surface_area()).abs() < 1e-5);
            assert_eq!(loaded.non_manifold_edge_count(), 0);
            assert!(loaded.uv.is_some());
        }
        assert_eq!(back[0].material_slots[0].name, "oak");
        assert_eq!(back[0].material_slots[0].roughness, Some(0.7));
        assert_eq!(back[1].material_slots[0].metallic, Some(1.0));
    }

    #[test]
    fn export_is_byte_stable() {
        let cube = make_primitive(
            &PrimitiveSpec::Box {
                extents: [1.0, 1.0, 1.0],
            },
            4,
        )
        .unwrap();
        let a = obj_text(&[cube.clone()], Some("m.mtl"));
        let b = obj_text(&[cube], Some("m.mtl"));
        assert_eq!(a, b);
    }

    #[test]
    fn truncated_face_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.obj");
        std::fs::write(&path, "g x\nv 0 0 0\nv 1 0 0\nf 1 2\n").unwrap();
        assert!(matches!(
            read_obj(&path),
            Err(KernelError::Parse { line: 4, .. })
        ));
    }
}
