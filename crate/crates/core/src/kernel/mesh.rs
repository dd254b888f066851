//! Triangle mesh and material types plus the topology/measure helpers the
//! rest of the crate builds on.
//!
//! Meshes are plain value objects: `Vec` storage, no half-edge structure.
//! Edge topology is recomputed on demand; meshes here are small (hundreds to
//! a few thousand triangles) and the simplicity pays for itself in
//! determinism.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{Aabb, ModelError, RigidTransform, Vec3};

/// Minimum triangle area considered non-degenerate, m^2.
pub const MIN_TRIANGLE_AREA: f64 = 1e-12;

/// PBR material description: flat channel values plus optional texture
/// paths. Procedural node graphs are out of scope; textures are passed
/// through by path, never generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    pub name: String,
    /// Linear-RGB base color in [0,1].
    pub base_color: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roughness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metallic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_map: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emission: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image_texture: Option<String>,
}

impl MaterialSpec {
    pub fn flat(name: impl Into<String>, base_color: [f64; 3]) -> Self {
        Self {
            name: name.into(),
            base_color,
            roughness: None,
            metallic: None,
            normal_map: None,
            alpha: None,
            emission: None,
            image_texture: None,
        }
    }

    pub fn with_roughness(mut self, r: f64) -> Self {
        self.roughness = Some(r);
        self
    }

    pub fn with_metallic(mut self, m: f64) -> Self {
        self.metallic = Some(m);
        self
    }

    pub fn with_alpha(mut self, a: f64) -> Self {
        self.alpha = Some(a);
        self
    }

    pub fn with_emission(mut self, e: [f64; 3]) -> Self {
        self.emission = Some(e);
        self
    }

    pub fn with_image_texture(mut self, path: impl Into<String>) -> Self {
        self.image_texture = Some(path.into());
        self
    }

    /// Number of PBR channels present out of the fixed six-channel set
    /// {base_color, roughness, metallic, normal, alpha, emission}.
    pub fn present_channel_count(&self) -> usize {
        1 + usize::from(self.roughness.is_some())
            + usize::from(self.metallic.is_some())
            + usize::from(self.normal_map.is_some())
            + usize::from(self.alpha.is_some())
            + usize::from(self.emission.is_some())
    }

    pub fn validate(&self) -> Result<(), String> {
        let in01 = |v: f64| (0.0..=1.0).contains(&v);
        if !self.base_color.iter().copied().all(in01) {
            return Err(format!("material {}: base_color out of [0,1]", self.name));
        }
        for (label, ch) in [("roughness", self.roughness), ("metallic", self.metallic), ("alpha", self.alpha)] {
            if let Some(v) = ch {
                if !in01(v) {
                    return Err(format!("material {}: {label} out of [0,1]", self.name));
                }
            }
        }
        Ok(())
    }
}

/// Standard sRGB transfer curve, applied to any 8-bit color read from plan
/// files before storage as linear RGB.
pub fn srgb_to_linear(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

/// Per-corner UV coordinates of one triangle.
pub type CornerUv = [[f64; 2]; 3];

/// A named part mesh: indexed triangles plus optional per-corner UVs and
/// per-face material slot assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriMesh {
    pub part_name: String,
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
    /// One entry per triangle when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uv: Option<Vec<CornerUv>>,
    pub material_slots: Vec<MaterialSpec>,
    /// Slot index per triangle.
    pub face_material: Vec<u32>,
}

impl TriMesh {
    pub fn new(part_name: impl Into<String>, vertices: Vec<Vec3>, triangles: Vec<[u32; 3]>) -> Self {
        let n = triangles.len();
        Self {
            part_name: part_name.into(),
            vertices,
            triangles,
            uv: None,
            material_slots: Vec::new(),
            face_material: vec![0; n],
        }
    }

    pub fn triangle_points(&self, t: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[t];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [p0, p1, p2] = self.triangle_points(t);
        0.5 * (p1 - p0).cross(&(p2 - p0)).norm()
    }

    pub fn triangle_normal(&self, t: usize) -> Vec3 {
        let [p0, p1, p2] = self.triangle_points(t);
        let n = (p1 - p0).cross(&(p2 - p0));
        let len = n.norm();
        if len > 0.0 {
            n / len
        } else {
            Vec3::zeros()
        }
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Signed volume by the divergence theorem; positive for closed meshes
    /// with outward-facing normals.
    pub fn signed_volume(&self) -> f64 {
        let mut v6 = 0.0;
        for t in 0..self.triangles.len() {
            let [p0, p1, p2] = self.triangle_points(t);
            v6 += p0.dot(&p1.cross(&p2));
        }
        v6 / 6.0
    }

    pub fn aabb(&self) -> Result<Aabb, ModelError> {
        Aabb::from_points(self.vertices.iter().copied())
    }

    /// Undirected edge -> incident face count, keys ordered `(lo, hi)`.
    pub fn edge_degrees(&self) -> BTreeMap<(u32, u32), u32> {
        let mut map = BTreeMap::new();
        for tri in &self.triangles {
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                let key = if a < b { (a, b) } else { (b, a) };
                *map.entry(key).or_insert(0) += 1;
            }
        }
        map
    }

    /// Edges whose incident face count differs from two, counting boundary
    /// edges and over-shared edges alike.
    pub fn non_manifold_edge_count(&self) -> usize {
        self.edge_degrees().values().filter(|&&d| d != 2).count()
    }

    /// Directed boundary edges `(a, b)` in face winding order (undirected
    /// degree 1).
    pub fn boundary_edges(&self) -> Vec<(u32, u32)> {
        let degrees = self.edge_degrees();
        let mut out = Vec::new();
        for tri in &self.triangles {
            for k in 0..3 {
                let a = tri[k];
                let b = tri[(k + 1) % 3];
                let key = if a < b { (a, b) } else { (b, a) };
                if degrees[&key] == 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_closed_manifold(&self) -> bool {
        self.edge_degrees().values().all(|&d| d == 2)
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.vertices.len() as i64;
        let e = self.edge_degrees().len() as i64;
        let f = self.triangles.len() as i64;
        v - e + f
    }

    /// Area-weighted vertex normals, normalized; zero for isolated vertices.
    pub fn vertex_normals(&self) -> Vec<Vec3> {
        let mut normals = vec![Vec3::zeros(); self.vertices.len()];
        for t in 0..self.triangles.len() {
            let [p0, p1, p2] = self.triangle_points(t);
            let n = (p1 - p0).cross(&(p2 - p0)); // length = 2*area
            for &vi in &self.triangles[t] {
                normals[vi as usize] += n;
            }
        }
        for n in &mut normals {
            let len = n.norm();
            if len > 0.0 {
                *n /= len;
            }
        }
        normals
    }

    pub fn transform(&mut self, t: &RigidTransform) {
        for v in &mut self.vertices {
            *v = t.apply_point(*v);
        }
    }

    pub fn transformed(&self, t: &RigidTransform) -> Self {
        let mut m = self.clone();
        m.transform(t);
        m
    }

    /// Axis-wise scale about the origin. Factors must be strictly positive;
    /// winding (and thus orientation) is preserved.
    pub fn scale_nonuniform(&mut self, factors: Vec3) {
        debug_assert!(factors.iter().all(|&f| f > 0.0));
        for v in &mut self.vertices {
            v.x *= factors.x;
            v.y *= factors.y;
            v.z *= factors.z;
        }
    }

    /// Invariant check: index ranges, degeneracy, UV and material lengths.
    pub fn validate(&self) -> Result<(), String> {
        let nv = self.vertices.len() as u32;
        for (i, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(format!("{}: triangle {i} index out of range", self.part_name));
            }
            if self.triangle_area(i) <= MIN_TRIANGLE_AREA {
                return Err(format!("{}: triangle {i} is degenerate", self.part_name));
            }
        }
        if let Some(uv) = &self.uv {
            if uv.len() != self.triangles.len() {
                return Err(format!("{}: uv length != 3 x triangle count", self.part_name));
            }
        }
        if self.face_material.len() != self.triangles.len() {
            return Err(format!("{}: face_material length mismatch", self.part_name));
        }
        let slots = self.material_slots.len() as u32;
        if slots > 0 && self.face_material.iter().any(|&s| s >= slots) {
            return Err(format!("{}: face material slot out of range", self.part_name));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::primitives::{make_primitive, PrimitiveSpec};

    #[test]
    fn cube_measures() {
        let m = make_primitive(
            &PrimitiveSpec::Box {
                extents: [2.0, 3.0, 4.0],
            },
            8,
        )
        .unwrap();
        assert!((m.signed_volume() - 24.0).abs() < 1e-12);
        assert!((m.surface_area() - 52.0).abs() < 1e-12);
        assert_eq!(m.non_manifold_edge_count(), 0);
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn rigid_transform_conserves_measures() {
        let m = make_primitive(
            &PrimitiveSpec::Cyl {
                radius: 0.5,
                height: 1.2,
            },
            32,
        )
        .unwrap();
        let t = RigidTransform::rotation_about(
            Vec3::new(0.3, -0.2, 0.9),
            Vec3::new(1.0, 2.0, -0.5),
            0.8,
        );
        let moved = m.transformed(&t);
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(moved.surface_area(), m.surface_area()) < 1e-9);
        assert!(rel(moved.signed_volume(), m.signed_volume()) < 1e-9);
    }

    #[test]
    fn srgb_curve_endpoints() {
        assert!(srgb_to_linear(0.0).abs() < 1e-15);
        assert!((srgb_to_linear(1.0) - 1.0).abs() < 1e-12);
        assert!(srgb_to_linear(0.5) < 0.5); // curve is below identity
    }
}
