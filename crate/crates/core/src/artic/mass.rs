//! Exact polyhedral mass-property integration for closed triangle meshes,
//! after the classic projection-integral formulation (Eberly / Mirtich).
//! Assumes uniform density and outward-oriented faces; disjoint closed
//! components are fine.

use nalgebra::Matrix3;

use crate::kernel::TriMesh;
use crate::model::Vec3;

/// Volume, centroid, and unit-density inertia tensor about the centroid.
#[derive(Debug, Clone, PartialEq)]
pub struct MassProperties {
    pub volume: f64,
    pub com: Vec3,
    /// Inertia tensor for density 1, taken about `com` in the mesh frame.
    pub unit_inertia: Matrix3<f64>,
}

impl MassProperties {
    /// Inertia scaled so the body has the given total mass.
    pub fn inertia_for_mass(&self, mass: f64) -> Matrix3<f64> {
        if self.volume.abs() < 1e-30 {
            return Matrix3::zeros();
        }
        self.unit_inertia * (mass / self.volume)
    }
}

fn subexpressions(w0: f64, w1: f64, w2: f64) -> (f64, f64, f64, f64, f64, f64) {
    let temp0 = w0 + w1;
    let f1 = temp0 + w2;
    let temp1 = w0 * w0;
    let temp2 = temp1 + w1 * temp0;
    let f2 = temp2 + w2 * f1;
    let f3 = w0 * temp1 + w1 * temp2 + w2 * f2;
    let g0 = f2 + w0 * (f1 + w0);
    let g1 = f2 + w1 * (f1 + w1);
    let g2 = f2 + w2 * (f1 + w2);
    (f1, f2, f3, g0, g1, g2)
}

/// Integrate volume, first moments, and second moments over the mesh
/// surface. The mesh must be closed and outward-oriented for the result to
/// be meaningful.
pub fn mass_properties(mesh: &TriMesh) -> MassProperties {
    let mult = [
        1.0 / 6.0,
        1.0 / 24.0,
        1.0 / 24.0,
        1.0 / 24.0,
        1.0 / 60.0,
        1.0 / 60.0,
        1.0 / 60.0,
        1.0 / 120.0,
        1.0 / 120.0,
        1.0 / 120.0,
    ];
    // 1, x, y, z, x^2, y^2, z^2, xy, yz, zx
    let mut intg = [0.0_f64; 10];

    for t in 0..mesh.triangles.len() {
        let [p0, p1, p2] = mesh.triangle_points(t);
        let (x0, y0, z0) = (p0.x, p0.y, p0.z);
        let (x1, y1, z1) = (p1.x, p1.y, p1.z);
        let (x2, y2, z2) = (p2.x, p2.y, p2.z);

        let a1 = x1 - x0;
        let b1 = y1 - y0;
        let c1 = z1 - z0;
        let a2 = x2 - x0;
        let b2 = y2 - y0;
        let c2 = z2 - z0;
        let d0 = b1 * c2 - b2 * c1;
        let d1 = a2 * c1 - a1 * c2;
        let d2 = a1 * b2 - a2 * b1;

        let (f1x, f2x, f3x, g0x, g1x, g2x) = subexpressions(x0, x1, x2);
        let (_f1y, f2y, f3y, g0y, g1y, g2y) = subexpressions(y0, y1, y2);
        let (_f1z, f2z, f3z, g0z, g1z, g2z) = subexpressions(z0, z1, z2);

        intg[0] += d0 * f1x;
        intg[1] += d0 * f2x;
        intg[2] += d1 * f2y;
        intg[3] += d2 * f2z;
        intg[4] += d0 * f3x;
        intg[5] += d1 * f3y;
        intg[6] += d2 * f3z;
        intg[7] += d0 * (y0 * g0x + y1 * g1x + y2 * g2x);
        intg[8] += d1 * (z0 * g0y + z1 * g1y + z2 * g2y);
        intg[9] += d2 * (x0 * g0z + x1 * g1z + x2 * g2z);
    }
    for (v, m) in intg.iter_mut().zip(mult) {
        *v *= m;
    }

    let volume = intg[0];
    let com = if volume.abs() > 1e-30 {
        Vec3::new(intg[1], intg[2], intg[3]) / volume
    } else {
        Vec3::zeros()
    };

    // Inertia about the origin for density 1.
    let ixx = intg[5] + intg[6];
    let iyy = intg[4] + intg[6];
    let izz = intg[4] + intg[5];
    let ixy = -intg[7];
    let iyz = -intg[8];
    let ixz = -intg[9];
    let mut inertia = Matrix3::new(ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz);

    // Shift to the centroid (parallel axis, mass = volume at density 1).
    inertia -= parallel_axis_shift(volume, com);

    MassProperties {
        volume,
        com,
        unit_inertia: inertia,
    }
}

/// Inertia increment for moving a point mass `m` by displacement `d` from
/// the reference point: `m (|d|^2 E - d d^T)`.
pub fn parallel_axis_shift(mass: f64, d: Vec3) -> Matrix3<f64> {
    let n2 = d.norm_squared();
    mass * (Matrix3::identity() * n2 - d * d.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::primitives::{make_primitive, PrimitiveSpec};
    use crate::model::RigidTransform;

    #[test]
    fn unit_cube_inertia_is_one_sixth() {
        let cube = make_primitive(&PrimitiveSpec::Box { extents: [1.0; 3] }, 4).unwrap();
        let props = mass_properties(&cube);
        assert!((props.volume - 1.0).abs() < 1e-12);
        assert!(props.com.norm() < 1e-12);
        let inertia = props.inertia_for_mass(1.0);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 / 6.0 } else { 0.0 };
                assert!(
                    (inertia[(i, j)] - want).abs() < 1e-9,
                    "I[{i}{j}] = {}",
                    inertia[(i, j)]
                );
            }
        }
    }

    #[test]
    fn cylinder_axial_inertia_matches_analytic() {
        let cyl = make_primitive(
            &PrimitiveSpec::Cyl {
                radius: 0.5,
                height: 1.0,
            },
            32,
        )
        .unwrap();
        let props = mass_properties(&cyl);
        let inertia = props.inertia_for_mass(1.0);
        // I_zz = m r^2 / 2 within tessellation error at 32 segments.
        let want = 0.125;
        assert!(
            ((inertia[(2, 2)] - want) / want).abs() < 0.005,
            "Izz = {}",
            inertia[(2, 2)]
        );
    }

    #[test]
    fn box_volume_and_com_match_oracle_after_offset() {
        let b = make_primitive(
            &PrimitiveSpec::Box {
                extents: [0.3, 0.4, 0.5],
            },
            4,
        )
        .unwrap();
        let moved = b.transformed(&RigidTransform::from_translation(Vec3::new(1.0, -2.0, 0.5)));
        let props = mass_properties(&moved);
        assert!((props.volume - 0.06).abs() < 1e-12);
        assert!((props.com - Vec3::new(1.0, -2.0, 0.5)).norm() < 1e-9);
        // Inertia about COM is translation-invariant.
        let props0 = mass_properties(&b);
        assert!((props.unit_inertia - props0.unit_inertia).norm() < 1e-9);
    }

    /// Divergence-theorem volume cross-check on a random closed mesh.
    #[test]
    fn volume_matches_signed_tetrahedron_sum() {
        let tor = make_primitive(
            &PrimitiveSpec::Torus {
                major_radius: 0.4,
                minor_radius: 0.12,
            },
            28,
        )
        .unwrap();
        let props = mass_properties(&tor);
        assert!((props.volume - tor.signed_volume()).abs() < 1e-9);
    }
}
