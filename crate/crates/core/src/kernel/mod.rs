//! Deterministic geometry kernel: primitive construction, the modifier set
//! (mirror, radial array, solidify, bevel, duplicate), canonical UV
//! assignment, and Wavefront-style mesh I/O.
//!
//! Guarantees relied on elsewhere:
//!
//! - every closed mesh this kernel returns has zero non-manifold edges and
//!   positive signed volume (outward normals);
//! - identical inputs yield bit-identical meshes;
//! - rigid transforms preserve edge lengths, areas, and signed volume.

pub mod mesh;
pub mod modifiers;
pub mod obj;
pub mod primitives;
pub mod uv;

pub use mesh::{srgb_to_linear, CornerUv, MaterialSpec, TriMesh};
pub use modifiers::{bevel_edges, duplicate_part, mirror_about, radial_array, solidify};
pub use primitives::{make_primitive, PrimitiveKind, PrimitiveSpec};
pub use uv::{generate_uv, UvKind};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelError {
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    #[error("operation would self-intersect: {0}")]
    SelfIntersection(String),
    #[error("bevel width {width} exceeds limit {max} for this mesh")]
    WidthTooLarge { width: f64, max: f64 },
    #[error("unsupported mesh topology: {0}")]
    UnsupportedTopology(String),
    #[error("mesh I/O failed: {0}")]
    Io(String),
    #[error("mesh parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
