//! Core library for `scenec`: a compiler toolkit that turns declarative
//! object requests and part-level object plans into part-decomposed triangle
//! meshes, articulated simulation assets (SDF/URDF), and a persistent,
//! locally-regenerable indoor scene state, plus a metric suite that scores
//! both assets and assembled scenes.
//!
//! The pipeline stages map onto the module tree:
//!
//! 1. [`model`] — shared domain types (requests, rigid transforms, boxes).
//! 2. [`router`] — request-to-strategy routing over a category ontology.
//! 3. [`plan`] / [`verify`] — the part-level plan IR and its rule checker.
//! 4. [`kernel`] — deterministic primitive meshing and modifiers.
//! 5. [`program`] — the part-program IR, interpreter, and repair loop.
//! 6. [`artic`] — mass/inertia/collision attribution and joint inference.
//! 7. [`sdf`] — SDF/URDF emission and round-trip parsing.
//! 8. [`scene`] — placement, the persistent house registry, regeneration.
//! 9. [`metrics`] — object- and scene-level geometric quality metrics.
//! 10. [`backend`] — pluggable planner backends (template and remote).

pub mod artic;
pub mod backend;
pub mod kernel;
pub mod metrics;
pub mod model;
pub mod plan;
pub mod program;
pub mod router;
pub mod scene;
pub mod sdf;
pub mod verify;

/// Version tag written into every JSON document this crate emits.
pub const SCHEMA_VERSION: u32 = 1;

/// Stable 64-bit FNV-1a hash, used wherever a reproducible seed or digest
/// is derived from a string (object ids, sampling seeds). Never replace
/// with `DefaultHasher`: report reproducibility depends on this exact
/// function across builds.
pub fn stable_hash(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::stable_hash;

    #[test]
    fn stable_hash_is_frozen() {
        // FNV-1a reference values; these must never change.
        assert_eq!(stable_hash(""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(stable_hash("a"), 0xaf63_dc4c_8601_ec8c);
        assert_ne!(stable_hash("nightstand_1"), stable_hash("nightstand_2"));
    }
}
