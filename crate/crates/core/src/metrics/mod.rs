//! Asset- and scene-level metric suite.
pub mod object;
pub use object::{object_metrics, uv_island_count, AssetReport};
