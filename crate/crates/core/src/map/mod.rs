//! Occupancy-grid maps and the geometric queries built on them.

mod distance;
mod grid;
mod visibility;

pub use distance::{DistanceField, DistanceMetric};
pub use grid::{load_map, load_map_file, Cell, GridMap, MapMeta};
