//! Voxel-grid value types, the `.rgpp` binary file format, and the
//! evaluation metrics used to score volumetric reconstructions.
//!
//! Grids are cubic lattices addressed `(x, y, z)` with X varying fastest
//! in the linear layout. [`OccupancyGrid`] stores one bit per cell,
//! [`ProbGrid`] one `f32` in `[0, 1]`. All metric functions are pure and
//! reduce over integer counts, so parallel and serial callers agree
//! bit-exactly.

mod error;
mod io;
mod metrics;
mod occupancy;
mod prob;

pub use error::GridError;
pub use io::{read_grid, read_occupancy, read_prob, write_grid, Grid};
pub use metrics::{
    cross_entropy, iou, precision_recall, search_threshold, threshold_candidates, MetricsReport,
    THRESHOLD_STEPS,
};
pub use occupancy::OccupancyGrid;
pub use prob::ProbGrid;

/// Linear index of cell `(x, y, z)` in a grid of resolution `r`.
#[inline]
pub fn linear_index(r: usize, x: usize, y: usize, z: usize) -> usize {
    x + r * (y + r * z)
}

/// True when `r` has exactly one bit set.
pub fn is_power_of_two(r: u32) -> bool {
    r != 0 && r & (r - 1) == 0
}
