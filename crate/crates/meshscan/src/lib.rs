//! Mesh ingestion and the virtual scanning pipeline: Wavefront OBJ
//! parsing, pinhole depth rendering, depth back-projection, and solid
//! voxelization by axis-ray casting.
//!
//! Everything here is a pure function over immutable inputs; per-voxel
//! and per-pixel loops parallelize with each cell computed independently,
//! so parallel and serial runs agree bit-exactly.

mod camera;
mod error;
mod geom;
mod mesh;
mod pointcloud;
mod render;
pub mod shapes;
mod voxelize;

pub use camera::{sample_views, Camera, Intrinsics};
pub use error::ScanError;
pub use geom::{Mat3, Vec3};
pub use mesh::{parse_obj, GridFrame, TriangleMesh};
pub use pointcloud::{depth_to_pointcloud, pointcloud_to_grid, PointCloud};
pub use render::{render_depth, DepthImage};
pub use voxelize::{normalize_to_frame, ray_triangle, voxelize_solid};
