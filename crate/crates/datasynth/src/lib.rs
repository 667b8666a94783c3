//! Dataset synthesis: turns a directory of meshes into aligned
//! (partial 2.5D, full 3D) occupancy-grid pairs with model-level
//! train/validation/test splits and same-viewing / cross-viewing test
//! protocols.

mod manifest;
mod pairs;
mod split;

pub use manifest::{read_manifest, write_manifest, Manifest, ManifestEntry, Split};
pub use pairs::{synth_pairs, MeshInput, SynthConfig, SynthStats};
pub use split::split_models;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("pipeline error: {0}")]
    Pipeline(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Scan(#[from] meshscan::ScanError),
    #[error(transparent)]
    Grid(#[from] voxgrid::GridError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
