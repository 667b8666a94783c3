use std::path::Path;

use meshscan::{
    depth_to_pointcloud, normalize_to_frame, pointcloud_to_grid, render_depth, sample_views,
    voxelize_solid, Camera, GridFrame, Intrinsics, TriangleMesh, Vec3,
};
use rayon::prelude::*;
use voxgrid::{is_power_of_two, write_grid};

use crate::{Manifest, ManifestEntry, Split, SynthError};

/// A mesh queued for scanning, labelled by category and model id.
#[derive(Debug, Clone)]
pub struct MeshInput {
    pub category: String,
    pub model_id: String,
    pub mesh: TriangleMesh,
}

/// Pair-generation settings. `desk` is sized for CPU runs; `paper` keeps
/// the full-scale constants.
#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub r_in: u32,
    pub r_out: u32,
    /// Views per axis for the training / SV protocol.
    pub n_train_views: u32,
    /// Views per axis for the CV protocol.
    pub n_cross_views: u32,
    pub image_size: u32,
    pub pad: f64,
    /// Camera distance as a multiple of the frame edge.
    pub distance_factor: f64,
    /// Model-level (train, validation, test) fractions; must sum to 1.
    pub ratios: [f64; 3],
    pub seed: u64,
    /// Also write `<view>.depth.pgm` next to each pair.
    pub dump_depth: bool,
}

impl SynthConfig {
    pub fn desk(seed: u64) -> Self {
        Self {
            r_in: 16,
            r_out: 64,
            n_train_views: 2,
            n_cross_views: 3,
            image_size: 128,
            pad: 0.05,
            distance_factor: 2.0,
            ratios: [1.0, 0.0, 0.0],
            seed,
            dump_depth: false,
        }
    }

    pub fn paper(seed: u64) -> Self {
        Self {
            r_in: 64,
            r_out: 256,
            n_train_views: 5,
            n_cross_views: 6,
            image_size: 512,
            pad: 0.05,
            distance_factor: 2.0,
            ratios: [220.0 / 272.0, 12.0 / 272.0, 40.0 / 272.0],
            seed,
            dump_depth: false,
        }
    }

    fn validate(&self) -> Result<(), SynthError> {
        if self.r_out != 4 * self.r_in {
            return Err(SynthError::InvalidArgument(format!(
                "full resolution {} must be 4x the partial resolution {}",
                self.r_out, self.r_in
            )));
        }
        if !is_power_of_two(self.r_in) || !is_power_of_two(self.r_out) {
            return Err(SynthError::InvalidArgument(
                "resolutions must be powers of two".into(),
            ));
        }
        if self.n_train_views < 1 || self.n_cross_views < 1 {
            return Err(SynthError::InvalidArgument(
                "need at least one view per axis".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct SynthStats {
    pub pairs_written: usize,
    pub meshes_skipped: usize,
    pub views_skipped: usize,
    pub points_dropped: usize,
}

struct ViewTask<'a> {
    category: &'a str,
    model_id: &'a str,
    view_id: String,
    split: Split,
    mesh: &'a TriangleMesh,
    camera: Camera,
}

/// Renders, voxelizes, and writes every (mesh x view) pair under
/// `out_root`, returning the manifest and counters. Degenerate meshes
/// and views that produce an empty partial grid are skipped; producing
/// zero pairs overall is a pipeline error.
pub fn synth_pairs(
    meshes: &[MeshInput],
    cfg: &SynthConfig,
    out_root: &Path,
) -> Result<(Manifest, SynthStats), SynthError> {
    cfg.validate()?;
    if meshes.is_empty() {
        return Err(SynthError::InvalidArgument("no input meshes".into()));
    }

    let mut stats = SynthStats::default();
    let frame = GridFrame::unit();
    let distance = cfg.distance_factor * frame.edge;
    let intr = Intrinsics::for_frame(cfg.image_size, frame.edge, distance);
    let sv_cams = sample_views(cfg.n_train_views, distance, intr, frame.center());
    let cv_cams = sample_views(cfg.n_cross_views, distance, intr, frame.center());
    let scanner = fixed_scanner(intr, &frame, distance);

    // Normalize meshes up front, skipping degenerate ones.
    let mut normalized: Vec<(usize, TriangleMesh)> = Vec::new();
    for (i, input) in meshes.iter().enumerate() {
        match normalize_to_frame(&input.mesh, cfg.pad) {
            Ok((mesh, _)) => normalized.push((i, mesh)),
            Err(err) => {
                eprintln!(
                    "skipping degenerate mesh {}/{}: {err}",
                    input.category, input.model_id
                );
                stats.meshes_skipped += 1;
            }
        }
    }
    if normalized.is_empty() {
        return Err(SynthError::Pipeline("all meshes were degenerate".into()));
    }

    // Model-level split per category, never view-level.
    let mut split_of: std::collections::BTreeMap<(String, String), usize> =
        std::collections::BTreeMap::new();
    let mut categories: Vec<String> = meshes.iter().map(|m| m.category.clone()).collect();
    categories.sort();
    categories.dedup();
    for cat in &categories {
        let mut ids: Vec<String> = normalized
            .iter()
            .filter(|(i, _)| meshes[*i].category == *cat)
            .map(|(i, _)| meshes[*i].model_id.clone())
            .collect();
        ids.sort();
        ids.dedup();
        let groups = crate::split_models(&ids, &cfg.ratios, cfg.seed)?;
        for (gi, group) in groups.iter().enumerate() {
            for id in group {
                split_of.insert((cat.clone(), id.clone()), gi);
            }
        }
    }

    // Expand (mesh, view) tasks.
    let mut tasks: Vec<ViewTask> = Vec::new();
    for (i, mesh) in &normalized {
        let input = &meshes[*i];
        let group = split_of[&(input.category.clone(), input.model_id.clone())];
        let (sv_split, cv_split) = match group {
            0 => (Some(Split::Train), None),
            1 => (Some(Split::ValSv), Some(Split::ValCv)),
            _ => (Some(Split::TestSv), Some(Split::TestCv)),
        };
        if let Some(split) = sv_split {
            for (vi, cam) in sv_cams.iter().enumerate() {
                tasks.push(ViewTask {
                    category: &input.category,
                    model_id: &input.model_id,
                    view_id: format!("sv_{vi:03}"),
                    split,
                    mesh,
                    camera: cam.clone(),
                });
            }
        }
        if let Some(split) = cv_split {
            for (vi, cam) in cv_cams.iter().enumerate() {
                tasks.push(ViewTask {
                    category: &input.category,
                    model_id: &input.model_id,
                    view_id: format!("cv_{vi:03}"),
                    split,
                    mesh,
                    camera: cam.clone(),
                });
            }
        }
    }

    let results: Vec<Result<Option<(ManifestEntry, usize)>, SynthError>> = tasks
        .par_iter()
        .map(|task| synth_one(task, cfg, &frame, &scanner, out_root))
        .collect();

    let mut entries = Vec::new();
    for r in results {
        match r? {
            Some((entry, dropped)) => {
                entries.push(entry);
                stats.pairs_written += 1;
                stats.points_dropped += dropped;
            }
            None => stats.views_skipped += 1,
        }
    }
    if entries.is_empty() {
        return Err(SynthError::Pipeline("no pairs survived synthesis".into()));
    }
    entries.sort_by(|a, b| {
        (&a.category, &a.model_id, &a.view_id).cmp(&(&b.category, &b.model_id, &b.view_id))
    });
    let manifest = Manifest { seed: cfg.seed, entries };
    manifest.check_protocol()?;
    crate::write_manifest(&manifest, &out_root.join("manifest.tsv"))?;
    Ok((manifest, stats))
}

/// The stationary scanning camera (identity view rotation). Each view
/// rotates the mesh instead, so the back-projected points and the full
/// voxelization land in the same rotated-model frame.
fn fixed_scanner(intr: Intrinsics, frame: &GridFrame, distance: f64) -> Camera {
    sample_views(1, distance, intr, frame.center())
        .pop()
        .expect("one pose")
}

fn synth_one(
    task: &ViewTask,
    cfg: &SynthConfig,
    frame: &GridFrame,
    scanner: &Camera,
    out_root: &Path,
) -> Result<Option<(ManifestEntry, usize)>, SynthError> {
    let rotated = task
        .mesh
        .transformed(task.camera.view_rotation(), frame.center(), Vec3::ZERO);
    let full = voxelize_solid(&rotated, frame, cfg.r_out)?;
    let depth = render_depth(&rotated, scanner);
    let cloud = depth_to_pointcloud(&depth, scanner)?;
    let world: Vec<Vec3> = cloud.points.iter().map(|&p| scanner.cam_to_world(p)).collect();
    let (partial, dropped) = pointcloud_to_grid(&world, frame, cfg.r_in)?;
    if partial.count_occupied() == 0 {
        eprintln!(
            "skipping empty view {}/{}/{}",
            task.category, task.model_id, task.view_id
        );
        return Ok(None);
    }

    let dir = out_root.join(task.category).join(task.model_id);
    std::fs::create_dir_all(&dir)?;
    write_grid(&partial.into(), &dir.join(format!("{}.partial.rgpp", task.view_id)))?;
    write_grid(&full.into(), &dir.join(format!("{}.full.rgpp", task.view_id)))?;
    if cfg.dump_depth {
        std::fs::write(
            dir.join(format!("{}.depth.pgm", task.view_id)),
            depth.to_pgm(),
        )?;
    }

    Ok(Some((
        ManifestEntry {
            path: format!("{}/{}/{}", task.category, task.model_id, task.view_id),
            split: task.split,
            category: task.category.to_string(),
            model_id: task.model_id.to_string(),
            view_id: task.view_id.clone(),
        },
        dropped,
    )))
}
