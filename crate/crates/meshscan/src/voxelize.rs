//! Solid voxelization: a voxel is occupied iff axis-aligned rays from its
//! center hit the mesh in all six directions, which encloses interiors
//! even for meshes that are not perfectly watertight.

use rayon::prelude::*;
use voxgrid::OccupancyGrid;

use crate::{GridFrame, ScanError, TriangleMesh, Vec3};

const RAY_EPS: f64 = 1e-9;

/// Moller-Trumbore intersection, inclusive of triangle edges. Returns the
/// smallest `t > 1e-9` with `origin + t*dir` inside the triangle, or None.
/// `dir` is expected to be unit length.
pub fn ray_triangle(origin: Vec3, dir: Vec3, tri: [Vec3; 3]) -> Option<f64> {
    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let p = dir.cross(e2);
    let det = e1.dot(p);
    if det.abs() < 1e-14 {
        return None; // parallel or degenerate
    }
    let inv_det = 1.0 / det;
    let s = origin - tri[0];
    let u = s.dot(p) * inv_det;
    if !(-1e-12..=1.0 + 1e-12).contains(&u) {
        return None;
    }
    let q = s.cross(e1);
    let v = dir.dot(q) * inv_det;
    if v < -1e-12 || u + v > 1.0 + 1e-12 {
        return None;
    }
    let t = e2.dot(q) * inv_det;
    if t > RAY_EPS {
        Some(t)
    } else {
        None
    }
}

/// Centers and uniformly scales the mesh so its bounding box midpoint
/// sits at the frame center and the longest axis spans `(1 - 2*pad)` of
/// the cube edge. Returns the mesh together with its [`GridFrame`].
pub fn normalize_to_frame(
    mesh: &TriangleMesh,
    pad: f64,
) -> Result<(TriangleMesh, GridFrame), ScanError> {
    let frame = GridFrame::unit();
    let (min, max) = mesh.bounds();
    let extent = max - min;
    let longest = extent.x.max(extent.y).max(extent.z);
    if longest <= 0.0 {
        return Err(ScanError::Geometry(
            "mesh has zero extent (all vertices identical)".into(),
        ));
    }
    let scale = (1.0 - 2.0 * pad) * frame.edge / longest;
    let mid = (min + max).scale(0.5);
    let center = frame.center();
    let vertices = mesh
        .vertices
        .iter()
        .map(|&p| (p - mid).scale(scale) + center)
        .collect();
    Ok((
        TriangleMesh { vertices, triangles: mesh.triangles.clone() },
        frame,
    ))
}

/// Sorted axis-coordinates where the line through `(a, b)` on the two
/// fixed axes crosses mesh triangles, per (row, column) cell of the grid.
///
/// `axis` is the free axis (0=X, 1=Y, 2=Z); the returned table is indexed
/// `[v * r + u]` where `(u, v)` run over the remaining two axes in
/// ascending order.
fn axis_crossings(
    mesh: &TriangleMesh,
    frame: &GridFrame,
    resolution: u32,
    axis: usize,
) -> Vec<Vec<f64>> {
    let r = resolution as usize;
    let (ua, va) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let h = frame.edge / f64::from(resolution);
    let mut rows: Vec<Vec<f64>> = vec![Vec::new(); r * r];

    let cell_of = |coord: f64, lo: f64| -> Option<usize> {
        let i = ((coord - lo) / h).floor();
        if i < 0.0 || i >= r as f64 {
            None
        } else {
            Some(i as usize)
        }
    };

    for ti in 0..mesh.triangles.len() {
        let tri = mesh.triangle(ti);
        // Plane of the triangle: n . x = d.
        let n = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
        if n.axis(axis).abs() < 1e-14 {
            continue; // line parallel to the plane never crosses transversally
        }
        let u_lo = tri[0].axis(ua).min(tri[1].axis(ua)).min(tri[2].axis(ua));
        let u_hi = tri[0].axis(ua).max(tri[1].axis(ua)).max(tri[2].axis(ua));
        let v_lo = tri[0].axis(va).min(tri[1].axis(va)).min(tri[2].axis(va));
        let v_hi = tri[0].axis(va).max(tri[1].axis(va)).max(tri[2].axis(va));
        let ou = frame.origin.axis(ua);
        let ov = frame.origin.axis(va);
        let iu0 = cell_of(u_lo, ou).unwrap_or(0);
        let iu1 = cell_of(u_hi, ou).unwrap_or(r - 1);
        let iv0 = cell_of(v_lo, ov).unwrap_or(0);
        let iv1 = cell_of(v_hi, ov).unwrap_or(r - 1);
        for iv in iv0..=iv1 {
            let vc = ov + (iv as f64 + 0.5) * h;
            for iu in iu0..=iu1 {
                let uc = ou + (iu as f64 + 0.5) * h;
                // Line: free axis varies, (u, v) fixed at cell center.
                let mut origin = Vec3::ZERO;
                let mut dir = Vec3::ZERO;
                match axis {
                    0 => {
                        origin = Vec3::new(frame.origin.x - frame.edge, uc, vc);
                        dir = Vec3::new(1.0, 0.0, 0.0);
                    }
                    1 => {
                        origin = Vec3::new(uc, frame.origin.y - frame.edge, vc);
                        dir = Vec3::new(0.0, 1.0, 0.0);
                    }
                    2 => {
                        origin = Vec3::new(uc, vc, frame.origin.z - frame.edge);
                        dir = Vec3::new(0.0, 0.0, 1.0);
                    }
                    _ => unreachable!(),
                }
                if let Some(t) = ray_triangle(origin, dir, tri) {
                    rows[iv * r + iu].push(origin.axis(axis) + t);
                }
            }
        }
    }
    for row in &mut rows {
        row.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    rows
}

/// Marks voxel centers enclosed along all six axis directions. The mesh
/// is expected to already sit inside the frame (see
/// [`normalize_to_frame`]).
pub fn voxelize_solid(
    mesh: &TriangleMesh,
    frame: &GridFrame,
    resolution: u32,
) -> Result<OccupancyGrid, ScanError> {
    if mesh.triangles.is_empty() {
        return Err(ScanError::Geometry("cannot voxelize an empty mesh".into()));
    }
    let r = resolution as usize;

    // One crossing list per (row, column) line along each axis; every
    // voxel center on that line reuses it.
    let cross_x = axis_crossings(mesh, frame, resolution, 0);
    let cross_y = axis_crossings(mesh, frame, resolution, 1);
    let cross_z = axis_crossings(mesh, frame, resolution, 2);

    // Enclosed along an axis: at least one crossing strictly on each
    // side of the center. A crossing exactly at the center counts for
    // neither side (surface voxels are outside the contract anyway).
    let blocked_both =
        |row: &Vec<f64>, c: f64| row.first().is_some_and(|&t| t < c) && row.last().is_some_and(|&t| t > c);

    let slabs: Vec<Vec<bool>> = (0..r)
        .into_par_iter()
        .map(|k| {
            let mut slab = vec![false; r * r];
            for j in 0..r {
                for i in 0..r {
                    let c = frame.voxel_center(resolution, i, j, k);
                    let bx = blocked_both(&cross_x[k * r + j], c.x);
                    let by = blocked_both(&cross_y[k * r + i], c.y);
                    let bz = blocked_both(&cross_z[j * r + i], c.z);
                    slab[j * r + i] = bx && by && bz;
                }
            }
            slab
        })
        .collect();

    let mut grid = OccupancyGrid::new(resolution)
        .map_err(|e| ScanError::Geometry(e.to_string()))?;
    for (k, slab) in slabs.iter().enumerate() {
        for j in 0..r {
            for i in 0..r {
                if slab[j * r + i] {
                    grid.set(i, j, k, true);
                }
            }
        }
    }
    Ok(grid)
}
