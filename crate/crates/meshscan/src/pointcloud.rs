use voxgrid::OccupancyGrid;

use crate::{Camera, DepthImage, GridFrame, ScanError, Vec3};

/// 3D points in the camera frame (meters, Z > 0).
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Vec3>,
}

/// Back-projects every pixel with positive depth through the pinhole
/// model; zero-depth pixels are skipped.
pub fn depth_to_pointcloud(img: &DepthImage, camera: &Camera) -> Result<PointCloud, ScanError> {
    let intr = camera.intrinsics;
    if intr.width != img.width || intr.height != img.height {
        return Err(ScanError::Dimension(format!(
            "camera is {}x{} but image is {}x{}",
            intr.width, intr.height, img.width, img.height
        )));
    }
    let mut points = Vec::new();
    for v in 0..img.height {
        for u in 0..img.width {
            let d = f64::from(img.get(u, v));
            if d <= 0.0 {
                continue;
            }
            points.push(Vec3::new(
                (f64::from(u) + 0.5 - intr.cx) * d / intr.fx,
                (f64::from(v) + 0.5 - intr.cy) * d / intr.fy,
                d,
            ));
        }
    }
    Ok(PointCloud { points })
}

/// Bins points (already expressed in the frame's coordinates) into an
/// occupancy grid; returns the grid and the count of points that fell
/// outside the frame.
pub fn pointcloud_to_grid(
    points: &[Vec3],
    frame: &GridFrame,
    resolution: u32,
) -> Result<(OccupancyGrid, usize), ScanError> {
    let mut grid =
        OccupancyGrid::new(resolution).map_err(|e| ScanError::Geometry(e.to_string()))?;
    let mut dropped = 0usize;
    for &p in points {
        match frame.voxel_of(resolution, p) {
            Some((i, j, k)) => grid.set(i, j, k, true),
            None => dropped += 1,
        }
    }
    Ok((grid, dropped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{render_depth, sample_views, shapes, Intrinsics};

    fn fixed_camera() -> Camera {
        sample_views(1, 2.0, Intrinsics::for_frame(64, 1.0, 2.0), Vec3::ZERO)
            .pop()
            .unwrap()
    }

    #[test]
    fn principal_point_backprojects_on_axis() {
        let cam = fixed_camera();
        let mut depth = vec![0.0f32; 64 * 64];
        // Pixel whose center is the principal point: cx = 32.0, so pixel
        // (31, 31) has center 31.5, off-axis; use explicit math instead.
        let u = 31u32;
        let v = 31u32;
        depth[(v * 64 + u) as usize] = 1.7;
        let img = DepthImage::new(64, 64, depth).unwrap();
        let pc = depth_to_pointcloud(&img, &cam).unwrap();
        assert_eq!(pc.points.len(), 1);
        let p = pc.points[0];
        let d = f64::from(1.7f32);
        let expect_x = (31.5 - cam.intrinsics.cx) * d / cam.intrinsics.fx;
        assert!((p.x - expect_x).abs() < 1e-9);
        assert!((p.z - d).abs() < 1e-9);
    }

    #[test]
    fn all_zero_depth_gives_empty_cloud() {
        let img = DepthImage::new(8, 8, vec![0.0; 64]).unwrap();
        let pc = depth_to_pointcloud(&img, &fixed_camera_8()).unwrap();
        assert!(pc.points.is_empty());
    }

    fn fixed_camera_8() -> Camera {
        sample_views(1, 2.0, Intrinsics::for_frame(8, 1.0, 2.0), Vec3::ZERO)
            .pop()
            .unwrap()
    }

    #[test]
    fn size_mismatch_errors() {
        let img = DepthImage::new(8, 8, vec![0.0; 64]).unwrap();
        assert!(depth_to_pointcloud(&img, &fixed_camera()).is_err());
    }

    #[test]
    fn reprojection_roundtrip() {
        let mesh = shapes::convex_solid(3);
        let (mesh, _) = crate::normalize_to_frame(&mesh, 0.05).unwrap();
        let cam = fixed_camera();
        let img = render_depth(&mesh, &cam);
        let pc = depth_to_pointcloud(&img, &cam).unwrap();
        assert!(!pc.points.is_empty());
        for p in &pc.points {
            let (u, v) = cam.project(*p).expect("point in front of camera");
            // Source pixel center was (u0+0.5, v0+0.5); floor recovers it.
            let u0 = u.floor();
            let v0 = v.floor();
            assert!((0.0..f64::from(img.width)).contains(&u0));
            let d = img.get(u0 as u32, v0 as u32);
            assert!((f64::from(d) - p.z).abs() < 1e-6);
        }
    }

    #[test]
    fn empty_cloud_gives_empty_grid() {
        let (grid, dropped) = pointcloud_to_grid(&[], &GridFrame::unit(), 16).unwrap();
        assert_eq!(grid.count_occupied(), 0);
        assert_eq!(dropped, 0);
    }

    #[test]
    fn center_point_occupies_one_voxel() {
        let (grid, dropped) =
            pointcloud_to_grid(&[Vec3::new(0.01, 0.01, 0.01)], &GridFrame::unit(), 16).unwrap();
        assert_eq!(grid.count_occupied(), 1);
        assert_eq!(dropped, 0);
    }

    #[test]
    fn planar_cloud_fills_one_slab() {
        // Points on the plane x = -0.2 spread across the frame: every
        // occupied voxel shares the same x index.
        let mut pts = Vec::new();
        for j in 0..16 {
            for k in 0..16 {
                pts.push(Vec3::new(
                    -0.2,
                    -0.5 + (j as f64 + 0.5) / 16.0,
                    -0.5 + (k as f64 + 0.5) / 16.0,
                ));
            }
        }
        let (grid, dropped) = pointcloud_to_grid(&pts, &GridFrame::unit(), 16).unwrap();
        assert_eq!(dropped, 0);
        assert_eq!(grid.count_occupied(), 256);
        let idx = ((-0.2f64 + 0.5) * 16.0).floor() as usize;
        for j in 0..16 {
            for k in 0..16 {
                assert!(grid.get(idx, j, k));
            }
        }
    }

    #[test]
    fn outside_points_are_dropped_and_counted() {
        let pts = vec![Vec3::new(2.0, 0.0, 0.0), Vec3::new(0.0, 0.0, 0.0)];
        let (grid, dropped) = pointcloud_to_grid(&pts, &GridFrame::unit(), 16).unwrap();
        assert_eq!(grid.count_occupied(), 1);
        assert_eq!(dropped, 1);
    }
}
