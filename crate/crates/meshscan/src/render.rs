use rayon::prelude::*;

use crate::{Camera, ScanError, TriangleMesh, Vec3};

/// Per-pixel depth in meters along camera Z; 0.0 encodes no hit.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthImage {
    pub width: u32,
    pub height: u32,
    depth: Vec<f32>,
}

impl DepthImage {
    pub fn new(width: u32, height: u32, depth: Vec<f32>) -> Result<Self, ScanError> {
        if depth.len() != (width as usize) * (height as usize) {
            return Err(ScanError::Dimension(format!(
                "depth buffer length {} for {}x{} image",
                depth.len(),
                width,
                height
            )));
        }
        if let Some(d) = depth.iter().find(|d| !d.is_finite() || **d < 0.0) {
            return Err(ScanError::Dimension(format!("invalid depth value {d}")));
        }
        Ok(Self { width, height, depth })
    }

    #[inline]
    pub fn get(&self, u: u32, v: u32) -> f32 {
        self.depth[v as usize * self.width as usize + u as usize]
    }

    pub fn values(&self) -> &[f32] {
        &self.depth
    }

    pub fn hit_count(&self) -> usize {
        self.depth.iter().filter(|&&d| d > 0.0).count()
    }

    /// 16-bit binary PGM with millimeter quantization (lossy, for
    /// inspection only).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n65535\n", self.width, self.height).into_bytes();
        for d in &self.depth {
            let mm = (f64::from(*d) * 1000.0).round().clamp(0.0, 65535.0) as u16;
            out.extend_from_slice(&mm.to_be_bytes());
        }
        out
    }
}

/// Ray-casts the mesh through every pixel center `(u + 0.5, v + 0.5)`;
/// depth is the camera-Z of the nearest intersection, 0.0 on a miss.
pub fn render_depth(mesh: &TriangleMesh, camera: &Camera) -> DepthImage {
    let tris: Vec<[Vec3; 3]> = (0..mesh.triangles.len())
        .map(|i| {
            let t = mesh.triangle(i);
            [
                camera.world_to_cam(t[0]),
                camera.world_to_cam(t[1]),
                camera.world_to_cam(t[2]),
            ]
        })
        .collect();
    let intr = camera.intrinsics;
    let w = intr.width as usize;
    let h = intr.height as usize;

    let depth: Vec<f32> = (0..h)
        .into_par_iter()
        .flat_map_iter(|v| {
            let tris = &tris;
            (0..w).map(move |u| {
                let dir = Vec3::new(
                    (u as f64 + 0.5 - intr.cx) / intr.fx,
                    (v as f64 + 0.5 - intr.cy) / intr.fy,
                    1.0,
                )
                .normalized();
                let mut best = f64::INFINITY;
                for tri in tris {
                    if let Some(t) = crate::ray_triangle(Vec3::ZERO, dir, *tri) {
                        if t < best {
                            best = t;
                        }
                    }
                }
                if best.is_finite() {
                    (best * dir.z) as f32
                } else {
                    0.0
                }
            })
        })
        .collect();

    DepthImage { width: intr.width, height: intr.height, depth }
}
