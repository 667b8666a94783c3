use crate::{Mat3, ScanError, Vec3};

/// Pinhole intrinsics in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: u32,
    pub height: u32,
}

impl Intrinsics {
    /// Square image sized so the frame cube (edge `e`, circumradius
    /// `e*sqrt(3)/2`) subtends about 80% of the image at distance `d`.
    pub fn for_frame(image_size: u32, frame_edge: f64, distance: f64) -> Self {
        let rho = frame_edge * 3f64.sqrt() / 2.0;
        let fx = 0.4 * f64::from(image_size) * distance / rho;
        Self {
            fx,
            fy: fx,
            cx: f64::from(image_size) / 2.0,
            cy: f64::from(image_size) / 2.0,
            width: image_size,
            height: image_size,
        }
    }
}

/// World-to-camera rigid transform plus intrinsics. Camera looks along
/// its +Z axis; `p_cam = rot * p_world + trans`.
#[derive(Debug, Clone, PartialEq)]
pub struct Camera {
    pub intrinsics: Intrinsics,
    pub rot: Mat3,
    pub trans: Vec3,
}

impl Camera {
    pub fn new(intrinsics: Intrinsics, rot: Mat3, trans: Vec3) -> Result<Self, ScanError> {
        if intrinsics.fx <= 0.0 || intrinsics.fy <= 0.0 {
            return Err(ScanError::Camera("focal lengths must be positive".into()));
        }
        if intrinsics.cx < 0.0
            || intrinsics.cx >= f64::from(intrinsics.width)
            || intrinsics.cy < 0.0
            || intrinsics.cy >= f64::from(intrinsics.height)
        {
            return Err(ScanError::Camera("principal point outside image".into()));
        }
        let defect = rot.orthonormality_defect();
        if defect > 1e-9 {
            return Err(ScanError::Camera(format!(
                "rotation not orthonormal (defect {defect:.2e})"
            )));
        }
        Ok(Self { intrinsics, rot, trans })
    }

    pub fn world_to_cam(&self, p: Vec3) -> Vec3 {
        self.rot * p + self.trans
    }

    pub fn cam_to_world(&self, p: Vec3) -> Vec3 {
        self.rot.transpose() * (p - self.trans)
    }

    /// The view rotation this pose applies to the model frame.
    pub fn view_rotation(&self) -> Mat3 {
        self.rot
    }

    /// Pixel of a camera-frame point (no rounding), when in front.
    pub fn project(&self, p: Vec3) -> Option<(f64, f64)> {
        if p.z <= 0.0 {
            return None;
        }
        Some((
            self.intrinsics.fx * p.x / p.z + self.intrinsics.cx,
            self.intrinsics.fy * p.y / p.z + self.intrinsics.cy,
        ))
    }
}

/// `n^3` camera poses: per-axis angles `2*pi*k/n` composed intrinsically
/// Z-Y-X (yaw * pitch * roll) and applied to the model frame, with the
/// camera fixed on the -Z axis at `distance` from `center`, looking at
/// `center`.
///
/// Pose index is `(i_roll * n + i_pitch) * n + i_yaw`.
pub fn sample_views(
    n_per_axis: u32,
    distance: f64,
    intrinsics: Intrinsics,
    center: Vec3,
) -> Vec<Camera> {
    assert!(n_per_axis >= 1, "need at least one view per axis");
    assert!(distance > 0.0, "camera distance must be positive");
    let n = n_per_axis as usize;
    let step = std::f64::consts::TAU / f64::from(n_per_axis);
    let mut cams = Vec::with_capacity(n * n * n);
    for i_roll in 0..n {
        for i_pitch in 0..n {
            for i_yaw in 0..n {
                let rot = Mat3::from_rpy(
                    step * i_roll as f64,
                    step * i_pitch as f64,
                    step * i_yaw as f64,
                );
                // p_cam = R (p - center) + (0, 0, distance)
                let trans = Vec3::new(0.0, 0.0, distance) - rot * center;
                cams.push(Camera {
                    intrinsics,
                    rot,
                    trans,
                });
            }
        }
    }
    cams
}
