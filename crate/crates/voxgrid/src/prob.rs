use crate::{is_power_of_two, linear_index, GridError, OccupancyGrid};

/// Real-valued voxel grid with per-cell occupancy probability in `[0, 1]`.
///
/// Same X-fastest linear layout as [`OccupancyGrid`].
#[derive(Clone, PartialEq)]
pub struct ProbGrid {
    resolution: u32,
    values: Vec<f32>,
}

impl ProbGrid {
    pub fn new(resolution: u32, values: Vec<f32>) -> Result<Self, GridError> {
        if !is_power_of_two(resolution) || resolution < 2 {
            return Err(GridError::InvalidResolution(resolution));
        }
        let n = resolution as usize;
        if values.len() != n * n * n {
            return Err(GridError::InvalidArgument(format!(
                "expected {} values for resolution {}, got {}",
                n * n * n,
                resolution,
                values.len()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 || *v > 1.0 {
                return Err(GridError::ValueOutOfRange(format!(
                    "value {v} at index {i} outside [0, 1]"
                )));
            }
        }
        Ok(Self { resolution, values })
    }

    /// 0.0/1.0 copy of a binary grid.
    pub fn from_occupancy(grid: &OccupancyGrid) -> Self {
        let values = (0..grid.voxel_count())
            .map(|i| if grid.get_linear(i) { 1.0 } else { 0.0 })
            .collect();
        Self {
            resolution: grid.resolution(),
            values,
        }
    }

    /// Binarize at `p` (strictly greater-than).
    pub fn binarize(&self, p: f64) -> OccupancyGrid {
        let mut g = OccupancyGrid::new(self.resolution).expect("valid resolution");
        for i in 0..self.values.len() {
            if f64::from(self.values[i]) > p {
                g.set_linear(i, true);
            }
        }
        g
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn voxel_count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> f32 {
        self.values[linear_index(self.resolution as usize, x, y, z)]
    }
}

impl std::fmt::Debug for ProbGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProbGrid")
            .field("resolution", &self.resolution)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_range() {
        assert!(ProbGrid::new(2, vec![0.5; 8]).is_ok());
        assert!(ProbGrid::new(2, vec![1.5; 8]).is_err());
        assert!(ProbGrid::new(2, vec![f32::NAN; 8]).is_err());
        assert!(ProbGrid::new(2, vec![0.5; 7]).is_err());
    }

    #[test]
    fn binarize_strictly_greater() {
        let g = ProbGrid::new(2, vec![0.5, 0.6, 0.4, 0.5, 0.5, 0.5, 0.5, 0.5]).unwrap();
        let b = g.binarize(0.5);
        assert!(b.get_linear(1));
        assert!(!b.get_linear(0), "0.5 > 0.5 must be false");
        assert_eq!(b.count_occupied(), 1);
    }
}
