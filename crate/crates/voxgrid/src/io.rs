//! The `.rgpp` grid container: little-endian, magic `RGPP`, version u16,
//! kind u8 (0 = occupancy bit-packed, 1 = probability f32), reserved u8,
//! resolution u32, then the payload.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::{is_power_of_two, GridError, OccupancyGrid, ProbGrid};

const MAGIC: [u8; 4] = *b"RGPP";
const VERSION: u16 = 1;
const KIND_OCCUPANCY: u8 = 0;
const KIND_PROB: u8 = 1;

/// Either grid kind, as read back from disk.
#[derive(Debug, Clone)]
pub enum Grid {
    Occupancy(OccupancyGrid),
    Prob(ProbGrid),
}

impl Grid {
    pub fn resolution(&self) -> u32 {
        match self {
            Grid::Occupancy(g) => g.resolution(),
            Grid::Prob(g) => g.resolution(),
        }
    }
}

impl From<OccupancyGrid> for Grid {
    fn from(g: OccupancyGrid) -> Self {
        Grid::Occupancy(g)
    }
}

impl From<ProbGrid> for Grid {
    fn from(g: ProbGrid) -> Self {
        Grid::Prob(g)
    }
}

pub fn write_grid(grid: &Grid, path: &Path) -> Result<(), GridError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_grid_to(grid, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_grid_to(grid: &Grid, w: &mut impl Write) -> Result<(), GridError> {
    w.write_all(&MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    match grid {
        Grid::Occupancy(g) => {
            w.write_all(&[KIND_OCCUPANCY, 0])?;
            w.write_all(&g.resolution().to_le_bytes())?;
            w.write_all(g.bytes())?;
        }
        Grid::Prob(g) => {
            w.write_all(&[KIND_PROB, 0])?;
            w.write_all(&g.resolution().to_le_bytes())?;
            for v in g.values() {
                w.write_all(&v.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

pub fn read_grid(path: &Path) -> Result<Grid, GridError> {
    let mut r = BufReader::new(File::open(path)?);
    read_grid_from(&mut r)
}

pub fn read_grid_from(r: &mut impl Read) -> Result<Grid, GridError> {
    let mut header = [0u8; 12];
    r.read_exact(&mut header)
        .map_err(|_| GridError::Format("truncated header".into()))?;
    if header[0..4] != MAGIC {
        return Err(GridError::Format("bad magic".into()));
    }
    let version = u16::from_le_bytes([header[4], header[5]]);
    if version != VERSION {
        return Err(GridError::Format(format!("unsupported version {version}")));
    }
    let kind = header[6];
    let resolution = u32::from_le_bytes([header[8], header[9], header[10], header[11]]);
    if !is_power_of_two(resolution) || resolution < 2 {
        return Err(GridError::Format(format!(
            "resolution {resolution} is not a power of two >= 2"
        )));
    }
    let voxels = (resolution as usize).pow(3);
    match kind {
        KIND_OCCUPANCY => {
            let mut data = vec![0u8; voxels.div_ceil(8)];
            r.read_exact(&mut data)
                .map_err(|_| GridError::Format("truncated payload".into()))?;
            Ok(Grid::Occupancy(OccupancyGrid::from_bytes(resolution, data)?))
        }
        KIND_PROB => {
            let mut raw = vec![0u8; voxels * 4];
            r.read_exact(&mut raw)
                .map_err(|_| GridError::Format("truncated payload".into()))?;
            let values = raw
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                .collect();
            Ok(Grid::Prob(ProbGrid::new(resolution, values)?))
        }
        other => Err(GridError::Format(format!("unknown grid kind {other}"))),
    }
}

/// Convenience: read and require the occupancy kind.
pub fn read_occupancy(path: &Path) -> Result<OccupancyGrid, GridError> {
    match read_grid(path)? {
        Grid::Occupancy(g) => Ok(g),
        Grid::Prob(_) => Err(GridError::Format(format!(
            "{} holds a probability grid, expected occupancy",
            path.display()
        ))),
    }
}

/// Convenience: read and require the probability kind.
pub fn read_prob(path: &Path) -> Result<ProbGrid, GridError> {
    match read_grid(path)? {
        Grid::Prob(g) => Ok(g),
        Grid::Occupancy(_) => Err(GridError::Format(format!(
            "{} holds an occupancy grid, expected probability",
            path.display()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(grid: Grid) -> Grid {
        let mut buf = Vec::new();
        write_grid_to(&grid, &mut buf).unwrap();
        read_grid_from(&mut buf.as_slice()).unwrap()
    }

    #[test]
    fn occupancy_roundtrip_bit_exact() {
        let mut g = OccupancyGrid::new(8).unwrap();
        for i in (0..512).step_by(7) {
            g.set_linear(i, true);
        }
        match roundtrip(g.clone().into()) {
            Grid::Occupancy(back) => assert_eq!(back, g),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn full_4_grid_payload_is_8_ff_bytes() {
        let g = OccupancyGrid::from_fn(4, |_, _, _| true).unwrap();
        let mut buf = Vec::new();
        write_grid_to(&g.into(), &mut buf).unwrap();
        assert_eq!(buf.len(), 12 + 8);
        assert!(buf[12..].iter().all(|&b| b == 0xFF));
    }

    #[test]
    fn prob_roundtrip_bit_exact() {
        let vals: Vec<f32> = (0..64).map(|i| i as f32 / 64.0).collect();
        let g = ProbGrid::new(4, vals.clone()).unwrap();
        match roundtrip(g.into()) {
            Grid::Prob(back) => assert_eq!(back.values(), vals.as_slice()),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn wrong_magic_rejected() {
        let mut buf = Vec::new();
        write_grid_to(&OccupancyGrid::new(4).unwrap().into(), &mut buf).unwrap();
        buf[0] = b'X';
        assert!(matches!(
            read_grid_from(&mut buf.as_slice()),
            Err(GridError::Format(_))
        ));
    }

    #[test]
    fn truncated_payload_rejected() {
        let mut buf = Vec::new();
        write_grid_to(&OccupancyGrid::new(4).unwrap().into(), &mut buf).unwrap();
        buf.truncate(buf.len() - 1);
        assert!(read_grid_from(&mut buf.as_slice()).is_err());
    }

    #[test]
    fn non_power_of_two_resolution_rejected() {
        let mut buf = Vec::new();
        write_grid_to(&OccupancyGrid::new(4).unwrap().into(), &mut buf).unwrap();
        buf[8] = 5;
        assert!(read_grid_from(&mut buf.as_slice()).is_err());
    }
}
