use crate::{Mat3, ScanError, Vec3};

/// Indexed triangle mesh in model units.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
}

/// Axis-aligned cubic region shared by the partial and full grids of one
/// scan pair: `origin` is the min corner, `edge` the side length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridFrame {
    pub origin: Vec3,
    pub edge: f64,
}

impl GridFrame {
    /// Unit cube centered on the world origin.
    pub fn unit() -> Self {
        Self { origin: Vec3::new(-0.5, -0.5, -0.5), edge: 1.0 }
    }

    pub fn center(&self) -> Vec3 {
        self.origin + Vec3::new(0.5, 0.5, 0.5).scale(self.edge)
    }

    /// Center of voxel `(i, j, k)` when subdivided at `resolution`.
    pub fn voxel_center(&self, resolution: u32, i: usize, j: usize, k: usize) -> Vec3 {
        let h = self.edge / f64::from(resolution);
        self.origin + Vec3::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h, (k as f64 + 0.5) * h)
    }

    /// Voxel containing `p`, or None when outside the frame.
    pub fn voxel_of(&self, resolution: u32, p: Vec3) -> Option<(usize, usize, usize)> {
        let h = self.edge / f64::from(resolution);
        let rel = p - self.origin;
        let r = resolution as i64;
        let i = (rel.x / h).floor() as i64;
        let j = (rel.y / h).floor() as i64;
        let k = (rel.z / h).floor() as i64;
        if i < 0 || j < 0 || k < 0 || i >= r || j >= r || k >= r {
            None
        } else {
            Some((i as usize, j as usize, k as usize))
        }
    }
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[u32; 3]>) -> Result<Self, ScanError> {
        let n = vertices.len() as u32;
        if let Some(v) = vertices.iter().find(|v| !v.is_finite()) {
            return Err(ScanError::Geometry(format!("non-finite vertex {v:?}")));
        }
        if triangles.is_empty() {
            return Err(ScanError::Geometry("mesh has no triangles".into()));
        }
        for t in &triangles {
            if t.iter().any(|&i| i >= n) {
                return Err(ScanError::Geometry(format!(
                    "triangle {t:?} references a vertex >= {n}"
                )));
            }
        }
        Ok(Self { vertices, triangles })
    }

    pub fn triangle(&self, i: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[i];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    pub fn bounds(&self) -> (Vec3, Vec3) {
        let mut min = self.vertices[0];
        let mut max = self.vertices[0];
        for v in &self.vertices {
            min = min.min_by_component(*v);
            max = max.max_by_component(*v);
        }
        (min, max)
    }

    /// Rigidly transformed copy: `p -> R (p - pivot) + pivot + offset`.
    pub fn transformed(&self, rot: Mat3, pivot: Vec3, offset: Vec3) -> TriangleMesh {
        TriangleMesh {
            vertices: self
                .vertices
                .iter()
                .map(|&p| rot * (p - pivot) + pivot + offset)
                .collect(),
            triangles: self.triangles.clone(),
        }
    }

    /// Wavefront OBJ text with `v` and `f` records (1-based indices).
    pub fn to_obj_string(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
        }
        for t in &self.triangles {
            out.push_str(&format!("f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1));
        }
        out
    }
}

/// Parses the `v`/`f` subset of Wavefront OBJ. Polygons are
/// fan-triangulated; face indices must be positive 1-based absolute
/// references; any other record type is ignored.
pub fn parse_obj(text: &str) -> Result<TriangleMesh, ScanError> {
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let mut coords = [0.0f64; 3];
                for c in coords.iter_mut() {
                    let tok = parts.next().ok_or_else(|| ScanError::Parse {
                        line: line_no,
                        msg: "vertex needs 3 coordinates".into(),
                    })?;
                    *c = tok.parse().map_err(|_| ScanError::Parse {
                        line: line_no,
                        msg: format!("bad coordinate `{tok}`"),
                    })?;
                }
                let v = Vec3::new(coords[0], coords[1], coords[2]);
                if !v.is_finite() {
                    return Err(ScanError::Parse {
                        line: line_no,
                        msg: "non-finite vertex coordinate".into(),
                    });
                }
                vertices.push(v);
            }
            Some("f") => {
                let mut idxs: Vec<u32> = Vec::new();
                for tok in parts {
                    let first = tok.split('/').next().unwrap_or("");
                    let value: i64 = first.parse().map_err(|_| ScanError::Parse {
                        line: line_no,
                        msg: format!("bad face index `{tok}`"),
                    })?;
                    if value <= 0 {
                        return Err(ScanError::Parse {
                            line: line_no,
                            msg: format!(
                                "face index {value} must be a positive absolute reference"
                            ),
                        });
                    }
                    if value as usize > vertices.len() {
                        return Err(ScanError::Parse {
                            line: line_no,
                            msg: format!(
                                "face references vertex {value} of {}",
                                vertices.len()
                            ),
                        });
                    }
                    idxs.push((value - 1) as u32);
                }
                if idxs.len() < 3 {
                    return Err(ScanError::Parse {
                        line: line_no,
                        msg: format!("face has {} vertices, need at least 3", idxs.len()),
                    });
                }
                for i in 1..idxs.len() - 1 {
                    triangles.push([idxs[0], idxs[i], idxs[i + 1]]);
                }
            }
            _ => {} // vn, vt, o, g, s, usemtl, ...
        }
    }

    if triangles.is_empty() {
        return Err(ScanError::Parse {
            line: text.lines().count(),
            msg: "no faces found".into(),
        });
    }
    TriangleMesh::new(vertices, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBE_OBJ: &str = "\
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
v 0 0 1
v 1 0 1
v 1 1 1
v 0 1 1
f 1 4 3 2
f 5 6 7 8
f 1 2 6 5
f 2 3 7 6
f 3 4 8 7
f 4 1 5 8
";

    #[test]
    fn quad_cube_fan_triangulates() {
        let mesh = parse_obj(CUBE_OBJ).unwrap();
        assert_eq!(mesh.vertices.len(), 8);
        assert_eq!(mesh.triangles.len(), 12);
    }

    #[test]
    fn vertices_only_is_an_error() {
        let err = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\n").unwrap_err();
        assert!(matches!(err, ScanError::Parse { .. }));
    }

    #[test]
    fn out_of_range_face_names_line() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n";
        match parse_obj(text).unwrap_err() {
            ScanError::Parse { line, msg } => {
                assert_eq!(line, 4);
                assert!(msg.contains('9'));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn negative_indices_rejected() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf -1 -2 -3\n";
        assert!(matches!(parse_obj(text), Err(ScanError::Parse { line: 4, .. })));
    }

    #[test]
    fn slash_forms_accepted() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1/1 2/2/2 3//3\n";
        let mesh = parse_obj(text).unwrap();
        assert_eq!(mesh.triangles.len(), 1);
    }

    #[test]
    fn obj_string_roundtrip() {
        let mesh = parse_obj(CUBE_OBJ).unwrap();
        let back = parse_obj(&mesh.to_obj_string()).unwrap();
        assert_eq!(back, mesh);
    }

    #[test]
    fn frame_voxel_lookup() {
        let f = GridFrame::unit();
        assert_eq!(f.voxel_of(4, Vec3::new(0.0, 0.0, 0.0)), Some((2, 2, 2)));
        assert_eq!(f.voxel_of(4, Vec3::new(-0.6, 0.0, 0.0)), None);
        let c = f.voxel_center(4, 0, 0, 0);
        assert!((c - Vec3::new(-0.375, -0.375, -0.375)).norm() < 1e-15);
    }
}
