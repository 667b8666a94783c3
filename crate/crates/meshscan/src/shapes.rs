//! Watertight primitive meshes for smoke datasets and oracle tests.

use crate::{Mat3, TriangleMesh, Vec3};

/// Axis-aligned box centered on the origin with the given extents,
/// outward-facing triangles.
pub fn box_mesh(extents: Vec3) -> TriangleMesh {
    let h = extents.scale(0.5);
    let v = |sx: f64, sy: f64, sz: f64| Vec3::new(sx * h.x, sy * h.y, sz * h.z);
    let vertices = vec![
        v(-1.0, -1.0, -1.0),
        v(1.0, -1.0, -1.0),
        v(1.0, 1.0, -1.0),
        v(-1.0, 1.0, -1.0),
        v(-1.0, -1.0, 1.0),
        v(1.0, -1.0, 1.0),
        v(1.0, 1.0, 1.0),
        v(-1.0, 1.0, 1.0),
    ];
    let quads: [[u32; 4]; 6] = [
        [0, 3, 2, 1], // -z
        [4, 5, 6, 7], // +z
        [0, 1, 5, 4], // -y
        [2, 3, 7, 6], // +y
        [1, 2, 6, 5], // +x
        [0, 4, 7, 3], // -x
    ];
    let mut triangles = Vec::with_capacity(12);
    for q in quads {
        triangles.push([q[0], q[1], q[2]]);
        triangles.push([q[0], q[2], q[3]]);
    }
    TriangleMesh { vertices, triangles }
}

/// Tetrahedron over four points (assumed non-coplanar).
pub fn tetrahedron(points: [Vec3; 4]) -> TriangleMesh {
    let mut triangles = vec![[0u32, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    // Orient faces outward from the centroid.
    let centroid = (points[0] + points[1] + points[2] + points[3]).scale(0.25);
    for t in &mut triangles {
        let a = points[t[0] as usize];
        let b = points[t[1] as usize];
        let c = points[t[2] as usize];
        let n = (b - a).cross(c - a);
        if n.dot(a - centroid) < 0.0 {
            t.swap(1, 2);
        }
    }
    TriangleMesh { vertices: points.to_vec(), triangles }
}

/// Octahedron with the given semi-axes, centered on the origin.
pub fn octahedron(semi: Vec3) -> TriangleMesh {
    let vertices = vec![
        Vec3::new(semi.x, 0.0, 0.0),
        Vec3::new(-semi.x, 0.0, 0.0),
        Vec3::new(0.0, semi.y, 0.0),
        Vec3::new(0.0, -semi.y, 0.0),
        Vec3::new(0.0, 0.0, semi.z),
        Vec3::new(0.0, 0.0, -semi.z),
    ];
    let triangles = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    TriangleMesh { vertices, triangles }
}

/// Deterministic family of rotated convex solids; `index` picks the
/// primitive and its transform.
pub fn convex_solid(index: u64) -> TriangleMesh {
    let f = |k: u64, m: u64| (index.wrapping_mul(2654435761).wrapping_add(k) % m) as f64 / m as f64;
    let rot = Mat3::from_rpy(
        f(1, 97) * std::f64::consts::TAU,
        f(2, 89) * std::f64::consts::TAU,
        f(3, 83) * std::f64::consts::TAU,
    );
    let extents = Vec3::new(
        0.6 + 0.8 * f(4, 101),
        0.6 + 0.8 * f(5, 103),
        0.6 + 0.8 * f(6, 107),
    );
    let base = match index % 3 {
        0 => box_mesh(extents),
        1 => octahedron(extents.scale(0.9)),
        _ => tetrahedron([
            Vec3::new(-extents.x, -extents.y, -extents.z),
            Vec3::new(extents.x, -0.5 * extents.y, -0.4 * extents.z),
            Vec3::new(0.1 * extents.x, extents.y, -0.3 * extents.z),
            Vec3::new(0.0, 0.1 * extents.y, extents.z),
        ]),
    };
    base.transformed(rot, Vec3::ZERO, Vec3::ZERO)
}
