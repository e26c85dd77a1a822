//! Mesh builders for the built-in surfaces.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, TAU};

use super::{Ambient, Chart, MeshSurface, V4};
use crate::error::{Error, Result};

/// Vertices per hole ring.
pub const RING: usize = 64;
/// Half-width, in grid cells, of the square block replaced by a collar.
pub const BLOCK_HALF: usize = 8;

/// Product torus `|z| = cos β` on an `n_u × n_v` grid.
pub fn torus_grid(beta: f64, n_u: usize, n_v: usize) -> Result<MeshSurface> {
    let idx = |i: usize, j: usize| (i % n_u) * n_v + (j % n_v);
    let mut uv = Vec::with_capacity(n_u * n_v);
    for i in 0..n_u {
        for j in 0..n_v {
            uv.push([TAU * i as f64 / n_u as f64, TAU * j as f64 / n_v as f64]);
        }
    }
    let mut tris = Vec::with_capacity(2 * n_u * n_v);
    for i in 0..n_u {
        for j in 0..n_v {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    MeshSurface::from_chart(Chart::ProductTorus { beta }, Ambient::RoundS3, uv, tris)
}

/// The Clifford torus `|z|² = |w|² = 1/2` on an `n × n` grid.
pub fn clifford_torus(n: usize) -> Result<MeshSurface> {
    torus_grid(FRAC_PI_4, n, n)
}

/// Flat disk in the plane `z = 0`: a center vertex and concentric rings of
/// `sectors` vertices at the given increasing radii.
pub fn polar_disk(sectors: usize, ring_radii: &[f64]) -> Result<MeshSurface> {
    if ring_radii.is_empty() || ring_radii.windows(2).any(|w| w[1] <= w[0]) || ring_radii[0] <= 0.0 {
        return Err(Error::Domain("ring radii must be positive and increasing".into()));
    }
    let mut uv = vec![[0.0, 0.0]];
    for &r in ring_radii {
        for k in 0..sectors {
            let a = TAU * k as f64 / sectors as f64;
            uv.push([r * a.cos(), r * a.sin()]);
        }
    }
    let at = |ring: usize, k: usize| 1 + ring * sectors + k % sectors;
    let mut tris = Vec::new();
    for k in 0..sectors {
        tris.push([0, at(0, k), at(0, k + 1)]);
    }
    for ring in 0..ring_radii.len() - 1 {
        for k in 0..sectors {
            let (a, b, c, d) = (at(ring, k), at(ring, k + 1), at(ring + 1, k + 1), at(ring + 1, k));
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    MeshSurface::from_chart(Chart::Plane, Ambient::EuclideanR3, uv, tris)
}

/// Catenoid `c·cosh(s/c)` for `|s| ≤ s_max`.
pub fn catenoid_patch(c: f64, s_max: f64, n_s: usize, n_theta: usize) -> Result<MeshSurface> {
    let mut uv = Vec::new();
    for i in 0..=n_s {
        for j in 0..n_theta {
            uv.push([-s_max + 2.0 * s_max * i as f64 / n_s as f64, TAU * j as f64 / n_theta as f64]);
        }
    }
    let idx = |i: usize, j: usize| i * n_theta + j % n_theta;
    let mut tris = Vec::new();
    for i in 0..n_s {
        for j in 0..n_theta {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    MeshSurface::from_chart(Chart::Catenoid { c }, Ambient::EuclideanR3, uv, tris)
}

/// Unit sphere from a subdivided icosahedron.
pub fn icosphere(subdivisions: usize) -> Result<MeshSurface> {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<V4> = [
        (-1.0, g, 0.0), (1.0, g, 0.0), (-1.0, -g, 0.0), (1.0, -g, 0.0),
        (0.0, -1.0, g), (0.0, 1.0, g), (0.0, -1.0, -g), (0.0, 1.0, -g),
        (g, 0.0, -1.0), (g, 0.0, 1.0), (-g, 0.0, -1.0), (-g, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| V4::new(x, y, z, 0.0).normalize())
    .collect();
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(tris.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<V4>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                verts.len() - 1
            })
        };
        for [a, b, c] in tris {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        tris = next;
    }
    MeshSurface::unit_sphere(verts, tris)
}

/// A hole (or refined disk) replacing one square block of a torus grid.
#[derive(Debug, Clone)]
pub struct HoleCollar {
    /// Grid vertex at the center of the block.
    pub center: (usize, usize),
    /// Inner ring as `RING` parameter offsets from the center, ordered
    /// counterclockwise with offset `k` near angle `2πk/RING`.
    pub inner: Vec<[f64; 2]>,
    /// Ring `j` is `scales[j]·inner`; `scales[0]` must be 1.
    pub scales: Vec<f64>,
    /// Rings blending the last scaled ring into the block boundary.
    pub blend_rings: usize,
    /// Fill the inner ring with a fan around a vertex at the center.
    pub filled: bool,
}

impl HoleCollar {
    /// Circular inner ring of parameter radius `rho`.
    pub fn circle(center: (usize, usize), radii: &[f64], blend_rings: usize, filled: bool) -> Self {
        let rho = radii[0];
        let inner = (0..RING)
            .map(|k| {
                let a = TAU * k as f64 / RING as f64;
                [rho * a.cos(), rho * a.sin()]
            })
            .collect();
        HoleCollar { center, inner, scales: radii.iter().map(|r| r / rho).collect(), blend_rings, filled }
    }
}

/// Block boundary vertex `k`, as a cell offset from the block center,
/// walking counterclockwise from the middle of the right side.
fn block_boundary_offset(k: usize) -> (i64, i64) {
    let h = BLOCK_HALF as i64;
    let k = k as i64;
    match k {
        0..8 => (h, k),
        8..24 => (h - (k - 8), h),
        24..40 => (-h, h - (k - 24)),
        40..56 => (-h + (k - 40), -h),
        _ => (h, -h + (k - 56)),
    }
}

/// Output of [`collared_torus`]: the mesh plus, per hole, the vertex indices
/// of every ring (innermost first, block boundary last) and the center
/// vertex of filled holes.
#[derive(Debug, Clone)]
pub struct CollaredTorus {
    pub mesh: MeshSurface,
    pub rings: Vec<Vec<Vec<usize>>>,
    pub centers: Vec<Option<usize>>,
}

/// How grid quads are cut into triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadSplit {
    /// Always along the `(1, 1)` diagonal.
    Uniform,
    /// Along the diagonal pointing at the nearest corner of the squares of
    /// side `period` cells, so no triangle crosses a square's diagonals.
    TowardCorners { period: usize },
}

/// Product torus on an `n × n` grid with square blocks replaced by polar
/// collars. Blocks must not overlap.
pub fn collared_torus(beta: f64, n: usize, holes: &[HoleCollar]) -> Result<CollaredTorus> {
    collared_torus_with(beta, n, holes, QuadSplit::Uniform)
}

pub fn collared_torus_with(beta: f64, n: usize, holes: &[HoleCollar], split: QuadSplit) -> Result<CollaredTorus> {
    assert_eq!(RING, 8 * BLOCK_HALF, "ring size must match the block perimeter");
    let step = TAU / n as f64;
    let wrap = |i: i64| i.rem_euclid(n as i64) as usize;
    let mut removed = vec![false; n * n];
    for hole in holes {
        if hole.inner.len() != RING || hole.scales.first() != Some(&1.0) {
            return Err(Error::Domain("collar needs a full inner ring and scales starting at 1".into()));
        }
        let (ci, cj) = (hole.center.0 as i64, hole.center.1 as i64);
        for di in -(BLOCK_HALF as i64)..BLOCK_HALF as i64 {
            for dj in -(BLOCK_HALF as i64)..BLOCK_HALF as i64 {
                let cell = wrap(ci + di) * n + wrap(cj + dj);
                if removed[cell] {
                    return Err(Error::Domain("collar blocks overlap".into()));
                }
                removed[cell] = true;
            }
        }
    }

    let mut uv: Vec<[f64; 2]> = (0..n * n).map(|v| [step * (v / n) as f64, step * (v % n) as f64]).collect();
    let grid = |i: i64, j: i64| wrap(i) * n + wrap(j);
    let mut tris = Vec::new();
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            if removed[grid(i, j)] {
                continue;
            }
            let (a, b, c, d) = (grid(i, j), grid(i + 1, j), grid(i + 1, j + 1), grid(i, j + 1));
            let anti = match split {
                QuadSplit::Uniform => false,
                QuadSplit::TowardCorners { period } => {
                    let local = |k: i64| (2 * k.rem_euclid(period as i64) + 1 - period as i64) as f64;
                    local(i) * local(j) < 0.0
                }
            };
            if anti {
                tris.push([a, b, d]);
                tris.push([b, c, d]);
            } else {
                tris.push([a, b, c]);
                tris.push([a, c, d]);
            }
        }
    }

    let mut all_rings = Vec::new();
    let mut centers = Vec::new();
    for hole in holes {
        let (ci, cj) = (hole.center.0 as i64, hole.center.1 as i64);
        let c = [step * ci as f64, step * cj as f64];
        let mut rings: Vec<Vec<usize>> = Vec::new();
        for &s in &hole.scales {
            let base = uv.len();
            uv.extend(hole.inner.iter().map(|q| [c[0] + s * q[0], c[1] + s * q[1]]));
            rings.push((base..base + RING).collect());
        }
        let last = *hole.scales.last().unwrap();
        let boundary: Vec<usize> = (0..RING)
            .map(|k| {
                let (di, dj) = block_boundary_offset(k);
                grid(ci + di, cj + dj)
            })
            .collect();
        for j in 1..hole.blend_rings {
            let w = j as f64 / hole.blend_rings as f64;
            let base = uv.len();
            uv.extend((0..RING).map(|k| {
                let (di, dj) = block_boundary_offset(k);
                let q = hole.inner[k];
                [
                    c[0] + (1.0 - w) * last * q[0] + w * step * di as f64,
                    c[1] + (1.0 - w) * last * q[1] + w * step * dj as f64,
                ]
            }));
            rings.push((base..base + RING).collect());
        }
        rings.push(boundary);
        for pair in rings.windows(2) {
            let (inner, outer) = (&pair[0], &pair[1]);
            for k in 0..RING {
                let k1 = (k + 1) % RING;
                tris.push([inner[k], inner[k1], outer[k1]]);
                tris.push([inner[k], outer[k1], outer[k]]);
            }
        }
        let center_vertex = if hole.filled {
            let v = uv.len();
            uv.push(c);
            for k in 0..RING {
                tris.push([v, rings[0][k], rings[0][(k + 1) % RING]]);
            }
            Some(v)
        } else {
            None
        };
        all_rings.push(rings);
        centers.push(center_vertex);
    }

    // Drop grid vertices swallowed by blocks and renumber.
    let mut used = vec![false; uv.len()];
    for t in &tris {
        for &i in t {
            used[i] = true;
        }
    }
    let mut remap = vec![usize::MAX; uv.len()];
    let mut compact = Vec::new();
    for (i, q) in uv.iter().enumerate() {
        if used[i] {
            remap[i] = compact.len();
            compact.push([q[0].rem_euclid(TAU), q[1].rem_euclid(TAU)]);
        }
    }
    let tris = tris.iter().map(|t| [remap[t[0]], remap[t[1]], remap[t[2]]]).collect();
    let rings = all_rings
        .into_iter()
        .map(|rs| rs.into_iter().map(|r| r.into_iter().map(|i| remap[i]).collect()).collect())
        .collect();
    let centers = centers.into_iter().map(|c| c.map(|i| remap[i])).collect();
    let mesh = MeshSurface::from_chart(Chart::ProductTorus { beta }, Ambient::RoundS3, compact, tris)?;
    Ok(CollaredTorus { mesh, rings, centers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn clifford_area_and_topology() {
        let m = clifford_torus(64).unwrap();
        assert_eq!(m.n_vertices(), 4096);
        assert!((m.area() / (2.0 * PI * PI) - 1.0).abs() < 1e-12);
        assert_eq!(m.euler_characteristic(), 0);
    }

    #[test]
    fn product_torus_area() {
        for t in [0.1f64, 0.25, 0.4] {
            let m = torus_grid(t.sqrt().acos(), 32, 32).unwrap();
            let exact = 4.0 * PI * PI * (t * (1.0 - t)).sqrt();
            assert!((m.area() / exact - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn icosphere_area_and_topology() {
        let s = icosphere(3).unwrap();
        assert_eq!(s.euler_characteristic(), 2);
        assert!((s.area() / (4.0 * PI) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn catenoid_patch_is_exact() {
        let (c, s) = (0.5, 0.4);
        let m = catenoid_patch(c, s, 20, 32).unwrap();
        let exact = PI * c * (2.0 * s + c * (2.0 * s / c).sinh());
        assert!((m.area() / exact - 1.0).abs() < 1e-9);
    }

    #[test]
    fn collared_torus_topology_and_area() {
        let radii: Vec<f64> = (0..12).map(|j| 0.01 * 1.3f64.powi(j)).collect();
        let holes = [
            HoleCollar::circle((16, 16), &radii, 4, false),
            HoleCollar::circle((48, 48), &radii, 4, true),
        ];
        let ct = collared_torus(FRAC_PI_4, 64, &holes).unwrap();
        // One hole punched, one filled: a torus minus a disk.
        assert_eq!(ct.mesh.euler_characteristic(), -1);
        // Parameter-space polygon of the hole, scaled by the flat metric ½(du²+dv²).
        let rho = 0.01;
        let polygon = 0.5 * RING as f64 * rho * rho * (TAU / RING as f64).sin();
        let expected = 2.0 * PI * PI - 0.5 * polygon;
        assert!((ct.mesh.area() - expected).abs() < 1e-10, "{} vs {expected}", ct.mesh.area());
        assert_eq!(ct.rings[0].len(), 12 + 3 + 1);
    }
}
