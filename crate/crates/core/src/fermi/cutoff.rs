use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::geodesic::distances;
use crate::mesh::MeshSurface;
use crate::numeric::compensated_sum;

/// Where distance is measured from.
#[derive(Debug, Clone, Serialize)]
pub enum Source {
    Vertex(usize),
    /// A hole boundary whose vertices all lie at `radius` from the center.
    Ring { vertices: Vec<usize>, radius: f64 },
}

/// `1` for `r ≥ t`, `0` for `r ≤ t²`, and `(log t² − log r)/log t` between.
pub fn eta(t: f64, r: f64) -> f64 {
    if r >= t {
        1.0
    } else if r <= t * t {
        0.0
    } else {
        (2.0 * t.ln() - r.ln()) / t.ln()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CutoffField {
    pub sources: Vec<Source>,
    pub t: f64,
    pub distance: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn build_cutoff(mesh: &MeshSurface, p: usize, t: f64) -> Result<CutoffField> {
    build_cutoff_from_sources(mesh, vec![Source::Vertex(p)], t)
}

/// Cutoff about several disjoint centers; distance is to the nearest one.
pub fn build_cutoff_from_sources(mesh: &MeshSurface, sources: Vec<Source>, t: f64) -> Result<CutoffField> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("cutoff radius must lie in (0, 1), got {t}")));
    }
    let mut seeds = Vec::new();
    for s in &sources {
        match s {
            Source::Vertex(i) => {
                if *i >= mesh.n_vertices() {
                    return Err(Error::Domain(format!("vertex {i} out of range")));
                }
                seeds.push((*i, 0.0));
            }
            Source::Ring { vertices, radius } => seeds.extend(vertices.iter().map(|&i| (i, *radius))),
        }
    }
    let distance = distances(mesh, &seeds);
    check_disks(mesh, &sources, &distance, t)?;
    let values = distance.iter().map(|&r| eta(t, r)).collect();
    Ok(CutoffField { sources, t, distance, values })
}

/// Each ball must be a disk (or an annulus around a hole) away from the
/// mesh boundary, and the balls must be disjoint.
fn check_disks(mesh: &MeshSurface, sources: &[Source], d: &[f64], t: f64) -> Result<()> {
    let too_large = |limit: f64| Error::RadiusTooLarge { radius: t, limit };
    let mut ring_vertex = vec![false; mesh.n_vertices()];
    for s in sources {
        if let Source::Ring { vertices, .. } = s {
            for &i in vertices {
                ring_vertex[i] = true;
            }
        }
    }
    let boundary = mesh.boundary_vertices();
    let nearest_boundary = (0..d.len())
        .filter(|&i| boundary[i] && !ring_vertex[i])
        .map(|i| d[i])
        .fold(f64::INFINITY, f64::min);
    if nearest_boundary <= t {
        return Err(too_large(nearest_boundary));
    }
    let region: Vec<[usize; 3]> =
        mesh.triangles.iter().filter(|tri| tri.iter().any(|&i| d[i] < t)).copied().collect();
    let sub = crate::mesh::TriangleSoup { vertices: mesh.vertices.clone(), triangles: region.clone() };
    let expected_chi = sources.iter().filter(|s| matches!(s, Source::Vertex(_))).count() as i64;
    // Union-find over shared vertices counts the components.
    let mut parent: Vec<usize> = (0..mesh.n_vertices()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for tri in &region {
        let a = find(&mut parent, tri[0]);
        for &v in &tri[1..] {
            let b = find(&mut parent, v);
            parent[b] = a;
        }
    }
    let mut roots: Vec<usize> = region.iter().map(|tri| find(&mut parent, tri[0])).collect();
    roots.sort_unstable();
    roots.dedup();
    if sub.euler_characteristic() != expected_chi || roots.len() != sources.len() {
        let limit = d.iter().filter(|v| v.is_finite()).fold(0.0f64, |a, &b| a.max(b));
        return Err(too_large(limit));
    }
    Ok(())
}

/// `∫ g(λ)·μ(λ) dλ` over `[lo, hi]` for `g = 1/λ²`, where `μ` is the
/// level-set density of a linear function on a triangle: a hat from `d0`
/// to `d2` peaking at `d1` with total mass `area`.
fn inverse_square_against_hat(d: [f64; 3], area: f64, lo: f64, hi: f64) -> f64 {
    let mut s = d;
    s.sort_by(f64::total_cmp);
    let [d0, d1, d2] = s;
    if d2 <= d0 {
        return 0.0;
    }
    let peak = 2.0 * area / (d2 - d0);
    let seg = |a: f64, b: f64, m0: f64, m1: f64| -> f64 {
        if b <= a {
            return 0.0;
        }
        let (x0, x1) = (a.max(lo), b.min(hi));
        if x1 <= x0 {
            return 0.0;
        }
        let slope = (m1 - m0) / (b - a);
        let c = m0 - slope * a;
        // ∫ (slope·λ + c)/λ² dλ
        slope * (x1.ln() - x0.ln()) + c * (1.0 / x0 - 1.0 / x1)
    };
    seg(d0, d1, 0.0, peak) + seg(d1, d2, peak, 0.0)
}

/// Dirichlet energy of `η_t ∘ r_h` with `r_h` the piecewise-linear distance,
/// integrated in closed form on each triangle.
pub fn cutoff_energy(mesh: &MeshSurface, c: &CutoffField) -> f64 {
    let t = c.t;
    let l2 = t.ln().powi(2);
    let areas = mesh.triangle_areas();
    compensated_sum(mesh.triangles.iter().enumerate().map(|(k, tri)| {
        let d = [c.distance[tri[0]], c.distance[tri[1]], c.distance[tri[2]]];
        let lo = d.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if hi <= t * t || lo >= t {
            return 0.0;
        }
        let gi = mesh.centroid_gram(k).try_inverse().unwrap_or_else(nalgebra::Matrix2::zeros);
        let dv = nalgebra::Vector2::new(d[1] - d[0], d[2] - d[0]);
        let grad2 = (dv.transpose() * gi * dv)[(0, 0)];
        grad2 / l2 * inverse_square_against_hat(d, areas[k], t * t, t)
    }))
}

/// Length of the level set `{r_h = λ}`.
pub fn perimeter(mesh: &MeshSurface, distance: &[f64], lambda: f64) -> f64 {
    compensated_sum(mesh.triangles.iter().enumerate().map(|(k, tri)| {
        let d = [distance[tri[0]], distance[tri[1]], distance[tri[2]]];
        // Reference coordinates of the corners.
        let corners = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let mut pts: Vec<[f64; 2]> = Vec::with_capacity(2);
        for e in 0..3 {
            let (a, b) = (e, (e + 1) % 3);
            if (d[a] < lambda) != (d[b] < lambda) {
                let u = (lambda - d[a]) / (d[b] - d[a]);
                pts.push([
                    corners[a][0] + u * (corners[b][0] - corners[a][0]),
                    corners[a][1] + u * (corners[b][1] - corners[a][1]),
                ]);
            }
        }
        if pts.len() != 2 {
            return 0.0;
        }
        let g = mesh.centroid_gram(k);
        let v = nalgebra::Vector2::new(pts[1][0] - pts[0][0], pts[1][1] - pts[0][1]);
        (v.transpose() * g * v)[(0, 0)].max(0.0).sqrt()
    }))
}

/// `D = 2·max ℓ(λ)/λ` over `samples` log-spaced radii in `[t², t]`.
pub fn perimeter_constant(mesh: &MeshSurface, c: &CutoffField, samples: usize) -> f64 {
    let (a, b) = ((c.t * c.t).ln(), c.t.ln());
    (0..samples)
        .map(|k| {
            // Stay strictly inside so no level set passes through the seeds.
            let lam = (a + (b - a) * (k as f64 + 0.5) / samples as f64).exp();
            perimeter(mesh, &c.distance, lam) / lam
        })
        .fold(0.0, f64::max)
        * 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build::{polar_disk, torus_grid};
    use std::f64::consts::PI;

    #[test]
    fn eta_cases() {
        let t = 0.1f64;
        assert_eq!(eta(t, 0.5), 1.0);
        assert_eq!(eta(t, t), 1.0);
        assert_eq!(eta(t, t * t), 0.0);
        assert!((eta(t, t.powf(1.5)) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn flat_disk_energy_matches_annulus_integral() {
        let radii: Vec<f64> = (0..=80).map(|k| 10f64.powf(-8.0 + 8.0 * k as f64 / 80.0)).collect();
        let m = polar_disk(1024, &radii).unwrap();
        let c = build_cutoff(&m, 0, 0.1).unwrap();
        let e = cutoff_energy(&m, &c);
        let exact = 2.0 * PI / 10f64.ln();
        assert!((e / exact - 1.0).abs() < 5e-6, "{e} vs {exact}");
        let d = perimeter_constant(&m, &c, 50);
        assert!((d - 4.0 * PI).abs() < 1e-3);
    }

    #[test]
    fn radius_too_large_on_small_disk() {
        let m = polar_disk(32, &[0.1, 0.2, 0.3]).unwrap();
        assert!(matches!(build_cutoff(&m, 0, 0.5), Err(Error::RadiusTooLarge { .. })));
    }

    #[test]
    fn ball_wrapping_the_torus_is_not_a_disk() {
        // The short circle has length 2π·sin(0.1) < 0.63.
        let m = torus_grid(0.1, 64, 16).unwrap();
        assert!(matches!(build_cutoff(&m, 0, 0.5), Err(Error::RadiusTooLarge { .. })));
        assert!(build_cutoff(&m, 0, 0.2).is_ok());
    }
}
