//! Approximate geodesic distance: Dijkstra on edges, then one pass of
//! triangle unfolding.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Geometry, MeshSurface};

/// Metric length of the edge `i–j`.
pub fn edge_length(mesh: &MeshSurface, i: usize, j: usize) -> f64 {
    match &mesh.geometry {
        Geometry::Chart { chart, uv } => {
            let per = chart.periods();
            let (a, mut b) = (uv[i], uv[j]);
            for c in 0..2 {
                if let Some(p) = per[c] {
                    b[c] -= p * ((b[c] - a[c]) / p).round();
                }
            }
            let d = [b[0] - a[0], b[1] - a[1]];
            // Three-point Gauss rule along the parameter segment.
            let nodes = [(0.5, 4.0 / 9.0), (0.5 - 0.5 * 0.6f64.sqrt(), 5.0 / 18.0), (0.5 + 0.5 * 0.6f64.sqrt(), 5.0 / 18.0)];
            nodes
                .iter()
                .map(|&(s, w)| {
                    let f = chart.frame(a[0] + s * d[0], a[1] + s * d[1]);
                    w * (f.pu * d[0] + f.pv * d[1]).norm()
                })
                .sum()
        }
        Geometry::UnitSphere => {
            let c = (mesh.vertices[i] - mesh.vertices[j]).norm();
            2.0 * (0.5 * c).min(1.0).asin()
        }
        Geometry::Polyhedral => (mesh.vertices[i] - mesh.vertices[j]).norm(),
    }
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

pub fn adjacency(mesh: &MeshSurface) -> Vec<Vec<(usize, f64)>> {
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); mesh.n_vertices()];
    let mut edges: Vec<(usize, usize)> = mesh.edges().into_keys().collect();
    edges.sort_unstable();
    for (i, j) in edges {
        let l = edge_length(mesh, i, j);
        adj[i].push((j, l));
        adj[j].push((i, l));
    }
    adj
}

/// Distance from a set of seed vertices with given initial distances.
pub fn distances(mesh: &MeshSurface, seeds: &[(usize, f64)]) -> Vec<f64> {
    let adj = adjacency(mesh);
    let mut d = vec![f64::INFINITY; mesh.n_vertices()];
    let mut heap = BinaryHeap::new();
    for &(s, d0) in seeds {
        if d0 < d[s] {
            d[s] = d0;
            heap.push(Item(d0, s));
        }
    }
    while let Some(Item(dist, v)) = heap.pop() {
        if dist > d[v] {
            continue;
        }
        for &(w, l) in &adj[v] {
            let nd = dist + l;
            if nd < d[w] {
                d[w] = nd;
                heap.push(Item(nd, w));
            }
        }
    }
    let seeded: Vec<bool> = {
        let mut s = vec![false; d.len()];
        for &(i, _) in seeds {
            s[i] = true;
        }
        s
    };
    unfold_pass(mesh, &mut d, &seeded);
    d
}

/// Straight-line update across each triangle from the virtual source
/// consistent with two known corner distances.
fn unfold_pass(mesh: &MeshSurface, d: &mut [f64], fixed: &[bool]) {
    let mut order: Vec<usize> = (0..mesh.triangles.len()).collect();
    let key = |k: usize| mesh.triangles[k].iter().map(|&i| d[i]).fold(f64::NEG_INFINITY, f64::max);
    let keys: Vec<f64> = order.iter().map(|&k| key(k)).collect();
    order.sort_by(|&a, &b| keys[a].total_cmp(&keys[b]).then(a.cmp(&b)));
    for k in order {
        let t = mesh.triangles[k];
        for c in 0..3 {
            let (ic, ia, ib) = (t[c], t[(c + 1) % 3], t[(c + 2) % 3]);
            if fixed[ic] || !d[ia].is_finite() || !d[ib].is_finite() {
                continue;
            }
            let lab = edge_length(mesh, ia, ib);
            let lac = edge_length(mesh, ia, ic);
            let lbc = edge_length(mesh, ib, ic);
            // a at the origin, b on the positive x-axis, c above.
            let cx = (lac * lac - lbc * lbc + lab * lab) / (2.0 * lab);
            let cy = (lac * lac - cx * cx).max(0.0).sqrt();
            let sx = (d[ia] * d[ia] - d[ib] * d[ib] + lab * lab) / (2.0 * lab);
            let sy2 = d[ia] * d[ia] - sx * sx;
            if sy2 < 0.0 || cy == 0.0 {
                continue;
            }
            let sy = -sy2.sqrt();
            // The segment from the source to c must cross the edge ab.
            let u = -sy / (cy - sy);
            let x_cross = sx + u * (cx - sx);
            if !(0.0..=lab).contains(&x_cross) {
                continue;
            }
            let cand = ((cx - sx).powi(2) + (cy - sy).powi(2)).sqrt();
            if cand < d[ic] {
                d[ic] = cand;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build::{clifford_torus, polar_disk};

    #[test]
    fn polar_disk_distances_are_exact_radii() {
        let radii: Vec<f64> = (1..=20).map(|k| k as f64 * 0.05).collect();
        let m = polar_disk(64, &radii).unwrap();
        let d = distances(&m, &[(0, 0.0)]);
        for (i, v) in m.vertices.iter().enumerate() {
            assert!((d[i] - v.xyz().norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn unfolding_improves_grid_distances() {
        let m = clifford_torus(64).unwrap();
        let d = distances(&m, &[(0, 0.0)]);
        // Flat metric ½(du² + dv²): vertex (i, j) near the origin sits at
        // distance (2π/64)·sqrt((i² + j²)/2).
        let step = std::f64::consts::TAU / 64.0;
        let mut worst: f64 = 0.0;
        for i in 1..8 {
            for j in 1..8 {
                let exact = step * (((i * i + j * j) as f64) / 2.0).sqrt();
                worst = worst.max((d[i * 64 + j] - exact).abs() / exact);
            }
        }
        assert!(worst < 0.08, "relative error {worst}");
    }
}
