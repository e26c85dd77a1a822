//! Position-only triangle sets: welding, topology and symmetry checks.

use std::collections::{HashMap, HashSet};

use super::V4;

#[derive(Debug, Clone, Default)]
pub struct TriangleSoup {
    pub vertices: Vec<V4>,
    pub triangles: Vec<[usize; 3]>,
}

/// Groups points closer than `tol` (in the max norm), sweeping along the
/// first coordinate. Returns a representative index for every point.
fn cluster(points: &[V4], tol: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)));
    let mut rep: Vec<usize> = (0..points.len()).collect();
    for (pos, &i) in order.iter().enumerate() {
        if rep[i] != i {
            continue;
        }
        for &j in &order[pos + 1..] {
            if points[j][0] - points[i][0] > tol {
                break;
            }
            if rep[j] == j && (points[j] - points[i]).amax() <= tol {
                rep[j] = i;
            }
        }
    }
    rep
}

impl TriangleSoup {
    pub fn append(&mut self, vertices: &[V4], triangles: &[[usize; 3]]) {
        let off = self.vertices.len();
        self.vertices.extend_from_slice(vertices);
        self.triangles.extend(triangles.iter().map(|t| [t[0] + off, t[1] + off, t[2] + off]));
    }

    /// Merges vertices within `tol` and drops unused ones.
    pub fn welded(&self, tol: f64) -> TriangleSoup {
        let rep = cluster(&self.vertices, tol);
        let mut new_index = HashMap::new();
        let mut vertices = Vec::new();
        for (i, &r) in rep.iter().enumerate() {
            if r == i {
                new_index.insert(i, vertices.len());
                vertices.push(self.vertices[i]);
            }
        }
        let triangles = self
            .triangles
            .iter()
            .map(|t| [new_index[&rep[t[0]]], new_index[&rep[t[1]]], new_index[&rep[t[2]]]])
            .filter(|t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2])
            .collect();
        TriangleSoup { vertices, triangles }
    }

    pub fn euler_characteristic(&self) -> i64 {
        let used: HashSet<usize> = self.triangles.iter().flatten().copied().collect();
        let mut edges = HashSet::new();
        for t in &self.triangles {
            for c in 0..3 {
                let (a, b) = (t[c], t[(c + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        used.len() as i64 - edges.len() as i64 + self.triangles.len() as i64
    }

    /// Edges used by other than two triangles.
    pub fn non_manifold_edges(&self) -> usize {
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for c in 0..3 {
                let (a, b) = (t[c], t[(c + 1) % 3]);
                *edges.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        edges.values().filter(|&&c| c != 2).count()
    }

    pub fn centroids(&self) -> Vec<V4> {
        self.triangles
            .iter()
            .map(|t| (self.vertices[t[0]] + self.vertices[t[1]] + self.vertices[t[2]]) / 3.0)
            .collect()
    }

    /// Whether `g` permutes the triangles, matched through their centroids
    /// within `tol`.
    pub fn invariant_under(&self, g: impl Fn(&V4) -> V4, tol: f64) -> bool {
        let c = self.centroids();
        let gc: Vec<V4> = c.iter().map(&g).collect();
        let n = c.len();
        let mut all = c.clone();
        all.extend_from_slice(&gc);
        let rep = cluster(&all, tol);
        // Each class must contain equally many originals and images.
        let mut balance: HashMap<usize, i64> = HashMap::new();
        for (i, &r) in rep.iter().enumerate() {
            *balance.entry(r).or_insert(0) += if i < n { 1 } else { -1 };
        }
        balance.values().all(|&b| b == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> TriangleSoup {
        let mut s = TriangleSoup::default();
        let v = [V4::new(0.0, 0.0, 0.0, 0.0), V4::new(1.0, 0.0, 0.0, 0.0), V4::new(1.0, 1.0, 0.0, 0.0)];
        s.append(&v, &[[0, 1, 2]]);
        let w = [V4::new(0.0, 0.0, 0.0, 0.0), V4::new(1.0, 1.0, 1e-12, 0.0), V4::new(0.0, 1.0, 0.0, 0.0)];
        s.append(&w, &[[0, 1, 2]]);
        s
    }

    #[test]
    fn welding_merges_coincident_vertices() {
        let w = square().welded(1e-9);
        assert_eq!(w.vertices.len(), 4);
        assert_eq!(w.euler_characteristic(), 1);
    }

    #[test]
    fn symmetry_detection() {
        let w = square().welded(1e-9);
        // Reflection across the diagonal x = y swaps the two triangles.
        assert!(w.invariant_under(|p| V4::new(p[1], p[0], p[2], p[3]), 1e-9));
        assert!(!w.invariant_under(|p| V4::new(-p[0], p[1], p[2], p[3]), 1e-9));
    }
}
