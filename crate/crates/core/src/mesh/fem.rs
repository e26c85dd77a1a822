//! Piecewise-linear finite elements on a mesh.

use nalgebra::{Matrix2, Vector2};

use super::MeshSurface;
use crate::sparse::{Csr, TripletBuilder};

/// Gradients of the barycentric hat functions in reference coordinates.
const D: [Vector2<f64>; 3] = [Vector2::new(-1.0, -1.0), Vector2::new(1.0, 0.0), Vector2::new(0.0, 1.0)];

#[derive(Debug, Clone)]
pub struct FemOperators {
    pub stiffness: Csr,
    /// Consistent mass matrix.
    pub mass: Csr,
    /// Consistent mass weighted by the triangle mean of `|A|² + Ric(N,N)`.
    pub potential_mass: Csr,
    pub lumped_mass: Vec<f64>,
}

/// Element stiffness `A_T·D_iᵀ G⁻¹ D_j` with the metric at the centroid.
pub fn element_stiffness(g: &Matrix2<f64>, area: f64) -> [[f64; 3]; 3] {
    let gi = g.try_inverse().unwrap_or_else(Matrix2::zeros);
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (D[i].transpose() * gi * D[j])[(0, 0)];
        }
    }
    k
}

pub fn assemble(mesh: &MeshSurface) -> FemOperators {
    let n = mesh.n_vertices();
    let areas = mesh.triangle_areas();
    let potential: Vec<f64> = mesh.a_norm2.iter().zip(&mesh.ric_nn).map(|(a, r)| a + r).collect();
    let mut kb = TripletBuilder::new(n);
    let mut mb = TripletBuilder::new(n);
    let mut vb = TripletBuilder::new(n);
    let mut lumped = vec![0.0; n];
    for (k, t) in mesh.triangles.iter().enumerate() {
        let area = areas[k];
        let ke = element_stiffness(&mesh.centroid_gram(k), area);
        let vbar = t.iter().map(|&i| potential[i]).sum::<f64>() / 3.0;
        for a in 0..3 {
            lumped[t[a]] += area / 3.0;
            for b in 0..3 {
                let m = area / 12.0 * if a == b { 2.0 } else { 1.0 };
                kb.add(t[a], t[b], ke[a][b]);
                mb.add(t[a], t[b], m);
                vb.add(t[a], t[b], vbar * m);
            }
        }
    }
    FemOperators { stiffness: kb.build(), mass: mb.build(), potential_mass: vb.build(), lumped_mass: lumped }
}

impl FemOperators {
    /// `∫|∇φ|² − ∫(|A|² + Ric(N,N))φ²`.
    pub fn jacobi_form(&self, phi: &[f64]) -> f64 {
        self.stiffness.quad_form(phi) - self.potential_mass.quad_form(phi)
    }

    pub fn dirichlet(&self, phi: &[f64]) -> f64 {
        self.stiffness.quad_form(phi)
    }

    pub fn l2_lumped(&self, phi: &[f64]) -> f64 {
        crate::numeric::compensated_sum(phi.iter().zip(&self.lumped_mass).map(|(p, m)| p * p * m)).sqrt()
    }
}
