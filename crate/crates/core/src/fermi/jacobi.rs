use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::fem::{assemble, FemOperators};
use crate::mesh::MeshSurface;
use crate::sparse::{pcg, Csr};

#[derive(Debug, Clone, Copy)]
pub struct JacobiConfig {
    /// Stop when the Rayleigh quotient changes by less than this.
    pub tol: f64,
    pub max_iter: usize,
    pub solve_tol: f64,
    pub solve_max_iter: usize,
}

impl Default for JacobiConfig {
    fn default() -> Self {
        JacobiConfig { tol: 1e-9, max_iter: 500, solve_tol: 1e-12, solve_max_iter: 20_000 }
    }
}

/// Lowest eigenpair of `−L = −Δ − |A|² − Ric(N,N)` against the lumped mass.
#[derive(Debug, Clone, Serialize)]
pub struct JacobiData {
    #[serde(skip)]
    pub operators: FemOperators,
    pub potential: Vec<f64>,
    pub eigenvalue: f64,
    pub eigenfunction: Vec<f64>,
    pub shift: f64,
    pub iterations: usize,
}

impl JacobiData {
    pub fn stiffness(&self) -> &Csr {
        &self.operators.stiffness
    }

    /// `min φ · max φ`, positive when the eigenfunction has a fixed sign.
    pub fn sign_product(&self) -> f64 {
        let lo = self.eigenfunction.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.eigenfunction.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        lo * hi
    }
}

pub fn jacobi_lowest(mesh: &MeshSurface) -> Result<JacobiData> {
    jacobi_lowest_with(mesh, &JacobiConfig::default())
}

/// Shifted inverse iteration. The stiffness is positive semidefinite, so a
/// Gershgorin bound on the potential block alone lies below the spectrum.
pub fn jacobi_lowest_with(mesh: &MeshSurface, cfg: &JacobiConfig) -> Result<JacobiData> {
    let ops = assemble(mesh);
    let n = mesh.n_vertices();
    let ml = &ops.lumped_mass;
    let v = &ops.potential_mass;
    let bound = (0..n)
        .map(|i| (v.row_ptr[i]..v.row_ptr[i + 1]).map(|k| v.vals[k].abs()).sum::<f64>() / ml[i])
        .fold(0.0, f64::max);
    let shift = -bound - 1.0;
    let s = ops.stiffness.combine(1.0, v, -1.0);
    let shifted = s.add_diagonal(-shift, ml);

    let rayleigh = |x: &[f64]| {
        let den: f64 = x.iter().zip(ml).map(|(a, m)| a * a * m).sum();
        s.quad_form(x) / den
    };
    // A smooth non-constant start that still overlaps the ground state.
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * (i as f64 * 0.7).sin()).collect();
    let mut lambda = rayleigh(&x);
    for it in 1..=cfg.max_iter {
        let rhs: Vec<f64> = x.iter().zip(ml).map(|(a, m)| a * m).collect();
        let mut y = x.clone();
        pcg(&shifted, &rhs, &mut y, cfg.solve_tol, cfg.solve_max_iter)?;
        normalize(&mut y, ml);
        let next = rayleigh(&y);
        x = y;
        let done = (next - lambda).abs() <= cfg.tol * next.abs().max(1.0);
        lambda = next;
        if done {
            let potential = mesh.a_norm2.iter().zip(&mesh.ric_nn).map(|(a, r)| a + r).collect();
            return Ok(JacobiData {
                operators: ops,
                potential,
                eigenvalue: lambda,
                eigenfunction: x,
                shift,
                iterations: it,
            });
        }
    }
    Err(Error::SolverFailure(format!("inverse iteration did not settle in {} steps", cfg.max_iter)))
}

fn normalize(x: &mut [f64], ml: &[f64]) {
    let norm = x.iter().zip(ml).map(|(a, m)| a * a * m).sum::<f64>().sqrt();
    let sign = if x.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
    for a in x.iter_mut() {
        *a *= sign / norm;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build::{clifford_torus, icosphere};

    #[test]
    fn clifford_lowest_is_minus_four() {
        let m = clifford_torus(32).unwrap();
        let j = jacobi_lowest(&m).unwrap();
        assert!((j.eigenvalue + 4.0).abs() < 1e-8, "{}", j.eigenvalue);
        assert!(j.sign_product() > 0.0);
        let spread = j.eigenfunction.iter().cloned().fold(0.0f64, f64::max)
            - j.eigenfunction.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-4);
        assert!((j.operators.l2_lumped(&j.eigenfunction) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_without_potential_is_zero() {
        let mut m = icosphere(3).unwrap();
        m.a_norm2.iter_mut().for_each(|a| *a = 0.0);
        m.ric_nn.iter_mut().for_each(|a| *a = 0.0);
        let j = jacobi_lowest(&m).unwrap();
        assert!(j.eigenvalue.abs() < 1e-8, "{}", j.eigenvalue);
        assert!(j.sign_product() > 0.0);
    }
}
