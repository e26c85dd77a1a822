use serde::Serialize;

use super::jet::metric_jet;
use crate::error::{Error, Result};
use crate::mesh::fem::assemble;
use crate::mesh::MeshSurface;

/// The surface `x ↦ exp_x(h·φ(x)·N(x))` over a base mesh.
#[derive(Debug, Clone)]
pub struct NormalGraphField<'a> {
    pub base: &'a MeshSurface,
    pub phi: Vec<f64>,
    pub h: f64,
}

impl<'a> NormalGraphField<'a> {
    pub fn new(base: &'a MeshSurface, phi: Vec<f64>, h: f64) -> Result<Self> {
        if phi.len() != base.n_vertices() {
            return Err(Error::Domain(format!("field has {} values for {} vertices", phi.len(), base.n_vertices())));
        }
        Ok(Self { base, phi, h })
    }

    pub fn constant(base: &'a MeshSurface, value: f64, h: f64) -> Self {
        Self { base, phi: vec![value; base.n_vertices()], h }
    }

    fn offsets(&self) -> Result<Vec<f64>> {
        let psi: Vec<f64> = self.phi.iter().map(|p| self.h * p).collect();
        let offset = psi.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if offset >= self.base.normal_radius {
            return Err(Error::ChartOverflow { offset, radius: self.base.normal_radius });
        }
        Ok(psi)
    }
}

/// Area of the pushed surface, measured through the exact chart map.
pub fn graph_area_exact(g: &NormalGraphField) -> Result<f64> {
    Ok(g.base.pushed_area(&g.offsets()?))
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateConfig {
    /// Constant of the `h³` envelope; the expansion only asserts one exists.
    pub c_envelope: f64,
    pub minimality_tol: f64,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        Self { c_envelope: 1.0, minimality_tol: 1e-3 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphEstimate {
    pub base_area: f64,
    /// `∫|∇φ|² − ∫φ²(|A|² + Ric(N,N))`.
    pub q: f64,
    /// `|Λ| + (h²/2)·Q(φ)`.
    pub estimate: f64,
    /// `C·h³·∫(1 + |∇φ|²)`.
    pub envelope: f64,
    pub minimality_residual: f64,
}

pub fn graph_area_estimate(g: &NormalGraphField, cfg: &EstimateConfig) -> Result<GraphEstimate> {
    let residual = metric_jet(g.base).minimality_residual();
    if residual > cfg.minimality_tol {
        return Err(Error::NotMinimal { residual, tol: cfg.minimality_tol });
    }
    let ops = assemble(g.base);
    let base_area = g.base.area();
    let grad = ops.dirichlet(&g.phi);
    let q = grad - ops.potential_mass.quad_form(&g.phi);
    Ok(GraphEstimate {
        base_area,
        q,
        estimate: base_area + 0.5 * g.h * g.h * q,
        envelope: cfg.c_envelope * g.h.powi(3) * (base_area + grad),
        minimality_residual: residual,
    })
}
