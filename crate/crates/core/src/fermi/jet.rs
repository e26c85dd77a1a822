use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::{CurvatureSource, MeshSurface};

/// `g_z = g0 − 2zA + z²T` on one triangle, in its reference basis.
#[derive(Debug, Clone, Copy)]
pub struct TriangleJet {
    pub g0: Matrix2<f64>,
    pub a: Matrix2<f64>,
    pub t: Matrix2<f64>,
}

impl TriangleJet {
    pub fn shape(&self) -> Matrix2<f64> {
        self.g0.try_inverse().unwrap_or_else(Matrix2::zeros) * self.a
    }

    /// `tr(g⁻¹A)`, the mean curvature.
    pub fn mean_curvature(&self) -> f64 {
        self.shape().trace()
    }

    pub fn a_norm2(&self) -> f64 {
        let s = self.shape();
        (s * s).trace()
    }
}

#[derive(Debug, Clone)]
pub struct MetricJet {
    pub triangles: Vec<TriangleJet>,
    pub kappa: f64,
    pub source: CurvatureSource,
}

impl MetricJet {
    pub fn minimality_residual(&self) -> f64 {
        self.triangles.iter().map(|j| j.mean_curvature().abs()).fold(0.0, f64::max)
    }

    pub fn ric_nn(&self) -> f64 {
        2.0 * self.kappa
    }
}

fn sym(m: Matrix2<f64>) -> Matrix2<f64> {
    0.5 * (m + m.transpose())
}

pub fn metric_jet(mesh: &MeshSurface) -> MetricJet {
    let kappa = mesh.ambient.kappa();
    let triangles = (0..mesh.triangles.len())
        .map(|k| {
            let (g0, a) = if mesh.curvature_source == CurvatureSource::Analytic {
                let f = mesh.tri_frame(k, 1.0 / 3.0, 1.0 / 3.0);
                let g0 = Matrix2::new(f.ps.dot(&f.ps), f.ps.dot(&f.pt), f.pt.dot(&f.ps), f.pt.dot(&f.pt));
                let a = -Matrix2::new(f.ns.dot(&f.ps), f.ns.dot(&f.pt), f.nt.dot(&f.ps), f.nt.dot(&f.pt));
                (g0, sym(a))
            } else {
                mesh.fd_second_form(k)
            };
            let gi = g0.try_inverse().unwrap_or_else(Matrix2::zeros);
            TriangleJet { g0, a, t: sym(a * gi * a) - kappa * g0 }
        })
        .collect();
    MetricJet { triangles, kappa, source: mesh.curvature_source }
}

/// Coefficients of `det(g + εX + ε²Y) = Σ det[k]·εᵏ + O(ε³)` and
/// `(g + εX + ε²Y)⁻¹ = Σ inv[k]·εᵏ + O(ε³)`.
#[derive(Debug, Clone, Copy)]
pub struct Expansion {
    pub det: [f64; 3],
    pub inv: [Matrix2<f64>; 3],
}

fn tr2(m: &Matrix2<f64>) -> f64 {
    0.5 * (m.trace().powi(2) - (m * m).trace())
}

pub fn expand(g: &Matrix2<f64>, x: &Matrix2<f64>, y: &Matrix2<f64>) -> Result<Expansion> {
    let gi = g.try_inverse().ok_or(Error::NotPositiveDefinite)?;
    let d = g.determinant();
    let gx = gi * x;
    Ok(Expansion {
        det: [d, d * gx.trace(), d * ((gi * y).trace() + tr2(&gx))],
        inv: [gi, -gi * x * gi, gx * gx * gi - gi * y * gi],
    })
}

fn positive_definite(m: &Matrix2<f64>) -> bool {
    m[(0, 0)] > 0.0 && m.determinant() > 0.0
}

/// Worst deviations from the identities that hold on a minimal base.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MinimalIdentities {
    /// `max |tr(g⁻¹A)|`.
    pub trace_a: f64,
    /// `max |tr(g⁻¹T) − (|A|² − Ric(N,N))|`.
    pub trace_t: f64,
    /// `max |tr₂(g⁻¹A) + |A|²/2|`.
    pub tr2_a: f64,
    /// `max |c₂ + |A|² + Ric(N,N)|` for the normalized second-order
    /// determinant coefficient `c₂`.
    pub det_order2: f64,
    /// Area-weighted mean of `c₂`.
    pub mean_det_order2: f64,
}

#[derive(Debug, Clone)]
pub struct JetExpansion {
    pub per_triangle: Vec<Expansion>,
    pub identities: MinimalIdentities,
}

/// Expansion of `g_z` with `X = −2A`, `Y = T`, after checking that
/// `g_eps` is positive definite on every triangle.
pub fn det_and_inverse_expansion(jet: &MetricJet, eps: f64) -> Result<JetExpansion> {
    let ric = jet.ric_nn();
    let mut per_triangle = Vec::with_capacity(jet.triangles.len());
    let mut id = MinimalIdentities { trace_a: 0.0, trace_t: 0.0, tr2_a: 0.0, det_order2: 0.0, mean_det_order2: 0.0 };
    let (mut wsum, mut csum) = (0.0, 0.0);
    for j in &jet.triangles {
        let x = -2.0 * j.a;
        if !positive_definite(&(j.g0 + eps * x + eps * eps * j.t)) {
            return Err(Error::NotPositiveDefinite);
        }
        let e = expand(&j.g0, &x, &j.t)?;
        let gi = e.inv[0];
        let a2 = j.a_norm2();
        let c2 = e.det[2] / e.det[0];
        id.trace_a = id.trace_a.max((gi * j.a).trace().abs());
        id.trace_t = id.trace_t.max(((gi * j.t).trace() - (a2 - ric)).abs());
        id.tr2_a = id.tr2_a.max((tr2(&(gi * j.a)) + 0.5 * a2).abs());
        id.det_order2 = id.det_order2.max((c2 + a2 + ric).abs());
        let w = e.det[0].sqrt();
        wsum += w;
        csum += w * c2;
        per_triangle.push(e);
    }
    id.mean_det_order2 = csum / wsum;
    Ok(JetExpansion { per_triangle, identities: id })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build::{catenoid_patch, clifford_torus, polar_disk};

    #[test]
    fn identity_metric_expansion() {
        let e = expand(&Matrix2::identity(), &Matrix2::zeros(), &Matrix2::zeros()).unwrap();
        assert_eq!(e.det, [1.0, 0.0, 0.0]);
        assert_eq!(e.inv[0], Matrix2::identity());
        assert_eq!(e.inv[1], Matrix2::zeros());
    }

    #[test]
    fn clifford_jet_values() {
        let m = clifford_torus(32).unwrap();
        let jet = metric_jet(&m);
        for j in &jet.triangles {
            assert!((j.a_norm2() - 2.0).abs() < 1e-12);
        }
        let ex = det_and_inverse_expansion(&jet, 1e-3).unwrap();
        assert!(ex.identities.trace_a < 1e-12);
        assert!((ex.identities.mean_det_order2 + 4.0).abs() < 1e-12);
        assert!(ex.identities.det_order2 < 1e-12);
        assert!(ex.identities.tr2_a < 1e-12);
    }

    #[test]
    fn clifford_jet_from_vertex_normals() {
        let m = clifford_torus(64).unwrap().with_estimated_curvature();
        let jet = metric_jet(&m);
        assert!(jet.minimality_residual() < 1e-10);
        for j in &jet.triangles {
            assert!((j.a_norm2() - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn flat_and_catenoid_jets() {
        let d = polar_disk(16, &[0.5, 1.0]).unwrap();
        let jet = metric_jet(&d);
        assert!(jet.triangles.iter().all(|j| j.a.norm() == 0.0 && j.t.norm() == 0.0));
        let c = catenoid_patch(0.5, 0.4, 20, 32).unwrap();
        assert!(metric_jet(&c).minimality_residual() <= 1e-3);
        // Estimated curvature is lower trust but converges.
        let coarse = metric_jet(&c.with_estimated_curvature()).minimality_residual();
        let fine = metric_jet(&catenoid_patch(0.5, 0.4, 40, 64).unwrap().with_estimated_curvature())
            .minimality_residual();
        assert!(fine < 0.6 * coarse);
    }

    #[test]
    fn indefinite_perturbation_rejected() {
        let m = clifford_torus(8).unwrap();
        assert!(matches!(det_and_inverse_expansion(&metric_jet(&m), 2.0), Err(Error::NotPositiveDefinite)));
    }
}
