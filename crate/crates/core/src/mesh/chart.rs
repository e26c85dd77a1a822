//! Analytic parametrizations used to measure meshes exactly.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

pub type V4 = Vector4<f64>;

/// Point, normal and their first derivatives at one parameter value.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub p: V4,
    pub pu: V4,
    pub pv: V4,
    pub n: V4,
    pub nu: V4,
    pub nv: V4,
}

impl Frame {
    fn transform(&self, m: &Matrix4<f64>) -> Frame {
        Frame { p: m * self.p, pu: m * self.pu, pv: m * self.pv, n: m * self.n, nu: m * self.nu, nv: m * self.nv }
    }
}

/// Multiplication by `i` on `C² ≅ R⁴`.
pub fn complex_j(x: &V4) -> V4 {
    V4::new(-x[1], x[0], -x[3], x[2])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Chart {
    /// `(u, v) ↦ (u, v, 0)` in R³.
    Plane,
    /// `(s, θ) ↦ (c·cosh(s/c)·cos θ, c·cosh(s/c)·sin θ, s)` in R³.
    Catenoid { c: f64 },
    /// `(u, v) ↦ (cos β·e^{iu}, sin β·e^{iv})` in S³.
    ProductTorus { beta: f64 },
    /// Boundary of the geodesic tube of radius `eps` about the great-circle
    /// arc `cos β·a + sin β·b`, with `(β, ψ)` as parameters. `a` and `b` are
    /// orthonormal and `J a`, `J b` span the normal bundle.
    Tube { a: [f64; 4], b: [f64; 4], eps: f64 },
    /// Image of `base` under an ambient isometry.
    Transformed { base: Box<Chart>, matrix: [[f64; 4]; 4] },
}

impl Chart {
    pub fn transformed(base: Chart, m: &Matrix4<f64>) -> Chart {
        let mut rows = [[0.0; 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = m[(i, j)];
            }
        }
        match base {
            Chart::Transformed { base, matrix } => {
                let inner = Matrix4::from_fn(|i, j| matrix[i][j]);
                Chart::transformed(*base, &(m * inner))
            }
            other => Chart::Transformed { base: Box::new(other), matrix: rows },
        }
    }

    /// Parameter periods, used to unwrap triangles that straddle a seam.
    pub fn periods(&self) -> [Option<f64>; 2] {
        use std::f64::consts::TAU;
        match self {
            Chart::Plane => [None, None],
            Chart::Catenoid { .. } => [None, Some(TAU)],
            Chart::ProductTorus { .. } => [Some(TAU), Some(TAU)],
            Chart::Tube { .. } => [None, Some(TAU)],
            Chart::Transformed { base, .. } => base.periods(),
        }
    }

    pub fn frame(&self, u: f64, v: f64) -> Frame {
        match self {
            Chart::Plane => {
                let z = V4::zeros();
                Frame { p: V4::new(u, v, 0.0, 0.0), pu: V4::x(), pv: V4::y(), n: V4::z(), nu: z, nv: z }
            }
            Chart::Catenoid { c } => {
                let (ch, sh) = ((u / c).cosh(), (u / c).sinh());
                let (ct, st) = (v.cos(), v.sin());
                let p = V4::new(c * ch * ct, c * ch * st, u, 0.0);
                let pu = V4::new(sh * ct, sh * st, 1.0, 0.0);
                let pv = V4::new(-c * ch * st, c * ch * ct, 0.0, 0.0);
                let n = V4::new(ct / ch, st / ch, -sh / ch, 0.0);
                let sech2 = 1.0 / (ch * ch);
                let nu = V4::new(-ct * sh * sech2 / c, -st * sh * sech2 / c, -sech2 / c, 0.0);
                let nv = V4::new(-st / ch, ct / ch, 0.0, 0.0);
                Frame { p, pu, pv, n, nu, nv }
            }
            Chart::ProductTorus { beta } => {
                let (cb, sb) = (beta.cos(), beta.sin());
                let (cu, su, cv, sv) = (u.cos(), u.sin(), v.cos(), v.sin());
                Frame {
                    p: V4::new(cb * cu, cb * su, sb * cv, sb * sv),
                    pu: V4::new(-cb * su, cb * cu, 0.0, 0.0),
                    pv: V4::new(0.0, 0.0, -sb * sv, sb * cv),
                    n: V4::new(sb * cu, sb * su, -cb * cv, -cb * sv),
                    nu: V4::new(-sb * su, sb * cu, 0.0, 0.0),
                    nv: V4::new(0.0, 0.0, cb * sv, -cb * cv),
                }
            }
            Chart::Tube { a, b, eps } => {
                let (a, b) = (V4::from(*a), V4::from(*b));
                let (e1, e2) = (complex_j(&a), complex_j(&b));
                let (cb, sb) = (u.cos(), u.sin());
                let (cp, sp) = (v.cos(), v.sin());
                let (ce, se) = (eps.cos(), eps.sin());
                let c = cb * a + sb * b;
                let dc = -sb * a + cb * b;
                let radial = cp * e1 + sp * e2;
                let dradial = -sp * e1 + cp * e2;
                Frame {
                    p: ce * c + se * radial,
                    pu: ce * dc,
                    pv: se * dradial,
                    n: -se * c + ce * radial,
                    nu: -se * dc,
                    nv: ce * dradial,
                }
            }
            Chart::Transformed { base, matrix } => {
                base.frame(u, v).transform(&Matrix4::from_fn(|i, j| matrix[i][j]))
            }
        }
    }

    /// `|A|²` of the parametrized surface.
    pub fn a_norm2(&self, u: f64, _v: f64) -> f64 {
        match self {
            Chart::Plane => 0.0,
            Chart::Catenoid { c } => 2.0 / (c * c * (u / c).cosh().powi(4)),
            Chart::ProductTorus { beta } => beta.tan().powi(2) + (1.0 / beta.tan()).powi(2),
            Chart::Tube { eps, .. } => eps.tan().powi(2) + (1.0 / eps.tan()).powi(2),
            Chart::Transformed { base, .. } => base.a_norm2(u, _v),
        }
    }

    /// Distance along the normal to the nearest focal point.
    pub fn normal_radius(&self) -> f64 {
        use std::f64::consts::FRAC_PI_2;
        match self {
            Chart::Plane => f64::INFINITY,
            Chart::Catenoid { c } => *c,
            Chart::ProductTorus { beta } => beta.min(FRAC_PI_2 - beta),
            Chart::Tube { eps, .. } => eps.min(FRAC_PI_2 - eps),
            Chart::Transformed { base, .. } => base.normal_radius(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(chart: &Chart, u: f64, v: f64) {
        let f = chart.frame(u, v);
        let d = 1e-6;
        let (up, um) = (chart.frame(u + d, v), chart.frame(u - d, v));
        let (vp, vm) = (chart.frame(u, v + d), chart.frame(u, v - d));
        assert!(((up.p - um.p) / (2.0 * d) - f.pu).norm() < 1e-8);
        assert!(((vp.p - vm.p) / (2.0 * d) - f.pv).norm() < 1e-8);
        assert!(((up.n - um.n) / (2.0 * d) - f.nu).norm() < 1e-8);
        assert!(((vp.n - vm.n) / (2.0 * d) - f.nv).norm() < 1e-8);
        assert!((f.n.norm() - 1.0).abs() < 1e-12);
        assert!(f.n.dot(&f.pu).abs() < 1e-12 && f.n.dot(&f.pv).abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let tube = Chart::Tube { a: [1.0, 0.0, 0.0, 0.0], b: [0.0, 0.0, 1.0, 0.0], eps: 0.1 };
        let charts = [
            Chart::Plane,
            Chart::Catenoid { c: 0.4 },
            Chart::ProductTorus { beta: 0.6 },
            tube.clone(),
            Chart::transformed(tube, &Matrix4::from_diagonal(&V4::new(1.0, -1.0, 1.0, 1.0))),
        ];
        for ch in &charts {
            fd_check(ch, 0.3, 1.1);
        }
    }

    #[test]
    fn sphere_charts_stay_on_sphere_with_tangent_normals() {
        let tube = Chart::Tube { a: [0.6, 0.8, 0.0, 0.0], b: [0.0, 0.0, 0.8, -0.6], eps: 0.2 };
        for ch in [Chart::ProductTorus { beta: 0.4 }, tube] {
            let f = ch.frame(0.7, 2.0);
            assert!((f.p.norm() - 1.0).abs() < 1e-14);
            assert!(f.p.dot(&f.n).abs() < 1e-14);
        }
    }
}
