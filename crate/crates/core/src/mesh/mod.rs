//! Triangle meshes in R³ or the round S³ (both stored in R⁴; R³ uses `w = 0`).

pub mod build;
pub mod chart;
pub mod fem;
pub mod geodesic;
pub mod io;
mod soup;

use std::collections::HashMap;

use nalgebra::Matrix2;
use rayon::prelude::*;
use serde::Serialize;

pub use chart::{Chart, Frame, V4};
pub use soup::TriangleSoup;

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ambient {
    EuclideanR3,
    RoundS3,
}

impl Ambient {
    /// Sectional curvature.
    pub fn kappa(self) -> f64 {
        match self {
            Ambient::EuclideanR3 => 0.0,
            Ambient::RoundS3 => 1.0,
        }
    }

    /// `Ric(N, N)` for a unit normal in a 3-dimensional space form.
    pub fn ric_nn(self) -> f64 {
        2.0 * self.kappa()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurvatureSource {
    Analytic,
    /// Estimated from vertex normals; lower trust.
    FiniteDifference,
}

/// How a triangle is mapped onto the surface it approximates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Geometry {
    /// Each triangle is the chart image of its parameter triangle.
    Chart { chart: Chart, uv: Vec<[f64; 2]> },
    /// Radial projection of the flat triangle onto the unit sphere in R³.
    UnitSphere,
    /// Flat triangles.
    Polyhedral,
}

/// Tangent data in reference coordinates `(s, t)` of one triangle.
#[derive(Debug, Clone, Copy)]
pub struct TriFrame {
    pub p: V4,
    pub ps: V4,
    pub pt: V4,
    pub n: V4,
    pub ns: V4,
    pub nt: V4,
}

/// Degree-5 seven-point rule on the reference triangle; weights sum to 1.
pub const QUAD7: [(f64, f64, f64); 7] = {
    const A1: f64 = 0.059_715_871_789_770;
    const B1: f64 = 0.470_142_064_105_115;
    const A2: f64 = 0.797_426_985_353_087;
    const B2: f64 = 0.101_286_507_323_456;
    const W0: f64 = 0.225;
    const W1: f64 = 0.132_394_152_788_506;
    const W2: f64 = 0.125_939_180_544_827;
    [
        (1.0 / 3.0, 1.0 / 3.0, W0),
        (B1, B1, W1),
        (A1, B1, W1),
        (B1, A1, W1),
        (B2, B2, W2),
        (A2, B2, W2),
        (B2, A2, W2),
    ]
};

#[derive(Debug, Clone)]
pub struct MeshSurface {
    pub vertices: Vec<V4>,
    pub triangles: Vec<[usize; 3]>,
    pub ambient: Ambient,
    pub normals: Vec<V4>,
    pub a_norm2: Vec<f64>,
    pub ric_nn: Vec<f64>,
    pub geometry: Geometry,
    pub curvature_source: CurvatureSource,
    /// Largest admissible normal offset.
    pub normal_radius: f64,
}

fn area_element(a: &V4, b: &V4) -> f64 {
    (a.norm_squared() * b.norm_squared() - a.dot(b).powi(2)).max(0.0).sqrt()
}

fn unwrap(x: f64, reference: f64, period: Option<f64>) -> f64 {
    match period {
        Some(p) => x - p * ((x - reference) / p).round(),
        None => x,
    }
}

impl MeshSurface {
    pub fn from_chart(chart: Chart, ambient: Ambient, uv: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let frames: Vec<Frame> = uv.iter().map(|q| chart.frame(q[0], q[1])).collect();
        let mesh = MeshSurface {
            vertices: frames.iter().map(|f| f.p).collect(),
            normals: frames.iter().map(|f| f.n).collect(),
            a_norm2: uv.iter().map(|q| chart.a_norm2(q[0], q[1])).collect(),
            ric_nn: vec![ambient.ric_nn(); uv.len()],
            normal_radius: chart.normal_radius(),
            triangles,
            ambient,
            geometry: Geometry::Chart { chart, uv },
            curvature_source: CurvatureSource::Analytic,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Icosphere-style mesh of the unit sphere in R³; vertices are normalized.
    pub fn unit_sphere(vertices: Vec<V4>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let vertices: Vec<V4> = vertices.iter().map(|v| v / v.norm()).collect();
        let n = vertices.len();
        let mesh = MeshSurface {
            normals: vertices.clone(),
            vertices,
            triangles,
            ambient: Ambient::EuclideanR3,
            a_norm2: vec![2.0; n],
            ric_nn: vec![0.0; n],
            geometry: Geometry::UnitSphere,
            curvature_source: CurvatureSource::Analytic,
            normal_radius: 1.0,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Generic mesh: normals and curvature are estimated from the triangles.
    pub fn polyhedral(ambient: Ambient, vertices: Vec<V4>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        let mut mesh = MeshSurface {
            vertices,
            triangles,
            ambient,
            normals: vec![V4::zeros(); n],
            a_norm2: vec![0.0; n],
            ric_nn: vec![ambient.ric_nn(); n],
            geometry: Geometry::Polyhedral,
            curvature_source: CurvatureSource::FiniteDifference,
            normal_radius: f64::INFINITY,
        };
        mesh.validate()?;
        mesh.normals = mesh.estimate_normals();
        mesh.a_norm2 = mesh.estimate_a_norm2();
        let amax = mesh.a_norm2.iter().cloned().fold(0.0, f64::max);
        mesh.normal_radius = if amax > 0.0 { 1.0 / amax.sqrt() } else { f64::INFINITY };
        Ok(mesh)
    }

    /// Replaces analytic curvature with the normal-difference estimate.
    pub fn with_estimated_curvature(mut self) -> Self {
        self.a_norm2 = self.estimate_a_norm2();
        self.curvature_source = CurvatureSource::FiniteDifference;
        self
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        for (k, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&i| i >= n) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::Domain(format!("triangle {k} has invalid indices {t:?}")));
            }
        }
        if self.ambient == Ambient::RoundS3 {
            if let Some(i) = self.vertices.iter().position(|v| (v.norm_squared() - 1.0).abs() > 1e-12) {
                return Err(Error::Domain(format!("vertex {i} is not on the unit sphere")));
            }
        }
        for k in 0..self.triangles.len() {
            let f = self.tri_frame(k, 1.0 / 3.0, 1.0 / 3.0);
            if !(area_element(&f.ps, &f.pt) > 0.0) {
                return Err(Error::Domain(format!("triangle {k} has zero metric area")));
            }
        }
        Ok(())
    }

    /// Parameter coordinates of a triangle's corners, unwrapped across seams.
    pub fn tri_uv(&self, k: usize) -> Option<[[f64; 2]; 3]> {
        let Geometry::Chart { chart, uv } = &self.geometry else { return None };
        let per = chart.periods();
        let t = self.triangles[k];
        let q0 = uv[t[0]];
        let mut out = [q0; 3];
        for c in 1..3 {
            let q = uv[t[c]];
            out[c] = [unwrap(q[0], q0[0], per[0]), unwrap(q[1], q0[1], per[1])];
        }
        Some(out)
    }

    pub fn tri_frame(&self, k: usize, s: f64, t: f64) -> TriFrame {
        let [i0, i1, i2] = self.triangles[k];
        match &self.geometry {
            Geometry::Chart { chart, .. } => {
                let q = self.tri_uv(k).expect("chart geometry");
                let du = [q[1][0] - q[0][0], q[2][0] - q[0][0]];
                let dv = [q[1][1] - q[0][1], q[2][1] - q[0][1]];
                let f = chart.frame(q[0][0] + s * du[0] + t * du[1], q[0][1] + s * dv[0] + t * dv[1]);
                TriFrame {
                    p: f.p,
                    ps: f.pu * du[0] + f.pv * dv[0],
                    pt: f.pu * du[1] + f.pv * dv[1],
                    n: f.n,
                    ns: f.nu * du[0] + f.nv * dv[0],
                    nt: f.nu * du[1] + f.nv * dv[1],
                }
            }
            Geometry::UnitSphere => {
                let (x0, e1, e2) = (self.vertices[i0], self.vertices[i1] - self.vertices[i0], self.vertices[i2] - self.vertices[i0]);
                let q = x0 + s * e1 + t * e2;
                let r = q.norm();
                let p = q / r;
                let proj = |d: V4| (d - p * p.dot(&d)) / r;
                let (ps, pt) = (proj(e1), proj(e2));
                TriFrame { p, ps, pt, n: p, ns: ps, nt: pt }
            }
            Geometry::Polyhedral => {
                let (x0, e1, e2) = (self.vertices[i0], self.vertices[i1] - self.vertices[i0], self.vertices[i2] - self.vertices[i0]);
                let (n0, n1, n2) = (self.normals[i0], self.normals[i1], self.normals[i2]);
                TriFrame { p: x0 + s * e1 + t * e2, ps: e1, pt: e2, n: n0 + s * (n1 - n0) + t * (n2 - n0), ns: n1 - n0, nt: n2 - n0 }
            }
        }
    }

    /// Gram matrix of the tangent vectors `(∂s, ∂t)` at the centroid.
    pub fn centroid_gram(&self, k: usize) -> Matrix2<f64> {
        let f = self.tri_frame(k, 1.0 / 3.0, 1.0 / 3.0);
        Matrix2::new(f.ps.dot(&f.ps), f.ps.dot(&f.pt), f.pt.dot(&f.ps), f.pt.dot(&f.pt))
    }

    /// Metric area of each triangle after pushing vertex `i` a signed normal
    /// distance `psi[i]` (interpolated linearly over each triangle) along the
    /// ambient geodesic.
    pub fn pushed_triangle_areas(&self, psi: &[f64]) -> Vec<f64> {
        assert_eq!(psi.len(), self.vertices.len());
        let s3 = self.ambient == Ambient::RoundS3;
        (0..self.triangles.len())
            .into_par_iter()
            .map(|k| {
                let [i0, i1, i2] = self.triangles[k];
                if self.geometry == Geometry::Polyhedral {
                    let img = |i: usize| {
                        let (p, n) = (self.vertices[i], self.normals[i]);
                        if s3 { psi[i].cos() * p + psi[i].sin() * n } else { p + psi[i] * n }
                    };
                    let (a, b, c) = (img(i0), img(i1), img(i2));
                    return 0.5 * area_element(&(b - a), &(c - a));
                }
                let (dps, dpt) = (psi[i1] - psi[i0], psi[i2] - psi[i0]);
                let mut acc = 0.0;
                for &(s, t, w) in QUAD7.iter() {
                    let f = self.tri_frame(k, s, t);
                    let z = psi[i0] + s * dps + t * dpt;
                    let (fs, ft) = if s3 {
                        let (c, sn) = (z.cos(), z.sin());
                        let tilt = -sn * f.p + c * f.n;
                        (c * f.ps + sn * f.ns + dps * tilt, c * f.pt + sn * f.nt + dpt * tilt)
                    } else {
                        (f.ps + z * f.ns + dps * f.n, f.pt + z * f.nt + dpt * f.n)
                    };
                    acc += w * area_element(&fs, &ft);
                }
                0.5 * acc
            })
            .collect()
    }

    pub fn triangle_areas(&self) -> Vec<f64> {
        self.pushed_triangle_areas(&vec![0.0; self.vertices.len()])
    }

    /// Total metric area, summed in triangle order with compensation.
    pub fn area(&self) -> f64 {
        compensated_sum(self.triangle_areas())
    }

    pub fn pushed_area(&self, psi: &[f64]) -> f64 {
        compensated_sum(self.pushed_triangle_areas(psi))
    }

    pub fn edges(&self) -> HashMap<(usize, usize), usize> {
        let mut e = HashMap::new();
        for t in &self.triangles {
            for c in 0..3 {
                let (a, b) = (t[c], t[(c + 1) % 3]);
                *e.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        e
    }

    pub fn euler_characteristic(&self) -> i64 {
        let used: std::collections::HashSet<usize> = self.triangles.iter().flatten().copied().collect();
        used.len() as i64 - self.edges().len() as i64 + self.triangles.len() as i64
    }

    /// Vertices on edges that belong to exactly one triangle.
    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut b = vec![false; self.vertices.len()];
        for ((i, j), count) in self.edges() {
            if count == 1 {
                b[i] = true;
                b[j] = true;
            }
        }
        b
    }

    fn face_normal(&self, k: usize) -> V4 {
        let [i0, i1, i2] = self.triangles[k];
        let (e1, e2) = (self.vertices[i1] - self.vertices[i0], self.vertices[i2] - self.vertices[i0]);
        match self.ambient {
            Ambient::EuclideanR3 => {
                let (a, b) = (e1.xyz(), e2.xyz());
                let c = a.cross(&b);
                V4::new(c.x, c.y, c.z, 0.0)
            }
            Ambient::RoundS3 => cross4(&((self.vertices[i0] + self.vertices[i1] + self.vertices[i2]) / 3.0), &e1, &e2),
        }
    }

    /// Area-weighted face normals, projected tangent to S³ where needed.
    pub fn estimate_normals(&self) -> Vec<V4> {
        let mut acc = vec![V4::zeros(); self.vertices.len()];
        for k in 0..self.triangles.len() {
            let n = self.face_normal(k);
            for &i in &self.triangles[k] {
                acc[i] += n;
            }
        }
        acc.iter()
            .zip(&self.vertices)
            .map(|(n, p)| {
                let n = if self.ambient == Ambient::RoundS3 { n - p * p.dot(n) } else { *n };
                let len = n.norm();
                if len > 0.0 { n / len } else { n }
            })
            .collect()
    }

    /// Second fundamental form of triangle `k` in the edge basis, from
    /// differences of vertex normals.
    pub fn fd_second_form(&self, k: usize) -> (Matrix2<f64>, Matrix2<f64>) {
        let [i0, i1, i2] = self.triangles[k];
        let e = [self.vertices[i1] - self.vertices[i0], self.vertices[i2] - self.vertices[i0]];
        let dn = [self.normals[i1] - self.normals[i0], self.normals[i2] - self.normals[i0]];
        let g = Matrix2::from_fn(|i, j| e[i].dot(&e[j]));
        let a = Matrix2::from_fn(|i, j| -0.5 * (dn[i].dot(&e[j]) + dn[j].dot(&e[i])));
        (g, a)
    }

    /// Per-vertex `|A|²`, averaging triangle values weighted by area.
    pub fn estimate_a_norm2(&self) -> Vec<f64> {
        let mut num = vec![0.0; self.vertices.len()];
        let mut den = vec![0.0; self.vertices.len()];
        for k in 0..self.triangles.len() {
            let (g, a) = self.fd_second_form(k);
            let Some(gi) = g.try_inverse() else { continue };
            let m = gi * a;
            let val = (m * m).trace();
            let w = 0.5 * g.determinant().max(0.0).sqrt();
            for &i in &self.triangles[k] {
                num[i] += w * val;
                den[i] += w;
            }
        }
        num.iter().zip(&den).map(|(n, d)| if *d > 0.0 { n / d } else { 0.0 }).collect()
    }
}

/// Generalized cross product in R⁴: orthogonal to `a`, `b`, `c`, with length
/// the 3-volume they span.
pub fn cross4(a: &V4, b: &V4, c: &V4) -> V4 {
    let m = |r: [usize; 3]| {
        let (i, j, k) = (r[0], r[1], r[2]);
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    V4::new(-m([1, 2, 3]), m([0, 2, 3]), -m([0, 1, 3]), m([0, 1, 2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross4_is_orthogonal() {
        let a = V4::new(1.0, 2.0, 0.5, -1.0);
        let b = V4::new(0.0, 1.0, 3.0, 2.0);
        let c = V4::new(-2.0, 0.5, 1.0, 1.0);
        let x = cross4(&a, &b, &c);
        assert!(x.dot(&a).abs() < 1e-12 && x.dot(&b).abs() < 1e-12 && x.dot(&c).abs() < 1e-12);
        let e = cross4(&V4::x(), &V4::y(), &V4::z());
        assert!((e.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_weights_sum_to_one_and_integrate_quintics() {
        let s: f64 = QUAD7.iter().map(|q| q.2).sum();
        assert!((s - 1.0).abs() < 1e-14);
        // ∫ s^2 t^3 over the reference triangle is 2!3!/7! = 1/420.
        let v: f64 = QUAD7.iter().map(|&(s, t, w)| w * s * s * t * t * t).sum::<f64>() * 0.5;
        assert!((v - 1.0 / 420.0).abs() < 1e-14);
    }
}
