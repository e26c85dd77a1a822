//! Round S³: the torus foliation `|z|² = t`, the symmetry group `G_m`,
//! neck tubes and the doubled Clifford torus sweepout.

mod doubling;
mod retraction;
mod tube;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::build::torus_grid;
use crate::mesh::{MeshSurface, V4};

pub use doubling::{
    assemble_doubled_sweepout, doubled_slice, DoubledSlice, DoublingConfig, NeckSchedule, Stage,
};
pub use retraction::{grid_retraction, retract_uv};
pub use tube::{half_tube_mesh, neck_tube, tube_area, tube_chart, NeckTube, MAX_TUBE_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct S3Point {
    pub z: Complex64,
    pub w: Complex64,
}

impl S3Point {
    pub fn new(z: Complex64, w: Complex64) -> Result<Self> {
        let p = S3Point { z, w };
        let n = p.norm2();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("|z|² + |w|² = {n}, not 1")));
        }
        Ok(p)
    }

    pub fn norm2(&self) -> f64 {
        self.z.norm_sqr() + self.w.norm_sqr()
    }

    pub fn to_v4(&self) -> V4 {
        V4::new(self.z.re, self.z.im, self.w.re, self.w.im)
    }

    pub fn from_v4(x: &V4) -> Self {
        S3Point { z: Complex64::new(x[0], x[1]), w: Complex64::new(x[2], x[3]) }
    }

    pub fn distance(&self, other: &S3Point) -> f64 {
        (self.to_v4() - other.to_v4()).amax()
    }
}

/// `τ^swap ∘ h_{k,l}` where `h_{k,l}(z, w) = (e^{2πik/m} z, e^{2πil/m} w)`
/// and `τ(z, w) = (w, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupElement {
    pub m: usize,
    pub k: usize,
    pub l: usize,
    pub swap: bool,
}

impl GroupElement {
    pub fn rotation(m: usize, k: usize, l: usize) -> Self {
        GroupElement { m, k: k % m, l: l % m, swap: false }
    }

    pub fn tau(m: usize) -> Self {
        GroupElement { m, k: 0, l: 0, swap: true }
    }

    /// All `2m²` elements.
    pub fn all(m: usize) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(2 * m * m);
        for swap in [false, true] {
            for k in 0..m {
                for l in 0..m {
                    out.push(GroupElement { m, k, l, swap });
                }
            }
        }
        out
    }

    pub fn apply(&self, p: &S3Point) -> S3Point {
        let rz = Complex64::from_polar(1.0, TAU * self.k as f64 / self.m as f64);
        let rw = Complex64::from_polar(1.0, TAU * self.l as f64 / self.m as f64);
        let (z, w) = (rz * p.z, rw * p.w);
        if self.swap {
            S3Point { z: w, w: z }
        } else {
            S3Point { z, w }
        }
    }

    /// `self ∘ other`. Uses `h_{k,l} ∘ τ = τ ∘ h_{l,k}`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let m = self.m;
        let (k, l) = if other.swap { (self.l + other.k, self.k + other.l) } else { (self.k + other.k, self.l + other.l) };
        GroupElement { m, k: k % m, l: l % m, swap: self.swap ^ other.swap }
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        let (a, b) = (TAU * self.k as f64 / self.m as f64, TAU * self.l as f64 / self.m as f64);
        let mut r = Matrix4::zeros();
        r[(0, 0)] = a.cos();
        r[(0, 1)] = -a.sin();
        r[(1, 0)] = a.sin();
        r[(1, 1)] = a.cos();
        r[(2, 2)] = b.cos();
        r[(2, 3)] = -b.sin();
        r[(3, 2)] = b.sin();
        r[(3, 3)] = b.cos();
        if self.swap {
            let mut t = Matrix4::zeros();
            t[(0, 2)] = 1.0;
            t[(1, 3)] = 1.0;
            t[(2, 0)] = 1.0;
            t[(3, 1)] = 1.0;
            t * r
        } else {
            r
        }
    }
}

/// Orbit of `x` under `G_m`, deduplicated at `1e-12`, with the order of
/// the stabilizer.
#[derive(Debug, Clone, Serialize)]
pub struct Orbit {
    pub points: Vec<S3Point>,
    pub isotropy: usize,
}

pub fn group_orbit(m: usize, x: &S3Point) -> Result<Orbit> {
    if m < 2 {
        return Err(Error::Domain(format!("group order parameter must be at least 2, got {m}")));
    }
    let mut points: Vec<S3Point> = Vec::new();
    for g in GroupElement::all(m) {
        let y = g.apply(x);
        if !points.iter().any(|p| p.distance(&y) <= 1e-12) {
            points.push(y);
        }
    }
    let isotropy = 2 * m * m / points.len();
    Ok(Orbit { points, isotropy })
}

/// The `m²` points `(e^{iθ}, e^{iφ})/√2` with `θ, φ ≡ π/m mod 2π/m`.
pub fn clifford_centers(m: usize) -> Vec<S3Point> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(m * m);
    for k in 0..m {
        for l in 0..m {
            let a = PI / m as f64 + TAU * k as f64 / m as f64;
            let b = PI / m as f64 + TAU * l as f64 / m as f64;
            out.push(S3Point { z: Complex64::from_polar(r, a), w: Complex64::from_polar(r, b) });
        }
    }
    out
}

/// `α(t) = (√(1−t)·e^{iπ/m}, √t·e^{iπ/m})`.
pub fn neck_curve(t: f64, m: usize) -> Result<S3Point> {
    if !(0.0..=0.5).contains(&t) {
        return Err(Error::Domain(format!("neck parameter {t} outside [0, 1/2]")));
    }
    let e = Complex64::from_polar(1.0, PI / m as f64);
    Ok(S3Point { z: e * (1.0 - t).sqrt(), w: e * t.sqrt() })
}

/// Area of `Γ_t = {|z|² = t}`.
pub fn cmc_area(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("foliation parameter {t} outside [0, 1]")));
    }
    Ok(4.0 * PI * PI * (t * (1.0 - t)).sqrt())
}

/// `Γ_t` as an `n × n` chart mesh; the ends `t ∈ {0, 1}` are circles.
pub fn cmc_slice(t: f64, n: usize) -> Result<MeshSurface> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("Γ_t is a circle or empty at t = {t}")));
    }
    torus_grid(torus_beta(t), n, n)
}

/// `β` with `cos²β = t`.
pub fn torus_beta(t: f64) -> f64 {
    t.sqrt().acos().clamp(0.0, FRAC_PI_2)
}
