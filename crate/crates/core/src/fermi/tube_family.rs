use std::f64::consts::{FRAC_PI_4, SQRT_2, TAU};

use rayon::prelude::*;
use serde::Serialize;

use super::cutoff::{build_cutoff_from_sources, Source};
use super::graph::{graph_area_exact, NormalGraphField};
use crate::error::{Error, Result};
use crate::mesh::build::{collared_torus_with, HoleCollar, QuadSplit};
use crate::mesh::{Chart, Geometry, MeshSurface};
use crate::report::{SliceRow, SweepoutReport};

#[derive(Debug, Clone, Serialize)]
pub struct TubeFamilyConfig {
    /// Grid size of the underlying torus.
    pub n: usize,
    /// Largest ratio between consecutive collar rings.
    pub ring_ratio: f64,
    /// Parameter radius where the polar collar hands over to blend rings.
    pub collar_radius: f64,
    pub blend_rings: usize,
    /// Cut grid quads toward the corners of squares of this many cells.
    pub split_period: Option<usize>,
    pub t_grid: Vec<f64>,
}

impl Default for TubeFamilyConfig {
    fn default() -> Self {
        TubeFamilyConfig {
            n: 64,
            ring_ratio: 1.25,
            collar_radius: 0.45,
            blend_rings: 4,
            split_period: None,
            t_grid: vec![0.0, 1e-3, 2e-3, 5e-3, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3],
        }
    }
}

/// Clifford torus with metric disks of radius `t²` removed around the
/// punctures, and the cutoff `η_t` built from the hole boundaries.
#[derive(Debug, Clone)]
pub struct PuncturedTorus {
    pub mesh: MeshSurface,
    pub t: f64,
    /// Vertex rings of each hole, innermost first.
    pub rings: Vec<Vec<Vec<usize>>>,
    pub eta: Vec<f64>,
}

impl PuncturedTorus {
    pub fn uv(&self) -> &[[f64; 2]] {
        match &self.mesh.geometry {
            Geometry::Chart { uv, .. } => uv,
            _ => unreachable!("collared tori are chart meshes"),
        }
    }
}

fn geometric(a: f64, b: f64, ratio: f64) -> Vec<f64> {
    let k = ((b / a).ln() / ratio.ln()).ceil().max(1.0) as usize;
    (0..=k).map(|j| a * (b / a).powf(j as f64 / k as f64)).collect()
}

/// `t = 0` gives the plain grid with `η ≡ 1`. Parameter and metric radii on
/// the Clifford torus differ by `√2`.
pub fn punctured_clifford(centers: &[(usize, usize)], t: f64, cfg: &TubeFamilyConfig) -> Result<PuncturedTorus> {
    let split = cfg.split_period.map_or(QuadSplit::Uniform, |period| QuadSplit::TowardCorners { period });
    if t <= 0.0 {
        let mesh = collared_torus_with(FRAC_PI_4, cfg.n, &[], split)?.mesh;
        let eta = vec![1.0; mesh.n_vertices()];
        return Ok(PuncturedTorus { mesh, t: 0.0, rings: Vec::new(), eta });
    }
    let outer = SQRT_2 * t;
    if outer >= cfg.collar_radius {
        return Err(Error::RadiusTooLarge { radius: t, limit: cfg.collar_radius / SQRT_2 });
    }
    let mut radii = geometric(SQRT_2 * t * t, outer, cfg.ring_ratio);
    radii.extend(geometric(outer, cfg.collar_radius, cfg.ring_ratio).into_iter().skip(1));
    let holes: Vec<HoleCollar> =
        centers.iter().map(|&c| HoleCollar::circle(c, &radii, cfg.blend_rings, false)).collect();
    let collared = collared_torus_with(FRAC_PI_4, cfg.n, &holes, split)?;
    let sources = collared.rings.iter().map(|r| Source::Ring { vertices: r[0].clone(), radius: t * t }).collect();
    let cutoff = build_cutoff_from_sources(&collared.mesh, sources, t)?;
    Ok(PuncturedTorus { mesh: collared.mesh, t, rings: collared.rings, eta: cutoff.values })
}

/// Bilinear interpolation of a periodic grid field at a parameter point.
fn sample_grid(phi: &[f64], n: usize, q: [f64; 2]) -> f64 {
    let step = TAU / n as f64;
    let (x, y) = (q[0].rem_euclid(TAU) / step, q[1].rem_euclid(TAU) / step);
    let (i, j) = (x.floor() as usize % n, y.floor() as usize % n);
    let (fx, fy) = (x - x.floor(), y - y.floor());
    let at = |a: usize, b: usize| phi[(a % n) * n + (b % n)];
    (1.0 - fx) * (1.0 - fy) * at(i, j) + fx * (1.0 - fy) * at(i + 1, j) + (1.0 - fx) * fy * at(i, j + 1)
        + fx * fy * at(i + 1, j + 1)
}

/// Grid size of a plain Clifford torus grid mesh.
fn clifford_grid_size(m: &MeshSurface) -> Result<usize> {
    let n = (m.n_vertices() as f64).sqrt().round() as usize;
    match &m.geometry {
        Geometry::Chart { chart: Chart::ProductTorus { beta }, .. }
            if (beta - FRAC_PI_4).abs() < 1e-15 && n * n == m.n_vertices() =>
        {
            Ok(n)
        }
        _ => Err(Error::Domain("the tube family is built over a Clifford torus grid".into())),
    }
}

/// Area of both sheets `±h·φ·η_t` over one punctured torus.
pub fn two_sided_area(p: &PuncturedTorus, phi: &[f64], h: f64) -> Result<(f64, f64)> {
    let field: Vec<f64> = p.eta.iter().zip(phi).map(|(e, f)| e * f).collect();
    let plus = graph_area_exact(&NormalGraphField::new(&p.mesh, field.clone(), h)?)?;
    let minus = graph_area_exact(&NormalGraphField::new(&p.mesh, field, -h)?)?;
    Ok((plus, minus))
}

/// Slices `Λ_{h,t}`: two normal graphs `±h·φ·η_t` over the Clifford torus
/// with the disks `B_{t²}` around `punctures` removed. The margin is
/// measured against twice the area of `m`.
pub fn two_sided_tube_family(
    m: &MeshSurface,
    phi: &[f64],
    punctures: &[usize],
    h: f64,
    cfg: &TubeFamilyConfig,
) -> Result<SweepoutReport> {
    let n = clifford_grid_size(m)?;
    if phi.len() != m.n_vertices() {
        return Err(Error::Domain("field length does not match the base mesh".into()));
    }
    let cfg = TubeFamilyConfig { n, ..cfg.clone() };
    let centers: Vec<(usize, usize)> = punctures.iter().map(|&v| (v / n, v % n)).collect();
    let rows: Vec<SliceRow> = cfg
        .t_grid
        .par_iter()
        .map(|&t| {
            let p = punctured_clifford(&centers, t, &cfg)?;
            let local: Vec<f64> = p.uv().iter().map(|&q| sample_grid(phi, n, q)).collect();
            let (plus, minus) = two_sided_area(&p, &local, h)?;
            Ok(SliceRow::new(t, plus + minus)
                .with("plus", plus)
                .with("minus", minus)
                .with("punctured_area", p.mesh.area()))
        })
        .collect::<Result<_>>()?;
    let budget = 2.0 * m.area();
    let mut report = SweepoutReport::new("fermi tube-family", rows, Some(budget));
    let margin = report.summary.margin.unwrap_or(f64::NAN);
    report.extra("h", h);
    report.extra("kappa", margin / (h * h));
    report.summary.pass = margin > 0.0;
    Ok(report)
}
