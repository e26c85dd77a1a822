use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::Serialize;

use super::tube::{neck_tube, MAX_TUBE_RADIUS};
use super::{retract_uv, torus_beta, GroupElement};
use crate::error::{Error, Result};
use crate::fermi::{punctured_clifford, PuncturedTorus, TubeFamilyConfig};
use crate::mesh::build::{collared_torus, torus_grid, HoleCollar, BLOCK_HALF};
use crate::mesh::{Ambient, Chart, MeshSurface, TriangleSoup, V4};
use crate::report::{SliceRow, SweepoutReport};

/// Neck radius `η(t) = ε·sin(π·t/(1/2 − δ))` on `[0, 1/2 − δ]`, zero after.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeckSchedule {
    pub epsilon: f64,
    pub delta: f64,
}

impl Default for NeckSchedule {
    fn default() -> Self {
        NeckSchedule { epsilon: 0.02, delta: 0.05 }
    }
}

impl NeckSchedule {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < MAX_TUBE_RADIUS) {
            return Err(Error::Domain(format!("neck radius {epsilon} outside (0, π/4)")));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::Domain(format!("closing parameter {delta} outside (0, 1/2)")));
        }
        Ok(NeckSchedule { epsilon, delta })
    }

    /// The parameter `1/2 − δ` where the necks close.
    pub fn closing(&self) -> f64 {
        0.5 - self.delta
    }

    pub fn eta(&self, t: f64) -> f64 {
        let c = self.closing();
        if t <= 0.0 || t >= c {
            0.0
        } else {
            self.epsilon * (PI * t / c).sin()
        }
    }

    /// Offset of `Γ_{1/2−δ}` from the Clifford torus.
    pub fn handoff_offset(&self) -> f64 {
        0.5 * (2.0 * self.delta).asin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    /// `Γ_t ∪ τ(Γ_t)` joined by `m²` tubes.
    Necks,
    /// Two-sided cutoff family across the Clifford torus.
    Cutoff,
    /// Collapse of the punctured sheets onto the grid graph.
    Retraction,
}

impl Stage {
    fn code(self) -> f64 {
        match self {
            Stage::Necks => 1.0,
            Stage::Cutoff => 2.0,
            Stage::Retraction => 3.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DoublingConfig {
    pub m: usize,
    /// Torus grid size; defaults to the least multiple of `2m` that is ≥ 64.
    pub n: Option<usize>,
    pub schedule: NeckSchedule,
    /// Neck-stage parameters in `[0, 1/2 − δ]`.
    pub t_grid: Vec<f64>,
    pub cutoff_steps: usize,
    /// Largest cutoff radius reached before the retraction.
    pub t_max: f64,
    pub retraction_steps: usize,
    pub n_beta: usize,
    pub collar_radius: f64,
    pub ring_ratio: f64,
    pub blend_rings: usize,
    pub weld_tol: f64,
    pub check_equivariance: bool,
}

impl DoublingConfig {
    pub fn new(m: usize) -> Self {
        let mut t_grid = vec![0.0, 0.005, 0.01, 0.02, 0.03, 0.05];
        t_grid.extend((3..=18).map(|k| 0.025 * k as f64));
        DoublingConfig {
            m,
            n: None,
            schedule: NeckSchedule::default(),
            t_grid,
            cutoff_steps: 6,
            t_max: 0.25,
            retraction_steps: 5,
            n_beta: 32,
            collar_radius: 0.45,
            ring_ratio: 1.25,
            blend_rings: 4,
            weld_tol: 1e-9,
            check_equivariance: true,
        }
    }

    pub fn grid(&self) -> usize {
        let q = 2 * self.m;
        self.n.unwrap_or(64usize.div_ceil(q) * q)
    }

    fn validate(&self) -> Result<()> {
        let n = self.grid();
        if self.m < 2 {
            return Err(Error::Domain("the doubling needs m ≥ 2".into()));
        }
        if !n.is_multiple_of(2 * self.m) || n / self.m < 2 * BLOCK_HALF {
            return Err(Error::Domain(format!("grid {n} cannot hold {} collars per row", self.m)));
        }
        if let Some(t) = self.t_grid.iter().find(|t| !(0.0..=self.schedule.closing()).contains(*t)) {
            return Err(Error::Domain(format!("neck parameter {t} outside [0, 1/2 − δ]")));
        }
        Ok(())
    }

    /// Grid indices of the hole centers `(π/m, π/m) + (2π/m)·(k, l)`.
    pub fn centers(&self) -> Vec<(usize, usize)> {
        let (n, m) = (self.grid(), self.m);
        let c: Vec<usize> = (0..m).map(|k| n / (2 * m) + k * n / m).collect();
        c.iter().flat_map(|&i| c.iter().map(move |&j| (i, j))).collect()
    }

    fn tube_family(&self) -> TubeFamilyConfig {
        TubeFamilyConfig {
            n: self.grid(),
            ring_ratio: self.ring_ratio,
            collar_radius: self.collar_radius,
            blend_rings: self.blend_rings,
            split_period: Some(self.grid() / self.m),
            t_grid: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DoubledSlice {
    pub sigma: f64,
    pub stage: Stage,
    /// `t` for the neck and cutoff stages, `s` for the retraction.
    pub param: f64,
    pub area: f64,
    pub components: BTreeMap<String, f64>,
    /// Welded union of all pieces.
    pub soup: TriangleSoup,
    pub euler: Option<i64>,
    pub equivariant: Option<bool>,
}

fn tau_matrix() -> nalgebra::Matrix4<f64> {
    GroupElement { m: 1, k: 0, l: 0, swap: true }.matrix()
}

fn geometric(a: f64, b: f64, ratio: f64) -> Vec<f64> {
    let k = ((b / a).ln() / ratio.ln()).ceil().max(1.0) as usize;
    (0..=k).map(|j| a * (b / a).powf(j as f64 / k as f64)).collect()
}

fn push(mesh: &MeshSurface, psi: &[f64]) -> Vec<V4> {
    mesh.vertices.iter().zip(&mesh.normals).zip(psi).map(|((p, n), s)| s.cos() * p + s.sin() * n).collect()
}

fn finish(
    cfg: &DoublingConfig,
    stage: Stage,
    param: f64,
    sigma: f64,
    area: f64,
    components: BTreeMap<String, f64>,
    soup: TriangleSoup,
) -> DoubledSlice {
    let soup = soup.welded(cfg.weld_tol);
    let regular = !soup.triangles.is_empty();
    let euler = regular.then(|| soup.euler_characteristic());
    let equivariant = (regular && cfg.check_equivariance).then(|| {
        GroupElement::all(cfg.m).iter().all(|g| {
            let mat = g.matrix();
            soup.invariant_under(|x| mat * x, cfg.weld_tol)
        })
    });
    DoubledSlice { sigma, stage, param, area, components, soup, euler, equivariant }
}

fn neck_slice(cfg: &DoublingConfig, t: f64) -> Result<DoubledSlice> {
    let (n, m) = (cfg.grid(), cfg.m);
    let mut comp = BTreeMap::new();
    let mut soup = TriangleSoup::default();
    let eps = cfg.schedule.eta(t);
    comp.insert("tube_radius".to_string(), eps);
    if t == 0.0 {
        // Two great circles.
        for k in ["torus", "tau_torus", "tubes", "removed"] {
            comp.insert(k.to_string(), 0.0);
        }
        return Ok(finish(cfg, Stage::Necks, t, t, 0.0, comp, soup));
    }
    let beta = torus_beta(t);
    let full = super::cmc_area(t)?;
    let (torus, tube_area) = if eps == 0.0 {
        (torus_grid(beta, n, n)?, 0.0)
    } else {
        let tube = neck_tube(t, m, eps, cfg.n_beta)?;
        let r_max = tube.torus_end.iter().map(|q| q[0].hypot(q[1])).fold(0.0, f64::max);
        if r_max * cfg.ring_ratio >= cfg.collar_radius {
            return Err(Error::RadiusTooLarge { radius: eps, limit: eps * cfg.collar_radius / r_max });
        }
        let scales = geometric(1.0, cfg.collar_radius / r_max, cfg.ring_ratio);
        let holes: Vec<HoleCollar> = cfg
            .centers()
            .into_iter()
            .map(|center| HoleCollar {
                center,
                inner: tube.torus_end.clone(),
                scales: scales.clone(),
                blend_rings: cfg.blend_rings,
                filled: false,
            })
            .collect();
        let collared = collared_torus(beta, n, &holes)?;
        for g in GroupElement::all(m).into_iter().filter(|g| !g.swap) {
            let mat = g.matrix();
            let verts: Vec<V4> = tube.mesh.vertices.iter().map(|v| mat * v).collect();
            soup.append(&verts, &tube.mesh.triangles);
        }
        (collared.mesh, tube.mesh.area())
    };
    let a = torus.area();
    soup.append(&torus.vertices, &torus.triangles);
    let tau = tau_matrix();
    let image: Vec<V4> = torus.vertices.iter().map(|v| tau * v).collect();
    soup.append(&image, &torus.triangles);
    let tubes = (m * m) as f64 * tube_area;
    comp.insert("torus".to_string(), a);
    comp.insert("tau_torus".to_string(), a);
    comp.insert("tubes".to_string(), tubes);
    comp.insert("removed".to_string(), 2.0 * (full - a));
    Ok(finish(cfg, Stage::Necks, t, t, 2.0 * a + tubes, comp, soup))
}

/// Both sheets `±h·η_t` over the punctured Clifford torus; the lower sheet
/// is the `τ`-image of the upper one. `uv` optionally replaces the
/// parameter positions (for the retraction).
fn two_sheets(
    cfg: &DoublingConfig,
    p: &PuncturedTorus,
    uv: Option<Vec<[f64; 2]>>,
    h: f64,
) -> Result<(f64, f64, TriangleSoup)> {
    let moved;
    let mesh = match uv {
        Some(uv) => {
            moved = MeshSurface::from_chart(
                Chart::ProductTorus { beta: FRAC_PI_4 },
                Ambient::RoundS3,
                uv,
                p.mesh.triangles.clone(),
            )?;
            &moved
        }
        None => &p.mesh,
    };
    let psi: Vec<f64> = p.eta.iter().map(|e| h * e).collect();
    let plus = crate::fermi::graph_area_exact(&crate::fermi::NormalGraphField::new(mesh, psi.clone(), 1.0)?)?;
    let upper = push(mesh, &psi);
    let tau = tau_matrix();
    let lower: Vec<V4> = upper.iter().map(|v| tau * v).collect();
    let mut soup = TriangleSoup::default();
    soup.append(&upper, &mesh.triangles);
    soup.append(&lower, &mesh.triangles);
    let _ = cfg;
    Ok((plus, mesh.area(), soup))
}

fn cutoff_slice(cfg: &DoublingConfig, t: f64) -> Result<DoubledSlice> {
    let p = punctured_clifford(&cfg.centers(), t, &cfg.tube_family())?;
    let h = cfg.schedule.handoff_offset();
    let (plus, base, soup) = two_sheets(cfg, &p, None, h)?;
    let d = cfg.schedule.delta;
    let sigma = cfg.schedule.closing() + 0.5 * d * t / cfg.t_max;
    let mut comp = BTreeMap::new();
    comp.insert("plus".to_string(), plus);
    comp.insert("minus".to_string(), plus);
    comp.insert("offset".to_string(), h);
    comp.insert("removed".to_string(), 2.0 * (2.0 * PI * PI - base));
    Ok(finish(cfg, Stage::Cutoff, t, sigma, 2.0 * plus, comp, soup))
}

fn retraction_slice(cfg: &DoublingConfig, p: &PuncturedTorus, s: f64) -> Result<DoubledSlice> {
    let d = cfg.schedule.delta;
    let sigma = cfg.schedule.closing() + 0.5 * d + 0.5 * d * s;
    let h = cfg.schedule.handoff_offset() * (1.0 - s).powi(2);
    let mut comp = BTreeMap::new();
    comp.insert("offset".to_string(), h);
    if s >= 1.0 {
        // Everything lies on the grid graph.
        comp.insert("plus".to_string(), 0.0);
        comp.insert("minus".to_string(), 0.0);
        return Ok(finish(cfg, Stage::Retraction, s, sigma, 0.0, comp, TriangleSoup::default()));
    }
    let uv = p.uv().iter().map(|&q| retract_uv(cfg.m, s, q)).collect::<Result<Vec<_>>>()?;
    let (plus, base, soup) = two_sheets(cfg, p, Some(uv), h)?;
    comp.insert("plus".to_string(), plus);
    comp.insert("minus".to_string(), plus);
    comp.insert("removed".to_string(), 2.0 * (2.0 * PI * PI - base));
    Ok(finish(cfg, Stage::Retraction, s, sigma, 2.0 * plus, comp, soup))
}

/// One slice of the doubled sweepout.
pub fn doubled_slice(cfg: &DoublingConfig, stage: Stage, param: f64) -> Result<DoubledSlice> {
    cfg.validate()?;
    match stage {
        Stage::Necks => {
            if !(0.0..=cfg.schedule.closing()).contains(&param) {
                return Err(Error::Domain(format!("neck parameter {param} outside [0, 1/2 − δ]")));
            }
            neck_slice(cfg, param)
        }
        Stage::Cutoff => {
            if !(0.0..=cfg.t_max).contains(&param) {
                return Err(Error::Domain(format!("cutoff radius {param} outside [0, {}]", cfg.t_max)));
            }
            cutoff_slice(cfg, param)
        }
        Stage::Retraction => {
            if !(0.0..=1.0).contains(&param) {
                return Err(Error::Domain(format!("retraction step {param} outside [0, 1]")));
            }
            let p = punctured_clifford(&cfg.centers(), cfg.t_max, &cfg.tube_family())?;
            retraction_slice(cfg, &p, param)
        }
    }
}

fn row(slice: &DoubledSlice) -> SliceRow {
    let mut r = SliceRow::new(slice.sigma, slice.area).with("stage", slice.stage.code()).with("param", slice.param);
    for (k, v) in &slice.components {
        r = r.with(k, *v);
    }
    if let Some(e) = slice.euler {
        r = r.with("euler", e as f64);
    }
    if let Some(q) = slice.equivariant {
        r = r.with("equivariant", if q { 1.0 } else { 0.0 });
    }
    r
}

/// Every slice of the sweepout in order, with the report.
pub fn assemble_doubled_sweepout(cfg: &DoublingConfig) -> Result<(SweepoutReport, Vec<DoubledSlice>)> {
    cfg.validate()?;
    let mut jobs: Vec<(Stage, f64)> = cfg.t_grid.iter().map(|&t| (Stage::Necks, t)).collect();
    jobs.extend((1..=cfg.cutoff_steps).map(|j| (Stage::Cutoff, cfg.t_max * j as f64 / cfg.cutoff_steps as f64)));
    jobs.extend((1..=cfg.retraction_steps).map(|j| (Stage::Retraction, j as f64 / cfg.retraction_steps as f64)));
    let last = punctured_clifford(&cfg.centers(), cfg.t_max, &cfg.tube_family())?;
    let slices: Vec<DoubledSlice> = jobs
        .par_iter()
        .map(|&(stage, x)| match stage {
            Stage::Necks => neck_slice(cfg, x),
            Stage::Cutoff => cutoff_slice(cfg, x),
            Stage::Retraction => retraction_slice(cfg, &last, x),
        })
        .collect::<Result<_>>()?;
    let budget = 4.0 * PI * PI;
    if let Some(s) = slices.iter().find(|s| s.area >= budget) {
        return Err(Error::BudgetViolated { t: s.sigma, area: s.area, budget });
    }
    let mut report = SweepoutReport::new("doubling sweep", slices.iter().map(row).collect(), Some(budget));
    let margin = report.summary.margin.unwrap_or(f64::NAN);
    let h = cfg.schedule.handoff_offset();
    let cutoff_sup = slices.iter().filter(|s| s.stage == Stage::Cutoff).map(|s| s.area).fold(2.0 * PI * PI * 2.0 * (2.0 * h).cos(), f64::max);
    report.extra("m", cfg.m as f64);
    report.extra("margin_fraction", margin / budget);
    report.extra("target_margin_fraction", 0.05);
    report.extra("nonregular_sigma", cfg.schedule.closing());
    report.extra("handoff_offset", h);
    report.extra("cutoff_kappa", (budget - cutoff_sup) / (h * h));
    report.extra("expected_euler", -2.0 * (cfg.m * cfg.m) as f64);
    let equivariant = slices.iter().all(|s| s.equivariant != Some(false));
    // The closing slice (two tori, no necks) is the one non-regular slice.
    let topology = slices
        .iter()
        .filter(|s| !(s.stage == Stage::Necks && s.components["tube_radius"] == 0.0))
        .all(|s| s.euler.is_none_or(|e| e == -2 * (cfg.m * cfg.m) as i64));
    report.extra("all_equivariant", if equivariant { 1.0 } else { 0.0 });
    report.extra("all_euler_ok", if topology { 1.0 } else { 0.0 });
    report.note(format!(
        "slice areas are piecewise smooth; the topology changes only at sigma = {} where the necks close",
        cfg.schedule.closing()
    ));
    Ok((report, slices))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(m: usize) -> DoublingConfig {
        DoublingConfig { check_equivariance: true, ..DoublingConfig::new(m) }
    }

    #[test]
    fn schedule_invariants() {
        let s = NeckSchedule::default();
        assert_eq!(s.eta(0.0), 0.0);
        assert_eq!(s.eta(s.closing()), 0.0);
        assert_eq!(s.eta(0.49), 0.0);
        assert!((1..100).all(|k| s.eta(s.closing() * k as f64 / 100.0) > 0.0));
        let b = (0.5 - s.delta).sqrt().acos();
        assert!((b - FRAC_PI_4 - s.handoff_offset()).abs() < 1e-14);
    }

    #[test]
    fn regular_neck_slice_has_the_right_genus() {
        for m in [2, 3] {
            let cfg = quick(m);
            let s = doubled_slice(&cfg, Stage::Necks, 0.2).unwrap();
            assert_eq!(s.euler, Some(-2 * (m * m) as i64), "m={m}");
            assert_eq!(s.soup.non_manifold_edges(), 0);
            assert_eq!(s.equivariant, Some(true));
            assert!(s.area < 4.0 * PI * PI);
        }
    }

    #[test]
    fn closing_slice_is_two_tori() {
        let cfg = quick(2);
        let t = cfg.schedule.closing();
        let s = doubled_slice(&cfg, Stage::Necks, t).unwrap();
        let exact = 8.0 * PI * PI * (t * (1.0 - t)).sqrt();
        assert!((s.area / exact - 1.0).abs() < 1e-12);
        assert_eq!(s.euler, Some(0));
        let b = doubled_slice(&cfg, Stage::Cutoff, 0.0).unwrap();
        assert!((b.area / exact - 1.0).abs() < 1e-12, "{} vs {exact}", b.area);
    }

    #[test]
    fn cutoff_and_retraction_slices() {
        let cfg = quick(2);
        let b = doubled_slice(&cfg, Stage::Cutoff, 0.1).unwrap();
        assert_eq!(b.euler, Some(-8));
        assert_eq!(b.equivariant, Some(true));
        let c = doubled_slice(&cfg, Stage::Retraction, 0.5).unwrap();
        assert_eq!(c.euler, Some(-8));
        assert_eq!(c.equivariant, Some(true));
        assert!(c.area < b.area);
        assert_eq!(doubled_slice(&cfg, Stage::Retraction, 1.0).unwrap().area, 0.0);
        assert_eq!(doubled_slice(&cfg, Stage::Necks, 0.0).unwrap().area, 0.0);
    }
}
