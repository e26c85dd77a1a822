//! The acceptance checks, shared by `sweepout verify-all` and the
//! integration tests. Each check measures, compares and times itself.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Instant;

use serde::Serialize;

use crate::catenoid::{asymptotic_ratio_scan, geometric_grid, halving_grid, solve_parameters, CatenoidSpec};
use crate::error::Result;
use crate::fermi::{
    build_cutoff, cutoff_energy, graph_area_estimate, graph_area_exact, jacobi_lowest, perimeter_constant,
    two_sided_tube_family, EstimateConfig, NormalGraphField, TubeFamilyConfig,
};
use crate::mesh::build::{clifford_torus, collared_torus, polar_disk, HoleCollar};
use crate::neck::{default_h_grid, fit_neck_exponent, NeckScalingConfig};
use crate::revolution::{excess_scaling_comparison, initial_path, mountain_pass_width, DescentConfig};
use crate::s3::{assemble_doubled_sweepout, DoublingConfig};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
    pub limit_seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {:<28} {:>8.2}s  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub const CRITERIA: [(u32, &str, f64); 10] = [
    (1, "catenoid estimate", 1.0),
    (2, "asymptotic ratio", 1.0),
    (3, "mountain-pass width", 120.0),
    (4, "naive vs optimal excess", 1.0),
    (5, "fermi expansion", 10.0),
    (6, "jacobi spectrum", 30.0),
    (7, "log cutoff energy", 10.0),
    (8, "two-sided tube family", 60.0),
    (9, "doubling budget", 120.0),
    (10, "neck scaling", 1.0),
];

type Check = (bool, String);

fn catenoid_estimate() -> Result<Check> {
    let grid = halving_grid(0.1, 1e-6);
    let scan = asymptotic_ratio_scan(1.0, &grid)?;
    let worst = scan.rows.iter().map(|r| r.excess / r.bound_excess).fold(0.0, f64::max);
    let pass = scan.empirical_h0.is_some();
    let detail = format!(
        "{} grid points, bound holds for h <= {:?}, worst excess/bound {:.4}",
        grid.len(),
        scan.empirical_h0,
        worst
    );
    Ok((pass, detail))
}

fn asymptotic_ratio() -> Result<Check> {
    let grid = geometric_grid(1e-1, 1e-8, 8);
    let scan = asymptotic_ratio_scan(1.0, &grid)?;
    let last = scan.rows.last().map_or(f64::NAN, |r| r.asymptotic_ratio);
    let converging = scan.tail_converging(4);
    let pass = (0.9..=1.1).contains(&last) && converging;
    Ok((pass, format!("ratio {last:.6} at h = 1e-8 (target [0.9, 1.1]), tail converging: {converging}")))
}

fn mountain_pass() -> Result<Check> {
    let cfg = DescentConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for h in [0.3, 0.5] {
        let start = Instant::now();
        let exact = solve_parameters(CatenoidSpec::new(1.0, h)?)?.area_unstable;
        let res = mountain_pass_width(1.0, h, &initial_path(1.0, h, &cfg)?, &cfg)?;
        let rel = (res.width - exact).abs() / exact;
        let secs = start.elapsed().as_secs_f64();
        pass &= rel <= 5e-3 && secs < 60.0;
        parts.push(format!("h={h}: rel gap {rel:.2e} in {secs:.2}s"));
    }
    Ok((pass, parts.join("; ")))
}

fn naive_vs_optimal() -> Result<Check> {
    let cmp = excess_scaling_comparison(1.0, &geometric_grid(1e-2, 1e-7, 6))?;
    Ok(((cmp.slope - 1.0).abs() <= 0.25, format!("slope {:.4} (target 1 ± 0.25)", cmp.slope)))
}

fn fermi_expansion() -> Result<Check> {
    let m = clifford_torus(64)?;
    let base = m.area();
    let coef = |s: f64| -> Result<f64> { Ok((graph_area_exact(&NormalGraphField::constant(&m, 1.0, s))? - base) / (s * s)) };
    let s = 1e-2;
    let measured = (4.0 * coef(s)? - coef(2.0 * s)?) / 3.0;
    let target = -4.0 * PI * PI;
    let est = graph_area_estimate(&NormalGraphField::constant(&m, 1.0, s), &EstimateConfig::default())?;
    let rel = (measured / target - 1.0).abs();
    let area_rel = (base / (2.0 * PI * PI) - 1.0).abs();
    let pass = rel <= 1e-2 && area_rel <= 1e-4;
    Ok((
        pass,
        format!(
            "quadratic coefficient {measured:.8} vs -4π² (rel {rel:.1e}), Q/2 = {:.8}, |Γ_1/2| rel err {area_rel:.1e}",
            est.q / 2.0
        ),
    ))
}

/// Below this the Clifford eigenvalue is exact up to solver tolerance and the
/// refinement order carries no information.
pub const EIGEN_ROUNDOFF: f64 = 1e-10;

fn jacobi_spectrum() -> Result<Check> {
    let e64 = (jacobi_lowest(&clifford_torus(64)?)?.eigenvalue + 4.0).abs();
    let e128 = (jacobi_lowest(&clifford_torus(128)?)?.eigenvalue + 4.0).abs();
    let within = e64 <= 0.02 * 4.0;
    let (order_ok, order) = if e128 <= EIGEN_ROUNDOFF * 4.0 {
        (true, "at solver tolerance at both levels, order not measurable".to_string())
    } else {
        let p = (e64 / e128).log2();
        (p >= 1.8, format!("order {p:.3}"))
    };
    Ok((within && order_ok, format!("|λ+4| = {e64:.2e} (64²), {e128:.2e} (128²); {order}")))
}

fn geometric_radii(a: f64, b: f64, ratio: f64) -> Vec<f64> {
    let k = ((b / a).ln() / ratio.ln()).ceil() as usize;
    (0..=k).map(|j| a * (b / a).powf(j as f64 / k as f64)).collect()
}

fn log_cutoff() -> Result<Check> {
    let radii: Vec<f64> = (0..40).map(|k| 10f64.powf(-8.0 + 8.0 * k as f64 / 39.0)).collect();
    let disk = polar_disk(4096, &radii)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for t in [1e-2, 1e-3] {
        let c = build_cutoff(&disk, 0, t)?;
        let rel = (cutoff_energy(&disk, &c) * (-t.ln()) / (2.0 * PI) - 1.0).abs();
        pass &= rel <= 1e-6;
        parts.push(format!("disk t={t}: rel {rel:.1e}"));
    }
    let t = 0.05;
    let hole = HoleCollar::circle((32, 32), &geometric_radii(1e-4, 0.45, 1.25), 4, true);
    let torus = collared_torus(FRAC_PI_4, 64, &[hole])?;
    let center = torus.centers[0].expect("filled collar has a center");
    let c = build_cutoff(&torus.mesh, center, t)?;
    let e = cutoff_energy(&torus.mesh, &c);
    let d = perimeter_constant(&torus.mesh, &c, 64);
    let bound = d / (-t.ln());
    pass &= e <= bound;
    parts.push(format!("torus t={t}: energy {e:.5} <= D/(-log t) = {bound:.5} (D = {d:.4})"));
    Ok((pass, parts.join("; ")))
}

fn tube_family() -> Result<Check> {
    let n = 64;
    let m = clifford_torus(n)?;
    let phi = vec![1.0; m.n_vertices()];
    let pair = [(n / 4) * n + 3 * n / 4, (3 * n / 4) * n + n / 4];
    let mut pass = true;
    let mut parts = Vec::new();
    for h in [0.02, 0.05] {
        let r = two_sided_tube_family(&m, &phi, &pair, h, &TubeFamilyConfig::default())?;
        let kappa = r.summary.extra["kappa"];
        pass &= r.summary.sup_area < 4.0 * PI * PI && kappa >= 0.05;
        parts.push(format!("h={h}: margin/h² = {kappa:.3}"));
    }
    Ok((pass, parts.join("; ")))
}

fn doubling() -> Result<Check> {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in [2, 3] {
        let (r, _) = assemble_doubled_sweepout(&DoublingConfig::new(m))?;
        let margin = r.summary.margin.unwrap_or(f64::NAN);
        let euler_ok = r.summary.extra["all_euler_ok"] == 1.0;
        pass &= margin > 0.0 && euler_ok;
        parts.push(format!(
            "m={m}: margin {margin:.4} ({:.3}% of 4π²), χ = {} on regular slices: {euler_ok}, equivariant: {}",
            100.0 * r.summary.extra["margin_fraction"],
            2 - 2 * (m * m + 1) as i64,
            r.summary.extra["all_equivariant"] == 1.0
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn neck_scaling() -> Result<Check> {
    let grid = default_h_grid();
    let mut pass = true;
    let mut slopes = Vec::new();
    for n in 2..=6 {
        let fit = fit_neck_exponent(&NeckScalingConfig { n, ..Default::default() }, &grid)?;
        pass &= (fit.slope - n as f64).abs() <= 0.01;
        slopes.push(format!("n={n}: {:.4}", fit.slope));
    }
    Ok((pass, slopes.join(", ")))
}

pub fn run_criterion(id: u32) -> CriterionResult {
    let (_, name, limit) = CRITERIA[(id - 1) as usize];
    let start = Instant::now();
    let outcome = match id {
        1 => catenoid_estimate(),
        2 => asymptotic_ratio(),
        3 => mountain_pass(),
        4 => naive_vs_optimal(),
        5 => fermi_expansion(),
        6 => jacobi_spectrum(),
        7 => log_cutoff(),
        8 => tube_family(),
        9 => doubling(),
        _ => neck_scaling(),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    let in_time = seconds < limit;
    let detail = if in_time { detail } else { format!("{detail}; over the {limit} s budget") };
    CriterionResult { id, name, pass: pass && in_time, detail, seconds, limit_seconds: limit }
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _, _)| run_criterion(id)).collect()
}
