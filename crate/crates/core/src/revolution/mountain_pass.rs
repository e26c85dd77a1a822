//! Discrete mountain pass between the pinched two-disk surrogate and the
//! stable catenoid, by a string of profiles relaxed under the frustum area.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::{frustum_area_raw, revolution_area, ProfileCurve};
use crate::catenoid::{solve_parameters, CatenoidSpec};
use crate::error::{Error, Result};
use crate::numeric::solve_tridiagonal;

#[derive(Debug, Clone, Serialize)]
pub struct DescentConfig {
    pub nodes: usize,
    pub slices: usize,
    /// Pinch floor as a fraction of `r`.
    pub floor_frac: f64,
    /// Largest move of one slice per step, as a fraction of the slice spacing.
    pub step_frac: f64,
    /// Diagonal shift of the preconditioner, relative to `r`.
    pub precond_shift: f64,
    /// Relative change of the path maximum counted as stalled.
    pub tol: f64,
    /// Consecutive stalled iterations required to stop.
    pub patience: usize,
    pub max_outer: usize,
    /// Re-strings between the neighbours of the maximal slice.
    pub zoom_rounds: usize,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self {
            nodes: 201,
            slices: 41,
            floor_frac: 1e-4,
            step_frac: 0.5,
            precond_shift: 1e-2,
            tol: 1e-9,
            patience: 20,
            max_outer: 20_000,
            zoom_rounds: 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RevolutionPath {
    pub t: Vec<f64>,
    pub slices: Vec<ProfileCurve>,
}

impl RevolutionPath {
    pub fn new(t: Vec<f64>, slices: Vec<ProfileCurve>) -> Result<Self> {
        if t.len() != slices.len() || slices.len() < 3 {
            return Err(Error::InvalidPath("need at least 3 slices with one parameter each".into()));
        }
        if t.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidPath("slice parameters must be nondecreasing".into()));
        }
        let (n, h, r) = (slices[0].f.len(), slices[0].h, slices[0].r());
        if slices.iter().any(|s| s.f.len() != n || s.h != h || s.r() != r) {
            return Err(Error::InvalidPath("slices must share grid and boundary circles".into()));
        }
        Ok(Self { t, slices })
    }

    pub fn areas(&self) -> Vec<f64> {
        self.slices.iter().map(|s| frustum_area_raw(&s.f, s.dx())).collect()
    }

    /// Maximal slice area and its index; the first index wins ties.
    pub fn sup(&self) -> (f64, usize) {
        argmax(&self.areas())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StageRecord {
    pub iterations: usize,
    pub width: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WidthResult {
    /// Maximal frustum area over the relaxed path.
    pub width: f64,
    pub argmax_t: f64,
    pub profile_at_max: ProfileCurve,
    /// Trapezoid-rule area of the maximal profile.
    pub width_trapezoid: f64,
    pub iterations: usize,
    pub stages: Vec<StageRecord>,
}

fn argmax(v: &[f64]) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, 0);
    for (k, &a) in v.iter().enumerate() {
        if a > best.0 {
            best = (a, k);
        }
    }
    best
}

/// Linear interpolation from the pinched surrogate (all interior radii at
/// the floor) to the stable catenoid.
pub fn initial_path(r: f64, h: f64, cfg: &DescentConfig) -> Result<RevolutionPath> {
    let sol = solve_parameters(CatenoidSpec::new(r, h)?)?;
    let floor = cfg.floor_frac * r;
    let stable = ProfileCurve::catenoid(r, h, sol.c_stable, cfg.nodes)?;
    let pinched = ProfileCurve::from_fn(r, h, cfg.nodes, |_| floor)?;
    let k_max = cfg.slices - 1;
    let t: Vec<f64> = (0..cfg.slices).map(|k| k as f64 / k_max as f64).collect();
    let slices = t
        .iter()
        .map(|&s| ProfileCurve::new(r, h, lerp(&pinched.f, &stable.f, s)))
        .collect::<Result<Vec<_>>>()?;
    RevolutionPath::new(t, slices)
}

fn lerp(a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (1.0 - s) * x + s * y).collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Exact gradient of the frustum area with respect to the interior radii.
fn frustum_gradient(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    let mut g = vec![0.0; n];
    for i in 0..n - 1 {
        let d = f[i + 1] - f[i];
        let s = (dx * dx + d * d).sqrt();
        let a = f[i] + f[i + 1];
        g[i] += PI * (s - a * d / s);
        g[i + 1] += PI * (s + a * d / s);
    }
    g[1..n - 1].to_vec()
}

/// Tridiagonal part of the frustum Hessian from the slope terms.
fn preconditioned(f: &[f64], dx: f64, g: &[f64], floor: f64, shift: f64) -> Vec<f64> {
    let n = f.len();
    let w: Vec<f64> = (0..n - 1)
        .map(|i| {
            let d = f[i + 1] - f[i];
            let s = (dx * dx + d * d).sqrt();
            PI * (f[i] + f[i + 1] + floor) * dx * dx / (s * s * s)
        })
        .collect();
    let m = n - 2;
    let diag: Vec<f64> = (0..m).map(|j| w[j] + w[j + 1] + shift).collect();
    let off: Vec<f64> = (0..m - 1).map(|j| -w[j + 1]).collect();
    solve_tridiagonal(&off, &diag, &off, g)
}

/// One backtracking descent step; never increases the slice area.
fn descend(f: &mut [f64], dx: f64, floor: f64, shift: f64, cap: f64) {
    let n = f.len();
    let e0 = frustum_area_raw(f, dx);
    let g = frustum_gradient(f, dx);
    let p = preconditioned(f, dx, &g, floor, shift);
    let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let mut a = (cap / norm).min(1.0);
    let mut trial = f.to_vec();
    for _ in 0..60 {
        for j in 0..n - 2 {
            trial[j + 1] = (f[j + 1] - a * p[j]).max(floor);
        }
        if frustum_area_raw(&trial, dx) < e0 {
            f.copy_from_slice(&trial);
            return;
        }
        a *= 0.5;
    }
}

/// Redistributes interior slices to equal Euclidean arc length.
fn reparametrize(images: &mut [Vec<f64>]) {
    let k = images.len();
    let mut cum = vec![0.0; k];
    for i in 1..k {
        cum[i] = cum[i - 1] + dist(&images[i - 1], &images[i]);
    }
    let total = cum[k - 1];
    if total == 0.0 {
        return;
    }
    let old = images.to_vec();
    let mut j = 0;
    for (i, img) in images.iter_mut().enumerate().take(k - 1).skip(1) {
        let target = total * i as f64 / (k - 1) as f64;
        while j + 2 < k && cum[j + 1] < target {
            j += 1;
        }
        let seg = cum[j + 1] - cum[j];
        let u = if seg > 0.0 { ((target - cum[j]) / seg).clamp(0.0, 1.0) } else { 0.0 };
        *img = lerp(&old[j], &old[j + 1], u);
    }
}

struct StringOutcome {
    images: Vec<Vec<f64>>,
    areas: Vec<f64>,
    iterations: usize,
}

fn relax_string(mut images: Vec<Vec<f64>>, dx: f64, r: f64, cfg: &DescentConfig) -> Result<StringOutcome> {
    let floor = cfg.floor_frac * r;
    let shift = cfg.precond_shift * r;
    let k = images.len();
    let endpoint_max = frustum_area_raw(&images[0], dx).max(frustum_area_raw(&images[k - 1], dx));
    let mut last = f64::NAN;
    let mut calm = 0;
    for it in 1..=cfg.max_outer {
        let spacing = (1..k).map(|i| dist(&images[i - 1], &images[i])).sum::<f64>() / (k - 1) as f64;
        let cap = cfg.step_frac * spacing;
        images[1..k - 1].par_iter_mut().for_each(|f| descend(f, dx, floor, shift, cap));
        reparametrize(&mut images);
        let areas: Vec<f64> = images.iter().map(|f| frustum_area_raw(f, dx)).collect();
        let (w, _) = argmax(&areas);
        debug_assert!(w >= endpoint_max);
        if (w - last).abs() < cfg.tol * w {
            calm += 1;
        } else {
            calm = 0;
        }
        last = w;
        if calm >= cfg.patience {
            return Ok(StringOutcome { images, areas, iterations: it });
        }
    }
    Err(Error::NonConvergence { what: "mountain-pass string", iterations: cfg.max_outer })
}

pub fn mountain_pass_width(r: f64, h: f64, path0: &RevolutionPath, cfg: &DescentConfig) -> Result<WidthResult> {
    let first = &path0.slices[0];
    if first.r() != r || first.h != h {
        return Err(Error::InvalidPath("path does not span the requested circles".into()));
    }
    let areas0 = path0.areas();
    let (sup0, _) = argmax(&areas0);
    let k = areas0.len();
    if !(areas0[0] < sup0 && areas0[k - 1] < sup0) {
        return Err(Error::InvalidPath("an endpoint attains the path maximum".into()));
    }
    let dx = first.dx();
    let mut t_lo = path0.t[0];
    let mut t_hi = path0.t[k - 1];
    let mut images: Vec<Vec<f64>> = path0.slices.iter().map(|s| s.f.clone()).collect();
    let mut stages = Vec::new();
    let mut total_iterations = 0;
    let mut outcome;
    let mut round = 0;
    loop {
        outcome = relax_string(images, dx, r, cfg)?;
        total_iterations += outcome.iterations;
        let (w, kmax) = argmax(&outcome.areas);
        stages.push(StageRecord { iterations: outcome.iterations, width: w });
        if round == cfg.zoom_rounds || kmax == 0 || kmax == k - 1 {
            break;
        }
        round += 1;
        let step = (t_hi - t_lo) / (k - 1) as f64;
        let (a, b) = (&outcome.images[kmax - 1], &outcome.images[kmax + 1]);
        t_lo += step * (kmax - 1) as f64;
        t_hi = t_lo + 2.0 * step;
        images = (0..k).map(|i| lerp(a, b, i as f64 / (k - 1) as f64)).collect();
    }
    let (width, kmax) = argmax(&outcome.areas);
    let profile_at_max = ProfileCurve::new(r, h, outcome.images[kmax].clone())?;
    Ok(WidthResult {
        width,
        argmax_t: t_lo + (t_hi - t_lo) * kmax as f64 / (k - 1) as f64,
        width_trapezoid: revolution_area(&profile_at_max)?,
        profile_at_max,
        iterations: total_iterations,
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_matches_finite_differences() {
        let f: Vec<f64> = (0..9).map(|i| 1.0 + 0.3 * ((i as f64) * 0.7).sin()).collect();
        let dx = 0.05;
        let g = frustum_gradient(&f, dx);
        for j in 1..8 {
            let mut p = f.clone();
            let mut m = f.clone();
            p[j] += 1e-6;
            m[j] -= 1e-6;
            let fd = (frustum_area_raw(&p, dx) - frustum_area_raw(&m, dx)) / 2e-6;
            assert!((fd - g[j - 1]).abs() < 1e-6, "node {j}: {fd} vs {}", g[j - 1]);
        }
    }

    #[test]
    fn descent_never_increases_area() {
        let cfg = DescentConfig::default();
        let path = initial_path(1.0, 0.3, &cfg).unwrap();
        for s in &path.slices[1..cfg.slices - 1] {
            let mut f = s.f.clone();
            let before = frustum_area_raw(&f, s.dx());
            descend(&mut f, s.dx(), 1e-4, 1e-2, 1.0);
            assert!(frustum_area_raw(&f, s.dx()) <= before);
        }
    }

    #[test]
    fn pinched_endpoint_is_near_two_disks() {
        let cfg = DescentConfig::default();
        let path = initial_path(1.0, 0.3, &cfg).unwrap();
        let a0 = path.areas()[0];
        assert!((a0 - 2.0 * PI).abs() < 2.0 * PI * 0.01 * 0.3 / 200.0 * 10.0);
    }

    #[test]
    fn endpoint_maximum_rejected() {
        let cfg = DescentConfig { slices: 5, ..Default::default() };
        let mut path = initial_path(1.0, 0.3, &cfg).unwrap();
        let last = path.slices[4].f.clone();
        for s in path.slices.iter_mut().skip(1) {
            s.f = last.clone();
        }
        let big = ProfileCurve::from_fn(1.0, 0.3, cfg.nodes, |x| 1.0 + 5.0 * (0.09 - x * x)).unwrap();
        path.slices[0] = big;
        let err = mountain_pass_width(1.0, 0.3, &path, &cfg).unwrap_err();
        assert!(matches!(err, Error::InvalidPath(_)));
    }
}
