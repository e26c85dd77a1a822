use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mesh::build::RING;
use crate::mesh::{Ambient, Chart, MeshSurface};

/// Tube radii at or beyond this make the "tube" a parallel torus of the
/// Clifford torus rather than a thin neck.
pub const MAX_TUBE_RADIUS: f64 = FRAC_PI_4;

/// Tube of radius `eps` about the great circle through `α`.
pub fn tube_chart(m: usize, eps: f64) -> Chart {
    let (c, s) = ((PI / m as f64).cos(), (PI / m as f64).sin());
    Chart::Tube { a: [c, s, 0.0, 0.0], b: [0.0, 0.0, c, s], eps }
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("tube radius must be positive, got {radius}")));
    }
    if radius >= MAX_TUBE_RADIUS {
        return Err(Error::RadiusTooLarge { radius, limit: MAX_TUBE_RADIUS });
    }
    Ok(())
}

fn grid_mesh(chart: Chart, beta: impl Fn(usize, usize) -> f64, n_beta: usize) -> Result<MeshSurface> {
    let mut uv = Vec::with_capacity((n_beta + 1) * RING);
    for j in 0..=n_beta {
        for k in 0..RING {
            uv.push([beta(j, k), TAU * k as f64 / RING as f64]);
        }
    }
    let idx = |j: usize, k: usize| j * RING + k % RING;
    let mut tris = Vec::with_capacity(2 * n_beta * RING);
    for j in 0..n_beta {
        for k in 0..RING {
            let (a, b, c, d) = (idx(j, k), idx(j + 1, k), idx(j + 1, k + 1), idx(j, k + 1));
            tris.push([a, b, c]);
            tris.push([a, c, d]);
        }
    }
    MeshSurface::from_chart(chart, Ambient::RoundS3, uv, tris)
}

/// Boundary of the tube of the given radius about `α([t, 1/2])`.
pub fn half_tube_mesh(t: f64, m: usize, radius: f64, n_beta: usize) -> Result<MeshSurface> {
    check_radius(radius)?;
    if !(0.0..0.5).contains(&t) {
        return Err(Error::Domain(format!("neck parameter {t} outside [0, 1/2)")));
    }
    let b0 = t.sqrt().asin();
    grid_mesh(tube_chart(m, radius), |j, _| b0 + (FRAC_PI_4 - b0) * j as f64 / n_beta as f64, n_beta)
}

/// Area of the half tube, measured on its mesh. Independent of `m`.
pub fn tube_area(t: f64, radius: f64) -> Result<f64> {
    if t == 0.5 {
        check_radius(radius)?;
        return Ok(0.0);
    }
    Ok(half_tube_mesh(t, 2, radius, 32)?.area())
}

/// Tube joining `τ(Γ_t)` to `Γ_t` about `α([t, 1−t])`, cut exactly along
/// both tori. Generator `k` sits at `ψ = 2πk/RING`.
#[derive(Debug, Clone)]
pub struct NeckTube {
    pub mesh: MeshSurface,
    /// `(arg z, arg w)` of the `Γ_t` end relative to `(π/m, π/m)`,
    /// one point per generator.
    pub torus_end: Vec<[f64; 2]>,
    /// `j = 0` row (on `τ(Γ_t)`) and `j = n_beta` row (on `Γ_t`).
    pub ends: [Vec<usize>; 2],
}

/// `β` on generator `ψ` where `|z|² = target`.
fn end_beta(eps: f64, psi: f64, target: f64) -> Result<f64> {
    let c2 = (target - (eps.sin() * psi.cos()).powi(2)) / eps.cos().powi(2);
    if !(0.0..=1.0).contains(&c2) {
        return Err(Error::RadiusTooLarge { radius: eps, limit: target.min(1.0 - target).sqrt() });
    }
    Ok(c2.sqrt().acos())
}

pub fn neck_tube(t: f64, m: usize, eps: f64, n_beta: usize) -> Result<NeckTube> {
    check_radius(eps)?;
    if !(t > 0.0 && t < 0.5) {
        return Err(Error::Domain(format!("neck parameter {t} outside (0, 1/2)")));
    }
    let mut lo = Vec::with_capacity(RING);
    let mut hi = Vec::with_capacity(RING);
    for k in 0..RING {
        let psi = TAU * k as f64 / RING as f64;
        lo.push(end_beta(eps, psi, 1.0 - t)?);
        hi.push(end_beta(eps, psi, t)?);
        if !(lo[k] < hi[k] && hi[k] < FRAC_PI_2) {
            return Err(Error::RadiusTooLarge { radius: eps, limit: (0.5 - t) });
        }
    }
    let mesh = grid_mesh(tube_chart(m, eps), |j, k| lo[k] + (hi[k] - lo[k]) * j as f64 / n_beta as f64, n_beta)?;
    let rot = Complex64::from_polar(1.0, -PI / m as f64);
    let end: Vec<usize> = (0..RING).map(|k| n_beta * RING + k).collect();
    let torus_end = end
        .iter()
        .map(|&i| {
            let p = mesh.vertices[i];
            let z = Complex64::new(p[0], p[1]) * rot;
            let w = Complex64::new(p[2], p[3]) * rot;
            [z.arg(), w.arg()]
        })
        .collect();
    Ok(NeckTube { mesh, torus_end, ends: [(0..RING).collect(), end] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::s3::neck_curve;

    /// Length of `α([t, 1/2])` by Simpson's rule on `|α'|`.
    fn curve_length(t: f64) -> f64 {
        let m = 2;
        let n = 2000;
        let d = 1e-6;
        let speed = |s: f64| {
            let (a, b) = (neck_curve((s - d).max(0.0), m).unwrap(), neck_curve((s + d).min(0.5), m).unwrap());
            (a.to_v4() - b.to_v4()).norm() / ((s + d).min(0.5) - (s - d).max(0.0))
        };
        let h = (0.5 - t) / n as f64;
        (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                w * speed(t + i as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0
    }

    #[test]
    fn tube_area_against_length() {
        let t = 0.1;
        let len = curve_length(t);
        assert!((len - (FRAC_PI_4 - t.sqrt().asin())).abs() < 1e-5);
        for eps in [0.01, 0.02, 0.05] {
            let a = tube_area(t, eps).unwrap();
            assert!(a <= TAU * eps * len);
            assert!((a - PI * (2.0 * eps).sin() * (FRAC_PI_4 - t.sqrt().asin())).abs() < 1e-10);
        }
        assert_eq!(tube_area(0.5, 0.02).unwrap(), 0.0);
        assert!(matches!(tube_area(0.1, 1.0), Err(Error::RadiusTooLarge { .. })));
    }

    #[test]
    fn neck_tube_ends_lie_on_the_tori() {
        let t = 0.2;
        let tube = neck_tube(t, 2, 0.02, 24).unwrap();
        for &i in &tube.ends[0] {
            let p = tube.mesh.vertices[i];
            assert!((p[2] * p[2] + p[3] * p[3] - t).abs() < 1e-14);
        }
        for &i in &tube.ends[1] {
            let p = tube.mesh.vertices[i];
            assert!((p[0] * p[0] + p[1] * p[1] - t).abs() < 1e-14);
        }
    }
}
