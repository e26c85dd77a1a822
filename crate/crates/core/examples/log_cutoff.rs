//! The logarithmic cutoff `η_t(r)` has Dirichlet energy `2π/(−log t)` on a
//! flat disk, and at most `D/(−log t)` on a curved surface.

use std::f64::consts::{FRAC_PI_4, PI};

use sweepout::fermi::{build_cutoff, cutoff_energy, eta, perimeter_constant};
use sweepout::mesh::build::{collared_torus, polar_disk, HoleCollar};

fn main() -> sweepout::Result<()> {
    let t = 0.01;
    println!("η_t at t = {t}:");
    for r in [1e-5, 1e-4, 5e-4, 1e-3, 5e-3, 1e-2, 1e-1] {
        println!("  r = {r:<8e} η = {:.6}", eta(t, r));
    }

    let radii: Vec<f64> = (0..40).map(|k| 10f64.powf(-10.0 + 10.0 * k as f64 / 39.0)).collect();
    let disk = polar_disk(4096, &radii)?;
    println!("\nflat disk, 4096 sectors:");
    for t in [1e-1, 1e-2, 1e-3, 1e-4] {
        let e = cutoff_energy(&disk, &build_cutoff(&disk, 0, t)?);
        let exact = 2.0 * PI / (-f64::ln(t));
        println!("  t = {t:<6e} energy {e:.10}  2π/(-log t) {exact:.10}  rel {:.1e}", (e / exact - 1.0).abs());
    }

    let radii: Vec<f64> = (0..=40).map(|k| 1e-4 * 4500f64.powf(k as f64 / 40.0)).collect();
    let torus = collared_torus(FRAC_PI_4, 64, &[HoleCollar::circle((32, 32), &radii, 4, true)])?;
    let center = torus.centers[0].expect("filled collar");
    println!("\nClifford torus, refined around one point:");
    for t in [0.2, 0.1, 0.05, 0.02] {
        let c = build_cutoff(&torus.mesh, center, t)?;
        let e = cutoff_energy(&torus.mesh, &c);
        let d = perimeter_constant(&torus.mesh, &c, 64);
        println!("  t = {t:<5} energy {e:.6}  D = {d:.4}  D/(-log t) = {:.6}", d / (-f64::ln(t)));
    }
    Ok(())
}
