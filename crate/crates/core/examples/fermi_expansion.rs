//! Area of normal graphs over the Clifford torus against the second-order
//! expansion `|Λ| + (h²/2)·Q(φ)`.

use std::f64::consts::{PI, TAU};

use sweepout::fermi::{graph_area_estimate, graph_area_exact, EstimateConfig, NormalGraphField};
use sweepout::mesh::build::clifford_torus;

fn main() -> sweepout::Result<()> {
    let n = 64;
    let m = clifford_torus(n)?;
    println!("|Γ_1/2| = {:.14}, 2π² = {:.14}", m.area(), 2.0 * PI * PI);

    println!("\nφ ≡ 1 (parallel tori, exact area 2π²·cos 2h)");
    println!("{:>8} {:>18} {:>18} {:>12}", "h", "mesh area", "expansion", "error");
    for h in [0.08, 0.04, 0.02, 0.01] {
        let g = NormalGraphField::constant(&m, 1.0, h);
        let exact = graph_area_exact(&g)?;
        let est = graph_area_estimate(&g, &EstimateConfig::default())?;
        println!("{h:>8} {exact:>18.12} {:>18.12} {:>12.3e}", est.estimate, (exact - est.estimate).abs());
    }

    let phi: Vec<f64> = (0..n * n)
        .map(|k| {
            let (u, v) = (TAU * (k / n) as f64 / n as f64, TAU * (k % n) as f64 / n as f64);
            0.5 + 0.5 * (u + v).cos() - 0.3 * (2.0 * u).sin()
        })
        .collect();
    println!("\nφ = 0.5 + 0.5 cos(u+v) − 0.3 sin 2u");
    println!("{:>8} {:>16} {:>16} {:>12} {:>12}", "h", "(A−|Λ|)/h²", "Q/2", "residual", "envelope");
    for h in [1e-2, 3e-3, 1e-3] {
        let g = NormalGraphField::new(&m, phi.clone(), h)?;
        let exact = graph_area_exact(&g)?;
        let est = graph_area_estimate(&g, &EstimateConfig::default())?;
        println!(
            "{h:>8} {:>16.10} {:>16.10} {:>12.3e} {:>12.3e}",
            (exact - est.base_area) / (h * h),
            est.q / 2.0,
            (exact - est.estimate).abs(),
            est.envelope
        );
    }
    Ok(())
}
