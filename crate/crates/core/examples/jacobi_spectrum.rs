//! Lowest eigenvalue of `−L = −Δ − |A|² − Ric(N,N)` on the Clifford torus,
//! the round sphere and a catenoid patch.

use sweepout::fermi::jacobi_lowest;
use sweepout::mesh::build::{catenoid_patch, clifford_torus, icosphere};

fn main() -> sweepout::Result<()> {
    for n in [32, 64, 128] {
        let d = jacobi_lowest(&clifford_torus(n)?)?;
        let spread = d.eigenfunction.iter().fold(0.0f64, |a, &x| a.max((x - d.eigenfunction[0]).abs()));
        println!(
            "Clifford {n:>3}²: λ = {:.12} ({} iterations), eigenfunction spread {spread:.1e}",
            d.eigenvalue, d.iterations
        );
    }
    for k in [2, 3, 4] {
        let d = jacobi_lowest(&icosphere(k)?.with_estimated_curvature())?;
        println!("icosphere({k}), estimated curvature: λ = {:.12}", d.eigenvalue);
    }
    let mut prev: Option<f64> = None;
    for ns in [8, 16, 32, 64] {
        let d = jacobi_lowest(&catenoid_patch(1.0, 1.0, ns, 4 * ns)?)?;
        let step = prev.map_or(String::new(), |p| format!(", change {:.3e}", (d.eigenvalue - p).abs()));
        println!("catenoid |s| ≤ 1, {ns:>2}×{}: λ = {:.10}{step}", 4 * ns, d.eigenvalue);
        prev = Some(d.eigenvalue);
    }
    Ok(())
}
