//! Cutting a hole of radius `t` and sliding it costs `2πh²`; the catenoid
//! costs a factor of order `−log h` less.

use sweepout::catenoid::geometric_grid;
use sweepout::revolution::{excess_scaling_comparison, naive_sweepout};

fn main() -> sweepout::Result<()> {
    let cmp = excess_scaling_comparison(1.0, &geometric_grid(1e-2, 1e-7, 11))?;
    println!("{:>10} {:>14} {:>14} {:>10} {:>10}", "h", "naive", "catenoid", "ratio", "-log h");
    for r in &cmp.rows {
        println!("{:>10.3e} {:>14.6e} {:>14.6e} {:>10.4} {:>10.4}", r.h, r.naive_excess, r.optimal_excess, r.ratio, r.neg_log_h);
    }
    println!("slope of log ratio against log(-log h): {:.4}\n", cmp.slope);

    let h = 0.05;
    let t_grid: Vec<f64> = (0..=40).map(|k| 0.2 * k as f64 / 40.0).collect();
    let rep = naive_sweepout(1.0, h, &t_grid)?;
    println!(
        "naive family at h = {h}: sup {:.10} at t = {:.4}, excess {:.6e} (2πh² = {:.6e})",
        rep.summary.sup_area,
        rep.summary.argmax_t,
        rep.summary.extra["excess"],
        rep.summary.extra["predicted_excess"]
    );
    Ok(())
}
