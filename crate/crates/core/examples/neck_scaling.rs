//! A neck of radius `t` costs at most `B·hⁿ`, which the `A·h²` gain from the
//! second variation beats once `n ≥ 3` and `h` is small.

use sweepout::neck::{
    default_h_grid, fit_neck_exponent, max_neck_cost, neck_cost_curve, opened_hole_drop, NeckScalingConfig,
};

fn main() -> sweepout::Result<()> {
    let grid = default_h_grid();
    for n in 2..=6 {
        let cfg = NeckScalingConfig { n, ..Default::default() };
        let fit = fit_neck_exponent(&cfg, &grid)?;
        println!("n = {n}: fitted exponent {:.6}, B = {:.6}, h0 = {:?}", fit.slope, fit.b, fit.h0);
    }
    let control = NeckScalingConfig { n: 2, c: 0.5, ..Default::default() };
    println!("n = 2, c = 0.5: B = {} > A/2, h0 = {:?}, max cost: {:?}", control.b(), control.h0(), max_neck_cost(&control).err());

    let cfg = NeckScalingConfig::default();
    let curve = neck_cost_curve(&cfg, 11)?;
    println!("\ncost over t ∈ [0, 2t*] at n = 3, h = {}:", cfg.h);
    for (t, c) in curve.t_grid.iter().zip(&curve.cost) {
        println!("  t = {t:.5}  cost {c:+.4e}");
    }
    let hole = opened_hole_drop(&cfg)?;
    println!("\nopened hole R = {}: drop {:.4e} ≥ cRⁿ = {:.4e} while h ≤ {:.4}", cfg.r, hole.drop, hole.guaranteed, hole.h_limit);
    Ok(())
}
