//! Recover the unstable catenoid as the width of a sweepout by surfaces of
//! revolution, starting from a straight-line path.

use std::time::Instant;

use sweepout::catenoid::{solve_parameters, CatenoidSpec};
use sweepout::revolution::{initial_path, mountain_pass_width, DescentConfig};

fn main() -> Result<(), sweepout::Error> {
    let cfg = DescentConfig::default();
    for h in [0.3, 0.5] {
        let start = Instant::now();
        let exact = solve_parameters(CatenoidSpec::new(1.0, h)?)?;
        let path = initial_path(1.0, h, &cfg)?;
        let res = mountain_pass_width(1.0, h, &path, &cfg)?;
        let c = exact.c_unstable;
        let sup_gap = res
            .profile_at_max
            .x_nodes()
            .iter()
            .zip(&res.profile_at_max.f)
            .map(|(x, f)| (f - c * (x / c).cosh()).abs())
            .fold(0.0, f64::max);
        println!(
            "h={h}: width {:.9} vs unstable catenoid {:.9} (rel gap {:.2e}), profile sup gap {:.2e}, {} iterations in {:.2?}",
            res.width,
            exact.area_unstable,
            (res.width - exact.area_unstable).abs() / exact.area_unstable,
            sup_gap,
            res.iterations,
            start.elapsed()
        );
        for (i, s) in res.stages.iter().enumerate() {
            println!("  stage {i}: width {:.9} after {} iterations", s.width, s.iterations);
        }
    }
    Ok(())
}
