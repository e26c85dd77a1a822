//! Surfaces of revolution spanning the circles `{x = ±h, |y| = r}`.

mod mountain_pass;

use std::f64::consts::PI;

use serde::Serialize;

use crate::catenoid::{solve_parameters, CatenoidSpec};
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, log_log_slope};
use crate::report::{SliceRow, SweepoutReport};

pub use mountain_pass::{initial_path, mountain_pass_width, DescentConfig, WidthResult};

/// Radial profile sampled on a uniform grid over `[−h, h]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileCurve {
    pub h: f64,
    pub f: Vec<f64>,
}

impl ProfileCurve {
    /// Pins both ends to `r`.
    pub fn new(r: f64, h: f64, mut f: Vec<f64>) -> Result<Self> {
        if f.len() < 3 {
            return Err(Error::Domain("a profile needs at least 3 nodes".into()));
        }
        if !(h > 0.0) {
            return Err(Error::Domain(format!("h must be positive, got {h}")));
        }
        let n = f.len();
        f[0] = r;
        f[n - 1] = r;
        Ok(Self { h, f })
    }

    pub fn from_fn(r: f64, h: f64, nodes: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        let dx = 2.0 * h / (nodes - 1) as f64;
        Self::new(r, h, (0..nodes).map(|i| g(-h + i as f64 * dx)).collect())
    }

    pub fn catenoid(r: f64, h: f64, c: f64, nodes: usize) -> Result<Self> {
        Self::from_fn(r, h, nodes, |x| c * (x / c).cosh())
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.h / (self.f.len() - 1) as f64
    }

    pub fn x_nodes(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.f.len()).map(|i| -self.h + i as f64 * dx).collect()
    }

    pub fn r(&self) -> f64 {
        self.f[0]
    }

    fn check(&self) -> Result<()> {
        match self.f.iter().position(|&v| !(v >= 0.0)) {
            Some(index) => Err(Error::DegenerateProfile { index }),
            None => Ok(()),
        }
    }
}

/// Trapezoid rule for `∫ 2πf·sqrt(1 + f′²)` with centered differences inside
/// and second-order one-sided differences at the ends.
pub fn revolution_area(p: &ProfileCurve) -> Result<f64> {
    p.check()?;
    let f = &p.f;
    let n = f.len();
    let dx = p.dx();
    let deriv = |i: usize| -> f64 {
        if i == 0 {
            (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx)
        } else if i == n - 1 {
            (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx)
        } else {
            (f[i + 1] - f[i - 1]) / (2.0 * dx)
        }
    };
    let integrand = |i: usize| {
        let d = deriv(i);
        2.0 * PI * f[i] * (1.0 + d * d).sqrt()
    };
    let inner = compensated_sum((1..n - 1).map(integrand));
    Ok(dx * (inner + 0.5 * (integrand(0) + integrand(n - 1))))
}

/// Area of the polyhedral surface obtained by revolving the piecewise-linear
/// profile: a sum of conical frusta.
pub fn frustum_area(p: &ProfileCurve) -> Result<f64> {
    p.check()?;
    Ok(frustum_area_raw(&p.f, p.dx()))
}

pub(crate) fn frustum_area_raw(f: &[f64], dx: f64) -> f64 {
    compensated_sum(f.windows(2).map(|w| {
        let d = w[1] - w[0];
        PI * (w[0] + w[1]) * (dx * dx + d * d).sqrt()
    }))
}

/// Area of slice `t` of the hole-cutting sweepout: two disks with radius-`t`
/// holes, joined by a cylinder of radius `t`.
pub fn naive_slice_area(r: f64, h: f64, t: f64) -> f64 {
    2.0 * PI * (r * r - t * t) + 4.0 * PI * h * t
}

pub fn naive_sweepout(r: f64, h: f64, t_grid: &[f64]) -> Result<SweepoutReport> {
    if t_grid.iter().any(|&t| !(0.0..=r).contains(&t)) {
        return Err(Error::Domain("naive sweepout parameter must lie in [0, r]".into()));
    }
    let rows = t_grid
        .iter()
        .map(|&t| {
            SliceRow::new(t, naive_slice_area(r, h, t))
                .with("annuli", 2.0 * PI * (r * r - t * t))
                .with("cylinder", 4.0 * PI * h * t)
        })
        .collect();
    let mut rep = SweepoutReport::new("naive_sweepout", rows, None);
    rep.extra("excess", rep.summary.sup_area - 2.0 * PI * r * r);
    rep.extra("predicted_excess", 2.0 * PI * h * h);
    Ok(rep)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcessRow {
    pub h: f64,
    pub naive_excess: f64,
    pub optimal_excess: f64,
    pub ratio: f64,
    pub neg_log_h: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcessComparison {
    pub r: f64,
    pub rows: Vec<ExcessRow>,
    /// Slope of `log(naive/optimal)` against `log(−log h)`.
    pub slope: f64,
}

/// Naive excess is the exact maximum `2πh²` of the hole-cutting family
/// (attained at `t = h`); optimal excess is that of the unstable catenoid.
pub fn excess_scaling_comparison(r: f64, h_grid: &[f64]) -> Result<ExcessComparison> {
    if h_grid.len() < 2 {
        return Err(Error::Domain("need at least two separations".into()));
    }
    let rows = h_grid
        .iter()
        .map(|&h| {
            let sol = solve_parameters(CatenoidSpec::new(r, h)?)?;
            let naive_excess = 2.0 * PI * h * h;
            let optimal_excess = sol.excess_unstable();
            Ok(ExcessRow {
                h,
                naive_excess,
                optimal_excess,
                ratio: naive_excess / optimal_excess,
                neg_log_h: -h.ln(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.neg_log_h).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let slope = log_log_slope(&xs, &ys);
    Ok(ExcessComparison { r, rows, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catenoid::area_of_catenoid;

    #[test]
    fn cylinder_area() {
        let p = ProfileCurve::from_fn(1.0, 0.1, 51, |_| 1.0).unwrap();
        assert!((revolution_area(&p).unwrap() - 0.4 * PI).abs() < 1e-14);
        assert!((frustum_area(&p).unwrap() - 0.4 * PI).abs() < 1e-14);
    }

    #[test]
    fn negative_radius_rejected() {
        let mut p = ProfileCurve::from_fn(1.0, 0.1, 11, |_| 1.0).unwrap();
        p.f[4] = -1e-3;
        assert!(matches!(revolution_area(&p), Err(Error::DegenerateProfile { index: 4 })));
    }

    #[test]
    fn catenoid_profile_area_and_order() {
        let sol = solve_parameters(CatenoidSpec::new(1.0, 0.1).unwrap()).unwrap();
        let exact = area_of_catenoid(1.0, 0.1, sol.c_unstable).unwrap();
        let err = |n| {
            let p = ProfileCurve::catenoid(1.0, 0.1, sol.c_unstable, n).unwrap();
            (revolution_area(&p).unwrap() - exact).abs() / exact
        };
        assert!(err(10_001) < 1e-6);
        let (e1, e2) = (err(2001), err(4001));
        let order = (e1 / e2).log2();
        assert!((1.8..=2.2).contains(&order), "order {order}");
    }

    #[test]
    fn naive_max_matches_calculus() {
        let (r, h) = (1.0, 0.1);
        let grid: Vec<f64> = (0..=10_000).map(|k| k as f64 * 1e-4).collect();
        let rep = naive_sweepout(r, h, &grid).unwrap();
        assert!((rep.summary.sup_area - (2.0 * PI + 2.0 * PI * 0.01)).abs() < 1e-12);
        assert!((rep.summary.argmax_t - h).abs() <= 1e-4);
    }

    #[test]
    fn naive_ratio_exceeds_one() {
        let cmp = excess_scaling_comparison(1.0, &[1e-2, 1e-3]).unwrap();
        assert!(cmp.rows[0].ratio > 1.0);
        // Frozen from the closed forms.
        assert!((cmp.rows[0].ratio - 7.82).abs() < 0.01);
    }
}
