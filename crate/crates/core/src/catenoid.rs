//! Catenoids spanning two coaxial circles of radius `r` at heights `±h`.
//!
//! With `x = h/c` and `λ = r/h` the boundary condition `r = c·cosh(h/c)`
//! becomes `cosh x = λx`. The large root gives the unstable (thin-neck)
//! catenoid, the small root the stable one.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::bisect;

pub const TOL_ROOT: f64 = 1e-10;
pub const MAX_BISECT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatenoidSpec {
    pub r: f64,
    pub h: f64,
}

impl CatenoidSpec {
    pub fn new(r: f64, h: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite() && h > 0.0 && h.is_finite()) {
            return Err(Error::Domain(format!("need r > 0 and h > 0, got r={r}, h={h}")));
        }
        Ok(Self { r, h })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatenoidSolution {
    pub spec: CatenoidSpec,
    pub c_unstable: f64,
    pub c_stable: f64,
    pub area_unstable: f64,
    pub area_stable: f64,
}

impl CatenoidSolution {
    /// `area_unstable − 2πr²`, evaluated without cancellation.
    pub fn excess_unstable(&self) -> f64 {
        excess_over_disks(self.spec.r, self.spec.h, self.c_unstable)
    }
}

/// Root of `x·tanh x = 1`, the tangency point of `λx` and `cosh x`.
pub fn tangency_point() -> f64 {
    bisect(|x| x * x.tanh() - 1.0, 1.0, 2.0, MAX_BISECT).expect("x·tanh x − 1 changes sign on [1, 2]")
}

/// Largest `h/r` for which a catenoid spans the circles.
pub fn critical_ratio() -> f64 {
    1.0 / tangency_point().sinh()
}

/// `ln cosh x` without overflow.
fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a - std::f64::consts::LN_2 + (-2.0 * a).exp().ln_1p()
}

/// `ln cosh x − ln(λx)`: positive outside the two roots, negative between.
fn log_residual(x: f64, lambda: f64) -> f64 {
    ln_cosh(x) - (lambda * x).ln()
}

pub fn solve_parameters(spec: CatenoidSpec) -> Result<CatenoidSolution> {
    let CatenoidSpec { r, h } = CatenoidSpec::new(spec.r, spec.h)?;
    let rho = critical_ratio();
    if h / r > rho {
        return Err(Error::NoCatenoid { ratio: h / r, critical: rho });
    }
    let lambda = r / h;
    let g = |x: f64| log_residual(x, lambda);

    let x_t = lambda.asinh();
    let (x_small, x_large) = if g(x_t) >= 0.0 {
        // Tangent within rounding: the roots have merged.
        (x_t, x_t)
    } else {
        let x_small = bisect(g, 1.0 / lambda, x_t, MAX_BISECT)?;
        let mut hi = 2.0 * x_t;
        let mut doublings = 0;
        while g(hi) < 0.0 {
            hi *= 2.0;
            doublings += 1;
            if doublings > 64 {
                return Err(Error::NonConvergence { what: "root bracketing", iterations: doublings });
            }
        }
        let x_large = bisect(g, x_t, hi, MAX_BISECT)?;
        (x_small, x_large)
    };

    let c_unstable = h / x_large;
    let c_stable = h / x_small;
    for c in [c_unstable, c_stable] {
        if root_residual(r, h, c) > TOL_ROOT * r {
            return Err(Error::NonConvergence { what: "catenoid root", iterations: MAX_BISECT });
        }
    }
    Ok(CatenoidSolution {
        spec: CatenoidSpec { r, h },
        c_unstable,
        c_stable,
        area_unstable: area_formula(r, h, c_unstable),
        // For h ≪ r the stable root sits within h²/2r of r and may round to r.
        area_stable: area_formula(r, h, c_stable),
    })
}

/// `|c·cosh(h/c) − r|`, computed in log form so large `h/c` does not overflow.
pub fn root_residual(r: f64, h: f64, c: f64) -> f64 {
    let lg = c.ln() + ln_cosh(h / c);
    (r * (lg - r.ln()).exp_m1()).abs()
}

pub fn area_of_catenoid(r: f64, h: f64, c: f64) -> Result<f64> {
    if !(c > 0.0 && c < r) {
        return Err(Error::Domain(format!("catenoid parameter c={c} must lie in (0, r={r})")));
    }
    Ok(area_formula(r, h, c))
}

fn area_formula(r: f64, h: f64, c: f64) -> f64 {
    2.0 * PI * r * (r * r - c * c).max(0.0).sqrt() + 2.0 * PI * h * c
}

/// `area_of_catenoid − 2πr²` without subtracting nearly equal numbers.
pub fn excess_over_disks(r: f64, h: f64, c: f64) -> f64 {
    let s = (r * r - c * c).sqrt();
    -2.0 * PI * r * c * c / (r + s) + 2.0 * PI * h * c
}

pub fn estimate_bound(r: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::Domain(format!("estimate needs 0 < h < 1, got h={h}")));
    }
    Ok(2.0 * PI * r * r + 4.0 * PI * h * h / (-h.ln()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub h: f64,
    pub c_unstable: f64,
    pub area_unstable: f64,
    pub excess: f64,
    pub bound_value: f64,
    pub bound_excess: f64,
    pub asymptotic_ratio: f64,
    pub bound_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateScan {
    pub r: f64,
    pub h_grid: Vec<f64>,
    pub rows: Vec<ScanRow>,
    /// Largest grid value from which the bound holds at every smaller grid value.
    pub empirical_h0: Option<f64>,
}

impl EstimateScan {
    /// Whether `|ratio − 1|` strictly decreases over the last `k` rows.
    pub fn tail_converging(&self, k: usize) -> bool {
        let n = self.rows.len();
        if n < k || k < 2 {
            return false;
        }
        self.rows[n - k..]
            .windows(2)
            .all(|w| (w[1].asymptotic_ratio - 1.0).abs() < (w[0].asymptotic_ratio - 1.0).abs())
    }
}

pub fn asymptotic_ratio_scan(r: f64, h_grid: &[f64]) -> Result<EstimateScan> {
    if h_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("h_grid must be strictly decreasing".into()));
    }
    let rows = h_grid
        .par_iter()
        .map(|&h| -> Result<ScanRow> {
            let sol = solve_parameters(CatenoidSpec::new(r, h)?)?;
            let bound_value = estimate_bound(r, h)?;
            let excess = sol.excess_unstable();
            let bound_excess = 4.0 * PI * h * h / (-h.ln());
            Ok(ScanRow {
                h,
                c_unstable: sol.c_unstable,
                area_unstable: sol.area_unstable,
                excess,
                bound_value,
                bound_excess,
                asymptotic_ratio: sol.c_unstable * (-h.ln()) / h,
                bound_holds: excess <= bound_excess,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut empirical_h0 = None;
    for row in rows.iter().rev() {
        if !row.bound_holds {
            break;
        }
        empirical_h0 = Some(row.h);
    }
    Ok(EstimateScan { r, h_grid: h_grid.to_vec(), rows, empirical_h0 })
}

/// `h0·2^{-k}` for every `k` with the value still `≥ h_min`.
pub fn halving_grid(h0: f64, h_min: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut h = h0;
    while h >= h_min {
        out.push(h);
        h *= 0.5;
    }
    out
}

/// `count` log-spaced values from `hi` down to `lo` inclusive.
pub fn geometric_grid(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    let (a, b) = (hi.ln(), lo.ln());
    (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let n = n + n % 2;
        let dx = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * dx);
        }
        s * dx / 3.0
    }

    #[test]
    fn critical_values_match_bisection_oracle() {
        // Independent oracle: plain bisection on x·tanh x − 1 over [1, 2].
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.tanh() - 1.0 < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((tangency_point() - lo).abs() < 1e-12);
        assert!((tangency_point() - 1.19968).abs() < 1e-5);
        assert!((critical_ratio() - 1.0 / lo.sinh()).abs() < 1e-12);
        assert!((critical_ratio() - 0.66274).abs() < 1e-5);
    }

    #[test]
    fn roots_merge_at_critical_ratio() {
        let sol = solve_parameters(CatenoidSpec::new(1.0, critical_ratio()).unwrap()).unwrap();
        assert!((sol.c_unstable - sol.c_stable).abs() < 1e-6);
        let sol = solve_parameters(CatenoidSpec::new(1.0, 0.66274).unwrap()).unwrap();
        assert!((sol.c_unstable - sol.c_stable).abs() < 1e-2);
    }

    #[test]
    fn unstable_root_at_h_tenth() {
        let sol = solve_parameters(CatenoidSpec::new(1.0, 0.1).unwrap()).unwrap();
        // Frozen from bisection of cosh x − 10x over [1, 20].
        assert!((0.1 / sol.c_unstable - 4.499).abs() < 1e-3);
        assert!((sol.c_unstable - 0.0222).abs() < 1e-4);
        assert!(sol.c_unstable < sol.c_stable && sol.c_stable < 1.0);
    }

    #[test]
    fn past_critical_ratio_is_rejected() {
        let err = solve_parameters(CatenoidSpec::new(1.0, 0.7).unwrap()).unwrap_err();
        assert!(matches!(err, Error::NoCatenoid { .. }));
    }

    #[test]
    fn area_matches_simpson_quadrature() {
        for &(r, h) in &[(1.0, 0.1), (2.0, 0.5), (1.0, 0.3)] {
            let sol = solve_parameters(CatenoidSpec::new(r, h).unwrap()).unwrap();
            for c in [sol.c_unstable, sol.c_stable] {
                let q = simpson(|x| 2.0 * PI * c * (x / c).cosh().powi(2), -h, h, 20000);
                let a = area_of_catenoid(r, h, c).unwrap();
                assert!((a - q).abs() / a < 1e-8, "r={r} h={h} c={c}: {a} vs {q}");
            }
        }
    }

    #[test]
    fn area_domain_checked() {
        assert!(area_of_catenoid(1.0, 0.1, 1.0).is_err());
        assert!(estimate_bound(1.0, 1.0).is_err());
    }

    #[test]
    fn bound_formula_and_dominance() {
        let b = estimate_bound(1.0, 0.01).unwrap();
        assert!((b - (2.0 * PI + 4.0 * PI * 1e-4 / 100f64.ln())).abs() < 1e-15);
        let sol = solve_parameters(CatenoidSpec::new(1.0, 0.01).unwrap()).unwrap();
        assert!(sol.area_unstable <= b);
    }

    #[test]
    fn small_h_limits() {
        let sol = solve_parameters(CatenoidSpec::new(1.0, 1e-8).unwrap()).unwrap();
        assert!((sol.area_unstable - 2.0 * PI).abs() < 1e-12);
        // Frozen from a 50-digit root of cosh x = 1e8·x.
        assert!((0.1e-7 / sol.c_unstable - 22.214577).abs() < 1e-5);
        let scan = asymptotic_ratio_scan(1.0, &[1e-3, 1e-6]).unwrap();
        let row = &scan.rows[1];
        assert!(row.excess <= 2.0 * PI * 1.5 * 1e-12 / (1e-6f64).ln().abs());
        // The finite-h ratio approaches 1 from below.
        assert!((scan.rows[0].asymptotic_ratio - 0.6983).abs() < 1e-3);
    }

    #[test]
    fn scan_rejects_unsorted_grid() {
        assert!(asymptotic_ratio_scan(1.0, &[1e-3, 1e-2]).is_err());
    }

    #[test]
    fn halving_grid_shape() {
        let g = halving_grid(0.1, 1e-6);
        assert_eq!(g.len(), 17);
        assert!(*g.last().unwrap() >= 1e-6);
    }
}
