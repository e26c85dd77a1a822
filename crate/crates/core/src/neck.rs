//! Neck cost against second-variation gain for hypersurfaces of dimension
//! `n`: a neck of radius `t` across a slab of width `h` costs at most
//! `2Ch·t^{n−1} − 2c·tⁿ`, while pushing off gains `A·h²`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::log_log_slope;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeckScalingConfig {
    /// Hypersurface dimension; 2 is admitted as the critical case.
    pub n: u32,
    pub c: f64,
    pub big_c: f64,
    pub a: f64,
    pub h: f64,
    /// Outer radius of the opened hole.
    pub r: f64,
}

impl Default for NeckScalingConfig {
    fn default() -> Self {
        NeckScalingConfig { n: 3, c: 1.0, big_c: 1.0, a: 1.0, h: 0.01, r: 0.1 }
    }
}

impl NeckScalingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=6).contains(&self.n) {
            return Err(Error::Domain(format!("dimension {} outside 2..=6", self.n)));
        }
        if !(self.c > 0.0 && self.c <= self.big_c) {
            return Err(Error::Domain(format!("need 0 < c <= C, got c = {}, C = {}", self.c, self.big_c)));
        }
        if !(self.a > 0.0 && self.h > 0.0 && self.r > 0.0) {
            return Err(Error::Domain("A, h and R must be positive".into()));
        }
        Ok(())
    }

    pub fn with_h(self, h: f64) -> Self {
        NeckScalingConfig { h, ..self }
    }

    /// `B` in `max_t cost = B·hⁿ`.
    pub fn b(&self) -> f64 {
        let n = self.n as f64;
        let k = self.big_c * (n - 1.0) / (self.c * n);
        2.0 * self.big_c / n * k.powi(self.n as i32 - 1)
    }

    /// Largest `h` where `B·hⁿ ≤ (A/2)·h²` and `h ≤ c/(2C)`. `None` in
    /// dimension two when `B > A/2`.
    pub fn h0(&self) -> Option<f64> {
        let shrink = self.c / (2.0 * self.big_c);
        let ratio = self.a / (2.0 * self.b());
        if self.n == 2 {
            (ratio >= 1.0).then_some(shrink)
        } else {
            Some(shrink.min(ratio.powf(1.0 / (self.n as f64 - 2.0))))
        }
    }

    fn regime(&self, limit: Option<f64>) -> Result<()> {
        match limit {
            Some(h_max) if self.h <= h_max => Ok(()),
            other => Err(Error::RegimeViolation { h: self.h, h_max: other.unwrap_or(0.0) }),
        }
    }
}

pub fn neck_cost(cfg: &NeckScalingConfig, t: f64) -> f64 {
    let n = cfg.n as i32;
    2.0 * cfg.big_c * cfg.h * t.powi(n - 1) - 2.0 * cfg.c * t.powi(n)
}

/// `t* = C(n−1)h/(cn)`.
pub fn optimal_neck_radius(cfg: &NeckScalingConfig) -> f64 {
    let n = cfg.n as f64;
    cfg.big_c * (n - 1.0) * cfg.h / (cfg.c * n)
}

/// `cost(t*) = B·hⁿ`, valid only for `h ≤ h₀`.
pub fn max_neck_cost(cfg: &NeckScalingConfig) -> Result<f64> {
    cfg.validate()?;
    cfg.regime(cfg.h0())?;
    let cost = cfg.b() * cfg.h.powi(cfg.n as i32);
    debug_assert!(cost <= 0.5 * cfg.a * cfg.h * cfg.h * (1.0 + 1e-12));
    Ok(cost)
}

#[derive(Debug, Clone, Serialize)]
pub struct NeckCostCurve {
    pub t_grid: Vec<f64>,
    pub cost: Vec<f64>,
    pub t_star: f64,
    pub max_cost: f64,
    pub grid_argmax: f64,
}

/// Samples the cost on `[0, 2t*]`.
pub fn neck_cost_curve(cfg: &NeckScalingConfig, points: usize) -> Result<NeckCostCurve> {
    cfg.validate()?;
    let t_star = optimal_neck_radius(cfg);
    let t_grid: Vec<f64> = (0..points).map(|i| 2.0 * t_star * i as f64 / (points - 1) as f64).collect();
    let cost: Vec<f64> = t_grid.iter().map(|&t| neck_cost(cfg, t)).collect();
    let best = (0..points).max_by(|&a, &b| cost[a].total_cmp(&cost[b])).unwrap_or(0);
    Ok(NeckCostCurve { max_cost: neck_cost(cfg, t_star), grid_argmax: t_grid[best], t_grid, cost, t_star })
}

#[derive(Debug, Clone, Serialize)]
pub struct NeckFit {
    pub n: u32,
    pub h_grid: Vec<f64>,
    pub max_cost: Vec<f64>,
    pub b: f64,
    pub slope: f64,
    /// Exponent of the second-variation gain `A·h²`.
    pub gain_slope: f64,
    pub h0: Option<f64>,
}

/// Exponent of `max_t cost` in `h`. Unlike [`max_neck_cost`] this does not
/// require the regime, so dimension two can serve as a control.
pub fn fit_neck_exponent(cfg: &NeckScalingConfig, h_grid: &[f64]) -> Result<NeckFit> {
    cfg.validate()?;
    let max_cost: Vec<f64> = h_grid
        .iter()
        .map(|&h| {
            let c = cfg.with_h(h);
            neck_cost(&c, optimal_neck_radius(&c))
        })
        .collect();
    let gain: Vec<f64> = h_grid.iter().map(|h| cfg.a * h * h).collect();
    Ok(NeckFit {
        n: cfg.n,
        h_grid: h_grid.to_vec(),
        slope: log_log_slope(h_grid, &max_cost),
        gain_slope: log_log_slope(h_grid, &gain),
        b: cfg.b(),
        h0: cfg.h0(),
        max_cost,
    })
}

/// `{1e−1, …, 1e−4}` with four points per decade.
pub fn default_h_grid() -> Vec<f64> {
    (0..=12).map(|k| 10f64.powf(-1.0 - k as f64 / 4.0)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct OpenedHole {
    /// `2cRⁿ − 2CR^{n−1}h`.
    pub drop: f64,
    /// `cRⁿ`, independent of `h`.
    pub guaranteed: f64,
    /// Largest `h` with `drop ≥ guaranteed`, namely `cR/(2C)`.
    pub h_limit: f64,
}

/// Area drop once the neck has opened to radius `R`.
pub fn opened_hole_drop(cfg: &NeckScalingConfig) -> Result<OpenedHole> {
    cfg.validate()?;
    let n = cfg.n as i32;
    let h_limit = cfg.c * cfg.r / (2.0 * cfg.big_c);
    let limit = match (cfg.n, cfg.h0()) {
        (2, _) => Some(h_limit),
        (_, h0) => h0.map(|h0| h0.min(h_limit)),
    };
    cfg.regime(limit)?;
    Ok(OpenedHole {
        drop: 2.0 * cfg.c * cfg.r.powi(n) - 2.0 * cfg.big_c * cfg.r.powi(n - 1) * cfg.h,
        guaranteed: cfg.c * cfg.r.powi(n),
        h_limit,
    })
}
