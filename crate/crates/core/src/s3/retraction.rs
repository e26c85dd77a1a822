use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;

use super::S3Point;
use crate::error::{Error, Result};

/// Pushes `(u, v)` away from the center of its grid square, in the square's
/// sup-norm gauge: `ρ ↦ (1−s)ρ + s·π/m`. Points on the grid lines are fixed.
pub fn retract_uv(m: usize, s: f64, q: [f64; 2]) -> Result<[f64; 2]> {
    let cell = TAU / m as f64;
    let half = PI / m as f64;
    let center = |x: f64| (x.rem_euclid(TAU) / cell).floor() * cell + half;
    let c = [center(q[0]), center(q[1])];
    let d = [q[0].rem_euclid(TAU) - c[0], q[1].rem_euclid(TAU) - c[1]];
    let rho = d[0].abs().max(d[1].abs());
    if rho == 0.0 {
        return Err(Error::Domain("the retraction is undefined at a square center".into()));
    }
    let f = ((1.0 - s) * rho + s * half) / rho;
    Ok([c[0] + f * d[0], c[1] + f * d[1]])
}

/// Grid retraction of the punctured Clifford torus onto the lines
/// `arg z, arg w ≡ 0 mod 2π/m`.
pub fn grid_retraction(m: usize, s: f64, p: &S3Point) -> Result<S3Point> {
    if (p.z.norm_sqr() - 0.5).abs() > 1e-9 || (p.w.norm_sqr() - 0.5).abs() > 1e-9 {
        return Err(Error::Domain("point is not on the Clifford torus".into()));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("retraction step {s} outside [0, 1]")));
    }
    let q = retract_uv(m, s, [p.z.arg(), p.w.arg()])?;
    Ok(S3Point { z: Complex64::from_polar(FRAC_1_SQRT_2, q[0]), w: Complex64::from_polar(FRAC_1_SQRT_2, q[1]) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::s3::GroupElement;

    fn on_torus(u: f64, v: f64) -> S3Point {
        S3Point { z: Complex64::from_polar(FRAC_1_SQRT_2, u), w: Complex64::from_polar(FRAC_1_SQRT_2, v) }
    }

    #[test]
    fn grid_points_are_fixed() {
        let m = 3;
        for s in [0.0, 0.4, 1.0] {
            let p = on_torus(0.0, 1.1);
            assert!(grid_retraction(m, s, &p).unwrap().distance(&p) < 1e-15);
            let p = on_torus(0.3, TAU / 3.0);
            assert!(grid_retraction(m, s, &p).unwrap().distance(&p) < 1e-15);
        }
    }

    #[test]
    fn outward_and_monotone() {
        let m = 2;
        let rho = 0.1;
        let mut last = rho;
        for k in 1..=10 {
            let q = retract_uv(m, k as f64 / 10.0, [PI / 2.0 + rho, PI / 2.0 + 0.5 * rho]).unwrap();
            let r = q[0] - PI / 2.0;
            assert!(r > last);
            assert!(((q[1] - PI / 2.0) / r - 0.5).abs() < 1e-12);
            last = r;
        }
        assert!((last - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn commutes_with_the_group() {
        let m = 3;
        let points = [on_torus(0.4, 2.0), on_torus(5.5, 0.9), on_torus(1.2, 3.3)];
        for g in GroupElement::all(m) {
            for p in &points {
                for s in [0.2, 0.7] {
                    let a = grid_retraction(m, s, &g.apply(p)).unwrap();
                    let b = g.apply(&grid_retraction(m, s, p).unwrap());
                    assert!(a.distance(&b) < 1e-12);
                }
            }
        }
    }
}
