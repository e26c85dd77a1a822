use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;

use sweepout::fermi::{eta, expand};
use sweepout::neck::{max_neck_cost, neck_cost, optimal_neck_radius, NeckScalingConfig};
use sweepout::report::{SliceRow, SweepoutReport};
use sweepout::s3::{grid_retraction, group_orbit, retract_uv, GroupElement, S3Point};

fn point() -> impl Strategy<Value = S3Point> {
    (0.05..1.5f64, 0.0..TAU, 0.0..TAU).prop_map(|(b, a1, a2)| S3Point {
        z: Complex64::from_polar(b.cos(), a1),
        w: Complex64::from_polar(b.sin(), a2),
    })
}

fn close(a: &S3Point, b: &S3Point) -> bool {
    a.distance(b) < 1e-12
}

proptest! {
    #[test]
    fn composition_is_closed_and_matches_action(m in 2usize..6, seed in any::<u64>(), p in point()) {
        let all = GroupElement::all(m);
        let g = all[(seed % all.len() as u64) as usize];
        let h = all[((seed / 7) % all.len() as u64) as usize];
        let gh = g.compose(&h);
        prop_assert!(all.contains(&gh));
        prop_assert!(close(&gh.apply(&p), &g.apply(&h.apply(&p))));
        let v = g.matrix() * p.to_v4();
        prop_assert!((v - g.apply(&p).to_v4()).amax() < 1e-12);
    }

    #[test]
    fn orbit_size_times_isotropy_is_group_order(m in 2usize..6, p in point()) {
        let o = group_orbit(m, &p).unwrap();
        prop_assert_eq!(o.points.len() * o.isotropy, 2 * m * m);
    }

    #[test]
    fn retraction_commutes_with_the_group(
        m in 2usize..5, s in 0.0..1.0f64, u in 0.0..TAU, v in 0.0..TAU, seed in any::<u64>(),
    ) {
        let cell = TAU / m as f64;
        let off = |x: f64| ((x.rem_euclid(cell)) - cell / 2.0).abs();
        prop_assume!(off(u).max(off(v)) > 1e-6);
        let p = S3Point { z: Complex64::from_polar(FRAC_1_SQRT_2, u), w: Complex64::from_polar(FRAC_1_SQRT_2, v) };
        let all = GroupElement::all(m);
        let g = all[(seed % all.len() as u64) as usize];
        let lhs = grid_retraction(m, s, &g.apply(&p)).unwrap();
        let rhs = g.apply(&grid_retraction(m, s, &p).unwrap());
        prop_assert!(lhs.distance(&rhs) < 1e-10);
    }

    #[test]
    fn retraction_endpoints(m in 2usize..5, u in 0.0..TAU, v in 0.0..TAU) {
        let half = PI / m as f64;
        let cell = TAU / m as f64;
        let off = |x: f64| x.rem_euclid(cell) - half;
        prop_assume!(off(u).abs().max(off(v).abs()) > 1e-6);
        let q0 = retract_uv(m, 0.0, [u, v]).unwrap();
        prop_assert!((q0[0] - u.rem_euclid(TAU)).abs() < 1e-12 && (q0[1] - v.rem_euclid(TAU)).abs() < 1e-12);
        let q1 = retract_uv(m, 1.0, [u, v]).unwrap();
        // On a grid line: one coordinate is a multiple of 2π/m.
        let on_line = |x: f64| {
            let r = x.rem_euclid(cell);
            r.min(cell - r) < 1e-9
        };
        prop_assert!(on_line(q1[0]) || on_line(q1[1]));
    }

    #[test]
    fn eta_is_a_monotone_unit_cutoff(t in 1e-6..0.9f64, a in 0.0..2.0f64, b in 0.0..2.0f64) {
        let (r1, r2) = (a.min(b), a.max(b));
        let (e1, e2) = (eta(t, r1), eta(t, r2));
        prop_assert!((0.0..=1.0).contains(&e1) && (0.0..=1.0).contains(&e2));
        prop_assert!(e1 <= e2);
        prop_assert_eq!(eta(t, t * t * 0.999), 0.0);
        prop_assert_eq!(eta(t, t), 1.0);
        prop_assert!((eta(t, t.powf(1.5)) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn neck_cost_peaks_at_the_optimal_radius(n in 2u32..7, h in 1e-4..0.2f64, t in 0.0..0.5f64, c in 0.2..1.0f64) {
        let cfg = NeckScalingConfig { n, c, h, ..Default::default() };
        let t_star = optimal_neck_radius(&cfg);
        let peak = neck_cost(&cfg, t_star);
        prop_assert!(neck_cost(&cfg, t) <= peak * (1.0 + 1e-12) + 1e-300);
        prop_assert!((peak / (cfg.b() * h.powi(n as i32)) - 1.0).abs() < 1e-12);
        if let Ok(cost) = max_neck_cost(&cfg) {
            prop_assert!(cost <= 0.5 * cfg.a * h * h * (1.0 + 1e-12));
        }
    }

    #[test]
    fn det_and_inverse_coefficients_are_exact(
        g in prop::array::uniform3(-1.0..1.0f64),
        x in prop::array::uniform4(-1.0..1.0f64),
        y in prop::array::uniform4(-1.0..1.0f64),
    ) {
        let g = Matrix2::new(2.0 + g[0], g[1], g[1], 2.0 + g[2]);
        let x = Matrix2::new(x[0], x[1], x[2], x[3]);
        let y = Matrix2::new(y[0], y[1], y[2], y[3]);
        let e = expand(&g, &x, &y).unwrap();
        // det of a 2×2 matrix polynomial, coefficient by coefficient.
        let cross = |a: &Matrix2<f64>, b: &Matrix2<f64>| a[(0, 0)] * b[(1, 1)] + b[(0, 0)] * a[(1, 1)] - a[(0, 1)] * b[(1, 0)] - b[(0, 1)] * a[(1, 0)];
        let det = [g.determinant(), cross(&g, &x), cross(&g, &y) + x.determinant()];
        for k in 0..3 {
            prop_assert!((e.det[k] - det[k]).abs() < 1e-12, "k={} {} vs {}", k, e.det[k], det[k]);
        }
        let id = Matrix2::identity();
        prop_assert!((g * e.inv[0] - id).amax() < 1e-12);
        prop_assert!((g * e.inv[1] + x * e.inv[0]).amax() < 1e-12);
        prop_assert!((g * e.inv[2] + x * e.inv[1] + y * e.inv[0]).amax() < 1e-12);
    }

    #[test]
    fn report_rows_sorted_and_summary_consistent(
        rows in prop::collection::vec((0.0..1.0f64, 0.0..10.0f64), 1..40),
        budget in 0.0..12.0f64,
    ) {
        let r = SweepoutReport::new("p", rows.iter().map(|&(t, a)| SliceRow::new(t, a)).collect(), Some(budget));
        prop_assert!(r.rows.windows(2).all(|w| w[0].t <= w[1].t));
        let sup = rows.iter().map(|p| p.1).fold(f64::MIN, f64::max);
        prop_assert_eq!(r.summary.sup_area, sup);
        prop_assert_eq!(r.summary.margin, Some(budget - sup));
        prop_assert_eq!(r.summary.pass, rows.iter().all(|p| p.1 < budget));
        let argmax_area = r.rows.iter().find(|row| row.t == r.summary.argmax_t).unwrap().area;
        prop_assert_eq!(argmax_area, sup);
    }
}
