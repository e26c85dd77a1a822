use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

use sweepout::fermi::{
    build_cutoff, cutoff_energy, graph_area_estimate, graph_area_exact, jacobi_lowest, two_sided_tube_family,
    EstimateConfig, NormalGraphField, TubeFamilyConfig,
};
use sweepout::mesh::build::{catenoid_patch, clifford_torus, polar_disk};
use sweepout::numeric::log_log_slope;

/// Trigonometric field on the `n × n` Clifford grid.
fn field(n: usize, c: [f64; 4]) -> Vec<f64> {
    (0..n * n)
        .map(|k| {
            let u = TAU * (k / n) as f64 / n as f64;
            let v = TAU * (k % n) as f64 / n as f64;
            c[0] + c[1] * u.cos() + c[2] * (2.0 * v).sin() + c[3] * (u + v).cos()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn second_variation_matches_jacobi_form(
        c0 in -1.0..1.0f64, c1 in -0.5..0.5f64, c2 in -0.5..0.5f64, c3 in -0.5..0.5f64,
    ) {
        let n = 48;
        let m = clifford_torus(n).unwrap();
        let h = 1e-3;
        let g = NormalGraphField::new(&m, field(n, [c0, c1, c2, c3]), h).unwrap();
        let fd = (graph_area_exact(&g).unwrap() - m.area()) / (h * h);
        let est = graph_area_estimate(&g, &EstimateConfig::default()).unwrap();
        let half_q = est.q / 2.0;
        prop_assume!(half_q.abs() > 1e-2);
        prop_assert!((fd / half_q - 1.0).abs() <= 0.02, "fd {} vs Q/2 {}", fd, half_q);
    }
}

#[test]
fn expansion_error_is_cubic_and_under_the_envelope() {
    let n = 48;
    let m = clifford_torus(n).unwrap();
    let hs = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    let mut errs = Vec::new();
    for &h in &hs {
        let g = NormalGraphField::new(&m, field(n, [0.7, 0.3, -0.4, 0.2]), h).unwrap();
        let est = graph_area_estimate(&g, &EstimateConfig::default()).unwrap();
        let err = (graph_area_exact(&g).unwrap() - est.estimate).abs();
        assert!(err <= est.envelope, "h={h}: {err} > {}", est.envelope);
        errs.push(err);
    }
    let scaled: Vec<f64> = errs.iter().zip(&hs).map(|(e, h)| e / h.powi(3)).collect();
    let (lo, hi) = scaled.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi / lo < 1.1, "{scaled:?}");
    assert!(log_log_slope(&hs, &errs) >= 2.9);
}

#[test]
fn constant_field_error_slope_on_clifford() {
    let m = clifford_torus(64).unwrap();
    let hs = [0.04, 0.02, 0.01, 0.005];
    let errs: Vec<f64> = hs
        .iter()
        .map(|&h| {
            let g = NormalGraphField::constant(&m, 1.0, h);
            let exact = graph_area_exact(&g).unwrap();
            assert!((exact - 2.0 * PI * PI * (2.0 * h).cos()).abs() < 1e-10);
            (exact - graph_area_estimate(&g, &EstimateConfig::default()).unwrap().estimate).abs()
        })
        .collect();
    assert!(log_log_slope(&hs, &errs) >= 3.0);
}

/// Lowest eigenvalue of `−f'' − (2/cosh²s)·f = λ·cosh²s·f` on `[−S, S]` with
/// `f'(±S) = 0`, by linear elements with lumped mass on `n` cells. This is
/// the rotationally symmetric Jacobi problem of the catenoid `cosh`.
fn radial_oracle(s_max: f64, n: usize) -> f64 {
    let dx = 2.0 * s_max / n as f64;
    let mut k = DMatrix::<f64>::zeros(n + 1, n + 1);
    let mut mass = vec![0.0; n + 1];
    for i in 0..n {
        k[(i, i)] += 1.0 / dx;
        k[(i + 1, i + 1)] += 1.0 / dx;
        k[(i, i + 1)] -= 1.0 / dx;
        k[(i + 1, i)] -= 1.0 / dx;
        for j in [i, i + 1] {
            let ch = (-s_max + dx * j as f64).cosh();
            k[(j, j)] -= dx / (ch * ch);
            mass[j] += 0.5 * dx * ch * ch;
        }
    }
    let a = DMatrix::from_fn(n + 1, n + 1, |i, j| k[(i, j)] / (mass[i] * mass[j]).sqrt());
    SymmetricEigen::new(a).eigenvalues.min()
}

#[test]
fn catenoid_jacobi_converges_at_second_order() {
    let s = 1.0;
    let (coarse, fine) = (radial_oracle(s, 300), radial_oracle(s, 600));
    let exact = (4.0 * fine - coarse) / 3.0;
    let err = |ns: usize| (jacobi_lowest(&catenoid_patch(1.0, s, ns, 4 * ns).unwrap()).unwrap().eigenvalue - exact).abs();
    let (e1, e2) = (err(16), err(32));
    let order = (e1 / e2).log2();
    assert!(order >= 1.8, "errors {e1:.3e}, {e2:.3e}, order {order:.3}");
    assert!(e2 < 1e-3);
}

#[test]
fn cutoff_energy_decays_like_inverse_log() {
    let radii: Vec<f64> = (0..40).map(|k| 10f64.powf(-12.0 + 12.0 * k as f64 / 39.0)).collect();
    let disk = polar_disk(1024, &radii).unwrap();
    let mut last = f64::INFINITY;
    for t in [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6] {
        let e = cutoff_energy(&disk, &build_cutoff(&disk, 0, t).unwrap());
        assert!(e < last);
        assert!((e * (-t.ln()) / TAU - 1.0).abs() < 5e-6, "t={t}: {e}");
        last = e;
    }
}

#[test]
fn tube_family_margin_scales_like_h_squared() {
    let n = 64;
    let m = clifford_torus(n).unwrap();
    let phi = vec![1.0; m.n_vertices()];
    let pair = [(n / 4) * n + 3 * n / 4, (3 * n / 4) * n + n / 4];
    let cfg = TubeFamilyConfig::default();
    let mut kappas = Vec::new();
    for h in [0.05, 0.02, 0.01] {
        let r = two_sided_tube_family(&m, &phi, &pair, h, &cfg).unwrap();
        assert!(r.summary.margin.unwrap() > 0.0);
        kappas.push(r.summary.extra["kappa"]);
    }
    // The unpunctured pair at offset h loses 2·2π²·(1 − cos 2h) ≈ 8π²h².
    assert!(kappas.iter().all(|&k| k > 0.05 && k < 8.0 * PI * PI), "{kappas:?}");
    let (lo, hi) = kappas.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi / lo < 1.2, "{kappas:?}");
}
