//! Command-line front end. [`run`] returns the process exit code: 0 when
//! every check passes, 2 when a verification fails, 1 on usage or
//! configuration errors.

use std::f64::consts::{FRAC_PI_4, PI};
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catenoid::{
    asymptotic_ratio_scan, critical_ratio, estimate_bound, geometric_grid, halving_grid, solve_parameters,
    CatenoidSpec,
};
use crate::error::{Error, Result};
use crate::fermi::{
    build_cutoff, cutoff_energy, graph_area_estimate, graph_area_exact, jacobi_lowest, perimeter_constant,
    two_sided_tube_family, EstimateConfig, NormalGraphField, TubeFamilyConfig,
};
use crate::mesh::build::{clifford_torus, collared_torus, polar_disk, HoleCollar};
use crate::mesh::io::{stereographic, write_soup};
use crate::mesh::Ambient;
use crate::neck::{default_h_grid, fit_neck_exponent, neck_cost_curve, opened_hole_drop, NeckScalingConfig};
use crate::numeric::log_log_slope;
use crate::report::{config_hash, fmt_float, to_json, write_atomic, SweepoutReport};
use crate::revolution::{excess_scaling_comparison, initial_path, mountain_pass_width, DescentConfig};
use crate::s3::{assemble_doubled_sweepout, doubled_slice, DoublingConfig, NeckSchedule, Stage};
use crate::verify::{run_criterion, CRITERIA};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

/// Size of the worker pool; unset means one thread per core.
pub const THREADS_ENV: &str = "SWEEPOUT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "sweepout", version, about = "Min-max sweepout numerics: catenoids, cutoff families, the doubled Clifford torus")]
struct Cli {
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write the report rows as CSV to this file.
    #[arg(long, global = true, value_name = "PATH")]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Catenoids spanning two coaxial circles.
    #[command(subcommand)]
    Catenoid(CatenoidCmd),
    /// Mountain-pass width of surfaces of revolution.
    Width(WidthArgs),
    /// Normal graphs, Jacobi operator and tube families over the Clifford torus.
    #[command(subcommand)]
    Fermi(FermiCmd),
    /// Dirichlet energy of the logarithmic cutoff.
    Cutoff(CutoffArgs),
    /// The doubled Clifford torus sweepout in S³.
    #[command(subcommand)]
    Doubling(DoublingCmd),
    /// Neck cost against second-variation gain.
    #[command(subcommand)]
    Neck(NeckCmd),
    /// Run every acceptance check and print one line per check.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CatenoidCmd {
    /// Both catenoid parameters and areas.
    Solve {
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long)]
        h: f64,
    },
    /// Excess over two disks against the estimate on a grid of separations.
    Scan {
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 0.1)]
        h_max: f64,
        #[arg(long, default_value_t = 1e-6)]
        h_min: f64,
        /// Log-spaced points; without it the grid halves from h-max.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Naive hole-cutting excess against the catenoid excess.
    Compare {
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 1e-2)]
        h_max: f64,
        #[arg(long, default_value_t = 1e-7)]
        h_min: f64,
        #[arg(long, default_value_t = 6)]
        points: usize,
    },
}

#[derive(Debug, Args, Serialize)]
struct WidthArgs {
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long)]
    h: f64,
    #[arg(long, default_value_t = 41)]
    slices: usize,
    #[arg(long, default_value_t = 201)]
    nodes: usize,
    /// Largest accepted relative gap to the unstable catenoid area.
    #[arg(long, default_value_t = 5e-3)]
    tol: f64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FermiCmd {
    /// Exact parallel-surface area against the second-order expansion, φ ≡ 1.
    Expansion {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.04,0.02,0.01,0.005")]
        h: Vec<f64>,
    },
    /// Lowest eigenvalue of the Jacobi operator.
    Jacobi {
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// Relative tolerance against −4.
        #[arg(long, default_value_t = 0.02)]
        tol: f64,
    },
    /// Two-sided tube family with one antipodal puncture pair.
    Tube {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        h: f64,
        /// Smallest accepted margin/h².
        #[arg(long, default_value_t = 0.05)]
        min_kappa: f64,
    },
}

#[derive(Debug, Args, Serialize)]
struct CutoffArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.001")]
    t: Vec<f64>,
    #[arg(long, default_value_t = 4096)]
    sectors: usize,
    #[arg(long, default_value_t = 40)]
    rings: usize,
    /// Relative tolerance of the flat-disk energy.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Cutoff radius for the Clifford-torus bound.
    #[arg(long, default_value_t = 0.05)]
    torus_t: f64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum DoublingCmd {
    /// Every slice of the sweepout and the area margin below 4π².
    Sweep(DoublingArgs),
    /// Write one slice as a mesh file.
    Export {
        #[command(flatten)]
        base: DoublingArgs,
        #[arg(long, value_enum)]
        stage: StageArg,
        /// `t` for necks and cutoff, `s ∈ [0, 1]` for the retraction.
        #[arg(long)]
        param: f64,
        #[arg(long, value_name = "PATH")]
        mesh: PathBuf,
        /// Project into R³ from (0, 0, 0, 1).
        #[arg(long)]
        stereographic: bool,
    },
}

#[derive(Debug, Args, Serialize)]
struct DoublingArgs {
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 0.02)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Torus grid size, a multiple of 2m.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value_t = 6)]
    cutoff_steps: usize,
    #[arg(long, default_value_t = 5)]
    retraction_steps: usize,
    #[arg(long, default_value_t = 32)]
    n_beta: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StageArg {
    Necks,
    Cutoff,
    Retraction,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum NeckCmd {
    /// Exponent of the maximal neck cost in h.
    Fit(NeckArgs),
    /// Neck cost as a function of the radius.
    Curve {
        #[command(flatten)]
        base: NeckArgs,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Area drop once the neck has opened to radius R.
    Hole {
        #[command(flatten)]
        base: NeckArgs,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        #[arg(long = "big-r", default_value_t = 0.1)]
        big_r: f64,
    },
}

#[derive(Debug, Args, Serialize)]
struct NeckArgs {
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long = "big-c", default_value_t = 1.0)]
    big_c: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
}

impl NeckArgs {
    fn config(&self, h: f64, r: f64) -> NeckScalingConfig {
        NeckScalingConfig { n: self.n, c: self.c, big_c: self.big_c, a: self.a, h, r }
    }
}

#[derive(Debug, Args, Serialize)]
struct VerifyArgs {
    /// Run only these checks.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u32>,
}

struct Outcome {
    pass: bool,
    json: String,
    text: String,
    csv: String,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    config_hash: &'a str,
    config: &'a Command,
    pass: bool,
    result: &'a T,
}

fn outcome<T: Serialize>(cmd: &Command, result: &T, pass: bool, text: String, csv: String) -> Outcome {
    let hash = config_hash(cmd);
    let json = to_json(&Envelope { command: name(cmd), config_hash: &hash, config: cmd, pass, result });
    Outcome { pass, json, text, csv }
}

fn report_outcome(cmd: &Command, mut report: SweepoutReport, pass: bool, text: String) -> Outcome {
    report.meta.config_hash = config_hash(cmd);
    let csv = report.to_csv();
    outcome(cmd, &report, pass, text, csv)
}

fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Catenoid(CatenoidCmd::Solve { .. }) => "catenoid solve",
        Command::Catenoid(CatenoidCmd::Scan { .. }) => "catenoid scan",
        Command::Catenoid(CatenoidCmd::Compare { .. }) => "catenoid compare",
        Command::Width(_) => "width",
        Command::Fermi(FermiCmd::Expansion { .. }) => "fermi expansion",
        Command::Fermi(FermiCmd::Jacobi { .. }) => "fermi jacobi",
        Command::Fermi(FermiCmd::Tube { .. }) => "fermi tube",
        Command::Cutoff(_) => "cutoff",
        Command::Doubling(DoublingCmd::Sweep(_)) => "doubling sweep",
        Command::Doubling(DoublingCmd::Export { .. }) => "doubling export",
        Command::Neck(NeckCmd::Fit(_)) => "neck fit",
        Command::Neck(NeckCmd::Curve { .. }) => "neck curve",
        Command::Neck(NeckCmd::Hole { .. }) => "neck hole",
        Command::VerifyAll(_) => "verify-all",
    }
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn f(x: f64) -> String {
    fmt_float(x)
}

fn doubling_config(a: &DoublingArgs) -> Result<DoublingConfig> {
    let schedule = NeckSchedule::new(a.epsilon, a.delta)?;
    let mut t_grid: Vec<f64> = DoublingConfig::new(a.m).t_grid.into_iter().filter(|&t| t < schedule.closing()).collect();
    t_grid.push(schedule.closing());
    Ok(DoublingConfig {
        n: a.grid,
        schedule,
        t_grid,
        cutoff_steps: a.cutoff_steps,
        retraction_steps: a.retraction_steps,
        n_beta: a.n_beta,
        ..DoublingConfig::new(a.m)
    })
}

fn catenoid(cmd: &Command, c: &CatenoidCmd) -> Result<Outcome> {
    match *c {
        CatenoidCmd::Solve { r, h } => {
            #[derive(Serialize)]
            struct Solved {
                c_unstable: f64,
                c_stable: f64,
                area_unstable: f64,
                area_stable: f64,
                excess_unstable: f64,
                estimate_bound: Option<f64>,
                critical_ratio: f64,
            }
            let sol = solve_parameters(CatenoidSpec::new(r, h)?)?;
            let res = Solved {
                c_unstable: sol.c_unstable,
                c_stable: sol.c_stable,
                area_unstable: sol.area_unstable,
                area_stable: sol.area_stable,
                excess_unstable: sol.excess_unstable(),
                estimate_bound: estimate_bound(r, h).ok(),
                critical_ratio: critical_ratio(),
            };
            let text = format!(
                "c_unstable = {:.12}  area {:.12}\nc_stable   = {:.12}  area {:.12}",
                res.c_unstable, res.area_unstable, res.c_stable, res.area_stable
            );
            let csv = csv_table(
                &["r", "h", "c_unstable", "c_stable", "area_unstable", "area_stable"],
                [vec![f(r), f(h), f(res.c_unstable), f(res.c_stable), f(res.area_unstable), f(res.area_stable)]],
            );
            Ok(outcome(cmd, &res, true, text, csv))
        }
        CatenoidCmd::Scan { r, h_max, h_min, points } => {
            let grid = match points {
                Some(k) if k >= 2 => geometric_grid(h_max, h_min, k),
                Some(_) => return Err(Error::Config("--points needs at least 2".into())),
                None => halving_grid(h_max, h_min),
            };
            let scan = asymptotic_ratio_scan(r, &grid)?;
            let pass = scan.empirical_h0.is_some();
            let mut text = String::from("h            excess/bound  c·(-log h)/h\n");
            for row in &scan.rows {
                text.push_str(&format!("{:<12.4e} {:<13.6} {:.6}\n", row.h, row.excess / row.bound_excess, row.asymptotic_ratio));
            }
            text.push_str(&format!("bound holds for h <= {:?}", scan.empirical_h0));
            let csv = csv_table(
                &["h", "c_unstable", "excess", "bound_excess", "asymptotic_ratio", "bound_holds"],
                scan.rows.iter().map(|r| {
                    vec![f(r.h), f(r.c_unstable), f(r.excess), f(r.bound_excess), f(r.asymptotic_ratio), r.bound_holds.to_string()]
                }),
            );
            Ok(outcome(cmd, &scan, pass, text, csv))
        }
        CatenoidCmd::Compare { r, h_max, h_min, points } => {
            if points < 2 {
                return Err(Error::Config("--points needs at least 2".into()));
            }
            let cmp = excess_scaling_comparison(r, &geometric_grid(h_max, h_min, points))?;
            let pass = (cmp.slope - 1.0).abs() <= 0.25;
            let text = format!("slope of log(naive/optimal) against log(-log h): {:.4}", cmp.slope);
            let csv = csv_table(
                &["h", "naive_excess", "optimal_excess", "ratio"],
                cmp.rows.iter().map(|r| vec![f(r.h), f(r.naive_excess), f(r.optimal_excess), f(r.ratio)]),
            );
            Ok(outcome(cmd, &cmp, pass, text, csv))
        }
    }
}

fn width(cmd: &Command, a: &WidthArgs) -> Result<Outcome> {
    #[derive(Serialize)]
    struct Width<'a> {
        width: &'a crate::revolution::WidthResult,
        unstable_area: f64,
        relative_gap: f64,
    }
    let cfg = DescentConfig { slices: a.slices, nodes: a.nodes, ..Default::default() };
    let exact = solve_parameters(CatenoidSpec::new(a.r, a.h)?)?.area_unstable;
    let res = mountain_pass_width(a.r, a.h, &initial_path(a.r, a.h, &cfg)?, &cfg)?;
    let gap = (res.width - exact).abs() / exact;
    let text = format!("width {:.10}, unstable catenoid {:.10}, relative gap {:.2e}", res.width, exact, gap);
    let p = &res.profile_at_max;
    let csv = csv_table(&["x", "radius"], p.x_nodes().iter().zip(&p.f).map(|(x, y)| vec![f(*x), f(*y)]));
    let out = Width { width: &res, unstable_area: exact, relative_gap: gap };
    Ok(outcome(cmd, &out, gap <= a.tol, text, csv))
}

fn fermi(cmd: &Command, c: &FermiCmd) -> Result<Outcome> {
    match c {
        FermiCmd::Expansion { n, h } => {
            #[derive(Serialize)]
            struct Row {
                h: f64,
                exact: f64,
                closed_form: f64,
                estimate: f64,
                error: f64,
            }
            #[derive(Serialize)]
            struct Expansion {
                base_area: f64,
                q: f64,
                rows: Vec<Row>,
                error_slope: f64,
            }
            if h.len() < 2 {
                return Err(Error::Config("--h needs at least two values".into()));
            }
            let m = clifford_torus(*n)?;
            let mut rows = Vec::new();
            let mut q = f64::NAN;
            for &s in h {
                let g = NormalGraphField::constant(&m, 1.0, s);
                let exact = graph_area_exact(&g)?;
                let est = graph_area_estimate(&g, &EstimateConfig::default())?;
                q = est.q;
                rows.push(Row {
                    h: s,
                    exact,
                    closed_form: 2.0 * PI * PI * (2.0 * s).cos(),
                    estimate: est.estimate,
                    error: (exact - est.estimate).abs(),
                });
            }
            let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
            let es: Vec<f64> = rows.iter().map(|r| r.error).collect();
            let slope = log_log_slope(&hs, &es);
            let text = format!("Q(1) = {q:.10} (−8π² = {:.10}), error slope {slope:.3}", -8.0 * PI * PI);
            let csv = csv_table(
                &["h", "exact", "closed_form", "estimate", "error"],
                rows.iter().map(|r| vec![f(r.h), f(r.exact), f(r.closed_form), f(r.estimate), f(r.error)]),
            );
            let res = Expansion { base_area: m.area(), q, rows, error_slope: slope };
            Ok(outcome(cmd, &res, slope >= 3.0, text, csv))
        }
        FermiCmd::Jacobi { n, tol } => {
            #[derive(Serialize)]
            struct Spectrum {
                vertices: usize,
                eigenvalue: f64,
                error: f64,
                shift: f64,
                iterations: usize,
            }
            let mesh = clifford_torus(*n)?;
            let d = jacobi_lowest(&mesh)?;
            let res = Spectrum {
                vertices: mesh.n_vertices(),
                eigenvalue: d.eigenvalue,
                error: (d.eigenvalue + 4.0).abs(),
                shift: d.shift,
                iterations: d.iterations,
            };
            let text = format!("lowest eigenvalue {:.12} after {} iterations", res.eigenvalue, res.iterations);
            let csv = csv_table(&["vertices", "eigenvalue", "error"], [vec![res.vertices.to_string(), f(res.eigenvalue), f(res.error)]]);
            Ok(outcome(cmd, &res, res.error <= tol * 4.0, text, csv))
        }
        FermiCmd::Tube { n, h, min_kappa } => {
            let m = clifford_torus(*n)?;
            let phi = vec![1.0; m.n_vertices()];
            let pair = [(n / 4) * n + 3 * n / 4, (3 * n / 4) * n + n / 4];
            let report = two_sided_tube_family(&m, &phi, &pair, *h, &TubeFamilyConfig { n: *n, ..Default::default() })?;
            let kappa = report.summary.extra["kappa"];
            let pass = report.summary.pass && kappa >= *min_kappa;
            let text = format!(
                "sup area {:.8} at t = {}, budget {:.8}, margin/h² = {kappa:.4}",
                report.summary.sup_area,
                report.summary.argmax_t,
                4.0 * PI * PI
            );
            Ok(report_outcome(cmd, report, pass, text))
        }
    }
}

fn cutoff(cmd: &Command, a: &CutoffArgs) -> Result<Outcome> {
    #[derive(Serialize)]
    struct DiskRow {
        t: f64,
        energy: f64,
        exact: f64,
        relative_error: f64,
    }
    #[derive(Serialize)]
    struct Cutoff {
        disk: Vec<DiskRow>,
        torus_t: f64,
        torus_energy: f64,
        perimeter_constant: f64,
        torus_bound: f64,
    }
    if a.rings < 2 || a.t.iter().chain([&a.torus_t]).any(|t| !(*t > 0.0 && *t < 1.0)) {
        return Err(Error::Config("need at least 2 rings and cutoff radii in (0, 1)".into()));
    }
    let k = a.rings - 1;
    let radii: Vec<f64> = (0..a.rings).map(|j| 10f64.powf(-8.0 + 8.0 * j as f64 / k as f64)).collect();
    let disk = polar_disk(a.sectors, &radii)?;
    let mut rows = Vec::new();
    for &t in &a.t {
        let energy = cutoff_energy(&disk, &build_cutoff(&disk, 0, t)?);
        let exact = 2.0 * PI / (-t.ln());
        rows.push(DiskRow { t, energy, exact, relative_error: (energy / exact - 1.0).abs() });
    }
    let step = 1.25f64;
    let n_r = ((0.45f64 / 1e-4).ln() / step.ln()).ceil() as usize;
    let collar: Vec<f64> = (0..=n_r).map(|j| 1e-4 * (0.45f64 / 1e-4).powf(j as f64 / n_r as f64)).collect();
    let torus = collared_torus(FRAC_PI_4, 64, &[HoleCollar::circle((32, 32), &collar, 4, true)])?;
    let center = torus.centers[0].ok_or_else(|| Error::Config("collar has no center vertex".into()))?;
    let c = build_cutoff(&torus.mesh, center, a.torus_t)?;
    let torus_energy = cutoff_energy(&torus.mesh, &c);
    let d = perimeter_constant(&torus.mesh, &c, 64);
    let res = Cutoff {
        torus_bound: d / (-a.torus_t.ln()),
        disk: rows,
        torus_t: a.torus_t,
        torus_energy,
        perimeter_constant: d,
    };
    let pass = res.disk.iter().all(|r| r.relative_error <= a.tol) && res.torus_energy <= res.torus_bound;
    let mut text = String::new();
    for r in &res.disk {
        text.push_str(&format!("disk t = {:e}: energy {:.10}, 2π/(-log t) {:.10}, rel {:.1e}\n", r.t, r.energy, r.exact, r.relative_error));
    }
    text.push_str(&format!("torus t = {}: energy {:.6} <= D/(-log t) = {:.6}", res.torus_t, res.torus_energy, res.torus_bound));
    let csv = csv_table(
        &["t", "energy", "exact", "relative_error"],
        res.disk.iter().map(|r| vec![f(r.t), f(r.energy), f(r.exact), f(r.relative_error)]),
    );
    Ok(outcome(cmd, &res, pass, text, csv))
}

fn doubling(cmd: &Command, c: &DoublingCmd) -> Result<Outcome> {
    match c {
        DoublingCmd::Sweep(a) => {
            let (report, _) = assemble_doubled_sweepout(&doubling_config(a)?)?;
            let ex = &report.summary.extra;
            let pass = report.summary.pass && ex["all_euler_ok"] == 1.0 && ex["all_equivariant"] == 1.0;
            let text = format!(
                "{} slices, sup area {:.8} at sigma = {}, margin {:.6} ({:.3}% of 4π²)",
                report.rows.len(),
                report.summary.sup_area,
                report.summary.argmax_t,
                report.summary.margin.unwrap_or(f64::NAN),
                100.0 * ex["margin_fraction"]
            );
            Ok(report_outcome(cmd, report, pass, text))
        }
        DoublingCmd::Export { base, stage, param, mesh, stereographic: project } => {
            #[derive(Serialize)]
            struct Exported<'a> {
                sigma: f64,
                area: f64,
                vertices: usize,
                triangles: usize,
                euler: Option<i64>,
                equivariant: Option<bool>,
                components: &'a std::collections::BTreeMap<String, f64>,
            }
            let stage = match stage {
                StageArg::Necks => Stage::Necks,
                StageArg::Cutoff => Stage::Cutoff,
                StageArg::Retraction => Stage::Retraction,
            };
            let s = doubled_slice(&doubling_config(base)?, stage, *param)?;
            if *project {
                write_soup(mesh, Ambient::EuclideanR3, &stereographic(&s.soup))?;
            } else {
                write_soup(mesh, Ambient::RoundS3, &s.soup)?;
            }
            let res = Exported {
                sigma: s.sigma,
                area: s.area,
                vertices: s.soup.vertices.len(),
                triangles: s.soup.triangles.len(),
                euler: s.euler,
                equivariant: s.equivariant,
                components: &s.components,
            };
            let text = format!(
                "wrote {} ({} vertices, {} triangles), area {:.8}, χ = {:?}",
                mesh.display(),
                res.vertices,
                res.triangles,
                res.area,
                res.euler
            );
            let csv = csv_table(&["sigma", "area"], [vec![f(res.sigma), f(res.area)]]);
            Ok(outcome(cmd, &res, true, text, csv))
        }
    }
}

fn neck(cmd: &Command, c: &NeckCmd) -> Result<Outcome> {
    match c {
        NeckCmd::Fit(a) => {
            let fit = fit_neck_exponent(&a.config(0.01, 0.1), &default_h_grid())?;
            let pass = (fit.slope - a.n as f64).abs() <= 0.01;
            let text = format!("n = {}: slope {:.6}, B = {:.6}, h0 = {:?}", fit.n, fit.slope, fit.b, fit.h0);
            let csv = csv_table(&["h", "max_cost"], fit.h_grid.iter().zip(&fit.max_cost).map(|(h, c)| vec![f(*h), f(*c)]));
            Ok(outcome(cmd, &fit, pass, text, csv))
        }
        NeckCmd::Curve { base, h, points } => {
            if *points < 2 {
                return Err(Error::Config("--points needs at least 2".into()));
            }
            let curve = neck_cost_curve(&base.config(*h, 0.1), *points)?;
            let text = format!("t* = {:.8}, max cost {:.6e}", curve.t_star, curve.max_cost);
            let csv = csv_table(&["t", "cost"], curve.t_grid.iter().zip(&curve.cost).map(|(t, c)| vec![f(*t), f(*c)]));
            Ok(outcome(cmd, &curve, true, text, csv))
        }
        NeckCmd::Hole { base, h, big_r } => {
            let hole = opened_hole_drop(&base.config(*h, *big_r))?;
            let pass = hole.drop >= hole.guaranteed;
            let text = format!("drop {:.6e} >= c·R^n = {:.6e} for h <= {:.6e}", hole.drop, hole.guaranteed, hole.h_limit);
            let csv = csv_table(&["drop", "guaranteed", "h_limit"], [vec![f(hole.drop), f(hole.guaranteed), f(hole.h_limit)]]);
            Ok(outcome(cmd, &hole, pass, text, csv))
        }
    }
}

fn verify_all(cmd: &Command, a: &VerifyArgs) -> Result<Outcome> {
    if let Some(bad) = a.only.iter().find(|id| !CRITERIA.iter().any(|c| c.0 == **id)) {
        return Err(Error::Config(format!("no check with id {bad}")));
    }
    let results: Vec<_> = CRITERIA
        .iter()
        .filter(|c| a.only.is_empty() || a.only.contains(&c.0))
        .map(|c| run_criterion(c.0))
        .collect();
    let pass = results.iter().all(|r| r.pass);
    let passed = results.iter().filter(|r| r.pass).count();
    let mut text: Vec<String> = results.iter().map(|r| r.line()).collect();
    text.push(format!("{passed}/{} passed", results.len()));
    let csv = csv_table(
        &["id", "name", "pass", "seconds"],
        results.iter().map(|r| vec![r.id.to_string(), r.name.to_string(), r.pass.to_string(), f(r.seconds)]),
    );
    // Timings are wall-clock; the hashed report stays reproducible only in
    // the config part.
    Ok(outcome(cmd, &results, pass, text.join("\n"), csv))
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Catenoid(c) => catenoid(cmd, c),
        Command::Width(a) => width(cmd, a),
        Command::Fermi(c) => fermi(cmd, c),
        Command::Cutoff(a) => cutoff(cmd, a),
        Command::Doubling(c) => doubling(cmd, c),
        Command::Neck(c) => neck(cmd, c),
        Command::VerifyAll(a) => verify_all(cmd, a),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetViolated { .. } | Error::NonConvergence { .. } | Error::SolverFailure(_) | Error::NotMinimal { .. } => {
            EXIT_FAIL
        }
        _ => EXIT_USAGE,
    }
}

fn init_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV} must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err(format!("{THREADS_ENV} must be positive"));
    }
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `argv` (program name first), runs the command and writes its
/// reports. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    let out = match dispatch(&cli.command) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    for (path, contents) in [(&cli.out, &out.json), (&cli.csv, &out.csv)] {
        if let Some(p) = path {
            if let Err(e) = write_atomic(p, contents) {
                eprintln!("error: writing {}: {e}", p.display());
                return EXIT_USAGE;
            }
        }
    }
    if cli.json {
        print!("{}", out.json);
    } else {
        println!("{}", out.text);
        println!("{}", if out.pass { "PASS" } else { "FAIL" });
    }
    if out.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
