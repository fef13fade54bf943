//! Scenario execution: builds the FE system from a configuration, runs the
//! load program, and writes the artifact bundle (mesh, trajectory CSV,
//! optional contact-field CSV, SVG plots, deformed snapshots). Also hosts the
//! traction-law tabulation behind the `laws` command and the
//! simulation-vs-experiment comparison.

use crate::analytics::ExperimentSeries;
use crate::capmesh::generate_cap_mesh;
use crate::config::ScenarioConfig;
use crate::contact::{ContactParams, PointEval};
use crate::fem::program::{run_load_program, RunOutcome, StepRecord};
use crate::fem::{ContactConfig, FemError, State, System};
use crate::material::neo_hooke_stress_tangent;
use crate::mesh::Mesh;
use crate::svg::{mesh_snapshot, LinePlot, Series};
use crate::traction::{
    derived_constants, normal_traction, normal_traction_derivative, normal_traction_reg,
    t_slide_di, t_slide_ea, AdhesionParams, DiLaw, EaLaw, RegularizationConfig,
};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Fem(#[from] FemError),
    #[error(transparent)]
    CapMesh(#[from] crate::capmesh::CapMeshError),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn write_file(path: &Path, contents: &str) -> Result<(), ScenarioError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|source| ScenarioError::Io {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Sliding onset: the first slide-phase step at which no stuck point remains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnsetPoint {
    pub step: usize,
    pub u_bar: f64,
    pub f_t: f64,
    pub area: f64,
}

/// Detects the onset of full sliding from the recorded trajectory.
pub fn detect_onset(records: &[StepRecord]) -> Option<OnsetPoint> {
    let mut was_sticking = false;
    for r in records {
        if r.u_bar > 0.0 {
            if r.stick_fraction > 0.0 {
                was_sticking = true;
            } else if was_sticking {
                return Some(OnsetPoint {
                    step: r.step,
                    u_bar: r.u_bar,
                    f_t: r.f_t,
                    area: r.contact_area,
                });
            }
        }
    }
    None
}

/// Mean tangential force over the post-onset plateau (skipping a couple of
/// transition steps).
pub fn plateau_mean_ft(records: &[StepRecord], onset: &OnsetPoint) -> Option<f64> {
    let post: Vec<f64> = records
        .iter()
        .filter(|r| r.step > onset.step + 2)
        .map(|r| r.f_t)
        .collect();
    if post.is_empty() {
        None
    } else {
        Some(post.iter().sum::<f64>() / post.len() as f64)
    }
}

pub struct RunSummary {
    pub outcome: RunOutcome,
    pub onset: Option<OnsetPoint>,
    pub plateau_f_t: Option<f64>,
}

/// Builds the FE system of the cap scenario.
pub fn build_system(cfg: &ScenarioConfig, threads: usize) -> Result<System, ScenarioError> {
    let mesh = generate_cap_mesh(&cfg.geometry, cfg.mesh_density)?;
    let facets = mesh.boundary_facets("contact").map_err(FemError::Mesh)?;
    let dirichlet = System::clamp_set(&mesh, "base").map_err(FemError::Mesh)?;
    let params = ContactParams::new(cfg.adhesion, cfg.law, cfg.reg);
    let mut system = System::new(mesh, cfg.material, Some(ContactConfig { params, facets }), dirichlet)?;
    system.thickness = cfg.thickness;
    system.threads = threads.max(1);
    Ok(system)
}

/// Spec columns of the trajectory CSV.
pub const TRAJECTORY_HEADER: &str =
    "step, u_bar, F_n, F_t, contact_area, stick_fraction, newton_iters";

pub fn trajectory_csv(records: &[StepRecord]) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{}, {:.9e}, {:.9e}, {:.9e}, {:.9e}, {:.9e}, {}",
            r.step, r.u_bar, r.f_n, r.f_t, r.contact_area, r.stick_fraction, r.newton_iters
        );
    }
    out
}

/// Minimal reader for the trajectory CSV (used by `compare`).
pub fn parse_trajectory_csv(text: &str) -> Result<Vec<TrajectoryRow>, String> {
    let mut rows = Vec::new();
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == TRAJECTORY_HEADER => {}
        other => return Err(format!("unexpected trajectory header {other:?}")),
    }
    for (i, l) in lines.enumerate() {
        if l.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = l.split(',').map(str::trim).collect();
        if cols.len() != 7 {
            return Err(format!("line {}: expected 7 columns", i + 2));
        }
        let f = |s: &str| -> Result<f64, String> {
            s.parse().map_err(|_| format!("line {}: bad number `{s}`", i + 2))
        };
        rows.push(TrajectoryRow {
            step: cols[0].parse().map_err(|_| format!("line {}: bad step", i + 2))?,
            u_bar: f(cols[1])?,
            f_n: f(cols[2])?,
            f_t: f(cols[3])?,
            contact_area: f(cols[4])?,
            stick_fraction: f(cols[5])?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy)]
pub struct TrajectoryRow {
    pub step: usize,
    pub u_bar: f64,
    pub f_n: f64,
    pub f_t: f64,
    pub contact_area: f64,
    pub stick_fraction: f64,
}

const CONTACT_FIELD_HEADER: &str = "step, point_id, x, g_n, t_n, t_t, threshold, regime";

fn contact_field_rows(out: &mut String, step: usize, evals: &[PointEval]) {
    for (i, e) in evals.iter().enumerate() {
        let _ = writeln!(
            out,
            "{step}, {i}, {:.9e}, {:.9e}, {:.9e}, {:.9e}, {:.9e}, {}",
            e.x,
            e.g_n,
            e.t_n,
            e.t_t,
            e.threshold,
            e.regime.as_str()
        );
    }
}

/// Mean first invariant of the Cauchy stress per element (in units of the
/// modulus), for coloring snapshots.
pub fn element_stress_i1(system: &System, state: &State) -> Vec<f64> {
    let mesh = &system.mesh;
    let mut out = vec![0.0; mesh.n_elements()];
    const G: f64 = 0.577_350_269_189_625_8;
    for (e, quad) in mesh.quads.iter().enumerate() {
        let x: Vec<[f64; 2]> = quad.iter().map(|&n| mesh.coords[n]).collect();
        let ue: Vec<[f64; 2]> = quad
            .iter()
            .map(|&n| [state.u[2 * n], state.u[2 * n + 1]])
            .collect();
        let mut acc = 0.0;
        for &(xi, eta) in &[(-G, -G), (G, -G), (G, G), (-G, G)] {
            let corner_xi = [-1.0, 1.0, 1.0, -1.0];
            let corner_eta = [-1.0, -1.0, 1.0, 1.0];
            let mut dn = [[0.0; 2]; 4];
            for a in 0..4 {
                dn[a][0] = 0.25 * corner_xi[a] * (1.0 + corner_eta[a] * eta);
                dn[a][1] = 0.25 * corner_eta[a] * (1.0 + corner_xi[a] * xi);
            }
            let mut jac = [[0.0; 2]; 2];
            for a in 0..4 {
                for i in 0..2 {
                    for j in 0..2 {
                        jac[i][j] += x[a][i] * dn[a][j];
                    }
                }
            }
            let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            let inv = [
                [jac[1][1] / det, -jac[0][1] / det],
                [-jac[1][0] / det, jac[0][0] / det],
            ];
            let mut f = [[1.0, 0.0], [0.0, 1.0]];
            for a in 0..4 {
                let g = [
                    dn[a][0] * inv[0][0] + dn[a][1] * inv[1][0],
                    dn[a][0] * inv[0][1] + dn[a][1] * inv[1][1],
                ];
                for i in 0..2 {
                    f[i][0] += ue[a][i] * g[0];
                    f[i][1] += ue[a][i] * g[1];
                }
            }
            if let Ok(st) = neo_hooke_stress_tangent(&f, &system.material) {
                acc += st.cauchy[0][0] + st.cauchy[1][1] + st.cauchy_zz;
            }
        }
        out[e] = acc / 4.0 / system.material.youngs_modulus;
    }
    out
}

/// Runs a scenario and writes its artifact bundle into `out_dir`.
///
/// On solver failure the partial bundle is still written and the summary
/// reports the failure; the caller decides the exit status.
pub fn run_scenario(
    cfg: &ScenarioConfig,
    threads: usize,
    out_dir: &Path,
) -> Result<RunSummary, ScenarioError> {
    let system = build_system(cfg, threads)?;
    write_file(&out_dir.join("mesh.txt"), &system.mesh.write())?;

    let mut field_csv = if cfg.output.contact_field {
        Some(String::from(CONTACT_FIELD_HEADER) + "\n")
    } else {
        None
    };
    let mut snapshots: Vec<f64> = cfg.output.snapshots.clone();
    snapshots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut next_snapshot = 0usize;
    let mut snapshot_files: Vec<(String, String)> = Vec::new();

    let field_stride = cfg.output.field_stride;
    let view_half = 0.45 * cfg.geometry.half_width();
    let (state, _history, outcome) = run_load_program(
        &system,
        &cfg.program,
        &cfg.solver,
        |state, record, evals| {
            if let Some(csv) = field_csv.as_mut() {
                if record.step % field_stride == 0 {
                    contact_field_rows(csv, record.step, evals);
                }
            }
            while next_snapshot < snapshots.len()
                && record.u_bar + 1e-12 >= snapshots[next_snapshot]
            {
                let target = snapshots[next_snapshot];
                let i1 = element_stress_i1(&system, state);
                let svg = mesh_snapshot(
                    &system.mesh,
                    &state.u,
                    state.plate_height,
                    &i1,
                    [-view_half, view_half, state.plate_height - 0.1, 3.0],
                    cfg.output.snapshot_stretch,
                    &format!("sliding offset u = {target}"),
                );
                snapshot_files.push((format!("snapshot_u{target}.svg"), svg));
                next_snapshot += 1;
            }
        },
    );

    write_file(&out_dir.join("trajectory.csv"), &trajectory_csv(&outcome.records))?;
    if let Some(csv) = field_csv {
        write_file(&out_dir.join("contact_field.csv"), &csv)?;
    }
    for (name, svg) in snapshot_files {
        write_file(&out_dir.join(name), &svg)?;
    }

    let onset = detect_onset(&outcome.records);
    let plateau_f_t = onset.and_then(|o| plateau_mean_ft(&outcome.records, &o));

    // force and area curves over the sliding phase
    let slide: Vec<&StepRecord> = outcome.records.iter().filter(|r| r.u_bar > 0.0).collect();
    let mut ft_plot = LinePlot::new("friction force", "u / L0", "F_t / (E L0 W)");
    ft_plot.series.push(Series::new(
        "F_t",
        slide.iter().map(|r| (r.u_bar, r.f_t)).collect(),
    ));
    let mut area_plot = LinePlot::new("contact area", "u / L0", "A / (L0 W)");
    area_plot.series.push(Series::new(
        "area",
        slide.iter().map(|r| (r.u_bar, r.contact_area)).collect(),
    ));
    let mut af_plot = LinePlot::new("area vs friction force", "F_t / (E L0 W)", "A / (L0 W)");
    let up_to_onset: Vec<(f64, f64)> = slide
        .iter()
        .take_while(|r| onset.is_none_or(|o| r.step <= o.step))
        .map(|r| (r.f_t, r.contact_area))
        .collect();
    af_plot.series.push(Series::new("onset path", up_to_onset));
    if let Some(o) = onset {
        ft_plot.markers.push((o.u_bar, o.f_t));
        area_plot.markers.push((o.u_bar, o.area));
        af_plot.markers.push((o.f_t, o.area));
    }
    write_file(&out_dir.join("ft_vs_ubar.svg"), &ft_plot.render())?;
    write_file(&out_dir.join("area_vs_ubar.svg"), &area_plot.render())?;
    write_file(&out_dir.join("area_vs_ft.svg"), &af_plot.render())?;

    // summary
    let mut summary = String::from("key, value\n");
    let _ = writeln!(summary, "completed, {}", outcome.completed);
    let _ = writeln!(summary, "steps, {}", outcome.records.len());
    let _ = writeln!(summary, "preload, {:.9e}", cfg.program.preload);
    if let Some(o) = onset {
        let _ = writeln!(summary, "onset_step, {}", o.step);
        let _ = writeln!(summary, "onset_u_bar, {:.9e}", o.u_bar);
        let _ = writeln!(summary, "onset_f_t, {:.9e}", o.f_t);
        let _ = writeln!(summary, "onset_area, {:.9e}", o.area);
    }
    if let Some(p) = plateau_f_t {
        let _ = writeln!(summary, "plateau_f_t_mean, {:.9e}", p);
    }
    if let Some(last) = outcome.records.last() {
        let _ = writeln!(summary, "final_f_n, {:.9e}", last.f_n);
        let _ = writeln!(summary, "final_dissipation, {:.9e}", last.dissipation);
    }
    if let Some(f) = &outcome.failure {
        let _ = writeln!(summary, "failure, {}", f.replace(',', ";"));
    }
    write_file(&out_dir.join("summary.csv"), &summary)?;
    let _ = state;

    Ok(RunSummary {
        outcome,
        onset,
        plateau_f_t,
    })
}

/// Tabulates the traction laws to CSV/SVG files: the normal law, the
/// distance-independent threshold, the extended-Amontons thresholds for
/// `s_cut` 0, 1/2, 1, and the sliding traction against the normal traction.
pub fn laws_bundle(
    adhesion: &AdhesionParams,
    reg: &RegularizationConfig,
    out_dir: &Path,
) -> Result<(), ScenarioError> {
    let c = derived_constants(adhesion);
    let r0 = adhesion.r0;
    let n = 800;
    let grid: Vec<f64> = (0..=n)
        .map(|i| 0.35 * r0 + (3.0 * r0 - 0.35 * r0) * i as f64 / n as f64)
        .collect();

    // figures use tau_di = t_max/2 at g_cut = 1.1 r0, and mu_ea = 0.2
    let di = DiLaw {
        tau_di: 0.5 * c.t_max,
        g_cut: 1.1 * r0,
        k_di: 200.0 / r0,
    };
    let eas = [0.0, 0.5, 1.0].map(|s_cut| EaLaw { mu_ea: 0.2, s_cut });

    let mut normal = String::from("g_n, t_n, t_n_reg, dt_n\n");
    let mut di_csv = String::from("g_n, t_slide_step, t_slide_logistic\n");
    let mut ea_csv = String::from("g_n, t_slide_s0, t_slide_s05, t_slide_s1\n");
    let mut cone = String::from("g_n, t_n, t_t_di, t_t_ea_s0, t_t_ea_s05, t_t_ea_s1\n");
    for &g in &grid {
        let tn = normal_traction(g, adhesion).expect("grid is positive");
        let tn_reg = normal_traction_reg(g, adhesion, reg);
        let dtn = normal_traction_derivative(g, adhesion).expect("grid is positive");
        let _ = writeln!(normal, "{g:.9e}, {tn:.9e}, {tn_reg:.9e}, {dtn:.9e}");
        let _ = writeln!(
            di_csv,
            "{g:.9e}, {:.9e}, {:.9e}",
            t_slide_di(g, &di, false),
            t_slide_di(g, &di, true)
        );
        let ea_vals =
            eas.map(|ea| t_slide_ea(g, &ea, 1.0, adhesion, reg).expect("positive stretch"));
        let _ = writeln!(
            ea_csv,
            "{g:.9e}, {:.9e}, {:.9e}, {:.9e}",
            ea_vals[0], ea_vals[1], ea_vals[2]
        );
        let _ = writeln!(
            cone,
            "{g:.9e}, {tn_reg:.9e}, {:.9e}, {:.9e}, {:.9e}, {:.9e}",
            t_slide_di(g, &di, true),
            ea_vals[0],
            ea_vals[1],
            ea_vals[2]
        );
    }
    write_file(&out_dir.join("laws_normal.csv"), &normal)?;
    write_file(&out_dir.join("laws_di.csv"), &di_csv)?;
    write_file(&out_dir.join("laws_ea.csv"), &ea_csv)?;
    write_file(&out_dir.join("laws_cone.csv"), &cone)?;

    let t0 = c.t0;
    let mut p_normal = LinePlot::new("normal traction", "g_n / r0", "T_n / T0");
    p_normal.series.push(Series::new(
        "T_n",
        grid.iter()
            .map(|&g| (g / r0, normal_traction(g, adhesion).unwrap() / t0))
            .collect(),
    ));
    p_normal.series.push(Series::new(
        "regularized",
        (0..=n)
            .map(|i| {
                let g = -0.2 * r0 + (3.0 * r0 + 0.2 * r0) * i as f64 / n as f64;
                (g / r0, normal_traction_reg(g, adhesion, reg) / t0)
            })
            .collect(),
    ));
    write_file(&out_dir.join("laws_normal.svg"), &p_normal.render())?;

    let mut p_di = LinePlot::new("sliding threshold, constant shear", "g_n / r0", "t / T0");
    p_di.series.push(Series::new(
        "step",
        grid.iter()
            .map(|&g| (g / r0, t_slide_di(g, &di, false) / t0))
            .collect(),
    ));
    p_di.series.push(Series::new(
        "logistic",
        grid.iter()
            .map(|&g| (g / r0, t_slide_di(g, &di, true) / t0))
            .collect(),
    ));
    write_file(&out_dir.join("laws_di.svg"), &p_di.render())?;

    let mut p_ea = LinePlot::new("sliding threshold, local Amontons", "g_n / r0", "T / T0");
    for (i, ea) in eas.iter().enumerate() {
        p_ea.series.push(Series::new(
            format!("s_cut = {}", [0.0, 0.5, 1.0][i]),
            grid.iter()
                .map(|&g| (g / r0, t_slide_ea(g, ea, 1.0, adhesion, reg).unwrap() / t0))
                .collect(),
        ));
    }
    write_file(&out_dir.join("laws_ea.svg"), &p_ea.render())?;

    let mut p_cone = LinePlot::new("sliding traction vs normal traction", "T_n / T0", "t_t / T0");
    for (i, ea) in eas.iter().enumerate() {
        p_cone.series.push(Series::new(
            format!("ea s_cut = {}", [0.0, 0.5, 1.0][i]),
            grid.iter()
                .map(|&g| {
                    (
                        normal_traction_reg(g, adhesion, reg) / t0,
                        t_slide_ea(g, ea, 1.0, adhesion, reg).unwrap() / t0,
                    )
                })
                .collect(),
        ));
    }
    p_cone.series.push(Series::new(
        "di",
        grid.iter()
            .map(|&g| {
                (
                    normal_traction_reg(g, adhesion, reg) / t0,
                    t_slide_di(g, &di, true) / t0,
                )
            })
            .collect(),
    ));
    write_file(&out_dir.join("laws_cone.svg"), &p_cone.render())?;
    Ok(())
}

pub struct ComparisonSummary {
    /// Fitted slope of contact area against tangential force across the
    /// simulations' onset points.
    pub fitted_slope: Option<f64>,
    /// Ratio-averaged shear strength estimates per experiment.
    pub exp_tau0: Vec<f64>,
}

/// Overlays normalized simulation and experiment curves and reports the
/// fitted area-force slope at sliding onset.
pub fn compare(
    sims: &[(String, Vec<TrajectoryRow>)],
    exps: &[(String, ExperimentSeries)],
    out_dir: &Path,
) -> Result<ComparisonSummary, ScenarioError> {
    // sliding onsets per simulation
    let mut onsets: Vec<(f64, f64)> = Vec::new(); // (f_t, area)
    let mut ratio_plot = LinePlot::new(
        "tangential force over area (normalized)",
        "progress",
        "(F_t/A) / (F_t/A at onset)",
    );
    let mut af_plot = LinePlot::new(
        "area vs force (normalized)",
        "F_t / F_t at onset",
        "A / A initial",
    );

    for (name, rows) in sims {
        let slide: Vec<&TrajectoryRow> = rows.iter().filter(|r| r.u_bar > 0.0).collect();
        if slide.is_empty() {
            continue;
        }
        let onset_idx = {
            let mut was_sticking = false;
            let mut found = None;
            for (i, r) in slide.iter().enumerate() {
                if r.stick_fraction > 0.0 {
                    was_sticking = true;
                } else if was_sticking {
                    found = Some(i);
                    break;
                }
            }
            found.unwrap_or(slide.len() - 1)
        };
        let onset = slide[onset_idx];
        onsets.push((onset.f_t, onset.contact_area));
        let u_on = onset.u_bar.max(f64::MIN_POSITIVE);
        let ratio_on =
            (onset.f_t / onset.contact_area.max(f64::MIN_POSITIVE)).max(f64::MIN_POSITIVE);
        ratio_plot.series.push(Series::new(
            name.clone(),
            slide
                .iter()
                .map(|r| {
                    (
                        r.u_bar / u_on,
                        r.f_t / r.contact_area.max(f64::MIN_POSITIVE) / ratio_on,
                    )
                })
                .collect(),
        ));
        let a0 = slide[0].contact_area.max(f64::MIN_POSITIVE);
        let f_on = onset.f_t.max(f64::MIN_POSITIVE);
        af_plot.series.push(Series::new(
            name.clone(),
            slide
                .iter()
                .take(onset_idx + 1)
                .map(|r| (r.f_t / f_on, r.contact_area / a0))
                .collect(),
        ));
    }

    let mut exp_tau0 = Vec::new();
    for (name, exp) in exps {
        // peak force marks the onset in the measurements
        let peak = exp
            .f_t
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap_or(0);
        let t_on = exp.time.get(peak).copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
        let ratio_on = (exp.f_t[peak] / exp.area[peak].max(f64::MIN_POSITIVE))
            .max(f64::MIN_POSITIVE);
        let mut series = Series::new(
            format!("{name} (exp)"),
            exp.time
                .iter()
                .zip(exp.f_t.iter().zip(&exp.area))
                .map(|(&t, (&f, &a))| (t / t_on, f / a.max(f64::MIN_POSITIVE) / ratio_on))
                .collect(),
        );
        series.dashed = true;
        ratio_plot.series.push(series);

        let post: Vec<f64> = (peak..exp.f_t.len())
            .filter(|&i| exp.area[i] > 0.0)
            .map(|i| exp.f_t[i] / exp.area[i])
            .collect();
        if !post.is_empty() {
            exp_tau0.push(post.iter().sum::<f64>() / post.len() as f64);
        }
        if let Some(tau0) = exp.metadata.get("tau0_mpa").and_then(|v| v.parse::<f64>().ok()) {
            ratio_plot
                .hlines
                .push((tau0 * 1e6 / ratio_on, format!("tau0 = {tau0} MPa")));
        }

        let a0 = exp.area.first().copied().unwrap_or(1.0).max(f64::MIN_POSITIVE);
        let f_on = exp.f_t[peak].max(f64::MIN_POSITIVE);
        let mut series = Series::new(
            format!("{name} (exp)"),
            (0..=peak)
                .map(|i| (exp.f_t[i] / f_on, exp.area[i] / a0))
                .collect(),
        );
        series.dashed = true;
        af_plot.series.push(series);
    }

    // slope of A against F_t across onset points: least squares with
    // intercept for several points, through the origin for a single one
    let fitted_slope = match onsets.len() {
        0 => None,
        1 => Some(onsets[0].1 / onsets[0].0),
        _ => {
            let n = onsets.len() as f64;
            let sf: f64 = onsets.iter().map(|o| o.0).sum();
            let sa: f64 = onsets.iter().map(|o| o.1).sum();
            let sff: f64 = onsets.iter().map(|o| o.0 * o.0).sum();
            let sfa: f64 = onsets.iter().map(|o| o.0 * o.1).sum();
            let det = n * sff - sf * sf;
            if det.abs() < 1e-30 {
                None
            } else {
                Some((n * sfa - sf * sa) / det)
            }
        }
    };

    write_file(&out_dir.join("compare_ratio.svg"), &ratio_plot.render())?;
    write_file(&out_dir.join("compare_area_force.svg"), &af_plot.render())?;

    let mut summary = String::from("kind, name, value_name, value\n");
    if let Some(s) = fitted_slope {
        let _ = writeln!(summary, "sim, all, fitted_slope_area_vs_ft, {s:.9e}");
    }
    for ((name, _), tau0) in exps.iter().zip(&exp_tau0) {
        let _ = writeln!(summary, "exp, {name}, tau0_estimate_pa, {tau0:.9e}");
    }
    write_file(&out_dir.join("compare_summary.csv"), &summary)?;

    Ok(ComparisonSummary {
        fitted_slope,
        exp_tau0,
    })
}

/// Writes a generated cap mesh to the exchange format (the `mesh` command).
pub fn write_mesh_file(mesh: &Mesh, path: &Path) -> Result<(), ScenarioError> {
    write_file(path, &mesh.write())
}
