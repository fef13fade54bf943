//! Command-line front end: `mesh` generates cap meshes, `run` executes a
//! scenario and writes its artifact bundle, `laws` tabulates the traction
//! laws, `compare` overlays simulation bundles with measured series.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use tribofe::analytics::ExperimentSeries;
use tribofe::capmesh::{generate_cap_mesh, CapGeometry};
use tribofe::config::{parse_config, preset, ScenarioConfig, PRESET_NAMES};
use tribofe::scenario::{
    compare, laws_bundle, parse_trajectory_csv, run_scenario, write_mesh_file, TrajectoryRow,
};
use tribofe::traction::RegularizationConfig;

const USAGE: &str = "\
tribofe - adhesive friction contact simulator

USAGE:
  tribofe run (<config.ini> | --preset <name>) [--out <dir>] [--threads <n>] [--density <d>]
  tribofe mesh (--radius <r> --height <h> | <config.ini> | --preset <name>)
               [--density <d>] [--out <file>]
  tribofe laws [<config.ini> | --preset <name>] [--out <dir>]
  tribofe compare [--sim <bundle-dir>]... [--exp <csv>]... [--out <dir>]
  tribofe presets

The output directory resolves in this order: --out flag, then
$TRIBOFE_OUT_DIR joined with the scenario's directory name, then the
[output] directory key of the configuration.";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(args: &[String]) -> Result<ExitCode, String> {
    let Some(verb) = args.first() else {
        println!("{USAGE}");
        return Ok(ExitCode::from(2));
    };
    let rest = &args[1..];
    match verb.as_str() {
        "run" => cmd_run(rest),
        "mesh" => cmd_mesh(rest),
        "laws" => cmd_laws(rest),
        "compare" => cmd_compare(rest),
        "presets" => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            Ok(ExitCode::SUCCESS)
        }
        other => Err(format!("unknown command `{other}`; try `tribofe help`")),
    }
}

struct Parsed {
    positional: Vec<String>,
    preset: Option<String>,
    out: Option<PathBuf>,
    threads: usize,
    density: Option<f64>,
    radius: Option<f64>,
    height: Option<f64>,
    sims: Vec<PathBuf>,
    exps: Vec<PathBuf>,
}

fn parse_flags(args: &[String]) -> Result<Parsed, String> {
    let mut p = Parsed {
        positional: Vec::new(),
        preset: None,
        out: None,
        threads: 1,
        density: None,
        radius: None,
        height: None,
        sims: Vec::new(),
        exps: Vec::new(),
    };
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let mut value = |flag: &str| -> Result<String, String> {
            it.next()
                .cloned()
                .ok_or_else(|| format!("{flag} needs a value"))
        };
        match a.as_str() {
            "--preset" => p.preset = Some(value("--preset")?),
            "--out" => p.out = Some(PathBuf::from(value("--out")?)),
            "--threads" => {
                p.threads = value("--threads")?
                    .parse()
                    .map_err(|_| "--threads needs a positive integer".to_string())?;
                if p.threads == 0 {
                    return Err("--threads needs a positive integer".into());
                }
            }
            "--density" => {
                p.density = Some(
                    value("--density")?
                        .parse()
                        .map_err(|_| "--density needs a number".to_string())?,
                )
            }
            "--radius" => {
                p.radius = Some(
                    value("--radius")?
                        .parse()
                        .map_err(|_| "--radius needs a number".to_string())?,
                )
            }
            "--height" => {
                p.height = Some(
                    value("--height")?
                        .parse()
                        .map_err(|_| "--height needs a number".to_string())?,
                )
            }
            "--sim" => p.sims.push(PathBuf::from(value("--sim")?)),
            "--exp" => p.exps.push(PathBuf::from(value("--exp")?)),
            flag if flag.starts_with("--") => return Err(format!("unknown flag `{flag}`")),
            _ => p.positional.push(a.clone()),
        }
    }
    Ok(p)
}

fn load_config(p: &Parsed) -> Result<ScenarioConfig, String> {
    let text = match (&p.preset, p.positional.first()) {
        (Some(name), None) => preset(name)
            .ok_or_else(|| {
                format!("unknown preset `{name}`; `tribofe presets` lists the available ones")
            })?
            .to_string(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {path}: {e}"))?,
        (Some(_), Some(_)) => return Err("give either a config file or --preset, not both".into()),
        (None, None) => return Err("missing config file or --preset".into()),
    };
    let mut cfg = parse_config(&text).map_err(|e| format!("config error: {e}"))?;
    if let Some(d) = p.density {
        cfg.mesh_density = d;
    }
    Ok(cfg)
}

fn resolve_out_dir(p: &Parsed, cfg: &ScenarioConfig) -> PathBuf {
    if let Some(out) = &p.out {
        return out.clone();
    }
    if let Some(base) = std::env::var_os("TRIBOFE_OUT_DIR") {
        let name = Path::new(&cfg.output.directory)
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".to_string());
        return PathBuf::from(base).join(name);
    }
    PathBuf::from(&cfg.output.directory)
}

fn cmd_run(args: &[String]) -> Result<ExitCode, String> {
    let p = parse_flags(args)?;
    let cfg = load_config(&p)?;
    let out_dir = resolve_out_dir(&p, &cfg);
    let summary = run_scenario(&cfg, p.threads, &out_dir).map_err(|e| e.to_string())?;

    println!(
        "{} steps, bundle in {}",
        summary.outcome.records.len(),
        out_dir.display()
    );
    if let Some(onset) = summary.onset {
        println!(
            "full sliding from u = {:.4} with F_t = {:.6}, area = {:.6}",
            onset.u_bar, onset.f_t, onset.area
        );
    }
    if let Some(p) = summary.plateau_f_t {
        println!("plateau F_t = {p:.6}");
    }
    if summary.outcome.completed {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "solver failure: {}",
            summary.outcome.failure.as_deref().unwrap_or("unknown")
        );
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_mesh(args: &[String]) -> Result<ExitCode, String> {
    let p = parse_flags(args)?;
    let (geometry, density) = match (p.radius, p.height) {
        (Some(r), Some(h)) => (
            CapGeometry::new(r, h).map_err(|e| e.to_string())?,
            p.density.unwrap_or(1.0),
        ),
        (None, None) => {
            let cfg = load_config(&p)?;
            (cfg.geometry, p.density.unwrap_or(cfg.mesh_density))
        }
        _ => return Err("give both --radius and --height, or a config".into()),
    };
    let mesh = generate_cap_mesh(&geometry, density).map_err(|e| e.to_string())?;
    let out = p.out.unwrap_or_else(|| PathBuf::from("mesh.txt"));
    write_mesh_file(&mesh, &out).map_err(|e| e.to_string())?;
    println!(
        "{} nodes, {} elements, area {:.6} (segment {:.6}) -> {}",
        mesh.n_nodes(),
        mesh.n_elements(),
        mesh.area(),
        geometry.area(),
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_laws(args: &[String]) -> Result<ExitCode, String> {
    let p = parse_flags(args)?;
    let (adhesion, reg) = if p.preset.is_some() || !p.positional.is_empty() {
        let cfg = load_config(&p)?;
        (cfg.adhesion, cfg.reg)
    } else {
        // cap-example defaults
        let adhesion = tribofe::traction::calibrate_from_physical(0.165, 0.0135)
            .map_err(|e| e.to_string())?;
        let reg = RegularizationConfig::for_params(&adhesion);
        (adhesion, reg)
    };
    let out = p.out.unwrap_or_else(|| PathBuf::from("out/laws"));
    laws_bundle(&adhesion, &reg, &out).map_err(|e| e.to_string())?;
    println!("law tables and plots in {}", out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(args: &[String]) -> Result<ExitCode, String> {
    let p = parse_flags(args)?;
    let mut sims: Vec<(String, Vec<TrajectoryRow>)> = Vec::new();
    for dir in &p.sims {
        let path = dir.join("trajectory.csv");
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let rows = parse_trajectory_csv(&text)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        let name = dir
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| dir.display().to_string());
        sims.push((name, rows));
    }
    let mut exps: Vec<(String, ExperimentSeries)> = Vec::new();
    for file in &p.exps {
        let text = std::fs::read_to_string(file)
            .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
        let series =
            ExperimentSeries::parse(&text).map_err(|e| format!("{}: {e}", file.display()))?;
        let name = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| file.display().to_string());
        exps.push((name, series));
    }
    if sims.is_empty() && exps.is_empty() {
        return Err("nothing to compare: give --sim and/or --exp".into());
    }
    let out = p.out.unwrap_or_else(|| PathBuf::from("out/compare"));
    let summary = compare(&sims, &exps, &out).map_err(|e| e.to_string())?;
    if let Some(slope) = summary.fitted_slope {
        println!("fitted slope of area vs F_t at onset: {slope:.6}");
    }
    for ((name, _), tau0) in exps.iter().zip(&summary.exp_tau0) {
        println!("{name}: tau0 estimate {tau0:.4e} Pa");
    }
    println!("comparison plots in {}", out.display());
    Ok(ExitCode::SUCCESS)
}
