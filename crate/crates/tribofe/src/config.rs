//! Scenario configuration: an INI-style key-value format with fixed sections
//! `[geometry] [material] [adhesion] [friction] [load] [solver] [output]`.
//! Unknown sections and keys are rejected; adhesion takes either the pair
//! `(hamaker, r0)` or the pair `(t_max, w_adh)`, never both.
//!
//! All values are in consistent simulation units (typically nondimensional:
//! lengths in L0, stresses in E, forces in E L0 W).

use crate::capmesh::CapGeometry;
use crate::fem::newton::SolverConfig;
use crate::fem::program::LoadProgram;
use crate::material::Material;
use crate::traction::{
    calibrate_from_physical, derived_constants, AdhesionParams, DiLaw, EaLaw, FrictionLaw,
    RegularizationConfig,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown section [{0}]")]
    UnknownSection(String),
    #[error("unknown key `{key}` in section [{section}]")]
    UnknownKey { section: String, key: String },
    #[error("missing mandatory key `{key}` in section [{section}]")]
    MissingKey { section: String, key: String },
    #[error("section [adhesion] needs exactly one of (hamaker, r0) or (t_max, w_adh)")]
    AdhesionSpec,
    #[error("[friction] law `{law}` conflicts with key `{key}`")]
    FrictionSpec { law: String, key: String },
    #[error("invalid value for `{key}`: {msg}")]
    Invalid { key: String, msg: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: String,
    /// Emit the per-point contact field CSV.
    pub contact_field: bool,
    /// Dump the contact field every this many steps.
    pub field_stride: usize,
    /// Sliding offsets at which deformed snapshots are rendered.
    pub snapshots: Vec<f64>,
    /// Vertical exaggeration of snapshot views.
    pub snapshot_stretch: f64,
}

/// A fully resolved simulation scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub geometry: CapGeometry,
    pub thickness: f64,
    pub mesh_density: f64,
    pub material: Material,
    pub adhesion: AdhesionParams,
    pub reg: RegularizationConfig,
    pub law: FrictionLaw,
    pub program: LoadProgram,
    pub solver: SolverConfig,
    pub output: OutputConfig,
}

const SECTIONS: [&str; 7] = [
    "geometry", "material", "adhesion", "friction", "load", "solver", "output",
];

struct Raw {
    /// section -> key -> (line, value)
    entries: BTreeMap<String, BTreeMap<String, (usize, String)>>,
}

impl Raw {
    fn take(&mut self, section: &str, key: &str) -> Option<String> {
        self.entries
            .get_mut(section)
            .and_then(|m| m.remove(key))
            .map(|(_, v)| v)
    }

    fn f64(&mut self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.take(section, key) {
            None => Ok(None),
            Some(v) => {
                let x: f64 = v.parse().map_err(|_| ConfigError::Invalid {
                    key: key.to_string(),
                    msg: format!("`{v}` is not a number"),
                })?;
                if !x.is_finite() {
                    return Err(ConfigError::Invalid {
                        key: key.to_string(),
                        msg: format!("`{v}` is not finite"),
                    });
                }
                Ok(Some(x))
            }
        }
    }

    fn usize(&mut self, section: &str, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.take(section, key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| ConfigError::Invalid {
                key: key.to_string(),
                msg: format!("`{v}` is not a non-negative integer"),
            }),
        }
    }

    fn bool(&mut self, section: &str, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.take(section, key) {
            None => Ok(None),
            Some(v) => match v.as_str() {
                "true" | "yes" | "1" => Ok(Some(true)),
                "false" | "no" | "0" => Ok(Some(false)),
                _ => Err(ConfigError::Invalid {
                    key: key.to_string(),
                    msg: format!("`{v}` is not a boolean"),
                }),
            },
        }
    }

    /// After resolution every remaining key is unknown.
    fn reject_leftovers(&self) -> Result<(), ConfigError> {
        for (section, keys) in &self.entries {
            if let Some((key, _)) = keys.iter().next() {
                return Err(ConfigError::UnknownKey {
                    section: section.clone(),
                    key: key.clone(),
                });
            }
        }
        Ok(())
    }
}

fn lex(text: &str) -> Result<Raw, ConfigError> {
    let mut entries: BTreeMap<String, BTreeMap<String, (usize, String)>> = BTreeMap::new();
    let mut section: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') || l.starts_with(';') {
            continue;
        }
        if let Some(name) = l.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| ConfigError::Parse {
                line,
                msg: "unterminated section header".into(),
            })?;
            let name = name.trim().to_ascii_lowercase();
            if !SECTIONS.contains(&name.as_str()) {
                return Err(ConfigError::UnknownSection(name));
            }
            section = Some(name);
            continue;
        }
        let Some((key, value)) = l.split_once('=') else {
            return Err(ConfigError::Parse {
                line,
                msg: format!("expected `key = value`, got `{l}`"),
            });
        };
        let section = section.clone().ok_or_else(|| ConfigError::Parse {
            line,
            msg: "key before any [section] header".into(),
        })?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim().to_string();
        if entries
            .entry(section.clone())
            .or_default()
            .insert(key.clone(), (line, value))
            .is_some()
        {
            return Err(ConfigError::Parse {
                line,
                msg: format!("duplicate key `{key}` in [{section}]"),
            });
        }
    }
    Ok(Raw { entries })
}

fn require(opt: Option<f64>, section: &str, key: &str) -> Result<f64, ConfigError> {
    opt.ok_or_else(|| ConfigError::MissingKey {
        section: section.to_string(),
        key: key.to_string(),
    })
}

fn positive(x: f64, key: &str) -> Result<f64, ConfigError> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(ConfigError::Invalid {
            key: key.to_string(),
            msg: format!("must be positive, got {x}"),
        })
    }
}

/// Parses and validates a scenario document, filling documented defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut raw = lex(text)?;
    let invalid = |key: &str, msg: String| ConfigError::Invalid {
        key: key.to_string(),
        msg,
    };

    // geometry
    let radius = positive(require(raw.f64("geometry", "radius")?, "geometry", "radius")?, "radius")?;
    let height = positive(require(raw.f64("geometry", "height")?, "geometry", "height")?, "height")?;
    let geometry = CapGeometry::new(radius, height)
        .map_err(|e| invalid("height", e.to_string()))?;
    let thickness = positive(raw.f64("geometry", "thickness")?.unwrap_or(1.0), "thickness")?;
    let mesh_density = positive(raw.f64("geometry", "mesh_density")?.unwrap_or(1.0), "mesh_density")?;

    // material
    let e = require(raw.f64("material", "youngs_modulus")?, "material", "youngs_modulus")?;
    let nu = require(raw.f64("material", "poisson_ratio")?, "material", "poisson_ratio")?;
    let material = Material::new(e, nu).map_err(|e| invalid("material", e.to_string()))?;

    // adhesion: exactly one parameter pair
    let hamaker = raw.f64("adhesion", "hamaker")?;
    let r0 = raw.f64("adhesion", "r0")?;
    let t_max = raw.f64("adhesion", "t_max")?;
    let w_adh = raw.f64("adhesion", "w_adh")?;
    let adhesion = match (hamaker, r0, t_max, w_adh) {
        (Some(a), Some(r), None, None) => {
            AdhesionParams::new(a, r).map_err(|e| invalid("hamaker", e.to_string()))?
        }
        (None, None, Some(t), Some(w)) => {
            calibrate_from_physical(t, w).map_err(|e| invalid("t_max", e.to_string()))?
        }
        _ => return Err(ConfigError::AdhesionSpec),
    };
    let derived = derived_constants(&adhesion);
    let g_reg = match raw.f64("adhesion", "g_reg")? {
        Some(g) => positive(g, "g_reg")?,
        None => derived.g_eq,
    };
    let ea_smoothing = raw.bool("adhesion", "ea_smoothing")?.unwrap_or(false);
    let reg = RegularizationConfig { g_reg, ea_smoothing };

    // friction
    let law_name = raw
        .take("friction", "law")
        .ok_or_else(|| ConfigError::MissingKey {
            section: "friction".into(),
            key: "law".into(),
        })?
        .to_ascii_lowercase();
    let tau_di = raw.f64("friction", "tau_di")?;
    let mu_di = raw.f64("friction", "mu_di")?;
    let g_cut = raw.f64("friction", "g_cut")?;
    let k_di = raw.f64("friction", "k_di")?;
    let mu_ea = raw.f64("friction", "mu_ea")?;
    let s_cut = raw.f64("friction", "s_cut")?;
    let conflict = |law: &str, key: &str| ConfigError::FrictionSpec {
        law: law.to_string(),
        key: key.to_string(),
    };
    let law = match law_name.as_str() {
        "di" => {
            if mu_ea.is_some() {
                return Err(conflict("di", "mu_ea"));
            }
            if s_cut.is_some() {
                return Err(conflict("di", "s_cut"));
            }
            let tau_di = match (tau_di, mu_di) {
                (Some(t), None) => t,
                (None, Some(m)) => m * derived.t_max,
                (None, None) => {
                    return Err(ConfigError::MissingKey {
                        section: "friction".into(),
                        key: "tau_di (or mu_di)".into(),
                    })
                }
                (Some(_), Some(_)) => return Err(conflict("di", "both tau_di and mu_di")),
            };
            FrictionLaw::DistanceIndependent(DiLaw {
                tau_di,
                g_cut: g_cut.unwrap_or(derived.g_max),
                k_di: k_di.unwrap_or(200.0 / adhesion.r0),
            })
        }
        "ea" => {
            for (k, v) in [("tau_di", tau_di), ("mu_di", mu_di), ("g_cut", g_cut), ("k_di", k_di)] {
                if v.is_some() {
                    return Err(conflict("ea", k));
                }
            }
            FrictionLaw::ExtendedAmontons(EaLaw {
                mu_ea: require(mu_ea, "friction", "mu_ea")?,
                s_cut: require(s_cut, "friction", "s_cut")?,
            })
        }
        "none" | "frictionless" => {
            for (k, v) in [
                ("tau_di", tau_di),
                ("mu_di", mu_di),
                ("g_cut", g_cut),
                ("k_di", k_di),
                ("mu_ea", mu_ea),
                ("s_cut", s_cut),
            ] {
                if v.is_some() {
                    return Err(conflict("none", k));
                }
            }
            FrictionLaw::Frictionless
        }
        other => {
            return Err(ConfigError::Invalid {
                key: "law".into(),
                msg: format!("unknown friction law `{other}` (expected di, ea, or none)"),
            })
        }
    };
    law.validate()
        .map_err(|e| invalid("friction", e.to_string()))?;

    // load program
    let preload = raw.f64("load", "preload")?.unwrap_or(0.0);
    let slide_distance = raw.f64("load", "slide_distance")?.unwrap_or(4.0);
    if slide_distance < 0.0 {
        return Err(invalid("slide_distance", "must be non-negative".into()));
    }
    let slide_increment =
        positive(raw.f64("load", "slide_increment")?.unwrap_or(0.01), "slide_increment")?;
    let hold_steps = raw.usize("load", "hold_steps")?.unwrap_or(5);
    let ramp_steps = raw.usize("load", "ramp_steps")?.unwrap_or(12).max(1);
    let approach_standoff =
        positive(raw.f64("load", "approach_standoff")?.unwrap_or(0.5), "approach_standoff")?;
    let approach_step =
        positive(raw.f64("load", "approach_step")?.unwrap_or(0.05), "approach_step")?;
    let handoff_margin = match raw.f64("load", "handoff_margin")? {
        Some(m) => positive(m, "handoff_margin")?,
        None => 0.02 * material.youngs_modulus * thickness,
    };
    let program = LoadProgram {
        preload,
        approach_standoff,
        approach_step,
        handoff_margin,
        ramp_steps,
        hold_steps,
        slide_distance,
        slide_increment,
    };

    // solver
    let mut solver = SolverConfig::default();
    if let Some(t) = raw.f64("solver", "tolerance")? {
        solver.rel_tol = positive(t, "tolerance")?;
    }
    if let Some(n) = raw.usize("solver", "max_iterations")? {
        solver.max_iterations = n.max(1);
    }
    if let Some(n) = raw.usize("solver", "max_backtracks")? {
        solver.max_backtracks = n as u32;
    }
    if let Some(n) = raw.usize("solver", "max_halvings")? {
        solver.max_halvings = n as u32;
    }
    if let Some(n) = raw.usize("solver", "grow_after")? {
        solver.grow_after = (n as u32).max(1);
    }

    // output
    let directory = raw
        .take("output", "directory")
        .unwrap_or_else(|| "out".to_string());
    let contact_field = raw.bool("output", "contact_field")?.unwrap_or(false);
    let field_stride = raw.usize("output", "field_stride")?.unwrap_or(1).max(1);
    let snapshots = match raw.take("output", "snapshots") {
        None => Vec::new(),
        Some(list) => {
            let mut vals = Vec::new();
            for tok in list.split(',') {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                let v: f64 = tok.parse().map_err(|_| ConfigError::Invalid {
                    key: "snapshots".into(),
                    msg: format!("`{tok}` is not a number"),
                })?;
                vals.push(v);
            }
            vals
        }
    };
    let snapshot_stretch =
        positive(raw.f64("output", "snapshot_stretch")?.unwrap_or(1.0), "snapshot_stretch")?;

    raw.reject_leftovers()?;

    Ok(ScenarioConfig {
        geometry,
        thickness,
        mesh_density,
        material,
        adhesion,
        reg,
        law,
        program,
        solver,
        output: OutputConfig {
            directory,
            contact_field,
            field_stride,
            snapshots,
            snapshot_stretch,
        },
    })
}

/// Shipped scenario presets: the three friction laws of the cap example
/// crossed with compressive, zero, and tensile preloads.
pub const PRESET_NAMES: [&str; 9] = [
    "cap_di_compression",
    "cap_di_zero_load",
    "cap_di_tension",
    "cap_ea1_compression",
    "cap_ea1_zero_load",
    "cap_ea1_tension",
    "cap_ea0_compression",
    "cap_ea0_zero_load",
    "cap_ea0_tension",
];

pub fn preset(name: &str) -> Option<&'static str> {
    Some(match name {
        "cap_di_compression" => include_str!("../../../presets/cap_di_compression.ini"),
        "cap_di_zero_load" => include_str!("../../../presets/cap_di_zero_load.ini"),
        "cap_di_tension" => include_str!("../../../presets/cap_di_tension.ini"),
        "cap_ea1_compression" => include_str!("../../../presets/cap_ea1_compression.ini"),
        "cap_ea1_zero_load" => include_str!("../../../presets/cap_ea1_zero_load.ini"),
        "cap_ea1_tension" => include_str!("../../../presets/cap_ea1_tension.ini"),
        "cap_ea0_compression" => include_str!("../../../presets/cap_ea0_compression.ini"),
        "cap_ea0_zero_load" => include_str!("../../../presets/cap_ea0_zero_load.ini"),
        "cap_ea0_tension" => include_str!("../../../presets/cap_ea0_tension.ini"),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> String {
        "[geometry]\nradius = 47.1\nheight = 10\n\
         [material]\nyoungs_modulus = 1\npoisson_ratio = 0.4\n\
         [adhesion]\nt_max = 0.165\nw_adh = 0.0135\n\
         [friction]\nlaw = di\nmu_di = 1\n"
            .to_string()
    }

    #[test]
    fn minimal_config_with_defaults() {
        let cfg = parse_config(&minimal()).unwrap();
        let FrictionLaw::DistanceIndependent(di) = cfg.law else {
            panic!("expected the distance-independent law");
        };
        let c = derived_constants(&cfg.adhesion);
        assert!((di.tau_di - c.t_max).abs() < 1e-15);
        assert_eq!(di.g_cut, c.g_max);
        assert!((di.k_di - 200.0 / cfg.adhesion.r0).abs() < 1e-12);
        assert_eq!(cfg.program.preload, 0.0);
        assert!((cfg.program.slide_increment - 0.01).abs() < 1e-15);
        assert!((cfg.reg.g_reg - c.g_eq).abs() < 1e-15);
        // calibrated pair reproduces the physical inputs
        assert!((c.t_max - 0.165).abs() < 1e-12);
        assert!((c.w_adh - 0.0135).abs() < 1e-12);
    }

    #[test]
    fn zero_load_preset_matches_cap_example() {
        let cfg = parse_config(preset("cap_di_zero_load").unwrap()).unwrap();
        assert_eq!(cfg.program.preload, 0.0);
        let c = derived_constants(&cfg.adhesion);
        let FrictionLaw::DistanceIndependent(di) = cfg.law else {
            panic!("preset must select the distance-independent law");
        };
        assert_eq!(di.g_cut, c.g_max);
        assert!((di.tau_di / c.t_max - 1.0).abs() < 1e-12);
        assert!((cfg.geometry.radius - 47.1).abs() < 1e-12);
        assert!((cfg.geometry.height - 10.0).abs() < 1e-12);
    }

    #[test]
    fn all_presets_parse() {
        for name in PRESET_NAMES {
            let text = preset(name).unwrap();
            let cfg = parse_config(text).unwrap();
            match name.split('_').nth(1) {
                Some("di") => assert!(matches!(cfg.law, FrictionLaw::DistanceIndependent(_))),
                Some("ea1") => {
                    let FrictionLaw::ExtendedAmontons(ea) = cfg.law else {
                        panic!()
                    };
                    assert_eq!(ea.s_cut, 1.0);
                }
                Some("ea0") => {
                    let FrictionLaw::ExtendedAmontons(ea) = cfg.law else {
                        panic!()
                    };
                    assert_eq!(ea.s_cut, 0.0);
                }
                _ => panic!("unexpected preset name {name}"),
            }
            let expect_preload = if name.ends_with("compression") {
                -0.288
            } else if name.ends_with("tension") {
                0.288
            } else {
                0.0
            };
            assert!((cfg.program.preload - expect_preload).abs() < 1e-12);
        }
    }

    #[test]
    fn s_cut_out_of_range_is_rejected() {
        let text = minimal().replace("law = di\nmu_di = 1", "law = ea\nmu_ea = 1\ns_cut = 1.5");
        let err = parse_config(&text).unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { .. }), "{err}");
    }

    #[test]
    fn conflicting_adhesion_pairs_are_rejected() {
        let text = minimal().replace(
            "t_max = 0.165\nw_adh = 0.0135",
            "t_max = 0.165\nw_adh = 0.0135\nhamaker = 1\nr0 = 0.1",
        );
        assert_eq!(parse_config(&text).unwrap_err(), ConfigError::AdhesionSpec);
    }

    #[test]
    fn unknown_keys_and_sections_are_rejected() {
        let text = minimal() + "[solver]\nwarp_speed = 9\n";
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::UnknownKey { .. }
        ));
        let text = minimal() + "[plasma]\nx = 1\n";
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::UnknownSection(_)
        ));
        // friction keys of the other law
        let text = minimal().replace("law = di\nmu_di = 1", "law = di\nmu_di = 1\ns_cut = 0.5");
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::FrictionSpec { .. }
        ));
    }

    #[test]
    fn missing_mandatory_key() {
        let text = minimal().replace("radius = 47.1\n", "");
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::MissingKey { .. }
        ));
    }

    #[test]
    fn malformed_lines() {
        assert!(parse_config("radius = 1\n").is_err()); // key before section
        assert!(parse_config("[geometry\nradius = 1\n").is_err());
        assert!(parse_config("[geometry]\nradius\n").is_err());
        let text = minimal() + "[load]\npreload = banana\n";
        assert!(matches!(
            parse_config(&text).unwrap_err(),
            ConfigError::Invalid { .. }
        ));
        let text = minimal() + "[load]\npreload = 0\npreload = 1\n";
        assert!(parse_config(&text).is_err());
    }
}
