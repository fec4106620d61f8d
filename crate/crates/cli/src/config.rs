//! Flat `key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! level_scheme = rubidium          # or a path relative to this file
//! rabi_12_rad_per_s = 1e13
//! omega_bar_rad_per_s = 1e5
//! phase_rad = 0.5pi                # a trailing "pi" multiplies by π
//! ```

use std::path::{Path, PathBuf};

use mptrap_core::levelscheme::load_level_scheme;
use mptrap_core::{LevelScheme, SimulationConfig};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct OracleSettings {
    pub mode_count: usize,
    /// Grid half-width Λ, rad/s. Defaults to 40 Γ̂₂₁.
    pub half_width: Option<f64>,
    /// Defaults to 1/Γ̂₂₁.
    pub t_max: Option<f64>,
    pub tolerance: f64,
    /// Restrict both models to direct one-photon decay.
    pub one_photon: bool,
    /// Factor applied to the reduced c₀ before the comparison. Fault injection only.
    pub c0_scale: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            mode_count: 401,
            half_width: None,
            t_max: None,
            tolerance: 0.05,
            one_photon: false,
            c0_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// File stem of the config, used to name outputs.
    pub name: String,
    pub scheme: LevelScheme,
    pub sim: SimulationConfig,
    pub oracle: OracleSettings,
}

pub const KEYS: &[&str] = &[
    "level_scheme",
    "rabi_12_rad_per_s",
    "omega_bar_rad_per_s",
    "photon_number",
    "phase_rad",
    "interference_p",
    "delta_n",
    "cutoff_w",
    "rho",
    "t_max_s",
    "rel_tol",
    "output_points",
    "oracle_mode_count",
    "oracle_half_width_rad_per_s",
    "oracle_t_max_s",
    "oracle_tolerance",
    "oracle_one_photon",
    "oracle_c0_scale",
];

/// Parses a real number; a trailing `pi` multiplies by π (`0.25pi`, `-pi`).
pub fn parse_real(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        let k = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().ok()?,
        };
        return Some(k * std::f64::consts::PI);
    }
    t.parse::<f64>().ok()
}

fn parse_count(text: &str) -> Option<u64> {
    let t = text.trim();
    t.parse::<u64>().ok().or_else(|| {
        let v = t.parse::<f64>().ok()?;
        (v >= 0.0 && v.fract() == 0.0 && v < 1.8e19).then_some(v as u64)
    })
}

fn parse_bool(text: &str) -> Option<bool> {
    match text.trim() {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    parse(&text, path.parent().unwrap_or(Path::new(".")), name)
}

/// Parses a config document; scheme paths resolve against `base`.
pub fn parse(text: &str, base: &Path, name: String) -> Result<RunConfig, CliError> {
    let mut sim = SimulationConfig::default();
    let mut oracle = OracleSettings::default();
    let mut scheme_ref = String::from("rubidium");
    let mut t_max = None;

    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| CliError::parse(format!("line {}: {msg}", no + 1));
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| at(format!("expected `key = value`, got `{line}`")))?;
        let real = || parse_real(value).ok_or_else(|| at(format!("{key}: not a number: `{value}`")));
        let count = || parse_count(value).ok_or_else(|| at(format!("{key}: not a non-negative integer: `{value}`")));
        match key {
            "level_scheme" => scheme_ref = value.to_string(),
            "rabi_12_rad_per_s" => sim.field.rabi_12 = real()?,
            "omega_bar_rad_per_s" => sim.field.omega_bar = real()?,
            "photon_number" => sim.field.photon_number = real()?,
            "phase_rad" => sim.field.phase = real()?,
            "interference_p" => sim.field.interference_p = real()?,
            "delta_n" => sim.delta_n = count()?,
            "cutoff_w" => sim.cutoff_w = count()?,
            "rho" => sim.rho = real()?,
            "t_max_s" => t_max = Some(real()?),
            "rel_tol" => sim.rel_tol = real()?,
            "output_points" => sim.output_points = count()? as usize,
            "oracle_mode_count" => oracle.mode_count = count()? as usize,
            "oracle_half_width_rad_per_s" => oracle.half_width = Some(real()?),
            "oracle_t_max_s" => oracle.t_max = Some(real()?),
            "oracle_tolerance" => oracle.tolerance = real()?,
            "oracle_one_photon" => {
                oracle.one_photon = parse_bool(value).ok_or_else(|| at(format!("{key}: expected true or false")))?
            }
            "oracle_c0_scale" => oracle.c0_scale = real()?,
            _ => return Err(at(format!("unknown key `{key}`"))),
        }
    }

    let scheme = if scheme_ref == "rubidium" {
        LevelScheme::rubidium().map_err(CliError::from)?
    } else {
        let path: PathBuf = base.join(&scheme_ref);
        let src = std::fs::read_to_string(&path)
            .map_err(|e| CliError::parse(format!("level_scheme {}: {e}", path.display())))?;
        load_level_scheme(&src).map_err(|e| CliError::parse(format!("level_scheme {}: {e}", path.display())))?
    };
    sim.t_max = t_max.unwrap_or(4.0 / scheme.gamma_hat_21());
    Ok(RunConfig {
        name,
        scheme,
        sim,
        oracle,
    })
}
