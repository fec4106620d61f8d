//! Command implementations behind the `mptrap` binary.

pub mod config;
pub mod sweep;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use mptrap_core::couplings::CouplingInputs;
use mptrap_core::dynamics;
use mptrap_core::eom::{self, ReductionOptions};
use mptrap_core::oracle::{self, Verification};
use mptrap_core::{Error, PopulationTrace};
use rayon::prelude::*;

use config::RunConfig;
use sweep::SweepSpec;

/// Overrides the output directory (default `./output`).
pub const OUTPUT_DIR_ENV: &str = "MPTRAP_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn parse(message: String) -> Self {
        Self { code: 2, message }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self {
            code: 1,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// 2 for input and validation errors, 3 for physics validation, 4 for
/// integrator failure, 5 for oversized oracle instances.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::DuplicateLevel(_)
        | Error::UnknownLevel(_)
        | Error::MissingMainTransition
        | Error::NegativeRate { .. }
        | Error::InvalidInput(_) => 2,
        Error::SmallDenominator { .. } | Error::NegativePole(_) | Error::StarkShiftNotReal { .. } => 3,
        Error::StepSizeUnderflow { .. } => 4,
        Error::InstanceTooLarge { .. } => 5,
        Error::DisjointTraces | Error::MalformedTrace(_) => 1,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

pub fn output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("output"))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// `t_s,pi,reference` with 17 significant digits.
pub fn trace_csv(trace: &PopulationTrace) -> String {
    let mut s = String::from("t_s,pi,reference\n");
    for ((t, p), r) in trace.times.iter().zip(&trace.pi).zip(&trace.reference) {
        let _ = writeln!(s, "{t:.16e},{p:.16e},{r:.16e}");
    }
    s
}

pub struct RunReport {
    pub path: PathBuf,
    pub trapping_metric: f64,
}

pub fn run_single(rc: &RunConfig, dir: &Path) -> Result<RunReport, CliError> {
    let out = dynamics::run(&rc.scheme, &rc.sim)?;
    let trace = out.integration.trace;
    create_dir(dir)?;
    let path = dir.join(format!("{}.csv", rc.name));
    write_file(&path, &trace_csv(&trace))?;
    Ok(RunReport {
        path,
        trapping_metric: dynamics::trapping_metric(&trace)?,
    })
}

pub struct SweepEntry {
    pub label: String,
    pub file: Option<PathBuf>,
    pub result: Result<f64, CliError>,
}

pub struct SweepReport {
    pub dir: PathBuf,
    pub manifest: PathBuf,
    pub entries: Vec<SweepEntry>,
}

impl SweepReport {
    /// Exit status of the first failed value, 0 if all succeeded.
    pub fn exit_code(&self) -> u8 {
        self.entries
            .iter()
            .find_map(|e| e.result.as_ref().err().map(|err| err.code))
            .unwrap_or(0)
    }
}

fn file_label(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '.' | '+' | '-') { c } else { '_' })
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs every value in parallel; failures are recorded and do not stop the sweep.
pub fn run_sweep(rc: &RunConfig, spec: &SweepSpec, dir: &Path) -> Result<SweepReport, CliError> {
    let pname = spec.parameter.name();
    let dir = dir.join(format!("{}-{}", rc.name, spec.preset.as_deref().unwrap_or(pname)));
    create_dir(&dir)?;
    let entries: Vec<SweepEntry> = spec
        .values
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            let sim = spec.parameter.apply(&rc.sim, v.value);
            let file = dir.join(format!("{i:02}_{pname}_{}.csv", file_label(&v.label)));
            let result = (|| {
                let trace = dynamics::run(&rc.scheme, &sim)?.integration.trace;
                write_file(&file, &trace_csv(&trace))?;
                Ok(dynamics::trapping_metric(&trace)?)
            })();
            SweepEntry {
                label: v.label.clone(),
                file: result.is_ok().then_some(file),
                result,
            }
        })
        .collect();

    let mut m = String::from("index,parameter,value,file,status,trapping_metric,message\n");
    for (i, e) in entries.iter().enumerate() {
        let file = e
            .file
            .as_ref()
            .and_then(|f| f.file_name())
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        let (status, metric, msg) = match &e.result {
            Ok(v) => ("ok".to_string(), format!("{v:.16e}"), String::new()),
            Err(err) => (format!("error {}", err.code), String::new(), err.message.clone()),
        };
        let _ = writeln!(m, "{i},{pname},{},{file},{status},{metric},{}", csv_field(&e.label), csv_field(&msg));
    }
    let manifest = dir.join("manifest.csv");
    write_file(&manifest, &m)?;
    Ok(SweepReport { dir, manifest, entries })
}

pub struct OracleReport {
    pub path: PathBuf,
    pub tolerance: f64,
    pub verification: Verification,
}

pub fn run_oracle_check(rc: &RunConfig, dir: &Path) -> Result<OracleReport, CliError> {
    let g = rc.scheme.gamma_hat_21();
    let mut sim = rc.sim;
    sim.t_max = rc.oracle.t_max.unwrap_or(1.0 / g);
    let options = if rc.oracle.one_photon {
        ReductionOptions::one_photon()
    } else {
        ReductionOptions::default()
    };
    sim.validate()?;
    let mut coeffs = eom::assemble_with_options(&rc.scheme, &sim.field, sim.rho, options)?.coefficients;
    coeffs.c[0] *= rc.oracle.c0_scale;
    let grid = oracle::discretize_vacuum(
        g,
        coeffs.omega_eff,
        rc.oracle.half_width.unwrap_or(40.0 * g),
        rc.oracle.mode_count,
    )?;
    let v = oracle::verify(&rc.scheme, &sim, options, &coeffs, &grid, rc.oracle.tolerance)?;

    let mut s = String::from("t_s,pi_full,pi_reduced,norm\n");
    for (i, t) in v.full.trace.times.iter().enumerate() {
        let _ = writeln!(
            s,
            "{t:.16e},{:.16e},{:.16e},{:.16e}",
            v.full.trace.pi[i], v.reduced.pi[i], v.full.norm[i]
        );
    }
    create_dir(dir)?;
    let path = dir.join(format!("{}-oracle.csv", rc.name));
    write_file(&path, &s)?;
    Ok(OracleReport {
        path,
        tolerance: rc.oracle.tolerance,
        verification: v,
    })
}

/// α/β at ω₂₁ and the assembled reduced coefficients, as `name,re,im` rows.
pub fn dump_couplings(rc: &RunConfig, out: &mut impl Write) -> Result<(), CliError> {
    let inputs = CouplingInputs::from_scheme(&rc.scheme, &rc.sim.field)?;
    let e = inputs.effective(rc.scheme.omega_21())?;
    let c = eom::assemble_with_options(&rc.scheme, &rc.sim.field, rc.sim.rho, ReductionOptions::default())?
        .coefficients;
    let mut s = String::from("name,re,im\n");
    let mut row = |name: String, z: mptrap_core::Complex64| {
        let _ = writeln!(s, "{name},{:.16e},{:.16e}", z.re, z.im);
    };
    for (i, a) in e.alpha.iter().enumerate() {
        row(format!("alpha{i}"), *a);
    }
    for (i, b) in e.beta.iter().enumerate() {
        row(format!("beta{}", i + 1), *b);
    }
    for (i, z) in c.c.iter().enumerate() {
        row(format!("c{i}"), *z);
    }
    row("d3".into(), c.d3);
    row("d4".into(), c.d4);
    let _ = writeln!(s, "omega_eff,{:.16e},0", c.omega_eff);
    let _ = writeln!(s, "stark_shift,{:.16e},0", c.omega_eff - rc.scheme.omega_21());
    out.write_all(s.as_bytes()).map_err(|e| CliError {
        code: 1,
        message: e.to_string(),
    })
}
