use mptrap_core::SimulationConfig;

use crate::config::parse_real;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    Rabi12,
    OmegaBar,
    Phase,
    CutoffW,
    PhotonNumber,
    Rho,
    DeltaN,
    InterferenceP,
}

impl Parameter {
    pub const ALL: [Parameter; 8] = [
        Parameter::Rabi12,
        Parameter::OmegaBar,
        Parameter::Phase,
        Parameter::CutoffW,
        Parameter::PhotonNumber,
        Parameter::Rho,
        Parameter::DeltaN,
        Parameter::InterferenceP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Parameter::Rabi12 => "rabi_12",
            Parameter::OmegaBar => "omega_bar",
            Parameter::Phase => "phase",
            Parameter::CutoffW => "cutoff_w",
            Parameter::PhotonNumber => "photon_number",
            Parameter::Rho => "rho",
            Parameter::DeltaN => "delta_n",
            Parameter::InterferenceP => "interference_p",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    fn integral(self) -> bool {
        matches!(self, Parameter::CutoffW | Parameter::DeltaN)
    }

    /// Copy of `base` with this parameter set to `value`.
    pub fn apply(self, base: &SimulationConfig, value: f64) -> SimulationConfig {
        let mut c = *base;
        match self {
            Parameter::Rabi12 => c.field.rabi_12 = value,
            Parameter::OmegaBar => c.field.omega_bar = value,
            Parameter::Phase => c.field.phase = value,
            Parameter::CutoffW => c.cutoff_w = value as u64,
            Parameter::PhotonNumber => c.field.photon_number = value,
            Parameter::Rho => c.rho = value,
            Parameter::DeltaN => c.delta_n = value as u64,
            Parameter::InterferenceP => c.field.interference_p = value,
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepValue {
    pub value: f64,
    /// Text used in file names and the manifest.
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: Parameter,
    pub values: Vec<SweepValue>,
    pub preset: Option<String>,
}

pub const PRESETS: [&str; 7] = ["fig4", "fig5", "fig6", "fig7a", "fig7b", "fig7c", "fig7d"];

impl SweepSpec {
    pub fn from_values(param: &str, values: &[String]) -> Result<Self, CliError> {
        let parameter = Parameter::from_name(param).ok_or_else(|| {
            let names: Vec<&str> = Parameter::ALL.iter().map(|p| p.name()).collect();
            CliError::parse(format!("unknown sweep parameter `{param}` (expected one of {})", names.join(", ")))
        })?;
        let values: Vec<&str> = values.iter().map(|v| v.trim()).filter(|v| !v.is_empty()).collect();
        if values.is_empty() {
            return Err(CliError::parse("sweep needs at least one value".into()));
        }
        let values = values
            .into_iter()
            .map(|v| {
                let value = parse_real(v).ok_or_else(|| CliError::parse(format!("not a number: `{v}`")))?;
                if parameter.integral() && (value < 0.0 || value.fract() != 0.0) {
                    return Err(CliError::parse(format!("{} takes non-negative integers, got `{v}`", parameter.name())));
                }
                Ok(SweepValue {
                    value,
                    label: v.to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            parameter,
            values,
            preset: None,
        })
    }

    /// Named presets. Frequencies are in rad/s, phases in units of π.
    pub fn preset(name: &str) -> Result<Self, CliError> {
        let (param, values): (&str, &[&str]) = match name {
            "fig4" => ("rabi_12", &["1e12", "3e12", "5e12", "8e12", "10e12", "12e12"]),
            "fig5" => ("omega_bar", &["1e2", "1e4", "1e6", "1e7", "1e8", "1e9"]),
            "fig6" => ("phase", &["-0.25pi", "0pi", "0.25pi", "0.5pi", "0.75pi", "1pi"]),
            "fig7a" => ("cutoff_w", &["100", "300", "500", "1000", "2000", "3000"]),
            "fig7b" => ("photon_number", &["1e4", "1e5", "1e6", "1e7", "1e8", "1e9"]),
            "fig7c" => ("rho", &["1e-5", "1e-4", "1e-3", "1e-2", "1e-1", "1"]),
            "fig7d" => ("delta_n", &["3000", "5000", "8000", "10000", "12000", "15000"]),
            _ => {
                return Err(CliError::parse(format!(
                    "unknown preset `{name}` (expected one of {})",
                    PRESETS.join(", ")
                )))
            }
        };
        let values: Vec<String> = values.iter().map(|s| s.to_string()).collect();
        let mut spec = Self::from_values(param, &values)?;
        spec.preset = Some(name.to_string());
        Ok(spec)
    }
}
