//! Run configuration: TOML ingestion, validation with key paths, and
//! normalization to internal units.
//!
//! Every frequency-like value in a config shares the unit of `omega_m`; on
//! ingestion the whole parameter set is rescaled so the mechanical frequency
//! is 1. Declaring `units = "si"` records the original rad/s scale, which
//! enables the effective-temperature output.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use optocool::{effective_detuning, PhysicalSetup, SystemParams};
use serde::Deserialize;

use crate::export::Format;
use crate::{CliError, CliResult};

/// Unit declaration of a config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// Angular frequencies in rad/s; the scale is retained for kelvin output.
    Si,
    /// Already expressed relative to the mechanical frequency.
    #[default]
    Normalized,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    units: Units,
    params: ParamsSection,
    setup: Option<SetupSection>,
    sweep: Option<SweepSection>,
    profile: Option<ProfileSection>,
    output: Option<OutputSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsSection {
    omega_m: f64,
    gamma_m: f64,
    kappa: f64,
    delta_f: Option<f64>,
    g: Option<f64>,
    g1: Option<f64>,
    g2: Option<f64>,
    gamma1: f64,
    gamma2: f64,
    delta1: f64,
    delta2: f64,
    n_th: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetupSection {
    omega_c: f64,
    omega_l: f64,
    length: f64,
    mass: f64,
    g1_atom: f64,
    g2_atom: f64,
    n1_atoms: u64,
    n2_atoms: u64,
    alpha: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    field: String,
    min: f64,
    max: f64,
    samples: usize,
    scale: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileSection {
    omega_min: f64,
    omega_max: f64,
    samples: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    path: Option<PathBuf>,
    format: Option<String>,
}

/// Parameter axis a sweep can walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepField {
    G,
    G1,
    G2,
    Kappa,
    GammaM,
    Gamma1,
    Gamma2,
    DeltaF,
    Delta1,
    Delta2,
    NTh,
}

impl SweepField {
    pub fn name(self) -> &'static str {
        match self {
            SweepField::G => "g",
            SweepField::G1 => "g1",
            SweepField::G2 => "g2",
            SweepField::Kappa => "kappa",
            SweepField::GammaM => "gamma_m",
            SweepField::Gamma1 => "gamma1",
            SweepField::Gamma2 => "gamma2",
            SweepField::DeltaF => "delta_f",
            SweepField::Delta1 => "delta1",
            SweepField::Delta2 => "delta2",
            SweepField::NTh => "n_th",
        }
    }

    /// Whether the axis carries frequency units (and therefore rescales).
    fn frequency_like(self) -> bool {
        !matches!(self, SweepField::NTh)
    }

    /// Returns a copy of `params` with this field set to `value`.
    pub fn apply(self, params: &SystemParams<f64>, value: f64) -> SystemParams<f64> {
        let mut p = *params;
        match self {
            SweepField::G => p.g = value,
            SweepField::G1 => p.g1 = value,
            SweepField::G2 => p.g2 = value,
            SweepField::Kappa => p.kappa = value,
            SweepField::GammaM => p.gamma_m = value,
            SweepField::Gamma1 => p.gamma1 = value,
            SweepField::Gamma2 => p.gamma2 = value,
            SweepField::DeltaF => p.delta_f = value,
            SweepField::Delta1 => p.delta1 = value,
            SweepField::Delta2 => p.delta2 = value,
            SweepField::NTh => p.n_th = value,
        }
        p
    }
}

impl FromStr for SweepField {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "g" => SweepField::G,
            "g1" => SweepField::G1,
            "g2" => SweepField::G2,
            "kappa" => SweepField::Kappa,
            "gamma_m" => SweepField::GammaM,
            "gamma1" => SweepField::Gamma1,
            "gamma2" => SweepField::Gamma2,
            "delta_f" => SweepField::DeltaF,
            "delta1" => SweepField::Delta1,
            "delta2" => SweepField::Delta2,
            "n_th" => SweepField::NTh,
            other => {
                return Err(format!(
                    "unknown field `{other}` (omega_m is the unit and cannot be swept)"
                ))
            }
        })
    }
}

/// Sample spacing of a sweep axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepScale {
    #[default]
    Linear,
    Log,
}

/// Validated sweep request in normalized units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub field: SweepField,
    pub min: f64,
    pub max: f64,
    pub samples: usize,
    pub scale: SweepScale,
}

impl SweepSpec {
    /// The sample positions, `samples` of them, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let n = self.samples;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.scale {
                    SweepScale::Linear => self.min + (self.max - self.min) * t,
                    SweepScale::Log => self.min * (self.max / self.min).powf(t),
                }
            })
            .collect()
    }
}

/// Validated profile request in normalized units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSpec {
    pub omega_min: f64,
    pub omega_max: f64,
    pub samples: usize,
}

/// Output destination and format; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// A fully validated run configuration, normalized so `omega_m = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Model parameters in normalized units.
    pub params: SystemParams<f64>,
    /// Mechanical frequency in rad/s when the config declared SI units.
    pub si_omega_m: Option<f64>,
    pub sweep: SweepSpec,
    pub profile: ProfileSpec,
    pub output: OutputSpec,
}

impl RunConfig {
    /// Built-in defaults: the bad-cavity reference point with a logarithmic
    /// sweep of the ground-state collective coupling.
    pub fn builtin_default() -> Self {
        RunConfig {
            params: SystemParams::bad_cavity_reference(),
            si_omega_m: None,
            sweep: default_sweep(&SystemParams::bad_cavity_reference()),
            profile: default_profile(),
            output: OutputSpec::default(),
        }
    }
}

fn default_sweep(params: &SystemParams<f64>) -> SweepSpec {
    SweepSpec {
        field: SweepField::G1,
        min: 0.1,
        max: 10.0,
        samples: 200,
        scale: SweepScale::Log,
    }
    .clamp_gain(params)
}

impl SweepSpec {
    /// Keeps a default g2 axis below the gain instability.
    fn clamp_gain(mut self, params: &SystemParams<f64>) -> Self {
        if self.field == SweepField::G2 {
            let boundary = (params.kappa * params.gamma2).sqrt();
            self.max = self.max.min(0.99 * boundary);
        }
        self
    }
}

fn default_profile() -> ProfileSpec {
    ProfileSpec {
        omega_min: -2.0,
        omega_max: 2.0,
        samples: 2001,
    }
}

fn config_err(path: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{path}: {reason}"))
}

/// Loads and validates a config file.
pub fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parses and validates config text (exposed for tests).
pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let file: ConfigFile =
        toml::from_str(text).map_err(|e| CliError::Config(format!("config parse: {e}")))?;

    let scale = file.params.omega_m;
    if scale <= 0.0 || !scale.is_finite() {
        return Err(config_err("params.omega_m", "must be > 0 and finite"));
    }

    let (g, g1, g2, delta_f) = match &file.setup {
        Some(setup) => {
            for (key, present) in [
                ("params.g", file.params.g.is_some()),
                ("params.g1", file.params.g1.is_some()),
                ("params.g2", file.params.g2.is_some()),
                ("params.delta_f", file.params.delta_f.is_some()),
            ] {
                if present {
                    return Err(config_err(
                        key,
                        "derived from [setup]; remove it or drop the [setup] section",
                    ));
                }
            }
            let physical = PhysicalSetup {
                omega_c: setup.omega_c,
                omega_l: setup.omega_l,
                length: setup.length,
                mass: setup.mass,
                g1_atom: setup.g1_atom,
                g2_atom: setup.g2_atom,
                n1_atoms: setup.n1_atoms,
                n2_atoms: setup.n2_atoms,
                alpha: setup.alpha,
            };
            let derived = physical
                .derive_couplings(scale)
                .map_err(|e| config_err("setup", e))?;
            let delta_f = effective_detuning(derived.delta0, derived.g, scale)
                .map_err(|e| config_err("setup", e))?;
            (derived.g, derived.g1, derived.g2, delta_f)
        }
        None => {
            let require = |key: &'static str, v: Option<f64>| {
                v.ok_or_else(|| config_err(&format!("params.{key}"), "missing"))
            };
            (
                require("g", file.params.g)?,
                require("g1", file.params.g1)?,
                require("g2", file.params.g2)?,
                require("delta_f", file.params.delta_f)?,
            )
        }
    };

    let raw = SystemParams {
        omega_m: file.params.omega_m,
        gamma_m: file.params.gamma_m,
        kappa: file.params.kappa,
        delta_f,
        g,
        g1,
        g2,
        gamma1: file.params.gamma1,
        gamma2: file.params.gamma2,
        delta1: file.params.delta1,
        delta2: file.params.delta2,
        n_th: file.params.n_th,
    };
    raw.validate().map_err(|e| match &e {
        optocool::Error::InvalidParam { field, reason } => {
            config_err(&format!("params.{field}"), reason)
        }
        other => CliError::Config(other.to_string()),
    })?;

    let params = SystemParams {
        omega_m: 1.0,
        gamma_m: raw.gamma_m / scale,
        kappa: raw.kappa / scale,
        delta_f: raw.delta_f / scale,
        g: raw.g / scale,
        g1: raw.g1 / scale,
        g2: raw.g2 / scale,
        gamma1: raw.gamma1 / scale,
        gamma2: raw.gamma2 / scale,
        delta1: raw.delta1 / scale,
        delta2: raw.delta2 / scale,
        n_th: raw.n_th,
    };

    let sweep = match &file.sweep {
        None => default_sweep(&params),
        Some(section) => {
            let field =
                SweepField::from_str(&section.field).map_err(|e| config_err("sweep.field", e))?;
            if !section.min.is_finite() || !section.max.is_finite() {
                return Err(config_err("sweep.min", "bounds must be finite"));
            }
            if section.min >= section.max {
                return Err(config_err("sweep.min", "must satisfy min < max"));
            }
            if section.samples < 2 {
                return Err(config_err("sweep.samples", "need at least 2 samples"));
            }
            let scale_kind = match section.scale.as_deref() {
                None | Some("linear") => SweepScale::Linear,
                Some("log") => {
                    if section.min <= 0.0 {
                        return Err(config_err("sweep.min", "log spacing needs min > 0"));
                    }
                    SweepScale::Log
                }
                Some(other) => {
                    return Err(config_err(
                        "sweep.scale",
                        format!("unknown scale `{other}` (use linear or log)"),
                    ))
                }
            };
            let unit = if field.frequency_like() { scale } else { 1.0 };
            SweepSpec {
                field,
                min: section.min / unit,
                max: section.max / unit,
                samples: section.samples,
                scale: scale_kind,
            }
        }
    };

    let profile = match &file.profile {
        None => default_profile(),
        Some(section) => {
            if !section.omega_min.is_finite() || !section.omega_max.is_finite() {
                return Err(config_err("profile.omega_min", "bounds must be finite"));
            }
            if section.omega_min >= section.omega_max {
                return Err(config_err("profile.omega_min", "must satisfy min < max"));
            }
            if section.samples < 2 {
                return Err(config_err("profile.samples", "need at least 2 samples"));
            }
            ProfileSpec {
                omega_min: section.omega_min / scale,
                omega_max: section.omega_max / scale,
                samples: section.samples,
            }
        }
    };

    let output = match &file.output {
        None => OutputSpec::default(),
        Some(section) => OutputSpec {
            path: section.path.clone(),
            format: match section.format.as_deref() {
                None => None,
                Some(text) => {
                    Some(Format::from_str(text).map_err(|e| config_err("output.format", e))?)
                }
            },
        },
    };

    Ok(RunConfig {
        params,
        si_omega_m: (file.units == Units::Si).then_some(scale),
        sweep,
        profile,
        output,
    })
}
