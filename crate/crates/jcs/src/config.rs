//! Run configuration: TOML file, command-line overrides and validation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use jcs_core::harmonic::HarmonicParams;
use jcs_core::suite::{HarmonicSettings, MorseSettings, Tolerances, Truncations};
use jcs_core::Complex64;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Harmonic,
    Morse,
}

/// Contents of a `--config` file. Every field is optional; missing values
/// fall back to the documented defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<Model>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub harmonic: HarmonicSection,
    #[serde(default)]
    pub morse: MorseSection,
    #[serde(default)]
    pub limit: LimitSection,
    #[serde(default)]
    pub tabulate: TabulateSection,
    #[serde(default)]
    pub kernel: KernelSection,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub truncations: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicSection {
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
    pub omega: Option<f64>,
    pub m_max: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorseSection {
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
    pub v0: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub m_max: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitSection {
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
    pub omega: Option<f64>,
    pub beta_path: Option<Vec<f64>>,
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabulateSection {
    pub what: Option<Quantity>,
    pub m: Option<usize>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    pub w_re: Option<f64>,
    pub w_im: Option<f64>,
    pub m: Option<usize>,
}

/// Quantity written by `tabulate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    /// Generalized coherent state φ_m (Φ_m for the harmonic model).
    Phi,
    /// Energy eigenfunction ψ_m.
    Psi,
    /// Glauber coherent state.
    Glauber,
    /// Expansion coefficients in the eigenbasis (harmonic) or g basis (Morse).
    Coefficients,
}

/// Values given on the command line; they override the config file.
#[derive(Debug, Default, Clone, clap::Args)]
pub struct Overrides {
    /// Oscillator model.
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Real part of the coherent-state label z.
    #[arg(long, allow_hyphen_values = true)]
    pub z_re: Option<f64>,
    /// Imaginary part of the coherent-state label z.
    #[arg(long, allow_hyphen_values = true)]
    pub z_im: Option<f64>,
    /// Harmonic frequency (the limit frequency for the Morse model).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Morse well depth V0.
    #[arg(long)]
    pub v0: Option<f64>,
    /// Morse range parameter β.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Free parameter γ of the Morse g basis (default Re ξ_z).
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Largest state index in the matrix-element checks.
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Series truncation: kernel terms, or the number of tabulated coefficients.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Tolerance override, repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE", value_parser = parse_assignment)]
    pub tol: Vec<(String, String)>,
    /// Truncation override, repeatable.
    #[arg(long = "trunc", value_name = "NAME=VALUE", value_parser = parse_assignment)]
    pub trunc: Vec<(String, String)>,
    /// Output path. Reports go to <out>.txt and <out>.json, data to <out>.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_assignment(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Model,
    pub harmonic: HarmonicSettings,
    pub morse: MorseSettings,
    pub n_max: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub tabulate: TabulateSection,
    pub kernel: KernelSection,
    pub limit_m: usize,
}

impl RunConfig {
    /// Reads the config file named in `ov` (if any) and applies the overrides.
    pub fn load(ov: &Overrides) -> Result<Self, CliError> {
        let file = match &ov.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        Self::resolve(file, ov)
    }

    pub fn resolve(file: FileConfig, ov: &Overrides) -> Result<Self, CliError> {
        let model = ov.model.or(file.model).unwrap_or(Model::Harmonic);

        let mut tol = Tolerances::default();
        let file_tol = file.tolerances.iter().map(|(k, v)| (k.clone(), *v));
        let cli_tol = ov
            .tol
            .iter()
            .map(|(k, v)| {
                v.parse::<f64>()
                    .map(|x| (k.clone(), x))
                    .map_err(|_| CliError::Config(format!("tolerance `{k}`: `{v}` is not a number")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (k, v) in file_tol.chain(cli_tol) {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("tolerance `{k}` must be positive, got {v}")));
            }
            if !tol.set(&k, v) {
                return Err(unknown("tolerance", &k, Tolerances::NAMES));
            }
        }

        let mut trunc = Truncations::default();
        let cli_trunc = ov
            .trunc
            .iter()
            .map(|(k, v)| {
                v.parse::<usize>()
                    .map(|x| (k.clone(), x))
                    .map_err(|_| CliError::Config(format!("truncation `{k}`: `{v}` is not an index")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (k, v) in file.truncations.iter().map(|(k, v)| (k.clone(), *v)).chain(cli_trunc) {
            if !trunc.set(&k, v) {
                return Err(unknown("truncation", &k, Truncations::NAMES));
            }
        }

        let mut harmonic = HarmonicSettings { tol, trunc, ..HarmonicSettings::default() };
        let mut morse = MorseSettings { tol, trunc, ..MorseSettings::default() };

        // harmonic section
        let h = &file.harmonic;
        harmonic.z = complex(harmonic.z, h.z_re, h.z_im);
        harmonic.omega = h.omega.unwrap_or(harmonic.omega);
        harmonic.m_max = h.m_max.unwrap_or(harmonic.m_max);

        // morse section
        let m = &file.morse;
        morse.z = complex(morse.z, m.z_re, m.z_im);
        morse.beta = m.beta.unwrap_or(morse.beta);
        morse.v0 = m.v0.unwrap_or(morse.v0);
        morse.gamma = m.gamma.or(morse.gamma);
        morse.m_max = m.m_max.unwrap_or(morse.m_max);

        let l = &file.limit;
        morse.limit_z = complex(morse.limit_z, l.z_re, l.z_im);
        morse.limit_omega = l.omega.unwrap_or(morse.limit_omega);
        if let Some(p) = &l.beta_path {
            morse.beta_path = p.clone();
        }
        let limit_m = l.m.unwrap_or(0);

        // command-line flags act on the selected model
        match model {
            Model::Harmonic => {
                harmonic.z = complex(harmonic.z, ov.z_re, ov.z_im);
                harmonic.omega = ov.omega.unwrap_or(harmonic.omega);
                harmonic.m_max = ov.m_max.unwrap_or(harmonic.m_max);
            }
            Model::Morse => {
                morse.z = complex(morse.z, ov.z_re, ov.z_im);
                morse.limit_omega = ov.omega.unwrap_or(morse.limit_omega);
                morse.m_max = ov.m_max.unwrap_or(morse.m_max);
            }
        }
        morse.v0 = ov.v0.unwrap_or(morse.v0);
        morse.beta = ov.beta.unwrap_or(morse.beta);
        morse.gamma = ov.gamma.or(morse.gamma);

        Ok(RunConfig {
            model,
            harmonic,
            morse,
            n_max: ov.n_max,
            output_path: ov.out.clone().or(file.out),
            tabulate: file.tabulate,
            kernel: file.kernel,
            limit_m,
        })
    }

    /// Checks the preconditions of the selected model.
    pub fn validate(&self) -> Result<(), CliError> {
        match self.model {
            Model::Harmonic => {
                HarmonicParams::new(self.harmonic.omega).map_err(|e| CliError::Config(format!("harmonic: {e}")))?;
                if !finite(self.harmonic.z) {
                    return Err(CliError::Config("harmonic: z must be finite".into()));
                }
            }
            Model::Morse => {
                self.morse.label().map_err(|e| CliError::Config(format!("morse: {e}")))?;
                if !finite(self.morse.z) {
                    return Err(CliError::Config("morse: z must be finite".into()));
                }
                if let Some(g) = self.morse.gamma {
                    if !(g > -0.5 && g.is_finite()) {
                        return Err(CliError::Config(format!("morse: γ must exceed -1/2, got {g}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks the inputs of the harmonic-limit study.
    pub fn validate_limit(&self) -> Result<(), CliError> {
        HarmonicParams::new(self.morse.limit_omega).map_err(|e| CliError::Config(format!("limit: {e}")))?;
        if self.morse.beta_path.is_empty() {
            return Err(CliError::Config("limit: β path is empty".into()));
        }
        if let Some(b) = self.morse.beta_path.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
            return Err(CliError::Config(format!("limit: β values must be positive, got {b}")));
        }
        Ok(())
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn complex(base: Complex64, re: Option<f64>, im: Option<f64>) -> Complex64 {
    Complex64::new(re.unwrap_or(base.re), im.unwrap_or(base.im))
}

fn unknown(kind: &str, name: &str, names: &[&str]) -> CliError {
    CliError::Config(format!("unknown {kind} `{name}`; expected one of: {}", names.join(", ")))
}

pub fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn parse(text: &str) -> Result<FileConfig, toml::de::Error> {
    toml::from_str(text)
}
