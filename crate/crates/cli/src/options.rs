//! Effective run options: CLI flags override the config file, which
//! overrides the defaults (gamma 2, two phase qubits, t0 = pi/2, paper
//! preset, JSON output).

use std::path::Path;

use qsvm_core::ocr::ConversionMap;
use qsvm_core::qsvm::QsvmConfig;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Paper,
    Identity,
}

impl Preset {
    pub fn conversion_map(self) -> ConversionMap<f64> {
        match self {
            Preset::Paper => ConversionMap::paper(),
            Preset::Identity => ConversionMap::identity(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Paper => "paper",
            Preset::Identity => "identity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

/// One layer of settings; `None` means "not set at this layer".
#[derive(Debug, Default, Clone)]
pub struct OptionLayer {
    pub gamma: Option<f64>,
    pub phase_qubits: Option<usize>,
    pub t0: Option<f64>,
    pub preset: Option<Preset>,
    pub format: Option<OutputFormat>,
}

impl OptionLayer {
    /// Fill unset fields from a weaker layer.
    pub fn or(self, weaker: OptionLayer) -> OptionLayer {
        OptionLayer {
            gamma: self.gamma.or(weaker.gamma),
            phase_qubits: self.phase_qubits.or(weaker.phase_qubits),
            t0: self.t0.or(weaker.t0),
            preset: self.preset.or(weaker.preset),
            format: self.format.or(weaker.format),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub gamma: f64,
    pub phase_qubits: usize,
    pub t0: f64,
    pub preset: Preset,
    pub format: OutputFormat,
}

impl Options {
    pub fn resolve(flags: OptionLayer, config_path: Option<&Path>) -> Result<Options, CliError> {
        let from_file = match config_path {
            Some(path) => parse_config_file(path)?,
            None => OptionLayer::default(),
        };
        let merged = flags.or(from_file);
        Ok(Options {
            gamma: merged.gamma.unwrap_or(2.0),
            phase_qubits: merged.phase_qubits.unwrap_or(2),
            t0: merged.t0.unwrap_or(std::f64::consts::FRAC_PI_2),
            preset: merged.preset.unwrap_or(Preset::Paper),
            format: merged.format.unwrap_or(OutputFormat::Json),
        })
    }

    pub fn qsvm_config(&self) -> QsvmConfig<f64> {
        QsvmConfig {
            gamma: self.gamma,
            phase_qubits: self.phase_qubits,
            evolution_time: self.t0,
            ..QsvmConfig::default()
        }
    }
}

/// Parse a `key = value` config file. Blank lines and `#` comments are
/// skipped; unknown keys are rejected.
fn parse_config_file(path: &Path) -> Result<OptionLayer, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut layer = OptionLayer::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| CliError::Config(format!("line {}: bad {what} '{value}'", lineno + 1));
        match key {
            "gamma" => layer.gamma = Some(value.parse().map_err(|_| bad("gamma"))?),
            "phase_qubits" => {
                layer.phase_qubits = Some(value.parse().map_err(|_| bad("phase_qubits"))?)
            }
            "t0" => layer.t0 = Some(value.parse().map_err(|_| bad("t0"))?),
            "preset" => {
                layer.preset = Some(match value {
                    "paper" => Preset::Paper,
                    "identity" => Preset::Identity,
                    _ => return Err(bad("preset")),
                })
            }
            "format" => {
                layer.format = Some(match value {
                    "json" => OutputFormat::Json,
                    "csv" => OutputFormat::Csv,
                    _ => return Err(bad("format")),
                })
            }
            other => {
                return Err(CliError::Config(format!(
                    "line {}: unknown key '{other}'",
                    lineno + 1
                )))
            }
        }
    }
    Ok(layer)
}
