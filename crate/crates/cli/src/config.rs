//! Experiment configuration: one TOML file drives every figure and data
//! product, so runs are reviewable and diffable.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use triwalk_core::coupling::CouplingModel;
use triwalk_core::device;
use triwalk_core::lattice::{build_hexagonal_lattice, TriangularLattice};
use triwalk_core::sampling::DetectionModel;
use triwalk_core::twophoton::coherence_time_from_bandwidth;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub lattice: LatticeConfig,
    pub hamiltonian: HamiltonianConfig,
    #[serde(default)]
    pub evolution: EvolutionConfig,
    #[serde(default)]
    pub input: InputConfig,
    #[serde(default)]
    pub hom: HomConfig,
    #[serde(default)]
    pub detection: DetectionConfig,
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub rings: u32,
    #[serde(default = "defaults::spacing_um")]
    pub spacing_um: f64,
}

/// Either a direct coupling value or an exponential model evaluated at
/// the lattice spacing.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianConfig {
    #[serde(default)]
    pub beta_per_mm: f64,
    pub coupling_per_mm: Option<f64>,
    pub coupling_model: Option<CouplingModelConfig>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingModelConfig {
    pub amplitude_per_mm: f64,
    pub decay_length_um: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionConfig {
    #[serde(default = "defaults::z_mm")]
    pub z_mm: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig { z_mm: defaults::z_mm() }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    #[serde(default = "defaults::ports")]
    pub ports: [i32; 2],
    #[serde(default = "defaults::indistinguishability")]
    pub indistinguishability: f64,
}

impl Default for InputConfig {
    fn default() -> Self {
        InputConfig {
            ports: defaults::ports(),
            indistinguishability: defaults::indistinguishability(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HomConfig {
    #[serde(default = "defaults::delay_min_fs")]
    pub delay_min_fs: f64,
    #[serde(default = "defaults::delay_max_fs")]
    pub delay_max_fs: f64,
    #[serde(default = "defaults::delay_steps")]
    pub delay_steps: usize,
    /// Defaults to the coherence time of the device's 3 nm filter at
    /// 780 nm (about 179 fs).
    pub coherence_time_fs: Option<f64>,
    #[serde(default = "defaults::entry_ports")]
    pub entry_ports: [i32; 2],
}

impl Default for HomConfig {
    fn default() -> Self {
        HomConfig {
            delay_min_fs: defaults::delay_min_fs(),
            delay_max_fs: defaults::delay_max_fs(),
            delay_steps: defaults::delay_steps(),
            coherence_time_fs: None,
            entry_ports: defaults::entry_ports(),
        }
    }
}

/// Scalar efficiencies broadcast to every channel; a list must match the
/// site count.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum EfficiencySpec {
    Uniform(f64),
    PerSite(Vec<f64>),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionConfig {
    #[serde(default = "defaults::efficiency")]
    pub efficiency: EfficiencySpec,
    #[serde(default = "defaults::pair_rate_hz")]
    pub pair_rate_hz: f64,
    #[serde(default = "defaults::duration_s")]
    pub duration_s: f64,
    #[serde(default = "defaults::diagonal_splitter")]
    pub diagonal_splitter: bool,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig {
            efficiency: defaults::efficiency(),
            pair_rate_hz: defaults::pair_rate_hz(),
            duration_s: defaults::duration_s(),
            diagonal_splitter: defaults::diagonal_splitter(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "defaults::out_dir")]
    pub dir: String,
    #[serde(default)]
    pub format: OutputFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: defaults::out_dir(), format: OutputFormat::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

mod defaults {
    use super::*;

    pub fn seed() -> u64 {
        42
    }
    pub fn spacing_um() -> f64 {
        device::COUPLING_ZONE_SPACING_UM
    }
    pub fn z_mm() -> f64 {
        device::EVOLUTION_LENGTH_MM
    }
    pub fn ports() -> [i32; 2] {
        [-1, 1]
    }
    pub fn indistinguishability() -> f64 {
        1.0
    }
    pub fn delay_min_fs() -> f64 {
        -1800.0
    }
    pub fn delay_max_fs() -> f64 {
        1800.0
    }
    pub fn delay_steps() -> usize {
        61
    }
    pub fn entry_ports() -> [i32; 2] {
        [0, 0]
    }
    pub fn efficiency() -> EfficiencySpec {
        EfficiencySpec::Uniform(1.0)
    }
    pub fn pair_rate_hz() -> f64 {
        50.0
    }
    pub fn duration_s() -> f64 {
        device::COLLECTION_DURATION_S
    }
    pub fn diagonal_splitter() -> bool {
        true
    }
    pub fn out_dir() -> String {
        "out".into()
    }
}

impl ExperimentConfig {
    /// Parse and validate a TOML config; returns the config together with
    /// the hex-encoded SHA-256 prefix of the file bytes, which every
    /// output file records.
    pub fn load(path: &Path) -> Result<(ExperimentConfig, String)> {
        let bytes = std::fs::read(path).map_err(|e| {
            CliError::config(format!("cannot read {}: {e}", path.display()))
        })?;
        let hash = content_hash(&bytes);
        let text = String::from_utf8(bytes)
            .map_err(|_| CliError::config(format!("{} is not UTF-8", path.display())))?;
        let config: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok((config, hash))
    }

    pub fn validate(&self) -> Result<()> {
        if self.lattice.spacing_um <= 0.0 {
            return Err(CliError::config("lattice.spacing_um must be positive"));
        }
        if self.evolution.z_mm < 0.0 {
            return Err(CliError::config("evolution.z_mm must be non-negative"));
        }
        match (&self.hamiltonian.coupling_per_mm, &self.hamiltonian.coupling_model) {
            (Some(_), Some(_)) => {
                return Err(CliError::config(
                    "give either hamiltonian.coupling_per_mm or \
                     hamiltonian.coupling_model, not both",
                ))
            }
            (None, None) => {
                return Err(CliError::config(
                    "hamiltonian needs coupling_per_mm or a coupling_model",
                ))
            }
            (Some(c), None) if *c < 0.0 => {
                return Err(CliError::config("coupling_per_mm must be non-negative"))
            }
            _ => {}
        }
        if !(0.0..=1.0).contains(&self.input.indistinguishability) {
            return Err(CliError::config("input.indistinguishability must lie in [0, 1]"));
        }
        let rings = self.lattice.rings as i32;
        for &port in self.input.ports.iter().chain(&self.hom.entry_ports) {
            if port.abs() > rings {
                return Err(CliError::config(format!(
                    "port {port} does not exist on a {rings}-ring lattice"
                )));
            }
        }
        if self.hom.delay_steps < 2 {
            return Err(CliError::config("hom.delay_steps must be at least 2"));
        }
        if self.hom.delay_min_fs >= self.hom.delay_max_fs {
            return Err(CliError::config("hom delay range is empty"));
        }
        if let Some(sigma) = self.hom.coherence_time_fs {
            if sigma <= 0.0 {
                return Err(CliError::config("hom.coherence_time_fs must be positive"));
            }
        }
        if self.detection.pair_rate_hz <= 0.0 {
            return Err(CliError::config("detection.pair_rate_hz must be positive"));
        }
        if self.detection.duration_s < 0.0 {
            return Err(CliError::config("detection.duration_s must be non-negative"));
        }
        match &self.detection.efficiency {
            EfficiencySpec::Uniform(eta) => {
                if !(*eta > 0.0 && *eta <= 1.0) {
                    return Err(CliError::config("detection.efficiency must lie in (0, 1]"));
                }
            }
            EfficiencySpec::PerSite(etas) => {
                if etas.iter().any(|&eta| !(eta > 0.0 && eta <= 1.0)) {
                    return Err(CliError::config(
                        "every detection.efficiency entry must lie in (0, 1]",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn build_lattice(&self) -> TriangularLattice {
        build_hexagonal_lattice(self.lattice.rings, self.lattice.spacing_um)
    }

    /// The coupling entering the Hamiltonian: direct value, or the model
    /// evaluated at the lattice spacing.
    pub fn effective_coupling(&self) -> Result<f64> {
        match (&self.hamiltonian.coupling_per_mm, &self.hamiltonian.coupling_model) {
            (Some(c), None) => Ok(*c),
            (None, Some(m)) => {
                let model = CouplingModel::new(m.amplitude_per_mm, m.decay_length_um)
                    .map_err(|e| CliError::config(e.to_string()))?;
                Ok(model.coupling_at(self.lattice.spacing_um))
            }
            _ => Err(CliError::config("ambiguous coupling specification")),
        }
    }

    pub fn coherence_time_fs(&self) -> f64 {
        self.hom.coherence_time_fs.unwrap_or_else(|| {
            coherence_time_from_bandwidth(
                device::CENTER_WAVELENGTH_NM,
                device::FILTER_BANDWIDTH_FWHM_NM,
            )
        })
    }

    pub fn detection_model(&self, site_count: usize) -> Result<DetectionModel> {
        let efficiency = match &self.detection.efficiency {
            EfficiencySpec::Uniform(eta) => vec![*eta; site_count],
            EfficiencySpec::PerSite(etas) => {
                if etas.len() != site_count {
                    return Err(CliError::config(format!(
                        "detection.efficiency lists {} channels, lattice has {site_count}",
                        etas.len()
                    )));
                }
                etas.clone()
            }
        };
        DetectionModel::new(
            efficiency,
            self.detection.pair_rate_hz,
            self.detection.diagonal_splitter,
        )
        .map_err(|e| CliError::config(e.to_string()))
    }

    /// Evenly spaced delay scan; an odd step count crossing zero hits the
    /// zero-delay point exactly.
    pub fn delay_scan_fs(&self) -> Vec<f64> {
        let n = self.hom.delay_steps;
        let (lo, hi) = (self.hom.delay_min_fs, self.hom.delay_max_fs);
        let step = (hi - lo) / (n - 1) as f64;
        (0..n).map(|k| lo + k as f64 * step).collect()
    }
}

/// Hex-encoded SHA-256 prefix used to stamp output files.
pub fn content_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
